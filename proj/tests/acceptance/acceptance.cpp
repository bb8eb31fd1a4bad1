#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chi_square.hpp"
#include "needreplay/agents/cliffwalk_replay.hpp"
#include "needreplay/agents/per_sr.hpp"
#include "needreplay/agents/prioritized_sweeping.hpp"
#include "needreplay/envs/blind_cliffwalk.hpp"
#include "needreplay/envs/dyna_maze.hpp"
#include "needreplay/envs/oracles.hpp"
#include "needreplay/harness/config.hpp"
#include "needreplay/harness/experiments.hpp"
#include "needreplay/harness/stats.hpp"
#include "needreplay/replay/proportional_sampler.hpp"
#include "needreplay/sr/approx_sr.hpp"
#include "needreplay/sr/tabular_sr.hpp"

using namespace needreplay;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kBaseSeed = 0;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(const char* id, Verdict& v) {
  std::cout << id << (v.pass ? " PASS" : " FAIL") << v.detail.str() << std::endl;
  if (!v.pass) ++failures;
}

double column_mean(const std::vector<std::vector<std::int64_t>>& steps, int episode) {
  double sum = 0.0;
  for (const auto& trial : steps) sum += static_cast<double>(trial[static_cast<std::size_t>(episode)]);
  return sum / static_cast<double>(steps.size());
}

std::optional<int> first_episode_at_most(const std::vector<std::vector<std::int64_t>>& steps, double bound) {
  for (int e = 0; e < static_cast<int>(steps.front().size()); ++e) {
    if (column_mean(steps, e) <= bound) return e + 1;
  }
  return std::nullopt;
}

double running_mean(const std::vector<std::int64_t>& steps, int episodes) {
  return std::accumulate(steps.begin(), steps.begin() + episodes, 0.0) / episodes;
}

std::string episode_text(std::optional<int> e) { return e ? std::to_string(*e) : std::string("never"); }

void ac1_dyna_maze() {
  Verdict v;
  const MazeLayout layout = MazeLayout::standard();
  const int optimal = maze_shortest_path_length(DynaMaze(layout));
  v.check(optimal == 14, "shortest path is not 14");

  PSConfig ps;
  PSConfig ps_sr;
  ps_sr.use_need = true;
  const auto plain = run_maze_trials(layout, ps, 50, 50, kBaseSeed);
  const auto needy = run_maze_trials(layout, ps_sr, 50, 50, kBaseSeed);

  const auto plain_hit = first_episode_at_most(plain, 16.0);
  const auto needy_hit = first_episode_at_most(needy, 16.0);
  v.detail << " optimal=" << optimal << " first_episode_mean<=16: ps=" << episode_text(plain_hit)
           << " ps-sr=" << episode_text(needy_hit);
  double best_plain = 1e300;
  double best_needy = 1e300;
  for (int e = 0; e < 50; ++e) {
    best_plain = std::min(best_plain, column_mean(plain, e));
    best_needy = std::min(best_needy, column_mean(needy, e));
  }
  v.detail << " (lowest mean ps=" << best_plain << " ps-sr=" << best_needy << ")";
  v.check(needy_hit.has_value() && (!plain_hit || *needy_hit < *plain_hit), "ps-sr does not reach 16 first");

  // Per seed, the mean steps over episodes 1..10; the single-episode count is
  // printed alongside.
  int running_wins = 0;
  int episode_wins = 0;
  for (std::size_t t = 0; t < 50; ++t) {
    running_wins += running_mean(needy[t], 10) < running_mean(plain[t], 10) ? 1 : 0;
    episode_wins += needy[t][9] < plain[t][9] ? 1 : 0;
  }
  v.detail << " episode10 paired wins: mean-to-date " << running_wins << "/50, single-episode " << episode_wins
           << "/50";
  v.check(running_wins >= 45, "fewer than 45 paired wins at episode 10");
  report("AC1", v);
}

void ac2_blind_cliffwalk() {
  Verdict v;
  std::map<std::pair<ReplayScheme, int>, double> medians;
  for (int n = 8; n <= 13; ++n) {
    CliffwalkConfig config;
    config.n = n;
    for (ReplayScheme s : all_replay_schemes()) {
      std::vector<double> updates;
      for (const CliffwalkResult& r : run_cliffwalk_trials(s, config, 10, kBaseSeed)) {
        v.check(r.converged, std::string(to_string(s)) + " did not converge at n=" + std::to_string(n));
        updates.push_back(static_cast<double>(r.q_updates));
      }
      medians[{s, n}] = median(updates);
    }
  }
  for (int n = 8; n <= 13; ++n) {
    auto m = [&](ReplayScheme s) { return medians.at({s, n}); };
    v.detail << " n=" << n << ":";
    for (ReplayScheme s : all_replay_schemes()) v.detail << " " << to_string(s) << "=" << m(s);
    const std::string at = " at n=" + std::to_string(n);
    v.check(m(ReplayScheme::kOracle) <= m(ReplayScheme::kOptimalNeed), "oracle <= optimal_need" + at);
    v.check(m(ReplayScheme::kOptimalNeed) <= m(ReplayScheme::kNeed), "optimal_need <= need" + at);
    v.check(m(ReplayScheme::kNeed) < m(ReplayScheme::kPer), "need < per" + at);
    v.check(m(ReplayScheme::kPer) < m(ReplayScheme::kUniform), "per < uniform" + at);
    if (n >= 10) v.check(m(ReplayScheme::kRandomNeed) < m(ReplayScheme::kPer), "random_need < per" + at);
    if (n > 8) {
      const double growth = m(ReplayScheme::kUniform) / medians.at({ReplayScheme::kUniform, n - 1});
      v.check(growth >= 1.5, "uniform growth >= 1.5" + at);
    }
  }
  report("AC2", v);
}

// Largest entrywise gap between learned and closed-form SR over `rows`.
double sr_gap(Environment& env, const Eigen::MatrixXd& policy, const std::vector<StateId>& rows, double gamma) {
  SRParams params{gamma, 0.5, 0.1};
  SuccessorMatrix sr = SuccessorMatrix::init_uniform(env, params);
  EligibilityTrace trace(env.state_count());
  Rng rng(kBaseSeed);
  for (int e = 0; e < 2000; ++e) learn_sr_episode(env, policy, sr, trace, rng);
  const Eigen::MatrixXd truth = successor_closed_form(policy_transition_matrix(env, policy), gamma);
  double gap = 0.0;
  for (StateId s : rows) gap = std::max(gap, (sr.matrix().row(s) - truth.row(s)).cwiseAbs().maxCoeff());
  return gap;
}

// Uniform-policy M from the series sum_k (gamma T)^k, truncated once the terms
// vanish, compared on the rows of cells that can be occupied.
double init_gap(const Environment& env, double gamma) {
  const int n = env.state_count();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (StateId s = 0; s < n; ++s) {
    if (!env.is_valid_state(s) || env.is_terminal_state(s)) continue;
    for (ActionId a = 0; a < env.action_count(); ++a) {
      const Successor next = env.successor(s, a);
      if (!next.terminal) t(s, next.next_state) += 1.0 / env.action_count();
    }
  }
  Eigen::MatrixXd series = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 0; k < 5000 && term.cwiseAbs().maxCoeff() > 1e-18; ++k) {
    term = gamma * term * t;
    series += term;
  }
  const SuccessorMatrix init = SuccessorMatrix::init_uniform(env, {gamma, 0.5, 0.1});
  double gap = 0.0;
  for (StateId s = 0; s < n; ++s) {
    if (env.is_valid_state(s)) gap = std::max(gap, (init.matrix().row(s) - series.row(s)).cwiseAbs().maxCoeff());
  }
  return gap;
}

void ac3_sr_correctness() {
  Verdict v;
  BlindCliffwalk chain(5);
  Eigen::MatrixXd always_right = Eigen::MatrixXd::Zero(5, 2);
  always_right.col(kCliffRight).setOnes();
  std::vector<StateId> chain_rows{0, 1, 2, 3, 4};
  const double chain_gap = sr_gap(chain, always_right, chain_rows, 0.95);

  // Greedy shortest path (first optimal action); only rows visited from the
  // start receive TD updates, so the comparison covers those rows.
  DynaMaze maze;
  const Eigen::MatrixXd soft = maze_shortest_path_policy(maze, 0.0);
  Eigen::MatrixXd greedy = Eigen::MatrixXd::Zero(soft.rows(), soft.cols());
  for (Eigen::Index s = 0; s < soft.rows(); ++s) {
    Eigen::Index best = 0;
    soft.row(s).maxCoeff(&best);
    greedy(s, best) = 1.0;
  }
  std::vector<StateId> path;
  for (StateId s = maze.start_state(); !maze.is_terminal_state(s);) {
    path.push_back(s);
    Eigen::Index a = 0;
    greedy.row(s).maxCoeff(&a);
    s = maze.successor(s, static_cast<ActionId>(a)).next_state;
  }
  const double maze_gap = sr_gap(maze, greedy, path, 0.95);
  const double chain_init = init_gap(BlindCliffwalk(5), 0.95);
  const double maze_init = init_gap(DynaMaze(), 0.95);

  v.detail << " chain max|M-M*|=" << chain_gap << " maze(" << path.size() << " on-policy rows) max|M-M*|=" << maze_gap
           << " init gaps chain=" << chain_init << " maze=" << maze_init;
  v.check(chain_gap <= 0.1, "chain SR");
  v.check(maze_gap <= 0.1, "maze SR");
  v.check(chain_init <= 1e-10 && maze_init <= 1e-10, "uniform init");
  report("AC3", v);
}

void ac4_lambda_property() {
  Verdict v;
  DynaMaze maze;
  const Eigen::MatrixXd policy = maze_shortest_path_policy(maze, 0.1);
  const Eigen::MatrixXd truth = successor_closed_form(policy_transition_matrix(maze, policy), 0.95);
  const StateId start = maze.start_state();
  int wins = 0;
  for (int seed = 0; seed < 20; ++seed) {
    double error[2];
    for (int k = 0; k < 2; ++k) {
      SuccessorMatrix sr = SuccessorMatrix::init_uniform(maze, {0.95, k == 0 ? 0.0 : 1.0, 0.1});
      EligibilityTrace trace(maze.state_count());
      Rng rng(kBaseSeed + static_cast<std::uint64_t>(seed));
      for (int e = 0; e < 10; ++e) learn_sr_episode(maze, policy, sr, trace, rng);
      error[k] = (sr.matrix().row(start) - truth.row(start)).norm();
    }
    wins += error[1] < error[0] ? 1 : 0;
  }
  v.detail << " lambda=1 beats lambda=0 on start-row error in " << wins << "/20 seeds";
  v.check(wins >= 16, "fewer than 16 wins");
  report("AC4", v);
}

double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12});
}

void ac5_gradient_check() {
  Verdict v;
  const int input = 6;
  const int feature = 4;
  const int actions = 3;
  const double h = 1e-5;
  Rng rng(kBaseSeed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    LinearApproxSR sr = LinearApproxSR::random(input, feature, actions, 0.9, 0.1, rng, 0.5);
    VectorTransition t;
    t.state = Eigen::VectorXd::NullaryExpr(input, [&] { return normal(rng); });
    t.next_state = Eigen::VectorXd::NullaryExpr(input, [&] { return normal(rng); });
    t.action = trial % actions;
    t.terminal = trial % 10 == 9;
    const ActionId greedy = (trial + 1) % actions;
    const Eigen::VectorXd bootstrap = 0.9 * sr.sr_vector(sr.encode(t.next_state), greedy);
    const Eigen::VectorXd theta = sr.parameters();

    // Losses evaluated from perturbed parameters with the bootstrap target held fixed.
    auto total_loss = [&](const Eigen::VectorXd& p) {
      sr.set_parameters(p);
      const Eigen::VectorXd phi = sr.encode(t.state);
      Eigen::VectorXd target = phi;
      if (!t.terminal) target += bootstrap;
      return (t.state - sr.decode(phi)).squaredNorm() + (target - sr.sr_vector(phi, t.action)).squaredNorm();
    };
    Eigen::VectorXd numeric(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Eigen::VectorXd plus = theta;
      Eigen::VectorXd minus = theta;
      plus(i) += h;
      minus(i) -= h;
      numeric(i) = (total_loss(plus) - total_loss(minus)) / (2 * h);
    }
    sr.set_parameters(theta);
    worst = std::max(worst, relative_error(sr.losses(t, greedy).gradients, numeric));
  }
  v.detail << " worst relative error over 50 parameterisations " << worst;
  v.check(worst < 1e-4, "relative error >= 1e-4");
  report("AC5", v);
}

void ac6_projection_need() {
  Verdict v;
  const int n = 5;
  const double gamma = 0.9;
  BlindCliffwalk chain(n);
  LinearApproxSR sr = LinearApproxSR::one_hot(n, 2, gamma, 0.05);
  std::vector<VectorTransition> pairs;
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a : {kCliffRight, kCliffWrong}) {
      const Successor next = chain.successor(s, a);
      pairs.push_back({one_hot(s, n), a, next.expected_reward, one_hot(next.next_state, n), next.terminal, 0.0});
    }
  }
  // Transitions replayed uniformly at random with the always-right policy as the bootstrap action.
  Rng rng(kBaseSeed);
  std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
  for (int step = 0; step < 20000; ++step) sr.sgd_step(sr.losses(pairs[pick(rng)], kCliffRight));

  Eigen::MatrixXd policy = Eigen::MatrixXd::Zero(n, 2);
  policy.col(kCliffRight).setOnes();
  const Eigen::MatrixXd tabular = successor_closed_form(policy_transition_matrix(chain, policy), gamma);
  double gap = 0.0;
  for (StateId i = 0; i < n; ++i) {
    const Eigen::VectorXd m = sr.sr_vector(sr.encode(one_hot(i, n)), kCliffRight);
    for (StateId j = 0; j < n; ++j) gap = std::max(gap, std::abs(need_projection(m, one_hot(j, n)) - tabular(i, j)));
  }
  v.detail << " max |projection need - tabular M| = " << gap;
  v.check(gap <= 1e-2, "gap > 1e-2");
  v.check(sr.encoder().isIdentity(0.0), "frozen encoder moved");
  report("AC6", v);
}

void ac7_need_offset() {
  Verdict v;
  Rng rng(kBaseSeed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> length(1, 64);
  int bad_min = 0;
  int bad_identity = 0;
  int bad_argmax = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> needs(static_cast<std::size_t>(length(rng)));
    const bool non_negative = trial % 4 == 0;
    for (double& x : needs) x = non_negative ? std::abs(normal(rng)) : normal(rng);
    const std::vector<double> out = need_offset(needs);
    bad_min += *std::min_element(out.begin(), out.end()) < 0.0 ? 1 : 0;
    if (non_negative) bad_identity += out != needs ? 1 : 0;
    bad_argmax += std::max_element(out.begin(), out.end()) - out.begin() !=
                          std::max_element(needs.begin(), needs.end()) - needs.begin()
                      ? 1
                      : 0;
  }
  v.detail << " 1000 vectors: negative minimum " << bad_min << ", changed non-negative input " << bad_identity
           << ", moved argmax " << bad_argmax;
  v.check(bad_min == 0 && bad_identity == 0 && bad_argmax == 0, "offset contract");
  report("AC7", v);
}

void ac8_per_sr_toy() {
  Verdict v;
  double medians[2];
  int unconverged = 0;
  for (int k = 0; k < 2; ++k) {
    PerSrToyConfig config;
    config.chain_length = 5;
    config.agent.use_need = k == 1;
    std::vector<double> updates;
    for (const PerSrRunResult& r : run_toy_persr_trials(config, 20, kBaseSeed)) {
      updates.push_back(static_cast<double>(r.q_updates));
      unconverged += r.converged ? 0 : 1;
    }
    medians[k] = median(updates);
  }
  v.detail << " median updates per=" << medians[0] << " per-sr=" << medians[1] << " unconverged=" << unconverged;
  v.check(medians[1] <= medians[0], "per-sr median above per");

  // Fixed 3-item minibatch on a 3-state chain. TD errors:
  //   0.9 * max(0.4, 0.5) - 0.1 = 0.35, 0.9 * 0.7 - 0.4 = 0.23, 1 - 0.7 = 0.3
  // and needs (-0.5, 0.5, 1.0) offset to (0, 1, 1.5), all weights 1.
  PerSrConfig agent_config;
  agent_config.gamma = 0.9;
  PerSrAgent agent(3, 2, agent_config, LinearApproxSR::one_hot(3, 2, 0.9, 0.05));
  agent.store({0, kCliffRight, 0.0, 1, false, 0.0});
  agent.store({1, kCliffRight, 0.0, 2, false, 0.0});
  agent.store({2, kCliffRight, 1.0, 0, true, 0.0});
  LinearQ& q = agent.q();
  q.theta()(q.feature_index(0, kCliffRight)) = 0.1;
  q.theta()(q.feature_index(1, kCliffRight)) = 0.4;
  q.theta()(q.feature_index(1, kCliffWrong)) = 0.5;
  q.theta()(q.feature_index(2, kCliffRight)) = 0.7;
  agent.set_reference_sr_vector(Eigen::Vector3d(-0.5, 0.5, 1.0));
  const std::vector<std::size_t> batch{0, 1, 2};
  const ReplayStepReport r = agent.replay(batch);
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(6);
  expected(q.feature_index(0, kCliffRight)) = 1.0 * 0.35 * 0.0;
  expected(q.feature_index(1, kCliffRight)) = 1.0 * 0.23 * 1.0;
  expected(q.feature_index(2, kCliffRight)) = 1.0 * 0.3 * 1.5;
  const double delta_gap = (r.q_weight_change - expected).cwiseAbs().maxCoeff();
  v.detail << " hand-computed weight change gap " << delta_gap;
  v.check(delta_gap <= 1e-15, "weight change differs from the hand sum");
  report("AC8", v);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void ac9_sampler_and_determinism() {
  Verdict v;
  Rng rng(kBaseSeed);
  std::exponential_distribution<double> priority(1.0);
  const double alpha = 0.6;
  ProportionalSampler sampler(50, alpha);
  std::vector<double> probabilities;
  double norm = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double p = priority(rng);
    sampler.push(p);
    probabilities.push_back(std::pow(p, alpha));
    norm += probabilities.back();
  }
  for (double& p : probabilities) p /= norm;
  std::vector<long> counts(50, 0);
  for (int i = 0; i < 100000; ++i) ++counts[sampler.sample(rng)];
  const auto chi = testing_support::chi_square_test(counts, probabilities, 0.001);
  v.detail << " chi-square " << chi.statistic << " vs critical " << chi.critical << " (df " << chi.degrees_of_freedom
           << ")";
  v.check(chi.accepted(), "chi-square rejected");

  const fs::path root = fs::temp_directory_path() / "needreplay_acceptance";
  fs::remove_all(root);
  std::vector<ExperimentConfig> configs;
  ExperimentConfig maze = default_config(ExperimentKind::kMaze);
  maze.trials = 4;
  maze.episodes = 10;
  configs.push_back(maze);
  ExperimentConfig cliff = default_config(ExperimentKind::kCliffwalk);
  cliff.trials = 3;
  cliff.n_states = {4, 6};
  configs.push_back(cliff);
  ExperimentConfig heat = default_config(ExperimentKind::kSrHeatmap);
  heat.episodes = 10;
  configs.push_back(heat);
  ExperimentConfig toy = default_config(ExperimentKind::kToyPerSr);
  toy.trials = 3;
  toy.n_states = {3, 4};
  configs.push_back(toy);

  int compared = 0;
  int differing = 0;
  for (ExperimentConfig& config : configs) {
    std::vector<std::string> files[2];
    for (int run = 0; run < 2; ++run) {
      config.out = (root / (std::string(to_string(config.experiment)) + "_" + std::to_string(run))).string();
      for (const std::string& file : run_experiment(config).files) {
        if (fs::path(file).extension() == ".csv") files[run].push_back(file);
      }
    }
    for (std::size_t i = 0; i < files[0].size(); ++i) {
      ++compared;
      differing += read_file(files[0][i]) != read_file(files[1][i]) ? 1 : 0;
    }
  }
  fs::remove_all(root);
  v.detail << "; double run: " << compared << " CSV files compared, " << differing << " differ";
  v.check(compared > 0 && differing == 0, "harness output not byte-identical");
  report("AC9", v);
}

}  // namespace

int main() {
  std::cout.precision(6);
  ac1_dyna_maze();
  ac2_blind_cliffwalk();
  ac3_sr_correctness();
  ac4_lambda_property();
  ac5_gradient_check();
  ac6_projection_need();
  ac7_need_offset();
  ac8_per_sr_toy();
  ac9_sampler_and_determinism();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
