#include "needreplay/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "needreplay/envs/oracles.hpp"
#include "needreplay/errors.hpp"

namespace needreplay {

namespace {

namespace fs = std::filesystem;

class CsvFile {
 public:
  explicit CsvFile(const fs::path& path) : path_(path), out_(path) {
    if (!out_) throw Error("cannot write '" + path.string() + "'");
    out_.precision(std::numeric_limits<double>::max_digits10);
  }

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << fields, first = false), ...);
    out_ << '\n';
  }

  std::string path() const { return path_.string(); }

 private:
  fs::path path_;
  std::ofstream out_;
};

PSConfig maze_agent_config(const ExperimentConfig& c, bool use_need) {
  PSConfig ps;
  ps.use_need = use_need;
  if (c.gamma) ps.gamma = *c.gamma;
  if (c.lambda) ps.sr_lambda = *c.lambda;
  if (c.epsilon) ps.epsilon = *c.epsilon;
  if (c.step_size) ps.step_size = *c.step_size;
  if (c.threshold) ps.threshold = *c.threshold;
  if (c.planning_steps) ps.planning_steps = *c.planning_steps;
  return ps;
}

CliffwalkConfig cliffwalk_config(const ExperimentConfig& c, int n) {
  CliffwalkConfig cw;
  cw.n = n;
  cw.update_budget = c.update_budget;
  if (c.gamma) cw.gamma = *c.gamma;
  if (c.lambda) cw.lambda = *c.lambda;
  if (c.alpha_exp) cw.alpha = *c.alpha_exp;
  if (c.beta) cw.beta = *c.beta;
  if (c.step_size) cw.step_size = *c.step_size;
  return cw;
}

PerSrToyConfig toy_config(const ExperimentConfig& c, int n, bool use_need) {
  PerSrToyConfig toy;
  toy.chain_length = n;
  toy.update_budget = c.update_budget;
  toy.agent.use_need = use_need;
  if (c.gamma) toy.agent.gamma = *c.gamma;
  if (c.alpha_exp) toy.agent.alpha = *c.alpha_exp;
  if (c.beta) toy.agent.beta = *c.beta;
  if (c.epsilon) toy.agent.epsilon = *c.epsilon;
  if (c.step_size) toy.agent.step_size = *c.step_size;
  if (c.minibatch) toy.agent.minibatch = *c.minibatch;
  return toy;
}

MazeLayout layout_of(const ExperimentConfig& c) {
  return c.maze_file.empty() ? MazeLayout::standard() : MazeLayout::load(c.maze_file);
}

RunSummary run_maze(const ExperimentConfig& c, const fs::path& dir) {
  const MazeLayout layout = layout_of(c);
  RunSummary summary;
  CsvFile raw(dir / "maze_raw.csv");
  CsvFile agg(dir / "maze_summary.csv");
  raw.row("trial", "episode", "algorithm", "steps");
  agg.row("episode", "algorithm", "mean", "median", "stderr");

  std::vector<std::vector<std::vector<std::int64_t>>> results;
  for (const std::string& algo : c.algorithms) {
    results.push_back(run_maze_trials(layout, maze_agent_config(c, algo == "ps-sr"), c.trials, c.episodes, c.seed));
  }
  for (std::size_t a = 0; a < c.algorithms.size(); ++a) {
    for (int t = 0; t < c.trials; ++t) {
      for (int e = 0; e < c.episodes; ++e) {
        raw.row(t, e + 1, c.algorithms[a], results[a][t][e]);
        ++summary.raw_rows;
      }
    }
  }
  for (int e = 0; e < c.episodes; ++e) {
    for (std::size_t a = 0; a < c.algorithms.size(); ++a) {
      std::vector<double> column;
      for (int t = 0; t < c.trials; ++t) column.push_back(static_cast<double>(results[a][t][e]));
      const Summary s = summarize(column);
      agg.row(e + 1, c.algorithms[a], s.mean, s.median, s.stderr_mean);
      summary.aggregates.push_back({c.algorithms[a], e + 1, s});
    }
  }
  summary.files = {raw.path(), agg.path()};
  return summary;
}

RunSummary run_cliffwalk(const ExperimentConfig& c, const fs::path& dir) {
  RunSummary summary;
  CsvFile raw(dir / "cliffwalk_raw.csv");
  CsvFile agg(dir / "cliffwalk_summary.csv");
  raw.row("scheme", "n", "seed", "q_updates", "converged");
  agg.row("scheme", "n", "mean", "median", "stderr");

  struct Cell {
    ReplayScheme scheme;
    int n;
  };
  std::vector<Cell> cells;
  for (const std::string& name : c.algorithms) {
    for (int n : c.n_states) cells.push_back({*parse_replay_scheme(name), n});
  }
  const int trials = c.trials;
  std::vector<CliffwalkResult> results(cells.size() * static_cast<std::size_t>(trials));
  parallel_for(static_cast<int>(results.size()), [&](int i) {
    const Cell& cell = cells[static_cast<std::size_t>(i / trials)];
    results[static_cast<std::size_t>(i)] =
        cliffwalk_run(cell.scheme, cliffwalk_config(c, cell.n), c.seed + static_cast<std::uint64_t>(i % trials));
  });

  for (std::size_t k = 0; k < cells.size(); ++k) {
    const std::string name(to_string(cells[k].scheme));
    std::vector<double> updates;
    for (int t = 0; t < trials; ++t) {
      const CliffwalkResult& r = results[k * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)];
      raw.row(name, cells[k].n, c.seed + static_cast<std::uint64_t>(t), r.q_updates, r.converged ? 1 : 0);
      updates.push_back(static_cast<double>(r.q_updates));
      ++summary.raw_rows;
    }
    const Summary s = summarize(updates);
    agg.row(name, cells[k].n, s.mean, s.median, s.stderr_mean);
    summary.aggregates.push_back({name, cells[k].n, s});
  }
  summary.files = {raw.path(), agg.path()};
  return summary;
}

RunSummary run_toy_persr(const ExperimentConfig& c, const fs::path& dir) {
  RunSummary summary;
  CsvFile raw(dir / "toy_persr_raw.csv");
  CsvFile agg(dir / "toy_persr_summary.csv");
  raw.row("algorithm", "n", "seed", "q_updates", "converged");
  agg.row("algorithm", "n", "mean", "median", "stderr");
  for (const std::string& algo : c.algorithms) {
    for (int n : c.n_states) {
      const auto results = run_toy_persr_trials(toy_config(c, n, algo == "per-sr"), c.trials, c.seed);
      std::vector<double> updates;
      for (int t = 0; t < c.trials; ++t) {
        raw.row(algo, n, c.seed + static_cast<std::uint64_t>(t), results[t].q_updates, results[t].converged ? 1 : 0);
        updates.push_back(static_cast<double>(results[t].q_updates));
        ++summary.raw_rows;
      }
      const Summary s = summarize(updates);
      agg.row(algo, n, s.mean, s.median, s.stderr_mean);
      summary.aggregates.push_back({algo, n, s});
    }
  }
  summary.files = {raw.path(), agg.path()};
  return summary;
}

RunSummary run_sr_heatmap(const ExperimentConfig& c, const fs::path& dir) {
  const DynaMaze maze(layout_of(c));
  SRParams params;
  if (c.gamma) params.gamma = *c.gamma;
  if (c.step_size) params.learning_rate = *c.step_size;
  const std::vector<double> lambdas = c.lambda ? std::vector<double>{*c.lambda} : std::vector<double>{0.0, 1.0};
  std::vector<int> checkpoints;
  for (int e : {0, 1, 10, 30, 100}) {
    if (e <= c.episodes) checkpoints.push_back(e);
  }
  if (checkpoints.back() != c.episodes) checkpoints.push_back(c.episodes);
  const Eigen::MatrixXd policy = maze_shortest_path_policy(maze, c.epsilon.value_or(0.1));

  std::vector<std::vector<HeatmapFrame>> per_trial(static_cast<std::size_t>(c.trials));
  parallel_for(c.trials, [&](int t) {
    per_trial[static_cast<std::size_t>(t)] =
        sr_heatmap_frames(maze, policy, lambdas, checkpoints, params, c.seed + static_cast<std::uint64_t>(t));
  });

  RunSummary summary;
  for (std::size_t f = 0; f < per_trial.front().size(); ++f) {
    Eigen::MatrixXd grid = Eigen::MatrixXd::Zero(maze.rows(), maze.cols());
    for (const auto& frames : per_trial) grid += frames[f].grid;
    grid /= static_cast<double>(c.trials);
    const HeatmapFrame& frame = per_trial.front()[f];
    std::string lambda_tag = std::to_string(frame.lambda);
    lambda_tag.erase(lambda_tag.find_last_not_of('0') + 1);
    if (lambda_tag.back() == '.') lambda_tag.pop_back();
    CsvFile out(dir / ("sr_heatmap_lambda" + lambda_tag + "_ep" + std::to_string(frame.episode) + ".csv"));
    for (int r = 0; r < grid.rows(); ++r) {
      std::ostringstream cells;
      cells.precision(std::numeric_limits<double>::max_digits10);
      for (int col = 0; col < grid.cols(); ++col) cells << (col > 0 ? "," : "") << grid(r, col);
      out.row(cells.str());
    }
    summary.raw_rows += static_cast<std::size_t>(grid.rows());
    summary.files.push_back(out.path());
  }
  return summary;
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("NEED_REPLAY_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int count, const std::function<void(int)>& body) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (int i = next++; i < count && !failed; i = next++) {
      try {
        body(i);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::vector<std::int64_t>> run_maze_trials(const MazeLayout& layout, const PSConfig& config,
                                                       int trials, int episodes, std::uint64_t base_seed) {
  std::vector<std::vector<std::int64_t>> steps(static_cast<std::size_t>(trials));
  parallel_for(trials, [&](int t) {
    DynaMaze maze(layout);
    Rng rng(base_seed + static_cast<std::uint64_t>(t));
    PrioritizedSweepingAgent agent(maze, config);
    auto& row = steps[static_cast<std::size_t>(t)];
    for (int e = 0; e < episodes; ++e) row.push_back(agent.run_episode(maze, rng).steps);
  });
  return steps;
}

std::vector<CliffwalkResult> run_cliffwalk_trials(ReplayScheme scheme, const CliffwalkConfig& config, int trials,
                                                  std::uint64_t base_seed) {
  std::vector<CliffwalkResult> results(static_cast<std::size_t>(trials));
  parallel_for(trials, [&](int t) {
    results[static_cast<std::size_t>(t)] = cliffwalk_run(scheme, config, base_seed + static_cast<std::uint64_t>(t));
  });
  return results;
}

std::vector<PerSrRunResult> run_toy_persr_trials(const PerSrToyConfig& config, int trials,
                                                 std::uint64_t base_seed) {
  std::vector<PerSrRunResult> results(static_cast<std::size_t>(trials));
  parallel_for(trials, [&](int t) {
    results[static_cast<std::size_t>(t)] = run_per_sr_chain(config, base_seed + static_cast<std::uint64_t>(t));
  });
  return results;
}

std::vector<HeatmapFrame> sr_heatmap_frames(const DynaMaze& maze, const Eigen::MatrixXd& policy,
                                            const std::vector<double>& lambdas, const std::vector<int>& checkpoints,
                                            SRParams params, std::uint64_t seed) {
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
      (!checkpoints.empty() && checkpoints.front() < 0)) {
    throw ContractViolation("heatmap checkpoints must be non-negative and ascending");
  }
  std::vector<HeatmapFrame> frames;
  for (double lambda : lambdas) {
    params.lambda = lambda;
    DynaMaze env(maze.layout());
    SuccessorMatrix sr = SuccessorMatrix::init_uniform(env, params);
    EligibilityTrace trace(env.state_count());
    Rng rng(seed);
    int done = 0;
    for (int checkpoint : checkpoints) {
      for (; done < checkpoint; ++done) learn_sr_episode(env, policy, sr, trace, rng);
      const Eigen::VectorXd row = sr.need_row(env.start_state());
      HeatmapFrame frame{lambda, checkpoint, Eigen::MatrixXd(env.rows(), env.cols())};
      for (int r = 0; r < env.rows(); ++r) {
        for (int c = 0; c < env.cols(); ++c) frame.grid(r, c) = row(r * env.cols() + c);
      }
      frames.push_back(std::move(frame));
    }
  }
  return frames;
}

RunSummary run_experiment(const ExperimentConfig& config) {
  validate(config);
  const fs::path dir(config.out);
  fs::create_directories(dir);
  RunSummary summary;
  switch (config.experiment) {
    case ExperimentKind::kMaze: summary = run_maze(config, dir); break;
    case ExperimentKind::kCliffwalk: summary = run_cliffwalk(config, dir); break;
    case ExperimentKind::kSrHeatmap: summary = run_sr_heatmap(config, dir); break;
    case ExperimentKind::kToyPerSr: summary = run_toy_persr(config, dir); break;
  }
  summary.experiment = config.experiment;
  const fs::path config_path = dir / "config.json";
  std::ofstream(config_path) << to_json(config);
  summary.files.push_back(config_path.string());
  return summary;
}

}  // namespace needreplay
