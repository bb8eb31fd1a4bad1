#include "needreplay/agents/cliffwalk_replay.hpp"

#include <array>
#include <cmath>
#include <map>

#include "needreplay/agents/need_weighted_sampler.hpp"
#include "needreplay/agents/q_functions.hpp"
#include "needreplay/envs/oracles.hpp"
#include "needreplay/errors.hpp"
#include "needreplay/replay/proportional_sampler.hpp"
#include "needreplay/sr/tabular_sr.hpp"

namespace needreplay {

namespace {

constexpr std::array<std::pair<ReplayScheme, std::string_view>, 6> kSchemeNames{{
    {ReplayScheme::kUniform, "uniform"},
    {ReplayScheme::kOracle, "oracle"},
    {ReplayScheme::kPer, "per"},
    {ReplayScheme::kNeed, "need"},
    {ReplayScheme::kRandomNeed, "random_need"},
    {ReplayScheme::kOptimalNeed, "optimal_need"},
}};

void validate(const CliffwalkConfig& c) {
  if (c.n < 2) throw ContractViolation("cliffwalk n must be >= 2");
  if (!(c.gamma > 0.0 && c.gamma < 1.0)) throw ContractViolation("gamma must lie in (0, 1)");
  if (!(c.step_size > 0.0)) throw ContractViolation("step size must be positive");
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) throw ContractViolation("alpha must lie in [0, 1]");
  if (!(c.beta >= 0.0)) throw ContractViolation("beta must be >= 0");
  if (c.update_budget < 0) throw ContractViolation("update budget must be >= 0");
}

Eigen::MatrixXd greedy_transition_matrix(const BlindCliffwalk& env, const std::vector<ActionId>& greedy) {
  Eigen::MatrixXd policy = Eigen::MatrixXd::Zero(env.state_count(), env.action_count());
  for (StateId s = 0; s < env.state_count(); ++s) policy(s, greedy[static_cast<std::size_t>(s)]) = 1.0;
  return policy_transition_matrix(env, policy);
}

std::vector<ActionId> greedy_actions(const LinearQ& q) {
  std::vector<ActionId> out(static_cast<std::size_t>(q.state_count()));
  for (StateId s = 0; s < q.state_count(); ++s) out[static_cast<std::size_t>(s)] = q.greedy_action(s);
  return out;
}

}  // namespace

std::string_view to_string(ReplayScheme scheme) {
  for (const auto& [value, name] : kSchemeNames) {
    if (value == scheme) return name;
  }
  return "unknown";
}

std::optional<ReplayScheme> parse_replay_scheme(std::string_view name) {
  for (const auto& [value, candidate] : kSchemeNames) {
    if (candidate == name) return value;
  }
  return std::nullopt;
}

const std::vector<ReplayScheme>& all_replay_schemes() {
  static const std::vector<ReplayScheme> schemes = [] {
    std::vector<ReplayScheme> out;
    for (const auto& entry : kSchemeNames) out.push_back(entry.first);
    return out;
  }();
  return schemes;
}

std::vector<Transition> enumerate_cliffwalk_experiences(const BlindCliffwalk& env) {
  const int n = env.state_count();
  if (n > 24) throw ContractViolation("exhaustive enumeration is limited to n <= 24");
  Rng unused(0);
  std::vector<Transition> out;
  const std::uint64_t sequences = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < sequences; ++bits) {
    StateId s = env.start_state();
    for (int k = 0; k < n; ++k) {
      const ActionId a = ((bits >> k) & 1U) != 0 ? kCliffWrong : kCliffRight;
      const StepResult r = env.transition(s, a, unused);
      out.push_back({s, a, r.reward, r.next_state, r.terminal, 1.0});
      if (r.terminal) break;
      s = r.next_state;
    }
  }
  return out;
}

CliffwalkResult cliffwalk_run(ReplayScheme scheme, const CliffwalkConfig& config, std::uint64_t seed) {
  validate(config);
  const int n = config.n;
  const BlindCliffwalk env(n, config.fall_mode);
  BlindCliffwalk walker(n, config.fall_mode);
  Rng rng(seed);

  const std::vector<Transition> buffer = enumerate_cliffwalk_experiences(env);
  std::vector<StateId> item_states;
  item_states.reserve(buffer.size());
  for (const Transition& t : buffer) item_states.push_back(t.state);

  LinearQ q(n, env.action_count(), config.gamma);
  const Eigen::MatrixXd truth = cliffwalk_ground_truth_q(n, config.gamma, config.fall_mode);
  const SRParams sr_params{config.gamma, config.lambda, config.sr_learning_rate};

  std::optional<ProportionalSampler> flat_sampler;
  std::optional<NeedWeightedSampler> need_sampler;
  std::optional<SuccessorMatrix> sr;
  std::optional<EligibilityTrace> trace;
  std::vector<ActionId> cached_greedy;
  // Distinct (s, a) pairs in the buffer for the oracle, each with its deterministic outcome.
  std::map<std::pair<StateId, ActionId>, Transition> distinct;

  switch (scheme) {
    case ReplayScheme::kUniform:
    case ReplayScheme::kPer:
      flat_sampler.emplace(buffer.size(), scheme == ReplayScheme::kUniform ? 0.0 : config.alpha,
                           config.min_priority);
      for (std::size_t j = 0; j < buffer.size(); ++j) flat_sampler->push();
      break;
    case ReplayScheme::kOracle:
      for (const Transition& t : buffer) distinct.try_emplace({t.state, t.action}, t);
      break;
    case ReplayScheme::kNeed:
      sr = SuccessorMatrix::init_uniform(env, sr_params);
      trace.emplace(n);
      need_sampler.emplace(item_states, n, config.alpha, config.min_priority);
      break;
    case ReplayScheme::kRandomNeed:
      sr = SuccessorMatrix::init_uniform(env, sr_params);
      need_sampler.emplace(item_states, n, config.alpha, config.min_priority);
      break;
    case ReplayScheme::kOptimalNeed:
      cached_greedy = greedy_actions(q);
      sr = SuccessorMatrix::from_transition_matrix(greedy_transition_matrix(env, cached_greedy), sr_params);
      need_sampler.emplace(item_states, n, config.alpha, config.min_priority);
      break;
  }
  const bool walks = need_sampler.has_value();

  CliffwalkResult result;
  result.final_mse = mean_squared_error(q.table(), truth);
  walker.reset();

  auto apply = [&](const Transition& t, double weight) {
    const double delta = q.td_error(t.state, t.action, t.reward, t.next_state, t.terminal);
    q.theta()(q.feature_index(t.state, t.action)) += config.step_size * weight * delta;
    return delta;
  };

  while (result.final_mse >= config.mse_threshold && result.q_updates < config.update_budget) {
    if (walks) {
      const StateId s = walker.current_state();
      const ActionId a = epsilon_greedy(q, s, config.walker_epsilon, rng);
      const StepResult step = walker.step(a, rng);
      if (trace) sr->td_lambda_update(*trace, s, step.next_state, step.terminal);
      if (step.terminal) {
        walker.reset();
        if (trace) trace->reset();
      }
    }

    switch (scheme) {
      case ReplayScheme::kUniform:
      case ReplayScheme::kPer: {
        const std::size_t j = flat_sampler->sample(rng);
        double weight = 1.0;
        if (config.beta > 0.0) {
          const double size = static_cast<double>(buffer.size());
          const double p_min = flat_sampler->min_nonzero_leaf_mass() / flat_sampler->total();
          weight = std::pow(size * flat_sampler->probability(j), -config.beta) / std::pow(size * p_min, -config.beta);
        }
        const double delta = apply(buffer[j], weight);
        if (scheme == ReplayScheme::kPer) flat_sampler->update(j, std::abs(delta));
        break;
      }
      case ReplayScheme::kOracle: {
        const Transition* best = nullptr;
        double best_change = -1.0;
        for (const auto& [key, t] : distinct) {
          const double change = std::abs(q.td_error(t.state, t.action, t.reward, t.next_state, t.terminal));
          if (change > best_change) {
            best_change = change;
            best = &t;
          }
        }
        apply(*best, 1.0);
        break;
      }
      case ReplayScheme::kNeed:
      case ReplayScheme::kRandomNeed:
      case ReplayScheme::kOptimalNeed: {
        if (scheme == ReplayScheme::kOptimalNeed) {
          std::vector<ActionId> greedy = greedy_actions(q);
          if (greedy != cached_greedy) {
            cached_greedy = std::move(greedy);
            sr->matrix() = successor_closed_form(greedy_transition_matrix(env, cached_greedy), config.gamma);
          }
        }
        const Eigen::VectorXd need_row = sr->need_row(walker.current_state());
        const std::size_t j = need_sampler->sample(need_row, rng);
        double weight = 1.0;
        if (config.beta > 0.0) {
          const double size = static_cast<double>(buffer.size());
          double p_min = 1.0;
          for (std::size_t i = 0; i < buffer.size(); ++i) {
            const double p = need_sampler->probability(i, need_row);
            if (p > 0.0) p_min = std::min(p_min, p);
          }
          weight = std::pow(size * need_sampler->probability(j, need_row), -config.beta) /
                   std::pow(size * p_min, -config.beta);
        }
        const double delta = apply(buffer[j], weight);
        need_sampler->update(j, std::abs(delta));
        break;
      }
    }
    ++result.q_updates;
    result.final_mse = mean_squared_error(q.table(), truth);
  }
  result.converged = result.final_mse < config.mse_threshold;
  return result;
}

}  // namespace needreplay
