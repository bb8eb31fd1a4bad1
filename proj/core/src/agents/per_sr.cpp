#include "needreplay/agents/per_sr.hpp"

#include <algorithm>
#include <cmath>

#include "needreplay/envs/blind_cliffwalk.hpp"
#include "needreplay/envs/oracles.hpp"
#include "needreplay/errors.hpp"

namespace needreplay {

PerSrAgent::PerSrAgent(int state_count, int action_count, PerSrConfig config, LinearApproxSR sr)
    : config_(config),
      state_count_(state_count),
      q_(state_count, action_count, config.gamma),
      sr_(std::move(sr)),
      sampler_(config.capacity, config.alpha, config.min_priority) {
  if (sr_.input_dim() != state_count) throw ShapeError("SR encoder input must match the one-hot state size");
  if (sr_.action_count() != action_count) throw ShapeError("SR heads must match the action count");
  if (config_.minibatch <= 0 || config_.replay_period <= 0) {
    throw ContractViolation("minibatch and replay period must be positive");
  }
  buffer_.reserve(std::min<std::size_t>(config.capacity, 1 << 16));
}

Eigen::VectorXd PerSrAgent::observe(StateId s) const { return one_hot(s, state_count_); }

std::size_t PerSrAgent::store(const Transition& t) {
  const std::size_t index = sampler_.push();
  Transition stored = t;
  stored.priority = sampler_.priority(index);
  if (index < buffer_.size()) {
    buffer_[index] = stored;
  } else {
    buffer_.push_back(stored);
  }
  reference_ = sr_.sr_vector(sr_.encode(observe(t.state)), t.action);
  return index;
}

std::vector<std::size_t> PerSrAgent::sample_minibatch(int k, Rng& rng) const {
  if (k <= 0) throw ContractViolation("minibatch size must be positive");
  if (static_cast<std::size_t>(k) > size()) {
    throw InsufficientDataError("minibatch of " + std::to_string(k) + " requested from " + std::to_string(size()) +
                                " stored transitions");
  }
  std::vector<std::size_t> out(static_cast<std::size_t>(k));
  for (auto& index : out) index = sampler_.sample(rng);
  return out;
}

double PerSrAgent::importance_weight(std::size_t index) const {
  if (config_.beta == 0.0) return 1.0;
  const double n = static_cast<double>(size());
  const double p = sampler_.probability(index);
  const double p_min = sampler_.min_nonzero_leaf_mass() / sampler_.total();
  return std::pow(n * p, -config_.beta) / std::pow(n * p_min, -config_.beta);
}

ReplayStepReport PerSrAgent::replay(std::span<const std::size_t> indices) {
  if (indices.empty()) throw ContractViolation("empty minibatch");
  if (config_.use_need && !reference_) throw InsufficientDataError("no real transition stored yet");
  const std::size_t k = indices.size();

  ReplayStepReport report;
  report.indices.assign(indices.begin(), indices.end());
  report.weights.resize(k);
  report.td_errors.resize(k);
  report.raw_needs.assign(k, 1.0);

  std::vector<VectorTransition> sr_batch(k);
  std::vector<ActionId> next_greedy(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (indices[i] >= size()) throw RangeError("minibatch index out of range");
    const Transition& t = buffer_[indices[i]];
    report.weights[i] = importance_weight(indices[i]);
    report.td_errors[i] = q_.td_error(t.state, t.action, t.reward, t.next_state, t.terminal);
    next_greedy[i] = q_.greedy_action(t.next_state);
    sr_batch[i] = VectorTransition{observe(t.state), t.action, t.reward, observe(t.next_state), t.terminal, 0.0};
    if (config_.use_need) report.raw_needs[i] = need_projection(*reference_, sr_.encode(sr_batch[i].state));
  }
  report.needs = config_.use_need ? need_offset(report.raw_needs) : report.raw_needs;

  report.q_weight_change = Eigen::VectorXd::Zero(q_.theta().size());
  for (std::size_t i = 0; i < k; ++i) {
    const Transition& t = buffer_[indices[i]];
    report.q_weight_change += report.weights[i] * report.td_errors[i] * report.needs[i] * q_.gradient(t.state, t.action);
    report.sr_losses += sr_.losses(sr_batch[i], next_greedy[i]);
  }

  q_.theta() += config_.step_size * report.q_weight_change;
  sr_.sgd_step(report.sr_losses);
  for (std::size_t i = 0; i < k; ++i) {
    sampler_.update(indices[i], std::abs(report.td_errors[i]));
    buffer_[indices[i]].priority = std::abs(report.td_errors[i]);
  }
  return report;
}

ReplayStepReport PerSrAgent::replay_step(int k, Rng& rng) {
  const std::vector<std::size_t> indices = sample_minibatch(k, rng);
  return replay(indices);
}

PerSrRunResult run_per_sr_chain(const PerSrToyConfig& config, std::uint64_t seed) {
  BlindCliffwalk env(config.chain_length, FallMode::kTerminate);
  Rng rng(seed);
  PerSrAgent agent(env.state_count(), env.action_count(), config.agent,
                   LinearApproxSR::one_hot(env.state_count(), env.action_count(), config.agent.gamma,
                                           config.sr_step_size));
  const Eigen::MatrixXd truth = cliffwalk_ground_truth_q(env.state_count(), config.agent.gamma);

  PerSrRunResult result;
  result.final_mse = mean_squared_error(agent.q().table(), truth);
  StateId s = env.reset();
  while (result.final_mse >= config.mse_threshold && result.q_updates < config.update_budget) {
    const ActionId a = epsilon_greedy(agent.q(), s, config.agent.epsilon, rng);
    const StepResult step = env.step(a, rng);
    ++result.env_steps;
    agent.store({s, a, step.reward, step.next_state, step.terminal, 0.0});
    s = step.terminal ? env.reset() : step.next_state;

    if (result.env_steps % config.agent.replay_period == 0 &&
        agent.size() >= static_cast<std::size_t>(config.agent.minibatch)) {
      agent.replay_step(config.agent.minibatch, rng);
      result.q_updates += config.agent.minibatch;
      result.final_mse = mean_squared_error(agent.q().table(), truth);
    }
  }
  result.converged = result.final_mse < config.mse_threshold;
  return result;
}

}  // namespace needreplay
