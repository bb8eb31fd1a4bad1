#include "needreplay/agents/prioritized_sweeping.hpp"

#include <chrono>
#include <cmath>

#include "needreplay/errors.hpp"

namespace needreplay {

PrioritizedSweepingAgent::PrioritizedSweepingAgent(const Environment& env, PSConfig config)
    : config_(config),
      q_(env.state_count(), env.action_count(), config.step_size, config.gamma, config.epsilon) {
  if (config_.planning_steps < 0) throw ContractViolation("planning_steps must be >= 0");
  if (!(config_.threshold >= 0.0)) throw ContractViolation("queue threshold must be >= 0");
  if (config_.use_need) {
    sr_ = SuccessorMatrix::init_uniform(env, {config.gamma, config.sr_lambda, config.sr_learning_rate});
    trace_.emplace(env.state_count());
  }
}

void PrioritizedSweepingAgent::set_successor(SuccessorMatrix sr) {
  if (sr.state_count() != q_.state_count()) throw ShapeError("successor matrix size does not match the agent");
  sr_ = std::move(sr);
  if (!trace_) trace_.emplace(q_.state_count());
}

void PrioritizedSweepingAgent::begin_episode() {
  if (trace_) trace_->reset();
}

void PrioritizedSweepingAgent::queue_if_significant(StateId s, ActionId a, double priority) {
  if (priority > config_.threshold) queue_.insert(s, a, priority);
}

PSStepRecord PrioritizedSweepingAgent::step(Environment& env, Rng& rng) {
  PSStepRecord record;
  record.state = env.current_state();
  record.action = epsilon_greedy(q_, record.state, rng, config_.tie_break);
  const StepResult result = env.step(record.action, rng);
  record.reward = result.reward;
  record.next_state = result.next_state;
  record.terminal = result.terminal;

  if (sr_ && !sr_frozen_) sr_->td_lambda_update(*trace_, record.state, result.next_state, result.terminal);

  model_.record(record.state, record.action, result.reward, result.next_state, result.terminal);
  record.priority =
      std::abs(q_.td_error(record.state, record.action, result.reward, result.next_state, result.terminal));
  record.queued = record.priority > config_.threshold;
  queue_if_significant(record.state, record.action, record.priority);

  record.planning_updates = plan(result.next_state);
  return record;
}

int PrioritizedSweepingAgent::plan(StateId current) {
  int updates = 0;
  while (!queue_.empty() && updates < config_.planning_steps) {
    QueueEntry entry;
    if (sr_ && config_.use_need) {
      bool any_positive = false;
      for (const QueueEntry& e : queue_.entries()) {
        if (e.priority * sr_->need(current, e.state) > 0.0) {
          any_positive = true;
          break;
        }
      }
      // With no positive product the pops fall back to plain priority order.
      entry = any_positive
                  ? queue_.pop_best([&](const QueueEntry& e) { return e.priority * sr_->need(current, e.state); })
                  : queue_.pop_best();
    } else {
      entry = queue_.pop_best();
    }

    const ModelOutcome& outcome = model_.at(entry.state, entry.action);
    q_.update(entry.state, entry.action, outcome.reward, outcome.next_state, outcome.terminal);
    ++updates;

    for (const Predecessor& pred : model_.predecessors(entry.state)) {
      const ModelOutcome& pred_outcome = model_.at(pred.state, pred.action);
      const double priority = std::abs(
          q_.td_error(pred.state, pred.action, pred.reward, entry.state, pred_outcome.terminal));
      queue_if_significant(pred.state, pred.action, priority);
    }
  }
  return updates;
}

EpisodeRecord PrioritizedSweepingAgent::run_episode(Environment& env, Rng& rng) {
  const auto start = std::chrono::steady_clock::now();
  EpisodeRecord record;
  env.reset();
  begin_episode();
  while (record.steps < config_.max_episode_steps) {
    const PSStepRecord step_record = step(env, rng);
    ++record.steps;
    record.episode_return += step_record.reward;
    record.q_updates += step_record.planning_updates;
    if (step_record.terminal) break;
  }
  record.wall_time_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
  return record;
}

}  // namespace needreplay
