#ifndef NEEDREPLAY_AGENTS_PRIORITIZED_SWEEPING_HPP
#define NEEDREPLAY_AGENTS_PRIORITIZED_SWEEPING_HPP

#include <cstdint>
#include <optional>

#include "needreplay/agents/deterministic_model.hpp"
#include "needreplay/agents/q_functions.hpp"
#include "needreplay/envs/environment.hpp"
#include "needreplay/replay/max_priority_queue.hpp"
#include "needreplay/sr/tabular_sr.hpp"

namespace needreplay {

struct PSConfig {
  double step_size = 0.5;
  double gamma = 0.95;
  double epsilon = 0.1;
  /// Minimum |TD error| for a pair to enter the queue.
  double threshold = 1e-4;
  int planning_steps = 5;
  /// Greedy ties in the behaviour policy.
  TieBreak tie_break = TieBreak::kRandom;
  /// Pop by priority * need instead of priority alone (PS-SR).
  bool use_need = false;
  double sr_lambda = 0.5;
  double sr_learning_rate = 0.1;
  /// Safety cap on the length of one episode.
  std::int64_t max_episode_steps = 1'000'000;
};

struct PSStepRecord {
  StateId state = 0;
  ActionId action = 0;
  double reward = 0.0;
  StateId next_state = 0;
  bool terminal = false;
  double priority = 0.0;
  bool queued = false;
  int planning_updates = 0;
};

/// One row of the per-episode log handed to the harness.
struct EpisodeRecord {
  int trial = 0;
  int episode = 0;
  std::int64_t steps = 0;
  double episode_return = 0.0;
  std::int64_t q_updates = 0;
  std::int64_t wall_time_ns = 0;
};

/// Dyna-style prioritized sweeping on a deterministic model. With `use_need`
/// the agent also learns a tabular successor matrix by TD(lambda) on its real
/// transitions, and each planning pop takes the queued pair maximizing
/// priority * M(current state, pair state).
class PrioritizedSweepingAgent {
 public:
  PrioritizedSweepingAgent(const Environment& env, PSConfig config);

  /// Clears the eligibility trace; call at every episode start.
  void begin_episode();

  /// One real step followed by up to `planning_steps` planning updates.
  PSStepRecord step(Environment& env, Rng& rng);

  /// Resets `env`, then steps until a terminal transition (or the step cap).
  EpisodeRecord run_episode(Environment& env, Rng& rng);

  const QTable& q() const noexcept { return q_; }
  QTable& q() noexcept { return q_; }
  const DeterministicModel& model() const noexcept { return model_; }
  const MaxPriorityQueue& queue() const noexcept { return queue_; }
  const PSConfig& config() const noexcept { return config_; }

  /// Present only when `use_need` is set.
  const std::optional<SuccessorMatrix>& successor() const noexcept { return sr_; }
  /// Replaces the learned successor matrix (e.g. with a fixed table in tests).
  void set_successor(SuccessorMatrix sr);
  /// Stop TD(lambda) learning of the successor matrix.
  void freeze_successor(bool frozen) noexcept { sr_frozen_ = frozen; }

 private:
  int plan(StateId current);
  void queue_if_significant(StateId s, ActionId a, double priority);

  PSConfig config_;
  QTable q_;
  DeterministicModel model_;
  MaxPriorityQueue queue_;
  std::optional<SuccessorMatrix> sr_;
  std::optional<EligibilityTrace> trace_;
  bool sr_frozen_ = false;
};

}  // namespace needreplay

#endif  // NEEDREPLAY_AGENTS_PRIORITIZED_SWEEPING_HPP
