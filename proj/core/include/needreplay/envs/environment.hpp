#ifndef NEEDREPLAY_ENVS_ENVIRONMENT_HPP
#define NEEDREPLAY_ENVS_ENVIRONMENT_HPP

#include <Eigen/Core>

#include "needreplay/types.hpp"

namespace needreplay {

struct StepResult {
  StateId next_state = 0;
  double reward = 0.0;
  bool terminal = false;
};

/// Deterministic part of a transition, used to build transition matrices.
struct Successor {
  StateId next_state = 0;
  bool terminal = false;
  double expected_reward = 0.0;
};

/// Episodic environment over a finite state set with a finite action set.
///
/// `transition` is pure in (state, action, rng); `step` applies it to the
/// current state. After a terminal step the caller is expected to `reset`.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int state_count() const = 0;
  virtual int action_count() const = 0;
  virtual StateId start_state() const = 0;

  /// False for cells that can never be occupied (maze walls).
  virtual bool is_valid_state(StateId s) const { return s >= 0 && s < state_count(); }

  /// True for absorbing states that are never departed (the maze goal).
  virtual bool is_terminal_state(StateId /*s*/) const { return false; }

  virtual StepResult transition(StateId s, ActionId a, Rng& rng) const = 0;
  virtual Successor successor(StateId s, ActionId a) const = 0;

  StateId reset() {
    current_ = start_state();
    return current_;
  }

  /// Throws RangeError for an action outside [0, action_count()).
  StepResult step(ActionId a, Rng& rng);

  StateId current_state() const noexcept { return current_; }

 protected:
  void check_action(ActionId a) const;

  StateId current_ = 0;
};

/// Unit basis vector e_s of length `size`.
Eigen::VectorXd one_hot(StateId s, int size);

}  // namespace needreplay

#endif  // NEEDREPLAY_ENVS_ENVIRONMENT_HPP
