#include "needreplay/envs/environment.hpp"

#include <string>

#include "needreplay/errors.hpp"

namespace needreplay {

StepResult Environment::step(ActionId a, Rng& rng) {
  check_action(a);
  StepResult result = transition(current_, a, rng);
  current_ = result.next_state;
  return result;
}

void Environment::check_action(ActionId a) const {
  if (a < 0 || a >= action_count()) {
    throw RangeError("action " + std::to_string(a) + " outside [0, " + std::to_string(action_count()) + ")");
  }
}

Eigen::VectorXd one_hot(StateId s, int size) {
  if (s < 0 || s >= size) throw RangeError("one_hot index out of range");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(size);
  v(s) = 1.0;
  return v;
}

}  // namespace needreplay
