#include "needreplay/envs/blind_cliffwalk.hpp"

#include "needreplay/errors.hpp"

namespace needreplay {

BlindCliffwalk::BlindCliffwalk(int n, FallMode mode) : n_(n), mode_(mode) {
  if (n < 2) throw ContractViolation("cliffwalk needs at least 2 states");
  current_ = 0;
}

Successor BlindCliffwalk::successor(StateId s, ActionId a) const {
  check_action(a);
  if (s < 0 || s >= n_) throw RangeError("cliffwalk state out of range");
  if (a == kCliffWrong) {
    return {0, mode_ == FallMode::kTerminate, 0.0};
  }
  if (s == n_ - 1) return {0, true, 1.0};
  return {s + 1, false, 0.0};
}

StepResult BlindCliffwalk::transition(StateId s, ActionId a, Rng& /*rng*/) const {
  const Successor succ = successor(s, a);
  return {succ.next_state, succ.expected_reward, succ.terminal};
}

}  // namespace needreplay
