#ifndef NEEDREPLAY_ENVS_BLIND_CLIFFWALK_HPP
#define NEEDREPLAY_ENVS_BLIND_CLIFFWALK_HPP

#include "needreplay/envs/environment.hpp"

namespace needreplay {

/// What a wrong action does.
enum class FallMode {
  /// The episode ends with reward 0; the next episode starts at s_0.
  kTerminate,
  /// Non-terminal jump back to s_0 with reward 0 within the same episode.
  kRestart,
};

enum CliffAction : ActionId { kCliffRight = 0, kCliffWrong = 1 };

/// Chain s_0 .. s_{n-1}. `right` advances, and from s_{n-1} ends the episode
/// with reward 1. Terminal transitions report next_state = s_0.
class BlindCliffwalk final : public Environment {
 public:
  explicit BlindCliffwalk(int n, FallMode mode = FallMode::kTerminate);

  int state_count() const override { return n_; }
  int action_count() const override { return 2; }
  StateId start_state() const override { return 0; }

  StepResult transition(StateId s, ActionId a, Rng& rng) const override;
  Successor successor(StateId s, ActionId a) const override;

  FallMode fall_mode() const noexcept { return mode_; }

 private:
  int n_;
  FallMode mode_;
};

}  // namespace needreplay

#endif  // NEEDREPLAY_ENVS_BLIND_CLIFFWALK_HPP
