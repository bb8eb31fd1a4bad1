#ifndef NEEDREPLAY_AGENTS_CLIFFWALK_REPLAY_HPP
#define NEEDREPLAY_AGENTS_CLIFFWALK_REPLAY_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "needreplay/envs/blind_cliffwalk.hpp"
#include "needreplay/types.hpp"

namespace needreplay {

enum class ReplayScheme { kUniform, kOracle, kPer, kNeed, kRandomNeed, kOptimalNeed };

std::string_view to_string(ReplayScheme scheme);
std::optional<ReplayScheme> parse_replay_scheme(std::string_view name);
/// All six schemes in reporting order.
const std::vector<ReplayScheme>& all_replay_schemes();

struct CliffwalkConfig {
  int n = 10;
  double gamma = 0.9;
  /// Step size of the linear Q update.
  double step_size = 0.25;
  /// Prioritization exponent for per / need / random_need / optimal_need.
  double alpha = 0.6;
  /// Importance-sampling exponent; 0 disables the correction.
  double beta = 0.0;
  /// TD(lambda) parameters of the learned successor matrix ("need" scheme).
  double lambda = 0.95;
  double sr_learning_rate = 0.1;
  /// Exploration of the behaviour walk that defines the current state.
  double walker_epsilon = 0.0;
  double min_priority = 1e-8;
  double mse_threshold = 1e-3;
  std::int64_t update_budget = 10'000'000;
  FallMode fall_mode = FallMode::kTerminate;
};

struct CliffwalkResult {
  std::int64_t q_updates = 0;
  bool converged = false;
  double final_mse = 0.0;
};

/// Every transition produced by executing each of the 2^n action sequences of
/// length n from s_0, stopping a sequence at its first terminal transition.
std::vector<Transition> enumerate_cliffwalk_experiences(const BlindCliffwalk& env);

/// Replay-only learning on a prefilled buffer.
///
/// The buffer holds enumerate_cliffwalk_experiences() and never grows. Each
/// iteration advances a behaviour walk by one environment step (epsilon-greedy
/// on the current Q; it defines the "current state" for need terms and drives
/// TD(lambda) for the learned SR) and then performs exactly one Q update chosen
/// by `scheme`. Stops once the MSE to the ground-truth Q drops below the
/// threshold; a run that exhausts the budget is reported with converged=false.
CliffwalkResult cliffwalk_run(ReplayScheme scheme, const CliffwalkConfig& config, std::uint64_t seed);

}  // namespace needreplay

#endif  // NEEDREPLAY_AGENTS_CLIFFWALK_REPLAY_HPP
