#ifndef NEEDREPLAY_AGENTS_PER_SR_HPP
#define NEEDREPLAY_AGENTS_PER_SR_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "needreplay/agents/q_functions.hpp"
#include "needreplay/replay/proportional_sampler.hpp"
#include "needreplay/sr/approx_sr.hpp"
#include "needreplay/types.hpp"

namespace needreplay {

struct PerSrConfig {
  double gamma = 0.9;
  /// Step size of the linear Q update (eta).
  double step_size = 0.25;
  double alpha = 0.6;
  double beta = 0.0;
  int minibatch = 4;
  /// Replay once every `replay_period` environment steps (K).
  int replay_period = 1;
  std::size_t capacity = 1 << 16;
  /// Behaviour exploration rate.
  double epsilon = 0.1;
  /// Scale each Q weight-change by the (offset) need of its transition.
  bool use_need = true;
  double min_priority = 1e-8;
};

/// Everything computed during one replay step, in minibatch order.
struct ReplayStepReport {
  std::vector<std::size_t> indices;
  std::vector<double> weights;
  std::vector<double> td_errors;
  /// Projection needs before the offset.
  std::vector<double> raw_needs;
  /// Needs actually applied (after the offset; all 1 without need).
  std::vector<double> needs;
  /// Accumulated Q weight-change sum_j w_j * delta_j * n_j * grad Q; theta += step_size * this.
  Eigen::VectorXd q_weight_change;
  SRLossReport sr_losses;
};

/// Prioritized replay whose Q updates are scaled by a need term estimated
/// from a learned linear successor representation.
///
/// Minibatches are drawn by TD error alone (p^alpha / sum p^alpha). For each
/// sampled transition j the need n_j is the projection of the reference SR
/// vector m (from the latest real step) onto phi(s_j); the minibatch needs are
/// then offset so none is negative. Q and SR gradients are accumulated over
/// the minibatch and applied once; priorities are refreshed to |delta_j|.
class PerSrAgent {
 public:
  PerSrAgent(int state_count, int action_count, PerSrConfig config, LinearApproxSR sr);

  /// Raw observation fed to the SR encoder: one-hot over states.
  Eigen::VectorXd observe(StateId s) const;

  /// Stores a real transition with the maximal priority seen so far and makes
  /// m = u(f(s), a) of this transition the need reference.
  std::size_t store(const Transition& t);

  /// Draws `k` indices by priority. Throws InsufficientDataError when k > size().
  std::vector<std::size_t> sample_minibatch(int k, Rng& rng) const;

  /// Replays the given minibatch against the current reference SR vector.
  ReplayStepReport replay(std::span<const std::size_t> indices);

  /// sample_minibatch + replay.
  ReplayStepReport replay_step(int k, Rng& rng);

  /// Importance weight (N P(j))^-beta normalised by the buffer-wide maximum.
  double importance_weight(std::size_t index) const;

  const LinearQ& q() const noexcept { return q_; }
  LinearQ& q() noexcept { return q_; }
  const LinearApproxSR& sr() const noexcept { return sr_; }
  LinearApproxSR& sr() noexcept { return sr_; }
  const ProportionalSampler& sampler() const noexcept { return sampler_; }
  const std::vector<Transition>& buffer() const noexcept { return buffer_; }
  std::size_t size() const noexcept { return sampler_.size(); }
  const PerSrConfig& config() const noexcept { return config_; }

  const std::optional<Eigen::VectorXd>& reference_sr_vector() const noexcept { return reference_; }
  void set_reference_sr_vector(Eigen::VectorXd m) { reference_ = std::move(m); }

 private:
  PerSrConfig config_;
  int state_count_;
  LinearQ q_;
  LinearApproxSR sr_;
  ProportionalSampler sampler_;
  std::vector<Transition> buffer_;
  std::optional<Eigen::VectorXd> reference_;
};

struct PerSrRunResult {
  std::int64_t q_updates = 0;
  std::int64_t env_steps = 0;
  bool converged = false;
  double final_mse = 0.0;
};

struct PerSrToyConfig {
  int chain_length = 5;
  PerSrConfig agent;
  /// SR step size for the one-hot approximator.
  double sr_step_size = 0.05;
  double mse_threshold = 1e-3;
  std::int64_t update_budget = 1'000'000;
};

/// Online PER / PER-SR on the cliffwalk chain (fall terminates) with one-hot
/// features, counting Q updates (sampled transitions) until the MSE to the
/// ground-truth Q drops below the threshold.
PerSrRunResult run_per_sr_chain(const PerSrToyConfig& config, std::uint64_t seed);

}  // namespace needreplay

#endif  // NEEDREPLAY_AGENTS_PER_SR_HPP
