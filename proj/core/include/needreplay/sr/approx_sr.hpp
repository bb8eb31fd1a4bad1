#ifndef NEEDREPLAY_SR_APPROX_SR_HPP
#define NEEDREPLAY_SR_APPROX_SR_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "needreplay/types.hpp"

namespace needreplay {

/// Losses of one transition together with the gradient of loss_g + loss_u
/// with respect to the flat parameter vector of the approximator.
struct SRLossReport {
  double loss_g = 0.0;
  double loss_u = 0.0;
  Eigen::VectorXd gradients;

  /// Sums losses and gradients; an empty report adopts the other's shape.
  SRLossReport& operator+=(const SRLossReport& other);
};

/// Linear successor-representation approximator with three branches:
///   encoder  phi = F s          (feature_dim x input_dim)
///   decoder  s^  = G phi        (input_dim x feature_dim)
///   SR head  m   = U_a phi      (feature_dim x feature_dim, one per action)
///
/// Trained on
///   loss_g = |s_t - G phi_t|^2
///   loss_u = |phi_t + gamma * U_{a'} phi_{t+1} - U_{a_t} phi_t|^2
/// where a' is the greedy next action. The bootstrap term U_{a'} phi_{t+1} is a
/// fixed target (no gradient) and is dropped on terminal transitions.
///
/// Flat parameter layout: F, then G, then U_0 .. U_{A-1}, each column-major.
class LinearApproxSR {
 public:
  LinearApproxSR(int input_dim, int feature_dim, int action_count, double gamma, double step_size);

  /// Parameters drawn i.i.d. from Normal(0, scale).
  static LinearApproxSR random(int input_dim, int feature_dim, int action_count, double gamma, double step_size,
                               Rng& rng, double scale = 0.1);

  /// Frozen identity encoder over one-hot states (feature_dim == state_count),
  /// identity decoder, and SR heads initialised to the identity (m(s, a) = phi(s)).
  static LinearApproxSR one_hot(int state_count, int action_count, double gamma, double step_size);

  Eigen::VectorXd encode(const Eigen::VectorXd& state) const;
  Eigen::VectorXd decode(const Eigen::VectorXd& features) const;
  Eigen::VectorXd sr_vector(const Eigen::VectorXd& features, ActionId action) const;

  /// Throws ShapeError when the transition does not match input_dim().
  SRLossReport losses(const VectorTransition& t, ActionId greedy_next_action) const;

  /// params <- params - step_size * gradients. The encoder block is left
  /// untouched while the encoder is frozen. Throws NumericalError on a
  /// non-finite gradient and ShapeError on a dimension mismatch.
  void sgd_step(const SRLossReport& report);

  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);
  int parameter_count() const noexcept;

  const Eigen::MatrixXd& encoder() const noexcept { return encoder_; }
  const Eigen::MatrixXd& decoder() const noexcept { return decoder_; }
  const Eigen::MatrixXd& head(ActionId a) const;
  Eigen::MatrixXd& encoder() noexcept { return encoder_; }
  Eigen::MatrixXd& decoder() noexcept { return decoder_; }
  Eigen::MatrixXd& head(ActionId a);

  bool encoder_frozen() const noexcept { return encoder_frozen_; }
  void set_encoder_frozen(bool frozen) noexcept { encoder_frozen_ = frozen; }

  int input_dim() const noexcept { return static_cast<int>(encoder_.cols()); }
  int feature_dim() const noexcept { return static_cast<int>(encoder_.rows()); }
  int action_count() const noexcept { return static_cast<int>(heads_.size()); }
  double gamma() const noexcept { return gamma_; }
  double step_size() const noexcept { return step_size_; }
  void set_step_size(double step_size) noexcept { step_size_ = step_size; }

  /// Checkpoint as JSON: {"format": "needreplay.linear_sr", "version": 1,
  /// "input_dim", "feature_dim", "action_count", "gamma", "step_size",
  /// "encoder_frozen", "params": [...]}.
  std::string to_json() const;
  static LinearApproxSR from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static LinearApproxSR load(const std::filesystem::path& path);

  friend bool operator==(const LinearApproxSR& a, const LinearApproxSR& b);

 private:
  Eigen::MatrixXd encoder_;
  Eigen::MatrixXd decoder_;
  std::vector<Eigen::MatrixXd> heads_;
  double gamma_;
  double step_size_;
  bool encoder_frozen_ = false;
};

/// Need estimate by vector projection: (m . phi_target) / |phi_target|^2.
/// Throws DegenerateFeatureError when phi_target is zero.
double need_projection(const Eigen::VectorXd& sr_vector, const Eigen::VectorXd& target_features);

/// Shifts a minibatch of needs up by -min(0, min_i needs_i) so none is negative.
std::vector<double> need_offset(std::span<const double> needs);

}  // namespace needreplay

#endif  // NEEDREPLAY_SR_APPROX_SR_HPP
