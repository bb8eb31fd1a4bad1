#ifndef NEEDREPLAY_SR_TABULAR_SR_HPP
#define NEEDREPLAY_SR_TABULAR_SR_HPP

#include <cstdint>
#include <iosfwd>

#include <Eigen/Core>

#include "needreplay/envs/environment.hpp"
#include "needreplay/types.hpp"

namespace needreplay {

/// State-to-state transition matrix of `env` under a stochastic policy given
/// as an |S| x |A| table of action probabilities. Terminal transitions and
/// terminal states contribute no outgoing mass.
Eigen::MatrixXd policy_transition_matrix(const Environment& env, const Eigen::MatrixXd& policy);

/// Transition matrix for the policy that picks every action with probability 1/|A|.
Eigen::MatrixXd uniform_policy_transition_matrix(const Environment& env);

/// (I - gamma * T)^-1 by direct LU solve. Throws NumericalError on failure.
Eigen::MatrixXd successor_closed_form(const Eigen::MatrixXd& transitions, double gamma);

struct SRParams {
  double gamma = 0.95;
  double lambda = 0.5;
  double learning_rate = 0.1;
};

/// Accumulating eligibility trace over one-hot state features.
class EligibilityTrace {
 public:
  explicit EligibilityTrace(int state_count) : values_(Eigen::VectorXd::Zero(state_count)) {}

  /// e <- decay * e + phi(s)
  void decay_and_add(StateId s, double decay);
  void reset() { values_.setZero(); }

  const Eigen::VectorXd& values() const noexcept { return values_; }
  int size() const noexcept { return static_cast<int>(values_.size()); }

 private:
  Eigen::VectorXd values_;
};

/// Tabular successor representation M, learned by TD(lambda) on one-hot features.
/// Entry (i, j) estimates the discounted number of future visits to j from i.
class SuccessorMatrix {
 public:
  SuccessorMatrix(Eigen::MatrixXd m, SRParams params);

  static SuccessorMatrix zeros(int state_count, SRParams params);
  static SuccessorMatrix from_transition_matrix(const Eigen::MatrixXd& transitions, SRParams params);
  /// M = (I - gamma * T_uniform)^-1 for the uniform-random policy on `env`.
  static SuccessorMatrix init_uniform(const Environment& env, SRParams params);

  /// One TD(lambda) step for the real transition s -> next:
  ///   e <- gamma*lambda*e + phi(s)
  ///   M <- M + alpha * e * (phi(s) + gamma*M[next,:] - M[s,:])
  /// The bootstrap row is dropped when `terminal`.
  void td_lambda_update(EligibilityTrace& trace, StateId s, StateId next, bool terminal);

  /// M(i, j) clamped below at zero.
  double need(StateId i, StateId j) const;
  Eigen::VectorXd need_row(StateId i) const;

  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  Eigen::MatrixXd& matrix() noexcept { return m_; }
  const SRParams& params() const noexcept { return params_; }
  int state_count() const noexcept { return static_cast<int>(m_.rows()); }

 private:
  void check_state(StateId s) const;

  Eigen::MatrixXd m_;
  SRParams params_;
};

/// Plays one episode of `policy` (|S| x |A| action probabilities) from the
/// start state and applies a TD(lambda) update after every step. The trace is
/// reset first. Returns the number of steps taken.
std::int64_t learn_sr_episode(Environment& env, const Eigen::MatrixXd& policy, SuccessorMatrix& sr,
                              EligibilityTrace& trace, Rng& rng, std::int64_t max_steps = 1'000'000);

/// Writes the clamped row `state` of M reshaped to a rows x cols grid as CSV
/// (one grid row per line, full round-trip precision).
void export_sr_row_csv(std::ostream& out, const SuccessorMatrix& sr, StateId state, int rows, int cols);

}  // namespace needreplay

#endif  // NEEDREPLAY_SR_TABULAR_SR_HPP
