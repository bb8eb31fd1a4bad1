#ifndef NEEDREPLAY_AGENTS_Q_FUNCTIONS_HPP
#define NEEDREPLAY_AGENTS_Q_FUNCTIONS_HPP

#include <concepts>
#include <random>

#include <Eigen/Core>

#include "needreplay/types.hpp"

namespace needreplay {

/// Tabular action values with a fixed step size and discount.
class QTable {
 public:
  QTable(int state_count, int action_count, double step_size, double gamma, double epsilon);

  double value(StateId s, ActionId a) const { return q_(s, a); }
  void set_value(StateId s, ActionId a, double v) { q_(s, a) = v; }
  double max_value(StateId s) const { return q_.row(s).maxCoeff(); }
  /// argmax_a Q(s, a); ties go to the lowest action id.
  ActionId greedy_action(StateId s) const;

  /// r + gamma * max_a Q(next, a) - Q(s, a); the bootstrap is dropped when terminal.
  double td_error(StateId s, ActionId a, double reward, StateId next, bool terminal) const;
  /// Q(s, a) += step_size * td_error; returns the TD error used.
  double update(StateId s, ActionId a, double reward, StateId next, bool terminal);

  const Eigen::MatrixXd& table() const noexcept { return q_; }
  int state_count() const noexcept { return static_cast<int>(q_.rows()); }
  int action_count() const noexcept { return static_cast<int>(q_.cols()); }
  double step_size() const noexcept { return step_size_; }
  double gamma() const noexcept { return gamma_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  Eigen::MatrixXd q_;
  double step_size_;
  double gamma_;
  double epsilon_;
};

/// Linear action values Q(s, a) = theta . phi(s, a) over one-hot (s, a)
/// features, so the gradient with respect to theta is phi(s, a).
class LinearQ {
 public:
  LinearQ(int state_count, int action_count, double gamma);

  Eigen::Index feature_index(StateId s, ActionId a) const;
  Eigen::VectorXd features(StateId s, ActionId a) const;
  Eigen::VectorXd gradient(StateId s, ActionId a) const { return features(s, a); }

  double value(StateId s, ActionId a) const { return theta_(feature_index(s, a)); }
  double max_value(StateId s) const;
  ActionId greedy_action(StateId s) const;

  /// r + gamma * Q(next, argmax_a Q(next, a)) - Q(s, a), online parameters for both.
  double td_error(StateId s, ActionId a, double reward, StateId next, bool terminal) const;

  /// Q as an |S| x |A| table.
  Eigen::MatrixXd table() const;

  Eigen::VectorXd& theta() noexcept { return theta_; }
  const Eigen::VectorXd& theta() const noexcept { return theta_; }
  int state_count() const noexcept { return states_; }
  int action_count() const noexcept { return actions_; }
  double gamma() const noexcept { return gamma_; }

 private:
  int states_;
  int actions_;
  double gamma_;
  Eigen::VectorXd theta_;
};

template <typename Q>
concept ActionValueFunction = requires(const Q& q, StateId s, ActionId a) {
  { q.action_count() } -> std::convertible_to<int>;
  { q.value(s, a) } -> std::convertible_to<double>;
  { q.greedy_action(s) } -> std::convertible_to<ActionId>;
};

enum class TieBreak { kLowestId, kRandom };

/// Uniform choice among the actions sharing the maximal value.
template <ActionValueFunction Q>
ActionId random_greedy_action(const Q& q, StateId s, Rng& rng) {
  const double best = q.value(s, q.greedy_action(s));
  int ties = 0;
  for (ActionId a = 0; a < q.action_count(); ++a) ties += q.value(s, a) == best ? 1 : 0;
  int pick = ties > 1 ? std::uniform_int_distribution<int>(0, ties - 1)(rng) : 0;
  for (ActionId a = 0; a < q.action_count(); ++a) {
    if (q.value(s, a) == best && pick-- == 0) return a;
  }
  return q.greedy_action(s);
}

/// With probability epsilon a uniformly random action, otherwise the greedy
/// action (lowest id on ties unless `ties` is kRandom). Always consumes one
/// uniform draw, plus one more when exploring or breaking a tie at random.
template <ActionValueFunction Q>
ActionId epsilon_greedy(const Q& q, StateId s, double epsilon, Rng& rng, TieBreak ties = TieBreak::kLowestId) {
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon) {
    return std::uniform_int_distribution<ActionId>(0, q.action_count() - 1)(rng);
  }
  return ties == TieBreak::kRandom ? random_greedy_action(q, s, rng) : q.greedy_action(s);
}

inline ActionId epsilon_greedy(const QTable& q, StateId s, Rng& rng, TieBreak ties = TieBreak::kLowestId) {
  return epsilon_greedy(q, s, q.epsilon(), rng, ties);
}

/// Mean squared difference between two equally shaped tables.
double mean_squared_error(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth);

}  // namespace needreplay

#endif  // NEEDREPLAY_AGENTS_Q_FUNCTIONS_HPP
