#include "needreplay/agents/q_functions.hpp"

#include "needreplay/errors.hpp"

namespace needreplay {

namespace {

ActionId argmax_lowest(const auto& row) {
  ActionId best = 0;
  for (Eigen::Index a = 1; a < row.size(); ++a) {
    if (row(a) > row(best)) best = static_cast<ActionId>(a);
  }
  return best;
}

}  // namespace

QTable::QTable(int state_count, int action_count, double step_size, double gamma, double epsilon)
    : q_(Eigen::MatrixXd::Zero(state_count, action_count)),
      step_size_(step_size),
      gamma_(gamma),
      epsilon_(epsilon) {
  if (state_count <= 0 || action_count <= 0) throw ContractViolation("Q table needs positive dimensions");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ContractViolation("epsilon must lie in [0, 1]");
}

ActionId QTable::greedy_action(StateId s) const { return argmax_lowest(q_.row(s)); }

double QTable::td_error(StateId s, ActionId a, double reward, StateId next, bool terminal) const {
  const double bootstrap = terminal ? 0.0 : gamma_ * max_value(next);
  return reward + bootstrap - q_(s, a);
}

double QTable::update(StateId s, ActionId a, double reward, StateId next, bool terminal) {
  const double delta = td_error(s, a, reward, next, terminal);
  q_(s, a) += step_size_ * delta;
  return delta;
}

LinearQ::LinearQ(int state_count, int action_count, double gamma)
    : states_(state_count), actions_(action_count), gamma_(gamma), theta_(Eigen::VectorXd::Zero(state_count * action_count)) {
  if (state_count <= 0 || action_count <= 0) throw ContractViolation("linear Q needs positive dimensions");
}

Eigen::Index LinearQ::feature_index(StateId s, ActionId a) const {
  if (s < 0 || s >= states_ || a < 0 || a >= actions_) throw RangeError("(state, action) out of range");
  return static_cast<Eigen::Index>(s) * actions_ + a;
}

Eigen::VectorXd LinearQ::features(StateId s, ActionId a) const {
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(theta_.size());
  phi(feature_index(s, a)) = 1.0;
  return phi;
}

double LinearQ::max_value(StateId s) const { return value(s, greedy_action(s)); }

ActionId LinearQ::greedy_action(StateId s) const {
  return argmax_lowest(theta_.segment(feature_index(s, 0), actions_));
}

double LinearQ::td_error(StateId s, ActionId a, double reward, StateId next, bool terminal) const {
  const double bootstrap = terminal ? 0.0 : gamma_ * value(next, greedy_action(next));
  return reward + bootstrap - value(s, a);
}

Eigen::MatrixXd LinearQ::table() const {
  Eigen::MatrixXd t(states_, actions_);
  for (StateId s = 0; s < states_; ++s) {
    for (ActionId a = 0; a < actions_; ++a) t(s, a) = value(s, a);
  }
  return t;
}

double mean_squared_error(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) throw ShapeError("table shapes differ");
  return (estimate - truth).squaredNorm() / static_cast<double>(truth.size());
}

}  // namespace needreplay
