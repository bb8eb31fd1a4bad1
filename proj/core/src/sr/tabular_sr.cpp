#include "needreplay/sr/tabular_sr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <ostream>
#include <string>

#include <Eigen/LU>

#include "needreplay/errors.hpp"

namespace needreplay {

Eigen::MatrixXd policy_transition_matrix(const Environment& env, const Eigen::MatrixXd& policy) {
  const int n = env.state_count();
  const int actions = env.action_count();
  if (policy.rows() != n || policy.cols() != actions) {
    throw ShapeError("policy table must be |S| x |A|");
  }
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (StateId s = 0; s < n; ++s) {
    if (env.is_terminal_state(s)) continue;
    for (ActionId a = 0; a < actions; ++a) {
      const double p = policy(s, a);
      if (p == 0.0) continue;
      const Successor succ = env.successor(s, a);
      if (!succ.terminal) t(s, succ.next_state) += p;
    }
  }
  return t;
}

Eigen::MatrixXd uniform_policy_transition_matrix(const Environment& env) {
  const Eigen::MatrixXd policy =
      Eigen::MatrixXd::Constant(env.state_count(), env.action_count(), 1.0 / env.action_count());
  return policy_transition_matrix(env, policy);
}

Eigen::MatrixXd successor_closed_form(const Eigen::MatrixXd& transitions, double gamma) {
  if (transitions.rows() != transitions.cols()) throw ShapeError("transition matrix must be square");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ContractViolation("gamma must lie in [0, 1)");
  const auto n = transitions.rows();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd system = identity - gamma * transitions;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::MatrixXd m = lu.solve(identity);
  if (!m.allFinite() || (system * m - identity).cwiseAbs().maxCoeff() > 1e-8) {
    throw NumericalError("linear solve for (I - gamma T)^-1 failed");
  }
  return m;
}

void EligibilityTrace::decay_and_add(StateId s, double decay) {
  if (s < 0 || s >= values_.size()) throw RangeError("trace state out of range");
  values_ *= decay;
  values_(s) += 1.0;
}

SuccessorMatrix::SuccessorMatrix(Eigen::MatrixXd m, SRParams params) : m_(std::move(m)), params_(params) {
  if (m_.rows() != m_.cols()) throw ShapeError("successor matrix must be square");
  if (!(params_.gamma >= 0.0 && params_.gamma < 1.0)) throw ContractViolation("gamma must lie in [0, 1)");
  if (!(params_.lambda >= 0.0 && params_.lambda <= 1.0)) throw ContractViolation("lambda must lie in [0, 1]");
}

SuccessorMatrix SuccessorMatrix::zeros(int state_count, SRParams params) {
  return {Eigen::MatrixXd::Zero(state_count, state_count), params};
}

SuccessorMatrix SuccessorMatrix::from_transition_matrix(const Eigen::MatrixXd& transitions, SRParams params) {
  return {successor_closed_form(transitions, params.gamma), params};
}

SuccessorMatrix SuccessorMatrix::init_uniform(const Environment& env, SRParams params) {
  return from_transition_matrix(uniform_policy_transition_matrix(env), params);
}

void SuccessorMatrix::check_state(StateId s) const {
  if (s < 0 || s >= m_.rows()) throw RangeError("SR state " + std::to_string(s) + " out of range");
}

void SuccessorMatrix::td_lambda_update(EligibilityTrace& trace, StateId s, StateId next, bool terminal) {
  check_state(s);
  check_state(next);
  if (trace.size() != m_.rows()) throw ShapeError("trace dimension does not match SR");
  trace.decay_and_add(s, params_.gamma * params_.lambda);

  Eigen::RowVectorXd error = -m_.row(s);
  error(s) += 1.0;
  if (!terminal) error += params_.gamma * m_.row(next);
  m_.noalias() += params_.learning_rate * trace.values() * error;
}

double SuccessorMatrix::need(StateId i, StateId j) const {
  check_state(i);
  check_state(j);
  return std::max(0.0, m_(i, j));
}

Eigen::VectorXd SuccessorMatrix::need_row(StateId i) const {
  check_state(i);
  return m_.row(i).transpose().cwiseMax(0.0);
}

std::int64_t learn_sr_episode(Environment& env, const Eigen::MatrixXd& policy, SuccessorMatrix& sr,
                              EligibilityTrace& trace, Rng& rng, std::int64_t max_steps) {
  if (policy.rows() != env.state_count() || policy.cols() != env.action_count()) {
    throw ShapeError("policy table must be |S| x |A|");
  }
  StateId s = env.reset();
  trace.reset();
  std::int64_t steps = 0;
  while (steps < max_steps) {
    const Eigen::VectorXd row = policy.row(s).transpose();
    std::discrete_distribution<ActionId> pick(row.data(), row.data() + row.size());
    const StepResult result = env.step(pick(rng), rng);
    sr.td_lambda_update(trace, s, result.next_state, result.terminal);
    ++steps;
    if (result.terminal) break;
    s = result.next_state;
  }
  return steps;
}

void export_sr_row_csv(std::ostream& out, const SuccessorMatrix& sr, StateId state, int rows, int cols) {
  if (rows * cols != sr.state_count()) throw ShapeError("grid shape does not match SR size");
  const Eigen::VectorXd row = sr.need_row(state);
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c > 0) out << ',';
      out << row(r * cols + c);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace needreplay
