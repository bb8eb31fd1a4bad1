#include "needreplay/envs/oracles.hpp"

#include <cmath>
#include <queue>

#include "needreplay/errors.hpp"

namespace needreplay {

Eigen::MatrixXd cliffwalk_ground_truth_q(int n, double gamma, FallMode mode) {
  if (n < 2) throw ContractViolation("cliffwalk ground truth needs n >= 2");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ContractViolation("gamma must lie in (0, 1)");
  Eigen::MatrixXd q(n, 2);
  for (int k = 0; k < n; ++k) {
    q(k, kCliffRight) = std::pow(gamma, n - 1 - k);
    // A restart lands on s_0 whose value is gamma^(n-1), discounted once more.
    q(k, kCliffWrong) = mode == FallMode::kTerminate ? 0.0 : std::pow(gamma, n);
  }
  return q;
}

std::vector<int> maze_distances_to_goal(const DynaMaze& maze) {
  // Reverse BFS from the goal over the (deterministic) move graph.
  const int count = maze.state_count();
  std::vector<std::vector<StateId>> predecessors(count);
  for (StateId s = 0; s < count; ++s) {
    if (!maze.is_valid_state(s) || s == maze.goal_state()) continue;
    for (ActionId a = 0; a < maze.action_count(); ++a) {
      const StateId next = maze.successor(s, a).next_state;
      if (next != s) predecessors[next].push_back(s);
    }
  }
  std::vector<int> dist(count, -1);
  std::queue<StateId> frontier;
  dist[maze.goal_state()] = 0;
  frontier.push(maze.goal_state());
  while (!frontier.empty()) {
    const StateId s = frontier.front();
    frontier.pop();
    for (StateId p : predecessors[s]) {
      if (dist[p] < 0) {
        dist[p] = dist[s] + 1;
        frontier.push(p);
      }
    }
  }
  return dist;
}

int maze_shortest_path_length(const DynaMaze& maze) {
  const int d = maze_distances_to_goal(maze)[maze.start_state()];
  if (d < 0) throw UnreachableError("maze goal is unreachable from the start");
  return d;
}

Eigen::MatrixXd maze_shortest_path_policy(const DynaMaze& maze, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ContractViolation("epsilon must lie in [0, 1]");
  const std::vector<int> dist = maze_distances_to_goal(maze);
  const int actions = maze.action_count();
  Eigen::MatrixXd policy = Eigen::MatrixXd::Constant(maze.state_count(), actions, 1.0 / actions);
  for (StateId s = 0; s < maze.state_count(); ++s) {
    if (dist[s] <= 0) continue;
    std::vector<ActionId> best;
    for (ActionId a = 0; a < actions; ++a) {
      const Successor succ = maze.successor(s, a);
      if (succ.terminal || dist[succ.next_state] == dist[s] - 1) best.push_back(a);
    }
    policy.row(s).setConstant(epsilon / actions);
    for (ActionId a : best) policy(s, a) += (1.0 - epsilon) / static_cast<double>(best.size());
  }
  return policy;
}

}  // namespace needreplay
