#ifndef NEEDREPLAY_ENVS_ORACLES_HPP
#define NEEDREPLAY_ENVS_ORACLES_HPP

#include <vector>

#include <Eigen/Core>

#include "needreplay/envs/blind_cliffwalk.hpp"
#include "needreplay/envs/dyna_maze.hpp"

namespace needreplay {

/// Optimal action values of the n-state cliffwalk, an n x 2 table indexed by
/// (state, CliffAction). Q*(s_k, right) = gamma^(n-1-k). Q*(s_k, wrong) is 0
/// when falling terminates, gamma^n when it restarts the walk.
Eigen::MatrixXd cliffwalk_ground_truth_q(int n, double gamma, FallMode mode = FallMode::kTerminate);

/// Breadth-first shortest number of steps from start to goal.
/// Throws UnreachableError when the goal cannot be reached.
int maze_shortest_path_length(const DynaMaze& maze);

/// Per-state shortest distance to the goal (-1 where unreachable or a wall).
std::vector<int> maze_distances_to_goal(const DynaMaze& maze);

/// Epsilon-soft shortest-path policy as an |S| x |A| probability table: mass
/// 1 - epsilon split evenly over the moves that shorten the distance to the
/// goal, plus epsilon / |A| on every action. Walls, the goal and cells that
/// cannot reach it get the uniform row.
Eigen::MatrixXd maze_shortest_path_policy(const DynaMaze& maze, double epsilon);

}  // namespace needreplay

#endif  // NEEDREPLAY_ENVS_ORACLES_HPP
