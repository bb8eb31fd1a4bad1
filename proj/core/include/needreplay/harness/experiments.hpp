#ifndef NEEDREPLAY_HARNESS_EXPERIMENTS_HPP
#define NEEDREPLAY_HARNESS_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "needreplay/agents/cliffwalk_replay.hpp"
#include "needreplay/agents/per_sr.hpp"
#include "needreplay/agents/prioritized_sweeping.hpp"
#include "needreplay/envs/dyna_maze.hpp"
#include "needreplay/harness/config.hpp"
#include "needreplay/harness/stats.hpp"
#include "needreplay/sr/tabular_sr.hpp"

namespace needreplay {

/// NEED_REPLAY_THREADS when set to a positive integer, otherwise the hardware
/// concurrency (at least 1).
int worker_count();

/// Runs body(0) .. body(count - 1) on up to worker_count() threads. Each call
/// must only touch its own output slot. The first exception is rethrown after
/// all workers have stopped.
void parallel_for(int count, const std::function<void(int)>& body);

/// Steps per episode, indexed [trial][episode]. Trial t uses seed base_seed + t.
std::vector<std::vector<std::int64_t>> run_maze_trials(const MazeLayout& layout, const PSConfig& config,
                                                       int trials, int episodes, std::uint64_t base_seed);

/// One result per trial; trial t uses seed base_seed + t.
std::vector<CliffwalkResult> run_cliffwalk_trials(ReplayScheme scheme, const CliffwalkConfig& config, int trials,
                                                  std::uint64_t base_seed);

std::vector<PerSrRunResult> run_toy_persr_trials(const PerSrToyConfig& config, int trials,
                                                 std::uint64_t base_seed);

struct HeatmapFrame {
  double lambda = 0.0;
  int episode = 0;
  /// Clamped start-state row of M reshaped to the maze grid.
  Eigen::MatrixXd grid;
};

/// Learns M by TD(lambda) from the uniform-policy initialisation while
/// following `policy`, one run per lambda with the same seed, and snapshots the
/// start-state row after each checkpoint episode (0 is the initialisation).
std::vector<HeatmapFrame> sr_heatmap_frames(const DynaMaze& maze, const Eigen::MatrixXd& policy,
                                            const std::vector<double>& lambdas, const std::vector<int>& checkpoints,
                                            SRParams params, std::uint64_t seed);

struct AggregateRow {
  std::string algorithm;
  /// Episode number (maze, 1-based) or chain length (cliffwalk, toy-persr).
  int key = 0;
  Summary summary;
};

struct RunSummary {
  ExperimentKind experiment = ExperimentKind::kMaze;
  std::vector<AggregateRow> aggregates;
  std::size_t raw_rows = 0;
  std::vector<std::string> files;
};

/// Validates `config`, runs every (algorithm x trial) cell and writes raw and
/// aggregate CSV files plus the resolved config into config.out.
RunSummary run_experiment(const ExperimentConfig& config);

}  // namespace needreplay

#endif  // NEEDREPLAY_HARNESS_EXPERIMENTS_HPP
