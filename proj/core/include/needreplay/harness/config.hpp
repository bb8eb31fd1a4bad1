#ifndef NEEDREPLAY_HARNESS_CONFIG_HPP
#define NEEDREPLAY_HARNESS_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace needreplay {

enum class ExperimentKind { kMaze, kCliffwalk, kSrHeatmap, kToyPerSr };

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);

/// Everything needed to reproduce one run. Unset hyperparameters fall back to
/// the defaults of the experiment's agent configuration.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kMaze;
  /// maze: ps, ps-sr. cliffwalk: replay scheme names. toy-persr: per, per-sr.
  /// sr-heatmap: ignored. Empty selects every algorithm of the experiment.
  std::vector<std::string> algorithms;
  int trials = 10;
  /// Episodes per trial (maze) or the last heatmap checkpoint (sr-heatmap).
  int episodes = 50;
  /// Cap on Q updates per cliffwalk or toy-persr run.
  std::int64_t update_budget = 10'000'000;
  std::uint64_t seed = 0;

  std::optional<double> gamma;
  std::optional<double> lambda;
  std::optional<double> alpha_exp;
  std::optional<double> beta;
  std::optional<double> epsilon;
  std::optional<double> step_size;
  std::optional<double> threshold;
  std::optional<int> planning_steps;
  std::optional<int> minibatch;
  /// Chain lengths for cliffwalk and toy-persr.
  std::vector<int> n_states;

  /// Alternative maze layout in the .#SG text format.
  std::string maze_file;
  std::string out = "results";
};

/// Defaults per experiment (trial counts, episode counts and chain lengths).
ExperimentConfig default_config(ExperimentKind kind);

/// Applies the flat keys of a JSON object on top of `base`. Unknown keys and
/// ill-typed values throw ValidationError naming the key.
ExperimentConfig apply_json(const std::string& text, ExperimentConfig base);
ExperimentConfig apply_json_file(const std::string& path, ExperimentConfig base);

/// Flat JSON with every set field, in a fixed key order.
std::string to_json(const ExperimentConfig& config);

/// Throws ValidationError for the first field that is out of range.
void validate(const ExperimentConfig& config);

}  // namespace needreplay

#endif  // NEEDREPLAY_HARNESS_CONFIG_HPP
