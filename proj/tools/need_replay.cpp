#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "needreplay/errors.hpp"
#include "needreplay/harness/config.hpp"
#include "needreplay/harness/experiments.hpp"

namespace {

using needreplay::ExperimentConfig;
using needreplay::ExperimentKind;

constexpr int kConfigError = 2;

struct Flags {
  std::string config_path;
  std::string experiment;
  std::vector<std::string> algorithms;
  std::optional<int> trials;
  std::optional<int> episodes;
  std::optional<std::int64_t> update_budget;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> gamma;
  std::optional<double> lambda;
  std::optional<double> alpha_exp;
  std::optional<double> beta;
  std::optional<double> epsilon;
  std::optional<double> step_size;
  std::optional<double> threshold;
  std::optional<int> planning_steps;
  std::optional<int> minibatch;
  std::vector<int> n_states;
  std::optional<std::string> maze_file;
};

void add_run_options(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config_path, "JSON file with flat config keys")->check(CLI::ExistingFile);
  app.add_option("--algo", f.algorithms, "Algorithms or replay schemes to run")->delimiter(',');
  app.add_option("--trials", f.trials, "Independent trials per algorithm");
  app.add_option("--episodes", f.episodes, "Episodes per trial (maze) or last heatmap episode");
  app.add_option("--update-budget", f.update_budget, "Q-update cap per cliffwalk or toy run");
  app.add_option("--seed", f.seed, "Base seed; trial t uses seed + t");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--gamma", f.gamma, "Discount factor");
  app.add_option("--lambda", f.lambda, "TD(lambda) trace decay of the successor matrix");
  app.add_option("--alpha-exp", f.alpha_exp, "Prioritization exponent");
  app.add_option("--beta", f.beta, "Importance-sampling exponent");
  app.add_option("--epsilon", f.epsilon, "Exploration rate");
  app.add_option("--step-size", f.step_size, "Q (or SR, for sr-heatmap) step size");
  app.add_option("--threshold", f.threshold, "Prioritized sweeping queue threshold");
  app.add_option("--planning-steps", f.planning_steps, "Planning pops per real step");
  app.add_option("--minibatch", f.minibatch, "PER-SR minibatch size");
  app.add_option("--n-states", f.n_states, "Chain lengths, e.g. 8,9,10")->delimiter(',');
  app.add_option("--maze-file", f.maze_file, "Maze layout in the .#SG text format");
}

ExperimentConfig resolve(const Flags& f, std::optional<ExperimentKind> kind) {
  if (!f.experiment.empty()) {
    const auto named = needreplay::parse_experiment_kind(f.experiment);
    if (!named) throw needreplay::ValidationError("experiment", "unknown experiment '" + f.experiment + "'");
    if (kind && *kind != *named) throw needreplay::ValidationError("experiment", "conflicts with the subcommand");
    kind = named;
  }

  ExperimentConfig config = needreplay::default_config(kind.value_or(ExperimentKind::kMaze));
  if (!f.config_path.empty()) {
    config = needreplay::apply_json_file(f.config_path, config);
    if (kind && config.experiment != *kind) {
      throw needreplay::ValidationError("experiment", "config file names a different experiment");
    }
  } else if (!kind) {
    throw needreplay::ValidationError("experiment", "pick a subcommand, --experiment or a --config file");
  }

  if (!f.algorithms.empty()) config.algorithms = f.algorithms;
  if (f.trials) config.trials = *f.trials;
  if (f.episodes) config.episodes = *f.episodes;
  if (f.update_budget) config.update_budget = *f.update_budget;
  if (f.seed) config.seed = *f.seed;
  if (f.out) config.out = *f.out;
  if (f.gamma) config.gamma = f.gamma;
  if (f.lambda) config.lambda = f.lambda;
  if (f.alpha_exp) config.alpha_exp = f.alpha_exp;
  if (f.beta) config.beta = f.beta;
  if (f.epsilon) config.epsilon = f.epsilon;
  if (f.step_size) config.step_size = f.step_size;
  if (f.threshold) config.threshold = f.threshold;
  if (f.planning_steps) config.planning_steps = f.planning_steps;
  if (f.minibatch) config.minibatch = f.minibatch;
  if (!f.n_states.empty()) config.n_states = f.n_states;
  if (f.maze_file) config.maze_file = *f.maze_file;
  return config;
}

void print_summary(const needreplay::RunSummary& summary) {
  std::cout << std::fixed << std::setprecision(2);
  if (summary.experiment == ExperimentKind::kMaze) {
    // Episodes 1-3 and every tenth episode.
    std::cout << "episode  algorithm  mean_steps\n";
    for (const auto& row : summary.aggregates) {
      if (row.key <= 3 || row.key % 10 == 0) {
        std::cout << std::setw(7) << row.key << "  " << std::setw(9) << row.algorithm << "  " << row.summary.mean
                  << "\n";
      }
    }
  } else if (summary.experiment != ExperimentKind::kSrHeatmap) {
    std::cout << "algorithm      n  median_updates\n";
    for (const auto& row : summary.aggregates) {
      std::cout << std::left << std::setw(13) << row.algorithm << std::right << std::setw(3) << row.key << "  "
                << row.summary.median << "\n";
    }
  }
  for (const std::string& file : summary.files) std::cout << "wrote " << file << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Need-weighted experience replay experiments"};
  app.require_subcommand(0, 1);
  Flags flags;
  add_run_options(app, flags);
  app.add_option("--experiment", flags.experiment, "maze, cliffwalk, sr-heatmap or toy-persr");

  struct Sub {
    const char* name;
    const char* help;
    ExperimentKind kind;
  };
  const Sub subs[] = {
      {"maze", "Prioritized sweeping with and without need on the Dyna maze", ExperimentKind::kMaze},
      {"cliffwalk", "Replay schemes on the Blind Cliffwalk", ExperimentKind::kCliffwalk},
      {"sr-heatmap", "Start-state SR snapshots on the maze for lambda 0 and 1", ExperimentKind::kSrHeatmap},
      {"toy-persr", "PER against PER-SR on a short chain with linear Q", ExperimentKind::kToyPerSr},
  };
  std::vector<std::pair<CLI::App*, ExperimentKind>> commands;
  for (const Sub& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    cmd->fallthrough();
    commands.emplace_back(cmd, s.kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  std::optional<ExperimentKind> kind;
  for (const auto& [cmd, k] : commands) {
    if (cmd->parsed()) kind = k;
  }

  ExperimentConfig config;
  try {
    config = resolve(flags, kind);
    needreplay::validate(config);
  } catch (const needreplay::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    print_summary(needreplay::run_experiment(config));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
