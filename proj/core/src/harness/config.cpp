#include "needreplay/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "needreplay/agents/cliffwalk_replay.hpp"
#include "needreplay/envs/dyna_maze.hpp"
#include "needreplay/errors.hpp"

namespace needreplay {

namespace {

using nlohmann::json;

const std::vector<std::string>& known_algorithms(ExperimentKind kind) {
  static const std::vector<std::string> maze{"ps", "ps-sr"};
  static const std::vector<std::string> toy{"per", "per-sr"};
  static const std::vector<std::string> none{};
  static const std::vector<std::string> schemes = [] {
    std::vector<std::string> names;
    for (ReplayScheme s : all_replay_schemes()) names.emplace_back(to_string(s));
    return names;
  }();
  switch (kind) {
    case ExperimentKind::kMaze: return maze;
    case ExperimentKind::kCliffwalk: return schemes;
    case ExperimentKind::kToyPerSr: return toy;
    case ExperimentKind::kSrHeatmap: return none;
  }
  return none;
}

template <typename T>
T read_value(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ValidationError(key, "wrong type");
  }
}

double read_number(const json& value, const std::string& key) {
  if (!value.is_number()) throw ValidationError(key, "expected a number");
  return value.get<double>();
}

int read_int(const json& value, const std::string& key) {
  if (!value.is_number_integer()) throw ValidationError(key, "expected an integer");
  return read_value<int>(value, key);
}

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ValidationError(field, message);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kMaze: return "maze";
    case ExperimentKind::kCliffwalk: return "cliffwalk";
    case ExperimentKind::kSrHeatmap: return "sr-heatmap";
    case ExperimentKind::kToyPerSr: return "toy-persr";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
  for (ExperimentKind k : {ExperimentKind::kMaze, ExperimentKind::kCliffwalk, ExperimentKind::kSrHeatmap,
                           ExperimentKind::kToyPerSr}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig config;
  config.experiment = kind;
  config.algorithms = known_algorithms(kind);
  switch (kind) {
    case ExperimentKind::kMaze:
      config.trials = 50;
      config.episodes = 50;
      break;
    case ExperimentKind::kCliffwalk:
      config.trials = 10;
      for (int n = 3; n <= 13; ++n) config.n_states.push_back(n);
      break;
    case ExperimentKind::kSrHeatmap:
      config.trials = 1;
      config.episodes = 100;
      break;
    case ExperimentKind::kToyPerSr:
      config.trials = 20;
      config.update_budget = 1'000'000;
      config.n_states = {5};
      break;
  }
  return config;
}

ExperimentConfig apply_json(const std::string& text, ExperimentConfig base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("config", e.what());
  }
  if (!doc.is_object()) throw ValidationError("config", "expected a JSON object");

  // Switching experiment starts over from that experiment's defaults.
  if (doc.contains("experiment")) {
    const auto name = read_value<std::string>(doc["experiment"], "experiment");
    const auto kind = parse_experiment_kind(name);
    if (!kind) throw ValidationError("experiment", "unknown experiment '" + name + "'");
    if (*kind != base.experiment) {
      ExperimentConfig fresh = default_config(*kind);
      fresh.seed = base.seed;
      fresh.out = base.out;
      base = std::move(fresh);
    }
  }

  for (const auto& [key, value] : doc.items()) {
    if (key == "experiment") continue;
    if (key == "algorithms") {
      if (value.is_string()) {
        base.algorithms = {value.get<std::string>()};
      } else {
        base.algorithms = read_value<std::vector<std::string>>(value, key);
      }
    } else if (key == "trials") {
      base.trials = read_int(value, key);
    } else if (key == "episodes") {
      base.episodes = read_int(value, key);
    } else if (key == "update_budget") {
      if (!value.is_number_integer()) throw ValidationError(key, "expected an integer");
      base.update_budget = read_value<std::int64_t>(value, key);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ValidationError(key, "expected a non-negative integer");
      base.seed = read_value<std::uint64_t>(value, key);
    } else if (key == "gamma") {
      base.gamma = read_number(value, key);
    } else if (key == "lambda") {
      base.lambda = read_number(value, key);
    } else if (key == "alpha_exp") {
      base.alpha_exp = read_number(value, key);
    } else if (key == "beta") {
      base.beta = read_number(value, key);
    } else if (key == "epsilon") {
      base.epsilon = read_number(value, key);
    } else if (key == "step_size") {
      base.step_size = read_number(value, key);
    } else if (key == "threshold") {
      base.threshold = read_number(value, key);
    } else if (key == "planning_steps") {
      base.planning_steps = read_int(value, key);
    } else if (key == "minibatch") {
      base.minibatch = read_int(value, key);
    } else if (key == "n_states") {
      if (value.is_number_integer()) {
        base.n_states = {read_int(value, key)};
      } else {
        base.n_states = read_value<std::vector<int>>(value, key);
      }
    } else if (key == "maze_file") {
      base.maze_file = read_value<std::string>(value, key);
    } else if (key == "out") {
      base.out = read_value<std::string>(value, key);
    } else {
      throw ValidationError(key, "unknown key");
    }
  }
  return base;
}

ExperimentConfig apply_json_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return apply_json(text.str(), std::move(base));
}

std::string to_json(const ExperimentConfig& config) {
  nlohmann::ordered_json doc;
  doc["experiment"] = std::string(to_string(config.experiment));
  doc["algorithms"] = config.algorithms;
  doc["trials"] = config.trials;
  doc["episodes"] = config.episodes;
  doc["update_budget"] = config.update_budget;
  doc["seed"] = config.seed;
  if (config.gamma) doc["gamma"] = *config.gamma;
  if (config.lambda) doc["lambda"] = *config.lambda;
  if (config.alpha_exp) doc["alpha_exp"] = *config.alpha_exp;
  if (config.beta) doc["beta"] = *config.beta;
  if (config.epsilon) doc["epsilon"] = *config.epsilon;
  if (config.step_size) doc["step_size"] = *config.step_size;
  if (config.threshold) doc["threshold"] = *config.threshold;
  if (config.planning_steps) doc["planning_steps"] = *config.planning_steps;
  if (config.minibatch) doc["minibatch"] = *config.minibatch;
  doc["n_states"] = config.n_states;
  if (!config.maze_file.empty()) doc["maze_file"] = config.maze_file;
  doc["out"] = config.out;
  return doc.dump(2) + "\n";
}

void validate(const ExperimentConfig& config) {
  require(config.trials >= 1, "trials", "must be >= 1");
  require(config.episodes >= 1, "episodes", "must be >= 1");
  require(config.update_budget >= 1, "update_budget", "must be >= 1");
  if (config.gamma) require(*config.gamma > 0.0 && *config.gamma < 1.0, "gamma", "must lie in (0, 1)");
  if (config.lambda) require(*config.lambda >= 0.0 && *config.lambda <= 1.0, "lambda", "must lie in [0, 1]");
  if (config.alpha_exp) require(*config.alpha_exp >= 0.0, "alpha_exp", "must be >= 0");
  if (config.beta) require(*config.beta >= 0.0 && *config.beta <= 1.0, "beta", "must lie in [0, 1]");
  if (config.epsilon) {
    require(*config.epsilon >= 0.0 && *config.epsilon <= 1.0, "epsilon", "must lie in [0, 1]");
  }
  if (config.step_size) require(*config.step_size > 0.0, "step_size", "must be > 0");
  if (config.threshold) require(*config.threshold >= 0.0, "threshold", "must be >= 0");
  if (config.planning_steps) require(*config.planning_steps >= 0, "planning_steps", "must be >= 0");
  if (config.minibatch) require(*config.minibatch >= 1, "minibatch", "must be >= 1");
  require(!config.out.empty(), "out", "must name an output directory");

  const auto& known = known_algorithms(config.experiment);
  for (const std::string& name : config.algorithms) {
    if (config.experiment == ExperimentKind::kSrHeatmap) break;
    require(std::find(known.begin(), known.end(), name) != known.end(), "algorithms",
            "unknown algorithm '" + name + "' for " + std::string(to_string(config.experiment)));
  }
  if (config.experiment != ExperimentKind::kSrHeatmap) {
    require(!config.algorithms.empty(), "algorithms", "must list at least one algorithm");
  }

  if (config.experiment == ExperimentKind::kCliffwalk || config.experiment == ExperimentKind::kToyPerSr) {
    require(!config.n_states.empty(), "n_states", "must list at least one chain length");
    for (int n : config.n_states) require(n >= 2 && n <= 20, "n_states", "chain lengths must lie in [2, 20]");
  }

  if (!config.maze_file.empty()) {
    try {
      MazeLayout::load(config.maze_file);
    } catch (const Error& e) {
      throw ValidationError("maze_file", e.what());
    }
  }
}

}  // namespace needreplay
