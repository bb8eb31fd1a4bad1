#include "needreplay/envs/dyna_maze.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "needreplay/errors.hpp"

namespace needreplay {

MazeLayout MazeLayout::standard() {
  MazeLayout layout;
  layout.walls = {{1, 2}, {2, 2}, {3, 2}, {4, 5}, {0, 7}, {1, 7}, {2, 7}};
  return layout;
}

MazeLayout MazeLayout::parse(std::string_view text) {
  MazeLayout layout;
  layout.walls.clear();
  std::istringstream in{std::string(text)};
  std::string line;
  int row = 0;
  int cols = -1;
  bool have_start = false;
  bool have_goal = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (cols < 0) cols = static_cast<int>(line.size());
    if (static_cast<int>(line.size()) != cols) {
      throw ParseError("maze row " + std::to_string(row) + " has " + std::to_string(line.size()) +
                       " columns, expected " + std::to_string(cols));
    }
    for (int col = 0; col < cols; ++col) {
      switch (line[col]) {
        case '.':
          break;
        case '#':
          layout.walls.insert({row, col});
          break;
        case 'S':
          if (have_start) throw ParseError("maze has more than one 'S'");
          layout.start = {row, col};
          have_start = true;
          break;
        case 'G':
          if (have_goal) throw ParseError("maze has more than one 'G'");
          layout.goal = {row, col};
          have_goal = true;
          break;
        default:
          throw ParseError(std::string("unknown maze character '") + line[col] + "'");
      }
    }
    ++row;
  }
  if (row == 0) throw ParseError("maze text is empty");
  if (!have_start || !have_goal) throw ParseError("maze needs exactly one 'S' and one 'G'");
  layout.rows = row;
  layout.cols = cols;
  return layout;
}

MazeLayout MazeLayout::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open maze file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string MazeLayout::to_text() const {
  std::string out;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Cell cell{r, c};
      if (cell == start) out += 'S';
      else if (cell == goal) out += 'G';
      else if (walls.contains(cell)) out += '#';
      else out += '.';
    }
    out += '\n';
  }
  return out;
}

DynaMaze::DynaMaze(MazeLayout layout, double reward_mean, double reward_sd)
    : layout_(std::move(layout)), reward_mean_(reward_mean), reward_sd_(reward_sd) {
  if (layout_.rows <= 0 || layout_.cols <= 0) throw ContractViolation("maze must have positive size");
  auto inside = [&](Cell c) { return c.row >= 0 && c.row < layout_.rows && c.col >= 0 && c.col < layout_.cols; };
  if (!inside(layout_.start) || !inside(layout_.goal)) throw ContractViolation("start/goal outside the grid");
  if (layout_.walls.contains(layout_.start) || layout_.walls.contains(layout_.goal)) {
    throw ContractViolation("start/goal placed on a wall");
  }
  if (reward_sd_ < 0.0) throw ContractViolation("reward standard deviation must be >= 0");
  current_ = start_state();
}

bool DynaMaze::is_wall(StateId s) const { return layout_.walls.contains(cell(s)); }

bool DynaMaze::is_valid_state(StateId s) const {
  return s >= 0 && s < state_count() && !is_wall(s);
}

Successor DynaMaze::successor(StateId s, ActionId a) const {
  check_action(a);
  if (s < 0 || s >= state_count()) throw RangeError("maze state out of range");
  Cell next = cell(s);
  switch (a) {
    case kUp: --next.row; break;
    case kDown: ++next.row; break;
    case kLeft: --next.col; break;
    case kRight: ++next.col; break;
    default: break;
  }
  const bool blocked = next.row < 0 || next.row >= layout_.rows || next.col < 0 || next.col >= layout_.cols ||
                       layout_.walls.contains(next);
  if (blocked) next = cell(s);
  const bool entered_goal = next == layout_.goal && !blocked;
  return {state_id(next), entered_goal, entered_goal ? reward_mean_ : 0.0};
}

StepResult DynaMaze::transition(StateId s, ActionId a, Rng& rng) const {
  const Successor succ = successor(s, a);
  double reward = 0.0;
  if (succ.terminal) {
    reward = reward_sd_ > 0.0 ? std::normal_distribution<double>(reward_mean_, reward_sd_)(rng) : reward_mean_;
  }
  return {succ.next_state, reward, succ.terminal};
}

}  // namespace needreplay
