#ifndef NEEDREPLAY_ENVS_DYNA_MAZE_HPP
#define NEEDREPLAY_ENVS_DYNA_MAZE_HPP

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "needreplay/envs/environment.hpp"

namespace needreplay {

struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Grid geometry of a maze. Row 0 is the top row.
struct MazeLayout {
  int rows = 6;
  int cols = 9;
  std::set<Cell> walls;
  Cell start{2, 0};
  Cell goal{0, 8};

  /// The 6x9 board with walls at (1,2),(2,2),(3,2),(4,5),(0,7),(1,7),(2,7).
  static MazeLayout standard();

  /// Parses a text grid: '.' open, '#' wall, 'S' start, 'G' goal, one row per
  /// line. Throws ParseError on ragged rows, unknown characters, or a missing
  /// or repeated S/G.
  static MazeLayout parse(std::string_view text);
  static MazeLayout load(const std::filesystem::path& path);

  std::string to_text() const;
};

enum MazeAction : ActionId { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

/// Deterministic grid maze. Blocked moves (off-grid or into a wall) leave the
/// state unchanged. Entering the goal ends the episode with a reward drawn from
/// Normal(reward_mean, reward_sd); every other transition pays 0.
class DynaMaze final : public Environment {
 public:
  explicit DynaMaze(MazeLayout layout = MazeLayout::standard(), double reward_mean = 1.0,
                    double reward_sd = 0.1);

  int state_count() const override { return layout_.rows * layout_.cols; }
  int action_count() const override { return 4; }
  StateId start_state() const override { return state_id(layout_.start); }
  bool is_valid_state(StateId s) const override;
  bool is_terminal_state(StateId s) const override { return s == goal_state(); }

  StepResult transition(StateId s, ActionId a, Rng& rng) const override;
  Successor successor(StateId s, ActionId a) const override;

  StateId state_id(Cell c) const noexcept { return static_cast<StateId>(layout_.cols * c.row + c.col); }
  Cell cell(StateId s) const noexcept { return {s / layout_.cols, s % layout_.cols}; }
  StateId goal_state() const noexcept { return state_id(layout_.goal); }
  bool is_wall(StateId s) const;

  const MazeLayout& layout() const noexcept { return layout_; }
  int rows() const noexcept { return layout_.rows; }
  int cols() const noexcept { return layout_.cols; }

 private:
  MazeLayout layout_;
  double reward_mean_;
  double reward_sd_;
};

}  // namespace needreplay

#endif  // NEEDREPLAY_ENVS_DYNA_MAZE_HPP
