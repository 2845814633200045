#pragma once

#include <string>
#include <vector>

#include "tamdp/mdp.hpp"

namespace tamdp {

struct Cell {
  int x = 0;
  int y = 0;

  bool operator==(const Cell&) const = default;
};

struct GridGoal {
  std::string name;
  Cell cell;
  double reward = 0.0;

  bool operator==(const GridGoal&) const = default;
};

/// Action ids of grid MDPs. y grows southwards.
enum GridAction : ActionId { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };

/// Stochastic grid world with terminal goal cells.
///
/// Moving from cell c costs step_reward(c); entering a goal additionally pays
/// the goal reward and ends the episode. With probability 1 - slip_prob the
/// intended move happens, otherwise the move direction is drawn uniformly from
/// all four directions (so the intended direction has 1 - slip_prob +
/// slip_prob / 4 in total). Moves off the grid keep the position.
struct GridSpec {
  std::string name = "grid";
  int width = 0;
  int height = 0;
  Cell start;
  std::vector<GridGoal> goals;
  /// Row-major (y * width + x) step reward of every cell.
  std::vector<double> step_reward;
  double slip_prob = 0.0;
  std::vector<Objective> objectives;

  double step_reward_at(Cell c) const { return step_reward.at(static_cast<std::size_t>(c.y * width + c.x)); }
  bool contains(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }

  bool operator==(const GridSpec&) const = default;
};

/// State id of a grid cell in the MDP produced by build_grid.
inline StateId grid_state(const GridSpec& spec, Cell c) { return static_cast<StateId>(c.y * spec.width + c.x); }

/// Builds the grid MDP: one state per cell, four actions, goals terminal.
/// Throws Error on out-of-bounds cells, duplicate goals, a goal on the start
/// cell, non-negative step rewards or non-positive goal rewards.
TaMdp build_grid(const GridSpec& spec);

/// The default seven-goal benchmark grid (slip 0.1).
GridSpec paper_grid_spec();

/// Five-state MDP where staying in s_b pays 2 per step, going left ends in
/// g_L with reward 0 and going right ends in g_R with reward 1 (two steps each).
TaMdp build_circular();

/// Character-art dump of a grid: 'S' start, goal digits or first letter,
/// '.' cells with the cheaper step reward, '#' the others.
std::string render_grid(const GridSpec& spec);

}  // namespace tamdp
