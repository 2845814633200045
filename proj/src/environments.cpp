#include "tamdp/environments.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <string>

namespace tamdp {

namespace {

constexpr std::array<Cell, 4> kMoves{{{0, -1}, {1, 0}, {0, 1}, {-1, 0}}};

std::string cell_name(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

}  // namespace

TaMdp build_grid(const GridSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0) throw Error("grid needs positive width and height");
  const auto cells = static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height);
  if (spec.step_reward.size() != cells)
    throw Error("grid step_reward has " + std::to_string(spec.step_reward.size()) + " entries, expected " +
                std::to_string(cells));
  if (!(spec.slip_prob >= 0.0 && spec.slip_prob <= 1.0)) throw Error("slip_prob must lie in [0, 1]");
  if (!spec.contains(spec.start)) throw Error("start cell " + cell_name(spec.start) + " is outside the grid");
  if (spec.goals.empty()) throw Error("grid needs at least one goal");
  for (double r : spec.step_reward)
    if (!(r < 0.0)) throw Error("grid step rewards must be negative");

  std::vector<int> goal_at(cells, -1);
  std::set<std::string> goal_names;
  for (std::size_t k = 0; k < spec.goals.size(); ++k) {
    const auto& g = spec.goals[k];
    if (!spec.contains(g.cell)) throw Error("goal " + g.name + " at " + cell_name(g.cell) + " is outside the grid");
    if (g.cell == spec.start) throw Error("goal " + g.name + " overlaps the start cell");
    if (!(g.reward > 0.0)) throw Error("goal rewards must be positive (" + g.name + ")");
    if (!goal_names.insert(g.name).second) throw Error("duplicate goal name " + g.name);
    auto& slot = goal_at[grid_state(spec, g.cell)];
    if (slot >= 0) throw Error("two goals share cell " + cell_name(g.cell));
    slot = static_cast<int>(k);
  }

  std::vector<std::string> states(cells);
  for (int y = 0; y < spec.height; ++y)
    for (int x = 0; x < spec.width; ++x) {
      const StateId s = grid_state(spec, {x, y});
      states[s] = goal_at[s] >= 0 ? spec.goals[static_cast<std::size_t>(goal_at[s])].name : cell_name({x, y});
    }

  TaMdpBuilder b(std::move(states), {"N", "E", "S", "W"});
  b.name(spec.name).start(grid_state(spec, spec.start)).objectives(spec.objectives);
  for (const auto& g : spec.goals) b.terminal(grid_state(spec, g.cell));

  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const Cell c{x, y};
      const StateId s = grid_state(spec, c);
      if (goal_at[s] >= 0) continue;
      const double step = spec.step_reward_at(c);
      for (ActionId a = 0; a < 4; ++a) {
        std::vector<Outcome> outs;
        for (ActionId d = 0; d < 4; ++d) {
          const double p = (d == a ? 1.0 - spec.slip_prob : 0.0) + spec.slip_prob / 4.0;
          Cell n{c.x + kMoves[d].x, c.y + kMoves[d].y};
          if (!spec.contains(n)) n = c;
          const StateId ns = grid_state(spec, n);
          const int k = goal_at[ns];
          outs.push_back({ns, p, step + (k >= 0 ? spec.goals[static_cast<std::size_t>(k)].reward : 0.0)});
        }
        b.transition(s, a, std::move(outs));
      }
    }
  }
  return b.build();
}

// Layout found by searching the oracles (see README): seven goals at
// increasing path distance, cheap corridors (-1) through expensive ground
// (-2). g3 is dominated; g4 is never preferred by any discounted learner.
GridSpec paper_grid_spec() {
  GridSpec g;
  g.name = "paper_grid";
  g.width = 15;
  g.height = 15;
  g.start = {7, 7};
  g.slip_prob = 0.1;
  g.goals = {{"g1", {8, 7}, 6.25},  {"g2", {7, 5}, 8.0},   {"g3", {7, 12}, 9.25}, {"g4", {5, 3}, 16.5},
             {"g5", {2, 10}, 24.0}, {"g6", {3, 1}, 33.25}, {"g7", {0, 11}, 36.0}};
  g.step_reward.assign(static_cast<std::size_t>(g.width * g.height), -2.0);
  // Corridor cells, as runs from (x0,y0) to (x1,y1).
  const std::array<std::array<int, 4>, 6> corridors{
      {{7, 6, 7, 11}, {0, 7, 7, 7}, {5, 4, 5, 6}, {3, 10, 6, 10}, {3, 2, 3, 6}, {0, 8, 0, 10}}};
  for (const auto& r : corridors)
    for (int y = std::min(r[1], r[3]); y <= std::max(r[1], r[3]); ++y)
      for (int x = std::min(r[0], r[2]); x <= std::max(r[0], r[2]); ++x)
        g.step_reward[static_cast<std::size_t>(y * g.width + x)] = -1.0;
  g.objectives = benchmark_objectives();
  return g;
}

TaMdp build_circular() {
  enum : StateId { sa, sb, sc, gl, gr };
  enum : ActionId { aL, aa, ab, ac, aR };
  TaMdpBuilder b({"s_a", "s_b", "s_c", "g_L", "g_R"}, {"a_L", "a_a", "a_b", "a_c", "a_R"});
  b.name("circular").start(sb).terminal(gl).terminal(gr);
  b.transition(sa, aL, {{gl, 1.0, 0.0}});
  b.transition(sb, aa, {{sa, 1.0, 0.0}});
  b.transition(sb, ab, {{sb, 1.0, 2.0}});
  b.transition(sb, ac, {{sc, 1.0, 0.0}});
  b.transition(sc, aR, {{gr, 1.0, 1.0}});
  b.objectives(benchmark_objectives());
  return b.build();
}

std::string render_grid(const GridSpec& spec) {
  const double cheap = spec.step_reward.empty() ? 0.0
                                                : *std::max_element(spec.step_reward.begin(), spec.step_reward.end());
  std::string out;
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const Cell c{x, y};
      char ch = spec.step_reward_at(c) == cheap ? '.' : '#';
      if (c == spec.start) ch = 'S';
      for (const auto& g : spec.goals) {
        if (g.cell != c) continue;
        const auto digit = std::find_if(g.name.begin(), g.name.end(), [](char q) { return q >= '0' && q <= '9'; });
        ch = digit != g.name.end() ? *digit : (g.name.empty() ? 'G' : g.name.front());
      }
      out += ch;
    }
    out += '\n';
  }
  return out;
}

}  // namespace tamdp
