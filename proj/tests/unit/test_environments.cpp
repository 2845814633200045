#include <doctest.h>

#include <algorithm>

#include "tamdp/environments.hpp"

using namespace tamdp;

namespace {
GridSpec tiny(double slip) {
  GridSpec g;
  g.width = 3;
  g.height = 1;
  g.start = {0, 0};
  g.goals = {{"g", {1, 0}, 4.0}};
  g.step_reward.assign(3, -1.0);
  g.slip_prob = slip;
  return g;
}
}  // namespace

TEST_CASE("goal east of start without slip") {
  const GridSpec g = tiny(0.0);
  const TaMdp env = build_grid(g);
  const auto out = env.outcomes(grid_state(g, {0, 0}), kEast);
  REQUIRE(out.size() == 1);
  CHECK(out[0].next == grid_state(g, {1, 0}));
  CHECK(out[0].reward == 3.0);  // step reward of the departure cell plus the goal
  CHECK(env.is_terminal(out[0].next));
}

TEST_CASE("slip mass and walls") {
  const GridSpec g = tiny(0.2);
  const TaMdp env = build_grid(g);
  double stay = 0.0, east = 0.0;
  for (const auto& o : env.outcomes(grid_state(g, {0, 0}), kWest)) {
    if (o.next == grid_state(g, {0, 0})) {
      stay += o.prob;
      CHECK(o.reward == -1.0);
    }
    if (o.next == grid_state(g, {1, 0})) east += o.prob;
  }
  // West, north and south all bump into the wall.
  CHECK(stay == doctest::Approx(0.8 + 0.15));
  CHECK(east == doctest::Approx(0.05));
}

TEST_CASE("grid validation") {
  auto g = tiny(0.0);
  SUBCASE("goal on the start") { g.goals[0].cell = {0, 0}; }
  SUBCASE("goal outside") { g.goals[0].cell = {3, 0}; }
  SUBCASE("duplicate goals") { g.goals.push_back({"h", {1, 0}, 2.0}); }
  SUBCASE("non-negative step reward") { g.step_reward[2] = 0.0; }
  SUBCASE("non-positive goal reward") { g.goals[0].reward = 0.0; }
  CHECK_THROWS_AS(build_grid(g), Error);
}

TEST_CASE("default grid") {
  const GridSpec g = paper_grid_spec();
  CHECK(g.goals.size() == 7);
  CHECK(g.slip_prob == 0.1);
  double lo = 1e9, hi = -1e9;
  for (const auto& goal : g.goals) {
    lo = std::min(lo, goal.reward);
    hi = std::max(hi, goal.reward);
  }
  CHECK(hi > 6.5);
  CHECK(lo < 6.5);
  for (double r : g.step_reward) CHECK((r == -1.0 || r == -2.0));
  CHECK(std::count(g.step_reward.begin(), g.step_reward.end(), -1.0) > 0);
  const TaMdp env = build_grid(g);
  CHECK(env.num_states() == 225);
  CHECK(env.terminals().size() == 7);
  CHECK(env.objectives().size() == 9);
}

TEST_CASE("circular MDP layout") {
  const TaMdp env = build_circular();
  CHECK(env.num_states() == 5);
  CHECK(env.state_name(env.start_state()) == "s_b");
  CHECK(env.actions(env.state_id("s_b")).size() == 3);
  CHECK(env.actions(env.state_id("s_a")).size() == 1);
  CHECK(env.actions(env.state_id("s_c")).size() == 1);
  CHECK(env.is_terminal(env.state_id("g_L")));
  CHECK(env.is_terminal(env.state_id("g_R")));
}

TEST_CASE("render marks start, goals and corridors") {
  const std::string art = render_grid(paper_grid_spec());
  CHECK(art.find('S') != std::string::npos);
  CHECK(art.find('.') != std::string::npos);
  CHECK(art.find('#') != std::string::npos);
  CHECK(std::count(art.begin(), art.end(), '\n') >= 15);
}
