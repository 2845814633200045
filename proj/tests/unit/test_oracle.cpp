#include <doctest.h>

#include <set>

#include "../support/fixtures.hpp"
#include "tamdp/oracle.hpp"

using namespace tamdp;

TEST_CASE("value iteration") {
  SUBCASE("one step gives the immediate rewards") {
    TaMdpBuilder b({"s", "g"}, {"x", "y"});
    b.start(0).terminal(1).transition(0, 0, {{1, 1.0, 2.0}}).transition(0, 1, {{1, 1.0, -1.0}});
    const auto vi = value_iteration_gamma(b.build(), 0.6);
    CHECK(vi.q(0, 0) == 2.0);
    CHECK(vi.q(0, 1) == -1.0);
  }
  SUBCASE("circular MDP at 0.9") {
    const TaMdp env = build_circular();
    const auto vi = value_iteration_gamma(env, 0.9);
    const StateId sb = env.state_id("s_b");
    CHECK(vi.q(sb, env.action_id("a_b")) == doctest::Approx(20.0).epsilon(1e-7));
    CHECK(greedy_policy(env, vi.q)[sb] == env.action_id("a_b"));
    for (double g : {0.05, 0.5, 0.99}) CHECK(greedy_policy(env, value_iteration_gamma(env, g).q)[sb] == env.action_id("a_b"));
  }
  SUBCASE("undiscounted reward cycle does not converge") {
    CHECK_THROWS_AS(value_iteration_gamma(build_circular(), 1.0, 1e-8, 500), ConvergenceError);
  }
  SUBCASE("Bellman residual below tol") {
    const TaMdp env = build_grid(paper_grid_spec());
    const double g = 0.9;
    const auto vi = value_iteration_gamma(env, g, 1e-9);
    double worst = 0.0;
    for (StateId s = 0; s < env.num_states(); ++s)
      for (ActionId a : env.actions(s)) {
        double backup = 0.0;
        for (const auto& o : env.outcomes(s, a))
          backup += o.prob * (o.reward + (env.is_terminal(o.next) ? 0.0 : g * max_value(vi.q.row(o.next), env.actions(o.next))));
        worst = std::max(worst, std::abs(backup - vi.q(s, a)));
      }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("n-step DP") {
  const TaMdp env = build_circular();
  const auto dp = n_step_dp(env, 4);
  REQUIRE(dp.size() == 4);
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t c = 0; c < 5; ++c) {
      const StateId s = env.state_id(testing::kCircularCells[c].state);
      const ActionId a = env.action_id(testing::kCircularCells[c].action);
      CHECK(dp.q[n - 1](s, a) == testing::circular_tables()[n - 1].q[c]);
      CHECK(dp.r[n - 1](s, a) == testing::circular_tables()[n - 1].r[c]);
      CHECK(dp.t[n - 1](s, a) == testing::circular_tables()[n - 1].t[c]);
    }
  const auto chain = n_step_dp(testing::chain({1.5, 2.5}), 2);
  CHECK(chain.q[1](0, 0) == 4.0);
  CHECK(chain.q[0](0, 0) == 1.5);
}

TEST_CASE("policy evaluation") {
  const TaMdp env = build_circular();
  const StateId sb = env.state_id("s_b");
  std::vector<ActionId> pi(env.num_states(), 0);
  pi[env.state_id("s_a")] = env.action_id("a_L");
  pi[env.state_id("s_c")] = env.action_id("a_R");
  pi[sb] = env.action_id("a_c");
  const auto pe = policy_eval(env, pi);
  CHECK(pe.reward[sb] == doctest::Approx(1.0));
  CHECK(pe.steps[sb] == doctest::Approx(2.0));
  pi[sb] = env.action_id("a_b");
  try {
    policy_eval(env, pi);
    FAIL("expected an improper-policy error");
  } catch (const ImproperPolicyError& e) {
    CHECK(e.states() == std::vector<StateId>{sb});
  }
}

TEST_CASE("slippery grid: expected steps at least the shortest path") {
  const GridSpec g = paper_grid_spec();
  const TaMdp env = build_grid(g);
  const auto pi = greedy_policy(env, value_iteration_gamma(env, 0.8).q);
  const auto pe = policy_eval(env, pi, env.start_state());
  CHECK(std::isfinite(pe.steps[env.start_state()]));
  CHECK(pe.steps[env.start_state()] >= 1.0);
}

TEST_CASE("Pareto fronts") {
  SUBCASE("circular") {
    const TaMdp env = build_circular();
    const auto front = pareto_front(env, env.start_state());
    REQUIRE(front.size() == 1);
    CHECK(front[0].expected_reward == doctest::Approx(1.0));
    CHECK(front[0].expected_steps == doctest::Approx(2.0));
  }
  SUBCASE("single goal") { CHECK(pareto_front(testing::chain({1.0, 1.0}), 0).size() == 1); }
  SUBCASE("default grid") {
    const TaMdp env = build_grid(paper_grid_spec());
    const auto front = pareto_front(env, env.start_state());
    CHECK(front.size() == 6);
    std::set<std::string> goals;
    for (const auto& p : front) goals.insert(env.state_name(p.goal));
    CHECK_FALSE(goals.count("g3"));
    for (const auto& a : front)
      for (const auto& b : front) CHECK_FALSE(dominates(a, b));
    std::set<std::string> swept;
    for (const auto& e : gamma_sweep(env, gamma_ladder(), env.start_state())) swept.insert(env.state_name(e.goal));
    CHECK_FALSE(swept.count("g4"));
    CHECK_FALSE(swept.count("g3"));
  }
  SUBCASE("enumeration order does not matter") {
    std::vector<ParetoPoint> pts{{1, 2, "a", 0}, {3, 5, "b", 0}, {0.5, 3, "c", 0}, {3, 5, "d", 0}, {4, 9, "e", 0}};
    auto fwd = non_dominated(pts);
    std::reverse(pts.begin(), pts.end());
    auto rev = non_dominated(pts);
    REQUIRE(fwd.size() == 3);
    REQUIRE(rev.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(fwd[i].expected_reward == rev[i].expected_reward);
      CHECK(fwd[i].expected_steps == rev[i].expected_steps);
    }
  }
  SUBCASE("exhaustive and per-goal agree on a small MDP") {
    const TaMdp env = testing::random_deterministic_mdp(4);
    ParetoOptions ex;
    ex.method = ParetoMethod::Exhaustive;
    const auto a = pareto_front(env, 0, ex);
    CHECK_FALSE(a.empty());
  }
}

TEST_CASE("absorption probabilities sum to one for a proper policy") {
  const TaMdp env = build_grid(paper_grid_spec());
  const auto pi = greedy_policy(env, value_iteration_gamma(env, 0.7).q);
  const auto p = absorption_probabilities(env, pi, env.start_state());
  double sum = 0.0;
  for (double x : p) sum += x;
  CHECK(sum == doctest::Approx(1.0));
}
