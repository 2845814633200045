#include <doctest.h>

#include <set>

#include "../support/fixtures.hpp"
#include "tamdp/ige.hpp"
#include "tamdp/oracle.hpp"

using namespace tamdp;

TEST_CASE("ladder") {
  CHECK(gamma_ladder(3, 0) == std::vector<double>{0.5, 2.0 / 3.0, 0.75});
  CHECK(gamma_ladder(1, 1) == std::vector<double>{0.5, 0.75});
  const auto full = gamma_ladder();
  CHECK(full.size() == 42);
  CHECK(std::is_sorted(full.begin(), full.end()));
  CHECK(std::set<double>(full.begin(), full.end()).size() == full.size());
  CHECK(full.back() < 1.0);
}

TEST_CASE("constructor rejects bad ladders") {
  const TaMdp env = build_circular();
  CHECK_THROWS(IgeAgent(env, {0.9, 0.5}));
  CHECK_THROWS(IgeAgent(env, {0.5, 1.0}));
  CHECK_THROWS(IgeAgent(env, {}));
}

TEST_CASE("module selection") {
  const TaMdp env = testing::chain({1.0});
  IgeAgent agent(env, {0.5, 0.9});
  auto& mods = const_cast<std::vector<GammaModule>&>(agent.modules());
  auto set = [&](std::size_t i, double r, double t) {
    mods[i].r_exp[0] = r;
    mods[i].t_exp[0] = t;
  };
  set(0, 5, 10);
  set(1, 3, 2);
  CHECK(agent.select_module(0, Objective::total_reward()) == 0);
  CHECK(agent.select_module(0, Objective::reward_within_time_limit(5, -10)) == 1);
  CHECK(agent.active_module() == 1);
  set(0, 4, 4);
  set(1, 4, 4);
  CHECK(agent.select_module(0, Objective::total_reward()) == 0);
  set(1, 4, 3);
  CHECK(agent.select_module(0, Objective::total_reward()) == 1);
}

TEST_CASE("act") {
  TaMdpBuilder b({"s", "g"}, {"a0", "a1", "a2"});
  b.start(0).terminal(1);
  for (ActionId a = 0; a < 3; ++a) b.transition(0, a, {{1, 1.0, 0.0}});
  const TaMdp env = b.build();
  IgeAgent agent(env, {0.5}, 1.0, 0.0);
  auto& q = const_cast<std::vector<GammaModule>&>(agent.modules())[0].q;
  Rng rng(2);
  q(0, 0) = 0, q(0, 1) = 2, q(0, 2) = 1;
  CHECK(agent.act(0, rng) == 1);
  q(0, 0) = 2;
  int zero = 0, two = 0;
  for (int i = 0; i < 4000; ++i) {
    const auto a = agent.act(0, rng);
    zero += a == 0;
    two += a == 2;
  }
  CHECK(two == 0);
  CHECK(zero / 4000.0 == doctest::Approx(0.5).epsilon(0.1));
  agent.set_epsilon(1.0);
  std::array<int, 3> counts{};
  for (int i = 0; i < 6000; ++i) ++counts[agent.act(0, rng)];
  for (int c : counts) CHECK(c / 6000.0 == doctest::Approx(1.0 / 3).epsilon(0.1));
}

TEST_CASE("terminal update on fresh tables") {
  const TaMdp env = testing::chain({1.0});
  IgeAgent agent(env, gamma_ladder(3, 0));
  agent.update(0, 0, 1.0, 1, true);
  for (const auto& m : agent.modules()) {
    CHECK(m.q(0, 0) == 1.0);
    CHECK(m.r_exp[0] == 1.0);
    CHECK(m.t_exp[0] == 1.0);
    CHECK(m.r_exp[1] == 0.0);
  }
}

TEST_CASE("discounted chain fixpoint") {
  const TaMdp env = testing::chain({3.0, 4.0});
  IgeAgent agent(env, {0.5});
  for (int i = 0; i < 3; ++i) testing::sweep(agent, env);
  const auto& m = agent.modules()[0];
  CHECK(m.q(0, 0) == 3.0 + 0.5 * 4.0);
  CHECK(m.r_exp[0] == 7.0);
  CHECK(m.t_exp[0] == 2.0);
}

TEST_CASE("expectations only follow greedy actions") {
  TaMdpBuilder b({"s", "g"}, {"good", "bad"});
  b.start(0).terminal(1).transition(0, 0, {{1, 1.0, 5.0}}).transition(0, 1, {{1, 1.0, 1.0}});
  const TaMdp env = b.build();
  IgeAgent agent(env, {0.9});
  agent.update(0, 0, 5.0, 1, true);
  agent.update(0, 1, 1.0, 1, true);  // not greedy after its q update
  CHECK(agent.modules()[0].r_exp[0] == 5.0);
  CHECK(agent.is_greedy(0, 0, 0));
  CHECK_FALSE(agent.is_greedy(0, 0, 1));
}

TEST_CASE("off-policy convergence to the discounted optimum") {
  const TaMdp env = testing::random_deterministic_mdp(17);
  IgeAgent agent(env, gamma_ladder(4, 1), 1.0, 1.0);
  testing::train_until_stable(agent, env, testing::ige_q_tables, 3, 1e-10);
  for (const auto& m : agent.modules())
    CHECK(testing::max_abs_diff(m.q.values(), value_iteration_gamma(env, m.gamma).q.values()) < 1e-3);
}

TEST_CASE("greedy-gated expectations match policy evaluation") {
  // The long way through s2 wins for gamma = 0.7: Q(s0, a1) = -3 + 0.7 * 10.
  TaMdpBuilder b({"s0", "s1", "s2", "g"}, {"a0", "a1"});
  b.start(0).terminal(3);
  b.transition(0, 0, {{1, 1.0, -1.0}}).transition(0, 1, {{2, 1.0, -3.0}});
  b.transition(1, 0, {{3, 1.0, 5.0}}).transition(1, 1, {{0, 1.0, -1.0}});
  b.transition(2, 0, {{3, 1.0, 10.0}});
  const TaMdp env = b.build();
  IgeAgent agent(env, {0.7}, 1.0, 1.0);
  testing::train_until_stable(agent, env, testing::ige_q_tables, 5, 1e-12);
  for (int i = 0; i < 10; ++i) testing::sweep(agent, env);
  const auto& m = agent.modules()[0];
  const auto pe = policy_eval(env, greedy_policy(env, m.q));
  for (StateId s = 0; s < 3; ++s) {
    CHECK(m.r_exp[s] == doctest::Approx(pe.reward[s]).epsilon(1e-6));
    CHECK(m.t_exp[s] == doctest::Approx(pe.steps[s]).epsilon(1e-6));
  }
  CHECK(pe.reward[0] == 7.0);
}

TEST_CASE("modules are independent") {
  const TaMdp env = build_circular();
  IgeAgent both(env, {0.5, 0.8}, 0.3, 1.0);
  IgeAgent lo(env, {0.5}, 0.3, 1.0);
  IgeAgent hi(env, {0.8}, 0.3, 1.0);
  Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    const StateId s = env.state_id("s_b");
    const auto acts = env.actions(s);
    const ActionId a = acts[i % acts.size()];
    const auto o = env.outcomes(s, a).front();
    for (IgeAgent* ag : {&both, &lo, &hi}) ag->update(s, a, o.reward, o.next, env.is_terminal(o.next));
  }
  CHECK(both.modules()[0] == lo.modules()[0]);
  CHECK(both.modules()[1] == hi.modules()[0]);
}

TEST_CASE("circular MDP stays in s_b for every discount") {
  const TaMdp env = build_circular();
  IgeAgent agent(env, gamma_ladder(), 1.0, 1.0);
  testing::train_until_stable(agent, env, testing::ige_q_tables, 9, 1e-10, 5000, 200);
  const StateId sb = env.state_id("s_b");
  for (const auto& m : agent.modules()) {
    CHECK(greedy_policy(env, m.q)[sb] == env.action_id("a_b"));
    CHECK_FALSE(testing::greedy_reaches_terminal(env, m.q, sb));
  }
}
