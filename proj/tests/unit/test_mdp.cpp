#include <doctest.h>

#include <map>

#include "tamdp/environments.hpp"
#include "tamdp/mdp.hpp"

using namespace tamdp;

namespace {
TaMdp two_state() {
  TaMdpBuilder b({"s0", "s1"}, {"go"});
  b.start(0).terminal(1).transition(0, 0, {{1, 1.0, -1.0}});
  return b.build();
}
}  // namespace

TEST_CASE("deterministic step") {
  const TaMdp env = two_state();
  Rng rng(1);
  const auto r = env.step(0, 0, rng);
  CHECK(r.next == 1);
  CHECK(r.reward == -1.0);
  CHECK(r.terminal);
}

TEST_CASE("step rejects terminal states and unavailable actions") {
  const TaMdp env = build_circular();
  Rng rng(1);
  CHECK_THROWS(env.step(env.state_id("g_R"), 0, rng));
  CHECK_THROWS(env.step(env.state_id("s_a"), env.action_id("a_R"), rng));
  CHECK_THROWS(env.step(env.state_id("s_b"), 99, rng));
}

TEST_CASE("circular MDP transitions") {
  const TaMdp env = build_circular();
  Rng rng(1);
  const auto stay = env.step(env.state_id("s_b"), env.action_id("a_b"), rng);
  CHECK(stay.next == env.state_id("s_b"));
  CHECK(stay.reward == 2.0);
  CHECK_FALSE(stay.terminal);
  const auto right = env.step(env.state_id("s_c"), env.action_id("a_R"), rng);
  CHECK(right.next == env.state_id("g_R"));
  CHECK(right.reward == 1.0);
  CHECK(right.terminal);
}

TEST_CASE("builder validation") {
  SUBCASE("row must sum to one") {
    TaMdpBuilder b({"s0", "s1"}, {"go"});
    b.start(0).terminal(1).transition(0, 0, {{1, 0.5, 0.0}});
    CHECK_THROWS_AS(b.build(), Error);
  }
  SUBCASE("start must not be terminal") {
    TaMdpBuilder b({"s0", "s1"}, {"go"});
    b.start(1).terminal(1).transition(0, 0, {{1, 1.0, 0.0}});
    CHECK_THROWS_AS(b.build(), Error);
  }
  SUBCASE("terminal without transitions") {
    TaMdpBuilder b({"s0", "s1"}, {"go"});
    b.start(0).terminal(1).transition(0, 0, {{1, 1.0, 0.0}}).transition(1, 0, {{0, 1.0, 0.0}});
    CHECK_THROWS_AS(b.build(), Error);
  }
  SUBCASE("live state needs an action") {
    TaMdpBuilder b({"s0", "s1", "s2"}, {"go"});
    b.start(0).terminal(1).transition(0, 0, {{1, 1.0, 0.0}});
    CHECK_THROWS_AS(b.build(), Error);
  }
  SUBCASE("duplicate successors merge") {
    TaMdpBuilder b({"s0", "s1"}, {"go"});
    b.start(0).terminal(1).transition(0, 0, {{1, 0.25, 3.0}, {1, 0.75, 3.0}});
    const TaMdp env = b.build();
    REQUIRE(env.outcomes(0, 0).size() == 1);
    CHECK(env.outcomes(0, 0)[0].prob == 1.0);
  }
}

TEST_CASE("sampling follows the distribution") {
  TaMdpBuilder b({"s0", "a", "b"}, {"go"});
  b.start(0).terminal(1).terminal(2).transition(0, 0, {{1, 0.3, 0.0}, {2, 0.7, 0.0}});
  const TaMdp env = b.build();
  Rng rng(5);
  int hits = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) hits += env.step(0, 0, rng).next == 1;
  CHECK(hits / double(n) == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("with_start and lookups") {
  const TaMdp env = build_circular();
  const TaMdp moved = env.with_start(env.state_id("s_c"));
  CHECK(moved.start_state() == env.state_id("s_c"));
  CHECK_THROWS(env.with_start(env.state_id("g_L")));
  CHECK_THROWS(env.state_id("nowhere"));
  CHECK(env.expected_reward(env.state_id("s_b"), env.action_id("a_b")) == 2.0);
}
