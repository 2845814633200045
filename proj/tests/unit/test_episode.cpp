#include <doctest.h>

#include <numeric>

#include "../support/fixtures.hpp"
#include "tamdp/episode.hpp"
#include "tamdp/nse.hpp"

using namespace tamdp;

namespace {
// Always plays the first available action.
class FirstAction : public Agent {
 public:
  explicit FirstAction(const TaMdp& env) : Agent(0.0, 0.0), env_(env) {}
  void begin_episode(const EpisodeStart&) override { ++episodes; }
  ActionId act(StateId s, Rng&) override { return env_.actions(s).front(); }
  void observe(const Transition& tr) override { seen.push_back(tr); }
  int episodes = 0;
  std::vector<Transition> seen;

 private:
  const TaMdp& env_;
};

TaMdp loop() {
  TaMdpBuilder b({"s0", "g"}, {"stay", "leave"});
  b.start(0).terminal(1).transition(0, 0, {{0, 1.0, 0.5}}).transition(0, 1, {{1, 1.0, 0.0}});
  return b.build();
}
}  // namespace

TEST_CASE("one-step MDP") {
  const TaMdp env = testing::chain({1.0});
  FirstAction agent(env);
  Rng rng(1);
  const auto tr = run_episode(agent, env, Objective::total_reward(), 0, rng);
  CHECK(tr.total_reward == 1.0);
  CHECK(tr.length == 1);
  CHECK(tr.terminated);
  CHECK(tr.outcome == 1.0);
  CHECK(agent.episodes == 1);
}

TEST_CASE("truncation at max_steps") {
  const TaMdp env = loop();
  FirstAction agent(env);
  Rng rng(1);
  EpisodeOptions opt;
  opt.max_steps = 1;
  const auto one = run_episode(agent, env, Objective::total_reward(), 0, rng, opt);
  CHECK(one.length == 1);
  CHECK_FALSE(one.terminated);
  CHECK_FALSE(agent.seen.back().terminal);
  opt.max_steps = 7;
  const auto seven = run_episode(agent, env, *named_objective("f8"), 0, rng, opt);
  CHECK(seven.length == 7);
  CHECK(seven.outcome == doctest::Approx(0.5));
  opt.max_steps = 0;
  CHECK_THROWS(run_episode(agent, env, Objective::total_reward(), 0, rng, opt));
}

TEST_CASE("trace fields agree with the step list") {
  const TaMdp env = build_grid(paper_grid_spec());
  NseAgent agent(env, 5, 1.0, 1.0);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto tr = run_episode(agent, env, Objective::total_reward(), 0, rng);
    double r = 0.0;
    for (const auto& s : tr.steps) r += s.reward;
    CHECK(r == tr.total_reward);
    CHECK(static_cast<std::int64_t>(tr.steps.size()) == tr.length);
    CHECK(tr.length >= 1);
  }
}

TEST_CASE("transitions carry the running return and step index") {
  const TaMdp env = testing::chain({-1.0, -2.0, 5.0});
  FirstAction agent(env);
  Rng rng(1);
  run_episode(agent, env, Objective::total_reward(), 0, rng);
  REQUIRE(agent.seen.size() == 3);
  CHECK(agent.seen[0].t == 0);
  CHECK(agent.seen[2].t == 2);
  CHECK(agent.seen[1].return_so_far == -3.0);
  CHECK(agent.seen[2].terminal);
}

TEST_CASE("same seed, same trace") {
  const TaMdp env = build_grid(paper_grid_spec());
  auto once = [&] {
    NseAgent agent(env, 5, 0.5, 0.5);
    Rng rng(99);
    std::vector<EpisodeTrace> out;
    for (int i = 0; i < 10; ++i) out.push_back(run_episode(agent, env, Objective::total_reward(), 0, rng));
    return out;
  };
  CHECK(once() == once());
}

TEST_CASE("action helpers") {
  Rng rng(4);
  const std::vector<double> row{2.0, 2.0, 0.0};
  const std::vector<ActionId> all{0, 1, 2};
  int zero = 0;
  for (int i = 0; i < 4000; ++i) zero += argmax_action(row, all, rng) == 0;
  CHECK(zero / 4000.0 == doctest::Approx(0.5).epsilon(0.1));
  const std::vector<double> row2{0.0, 2.0, 1.0};
  CHECK(argmax_action(row2, all, rng) == 1);
  CHECK(max_value(row2, std::vector<ActionId>{0, 2}) == 1.0);
  CHECK_THROWS(random_action({}, rng));
}
