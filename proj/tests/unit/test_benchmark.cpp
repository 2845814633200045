#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "../support/fixtures.hpp"
#include "tamdp/benchmark.hpp"

using namespace tamdp;
namespace fs = std::filesystem;

namespace {
BenchmarkConfig toy() {
  BenchmarkConfig c = preset_config("desk");
  c.env = "circular";
  c.phases = {*named_objective("f1")};
  c.episodes_per_phase = 10;
  c.runs = 1;
  c.modules = 4;
  c.max_steps = 50;
  c.workers = 1;
  return c;
}
}  // namespace

TEST_CASE("presets") {
  const auto desk = preset_config("desk");
  CHECK(desk.runs == 10);
  CHECK(desk.episodes_per_phase == 1500);
  const auto paper = preset_config("paper");
  CHECK(paper.runs == 100);
  CHECK(paper.episodes_per_phase == 6000);
  CHECK(paper.phases.size() == 9);
  CHECK(paper.modules == 20);
  CHECK(gamma_ladder(paper.gamma_base, paper.gamma_fill).size() == 42);
  CHECK_THROWS_AS(preset_config("huge"), Error);
}

TEST_CASE("config json") {
  BenchmarkConfig c = preset_config("desk");
  apply_config_json(c, nlohmann::json::parse(R"({"algo": "ige", "runs": 3, "phases": ["f2", "f5"]})"));
  CHECK(c.algo == Algo::Ige);
  CHECK(c.runs == 3);
  CHECK(c.phases.size() == 2);
  CHECK(c.episodes_per_phase == 1500);
  BenchmarkConfig back = preset_config("paper");
  apply_config_json(back, config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK_THROWS_AS(apply_config_json(c, nlohmann::json::parse(R"({"algo": "sarsa"})")), Error);
  CHECK_THROWS_AS(apply_config_json(c, nlohmann::json::parse(R"({"runs": "many"})")), Error);
  c.phases.clear();
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("baseline schedule follows the phase length") {
  BenchmarkConfig c = preset_config("desk");
  c.algo = Algo::TimeQ;
  const Schedule s = effective_schedule(c);
  CHECK(s.per_phase);
  CHECK(s.epsilon(750) == 0.0);
  CHECK(s.alpha(187.5) == 1.0);
  c.algo = Algo::Nse;
  CHECK(effective_schedule(c) == ensemble_schedule());
}

TEST_CASE("toy run is reproducible") {
  const BenchmarkConfig c = toy();
  const TaMdp env = build_circular();
  const auto a = run_benchmark(c, env);
  const auto b = run_benchmark(c, env);
  REQUIRE(a.runs.size() == 1);
  CHECK(a.runs[0].outcome.size() == 10);
  CHECK(a.runs[0].outcome == b.runs[0].outcome);
  CHECK(a.config_hash == b.config_hash);
}

TEST_CASE("aggregate clips before averaging") {
  RunResults r;
  r.config = toy();
  r.config.episodes_per_phase = 1;
  r.runs = {{{-50.0}, {0.0}, {1}}, {{0.0}, {0.0}, {1}}};
  const auto curve = aggregate(r, -10.0);
  REQUIRE(curve.size() == 1);
  CHECK(curve[0].mean == -5.0);
  CHECK(curve[0].std == 5.0);
  CHECK(curve[0].objective == "f1");
  r.runs.resize(1);
  CHECK(aggregate(r)[0].std == 0.0);
  r.runs.clear();
  CHECK_THROWS(aggregate(r));
}

TEST_CASE("phases carry their own objective") {
  BenchmarkConfig c = toy();
  c.phases = {*named_objective("f1"), *named_objective("f4")};
  const auto res = run_benchmark(c, build_circular());
  const auto curve = aggregate(res);
  CHECK(curve[0].phase == 0);
  CHECK(curve[10].phase == 1);
  CHECK(curve[10].objective == "f4");
  for (std::size_t e = 10; e < 20; ++e) CHECK(res.runs[0].outcome[e] == -static_cast<double>(res.runs[0].length[e]));
}

TEST_CASE("result files") {
  const fs::path dir = fs::temp_directory_path() / "tamdp_bench_test";
  fs::remove_all(dir);
  BenchmarkConfig c = toy();
  c.runs = 2;
  const auto res = run_benchmark(c, build_circular());
  write_results(dir, res, -10.0);
  CHECK(fs::exists(dir / "run_000.csv"));
  CHECK(fs::exists(dir / "run_001.csv"));
  std::ifstream meta(dir / "metadata.json");
  const auto j = nlohmann::json::parse(meta);
  CHECK(j.at("config_hash") == res.config_hash);
  CHECK(j.at("seeds").size() == 2);
  const auto curve = read_aggregate(dir / "aggregate.csv");
  const auto want = aggregate(res, -10.0);
  REQUIRE(curve.size() == want.size());
  CHECK(curve[3].mean == doctest::Approx(want[3].mean));
  CHECK(window_mean(curve, 0, 10) == doctest::Approx(window_mean(want, 0, 10)));
  fs::remove_all(dir);
}

TEST_CASE("evaluation does not learn") {
  const TaMdp env = build_circular();
  NseAgent agent(env, 4, 1.0, 1.0);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) run_episode(agent, env, Objective::total_reward(), 0, rng);
  const auto before = agent.modules();
  agent.set_epsilon(0.0);
  const auto stats = evaluate_agent(agent, env, Objective::neg_time(), 0, 20, 5);
  CHECK(agent.modules() == before);
  CHECK(stats.episodes == 20);
  CHECK(stats.mean == -2.0);
  CHECK(stats.truncated == 0);
}
