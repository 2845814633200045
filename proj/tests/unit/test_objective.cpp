#include <doctest.h>

#include <json.hpp>

#include "tamdp/objective.hpp"
#include "tamdp/types.hpp"

using namespace tamdp;

namespace {
Objective f(const char* name) { return *named_objective(name); }
}  // namespace

TEST_CASE("registered objectives come in phase order") {
  const auto& fs = benchmark_objectives();
  REQUIRE(fs.size() == 9);
  for (std::size_t i = 0; i < fs.size(); ++i) CHECK(fs[i].name == "f" + std::to_string(i + 1));
  CHECK_FALSE(named_objective("f0"));
  CHECK_FALSE(named_objective("f10"));
}

TEST_CASE("closed-form values") {
  CHECK(f("f1")(3.7, 12) == 3.7);
  CHECK(f("f7")(5, 5) == 5);
  CHECK(f("f7")(5, 6) == -10);
  CHECK(f("f3")(8, 5) == doctest::Approx(6.31).epsilon(1e-12));
  CHECK(f("f4")(100, 9) == -9);
  CHECK(f("f8")(6, 3) == 2);
}

TEST_CASE("threshold inequalities") {
  // f5 penalises R <= 6.5, f9 rewards R >= 6.5.
  CHECK(f("f5")(6.5, 2) == -10);
  CHECK(f("f5")(6.5000001, 2) == -2);
  CHECK(f("f9")(6.5, 2) == 3.25);
  CHECK(f("f9")(6.4999999, 2) == -1);
  CHECK(f("f6")(1, 7) == 1);
  CHECK(f("f6")(1, 8) == -10);
  CHECK(f("f2")(0, 3) == 0);
  CHECK(f("f2")(0, 4) == -1);
}

TEST_CASE("expected outcome reads lengths below one as one") {
  CHECK(expected_outcome(f("f8"), 4.0, 0.0) == 4.0);
  CHECK(expected_outcome(f("f8"), 4.0, 0.5) == 4.0);
  CHECK(expected_outcome(f("f8"), 4.0, 2.0) == 2.0);
  CHECK(expected_outcome(f("f2"), 10.0, 4.5) == 8.5);
  CHECK(expected_outcome(f("f7"), 10.0, 5.2) == -10.0);
}

TEST_CASE("evaluate_objective needs T >= 1") { CHECK_THROWS(evaluate_objective(f("f1"), 1.0, 0)); }

TEST_CASE("json round trip for every kind") {
  for (const auto& g : benchmark_objectives()) {
    nlohmann::json j = g;
    CHECK(j.get<Objective>() == g);
  }
  CHECK(nlohmann::json("f6").get<Objective>() == f("f6"));
  CHECK_THROWS_AS(nlohmann::json("nope").get<Objective>(), Error);
  CHECK_THROWS(nlohmann::json::parse(R"({"kind": "bogus"})").get<Objective>());
  const auto custom = nlohmann::json::parse(R"({"kind": "exp_penalty_after", "k": 2, "base": 2})").get<Objective>();
  CHECK(custom(0, 5) == -8);
}
