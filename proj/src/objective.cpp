#include "tamdp/objective.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "tamdp/types.hpp"

namespace tamdp {

namespace {

constexpr std::array<std::pair<ObjectiveKind, std::string_view>, 8> kKindNames{{
    {ObjectiveKind::TotalReward, "total_reward"},
    {ObjectiveKind::StepPenaltyAfter, "step_penalty_after"},
    {ObjectiveKind::ExpPenaltyAfter, "exp_penalty_after"},
    {ObjectiveKind::NegTime, "neg_time"},
    {ObjectiveKind::ShortestPathAboveReward, "shortest_path_above_reward"},
    {ObjectiveKind::RewardWithinTimeLimit, "reward_within_time_limit"},
    {ObjectiveKind::AverageReward, "average_reward"},
    {ObjectiveKind::AverageRewardAboveThreshold, "average_reward_above_threshold"},
}};

Objective make(ObjectiveKind kind, double threshold, double base, double penalty, std::string name) {
  Objective f;
  f.kind = kind;
  f.threshold = threshold;
  f.base = base;
  f.penalty = penalty;
  f.name = std::move(name);
  return f;
}

}  // namespace

double Objective::operator()(double total_reward, std::int64_t steps) const {
  return evaluate_objective(*this, total_reward, steps);
}

Objective Objective::total_reward(std::string name) {
  return make(ObjectiveKind::TotalReward, 0, 0, 0, std::move(name));
}
Objective Objective::step_penalty_after(double k, std::string name) {
  return make(ObjectiveKind::StepPenaltyAfter, k, 0, 0, std::move(name));
}
Objective Objective::exp_penalty_after(double k, double base, std::string name) {
  return make(ObjectiveKind::ExpPenaltyAfter, k, base, 0, std::move(name));
}
Objective Objective::neg_time(std::string name) { return make(ObjectiveKind::NegTime, 0, 0, 0, std::move(name)); }
Objective Objective::shortest_path_above_reward(double r_min, double penalty, std::string name) {
  return make(ObjectiveKind::ShortestPathAboveReward, r_min, 0, penalty, std::move(name));
}
Objective Objective::reward_within_time_limit(double t_max, double penalty, std::string name) {
  return make(ObjectiveKind::RewardWithinTimeLimit, t_max, 0, penalty, std::move(name));
}
Objective Objective::average_reward(std::string name) {
  return make(ObjectiveKind::AverageReward, 0, 0, 0, std::move(name));
}
Objective Objective::average_reward_above_threshold(double r_min, double penalty, std::string name) {
  return make(ObjectiveKind::AverageRewardAboveThreshold, r_min, 0, penalty, std::move(name));
}

namespace {

double formula(const Objective& f, double R, double T) {
  switch (f.kind) {
    case ObjectiveKind::TotalReward:
      return R;
    case ObjectiveKind::StepPenaltyAfter:
      return T <= f.threshold ? R : R - (T - f.threshold);
    case ObjectiveKind::ExpPenaltyAfter:
      return T <= f.threshold ? R : R - std::pow(f.base, T - f.threshold);
    case ObjectiveKind::NegTime:
      return -T;
    case ObjectiveKind::ShortestPathAboveReward:
      return R <= f.threshold ? f.penalty : -T;
    case ObjectiveKind::RewardWithinTimeLimit:
      return T <= f.threshold ? R : f.penalty;
    case ObjectiveKind::AverageReward:
      return R / T;
    case ObjectiveKind::AverageRewardAboveThreshold:
      return R >= f.threshold ? R / T : f.penalty;
  }
  throw std::logic_error("evaluate_objective: unknown objective kind");
}

}  // namespace

double evaluate_objective(const Objective& f, double total_reward, std::int64_t steps) {
  if (steps < 1) throw std::invalid_argument("evaluate_objective: episode length must be >= 1");
  return formula(f, total_reward, static_cast<double>(steps));
}

double expected_outcome(const Objective& f, double expected_reward, double expected_steps) {
  return formula(f, expected_reward, std::max(expected_steps, 1.0));
}

const std::vector<Objective>& benchmark_objectives() {
  static const std::vector<Objective> objectives{
      Objective::total_reward("f1"),
      Objective::step_penalty_after(3, "f2"),
      Objective::exp_penalty_after(3, 1.3, "f3"),
      Objective::neg_time("f4"),
      Objective::shortest_path_above_reward(6.5, -10, "f5"),
      Objective::reward_within_time_limit(7, -10, "f6"),
      Objective::reward_within_time_limit(5, -10, "f7"),
      Objective::average_reward("f8"),
      Objective::average_reward_above_threshold(6.5, -1, "f9"),
  };
  return objectives;
}

std::optional<Objective> named_objective(std::string_view name) {
  for (const auto& f : benchmark_objectives())
    if (f.name == name) return f;
  return std::nullopt;
}

std::string_view to_string(ObjectiveKind kind) {
  for (const auto& [k, text] : kKindNames)
    if (k == kind) return text;
  throw std::logic_error("to_string: unknown objective kind");
}

ObjectiveKind objective_kind_from_string(std::string_view text) {
  for (const auto& [k, name] : kKindNames)
    if (name == text) return k;
  throw Error("unknown objective kind '" + std::string(text) + "'");
}

void to_json(nlohmann::json& j, const Objective& f) {
  j = nlohmann::json{{"name", f.name}, {"kind", to_string(f.kind)}};
  switch (f.kind) {
    case ObjectiveKind::StepPenaltyAfter:
      j["k"] = f.threshold;
      break;
    case ObjectiveKind::ExpPenaltyAfter:
      j["k"] = f.threshold;
      j["base"] = f.base;
      break;
    case ObjectiveKind::ShortestPathAboveReward:
    case ObjectiveKind::AverageRewardAboveThreshold:
      j["r_min"] = f.threshold;
      j["penalty"] = f.penalty;
      break;
    case ObjectiveKind::RewardWithinTimeLimit:
      j["t_max"] = f.threshold;
      j["penalty"] = f.penalty;
      break;
    default:
      break;
  }
}

void from_json(const nlohmann::json& j, Objective& f) {
  // A bare string names one of the registered objectives.
  if (j.is_string()) {
    auto found = named_objective(j.get<std::string>());
    if (!found) throw Error("unknown objective '" + j.get<std::string>() + "'");
    f = *found;
    return;
  }
  const auto kind = objective_kind_from_string(j.at("kind").get<std::string>());
  const std::string name = j.value("name", std::string(to_string(kind)));
  switch (kind) {
    case ObjectiveKind::TotalReward:
      f = Objective::total_reward(name);
      break;
    case ObjectiveKind::StepPenaltyAfter:
      f = Objective::step_penalty_after(j.at("k").get<double>(), name);
      break;
    case ObjectiveKind::ExpPenaltyAfter:
      f = Objective::exp_penalty_after(j.at("k").get<double>(), j.at("base").get<double>(), name);
      break;
    case ObjectiveKind::NegTime:
      f = Objective::neg_time(name);
      break;
    case ObjectiveKind::ShortestPathAboveReward:
      f = Objective::shortest_path_above_reward(j.at("r_min").get<double>(), j.at("penalty").get<double>(), name);
      break;
    case ObjectiveKind::RewardWithinTimeLimit:
      f = Objective::reward_within_time_limit(j.at("t_max").get<double>(), j.at("penalty").get<double>(), name);
      break;
    case ObjectiveKind::AverageReward:
      f = Objective::average_reward(name);
      break;
    case ObjectiveKind::AverageRewardAboveThreshold:
      f = Objective::average_reward_above_threshold(j.at("r_min").get<double>(), j.at("penalty").get<double>(),
                                                    name);
      break;
  }
}

}  // namespace tamdp
