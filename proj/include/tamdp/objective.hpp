#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tamdp {

enum class ObjectiveKind {
  TotalReward,                  // R
  StepPenaltyAfter,             // R, or R - (T - k) once T > k
  ExpPenaltyAfter,              // R, or R - base^(T - k) once T > k
  NegTime,                      // -T
  ShortestPathAboveReward,      // -T if R > r_min, else penalty
  RewardWithinTimeLimit,        // R if T <= t_max, else penalty
  AverageReward,                // R / T
  AverageRewardAboveThreshold,  // R / T if R >= r_min, else penalty
};

/// Evaluation f(R, T) of an episode with total reward R and length T.
///
/// The family is closed so that objectives can be written to and read from
/// configuration files. Each member is non-decreasing in R and non-increasing
/// in T on the domain R >= 0, 1 <= T <= |penalty| (kinds without a penalty
/// only need R >= 0). Outside that domain the penalty branches can cross the
/// regular branch, which is the behaviour of the closed-form definitions.
/// Other monotone objectives can be added as new kinds.
struct Objective {
  ObjectiveKind kind = ObjectiveKind::TotalReward;
  /// k, t_max or r_min depending on the kind.
  double threshold = 0.0;
  /// Base of the exponential penalty (ExpPenaltyAfter only).
  double base = 0.0;
  /// Outcome assigned when the constraint of the kind is violated.
  double penalty = 0.0;
  std::string name;

  double operator()(double total_reward, std::int64_t steps) const;

  static Objective total_reward(std::string name = "total_reward");
  static Objective step_penalty_after(double k, std::string name = "step_penalty_after");
  static Objective exp_penalty_after(double k, double base, std::string name = "exp_penalty_after");
  static Objective neg_time(std::string name = "neg_time");
  static Objective shortest_path_above_reward(double r_min, double penalty,
                                              std::string name = "shortest_path_above_reward");
  static Objective reward_within_time_limit(double t_max, double penalty,
                                            std::string name = "reward_within_time_limit");
  static Objective average_reward(std::string name = "average_reward");
  static Objective average_reward_above_threshold(double r_min, double penalty,
                                                  std::string name = "average_reward_above_threshold");

  bool operator==(const Objective&) const = default;
};

/// f(R, T). Requires T >= 1.
double evaluate_objective(const Objective& f, double total_reward, std::int64_t steps);

/// f at expected values, used when selecting modules. Expected lengths below
/// 1 (untrained estimates) are read as 1.
double expected_outcome(const Objective& f, double expected_reward, double expected_steps);

/// The nine benchmark objectives f1..f9, in phase order.
const std::vector<Objective>& benchmark_objectives();

/// Looks up f1..f9 by name.
std::optional<Objective> named_objective(std::string_view name);

std::string_view to_string(ObjectiveKind kind);
ObjectiveKind objective_kind_from_string(std::string_view text);

void to_json(nlohmann::json& j, const Objective& f);
void from_json(const nlohmann::json& j, Objective& f);

}  // namespace tamdp
