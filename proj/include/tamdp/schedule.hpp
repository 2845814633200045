#pragma once

#include <utility>
#include <vector>

#include <json.hpp>

namespace tamdp {

/// Piecewise-linear function of the episode index through (x, y) breakpoints.
/// Constant before the first and after the last breakpoint.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  /// Breakpoints must be non-empty with strictly increasing x.
  explicit PiecewiseLinear(std::vector<std::pair<double, double>> points);

  double operator()(double x) const;
  const std::vector<std::pair<double, double>>& points() const { return points_; }
  /// Same curve with every x multiplied by `factor` (> 0).
  PiecewiseLinear scaled(double factor) const;

  bool operator==(const PiecewiseLinear&) const = default;

 private:
  std::vector<std::pair<double, double>> points_{{0.0, 0.0}};
};

struct Schedule {
  PiecewiseLinear alpha;
  PiecewiseLinear epsilon;
  /// true: x counts episodes since the start of the current phase;
  /// false: x counts episodes since the start of the run.
  bool per_phase = false;

  bool operator==(const Schedule&) const = default;
};

/// alpha 1 -> 0.1 and epsilon 0.9 -> 0 between episodes 500 and 1000 of the run.
Schedule ensemble_schedule();
/// alpha 1 -> 0.1 and epsilon 0.9 -> 0 between episodes 750 and 3000 of each phase.
Schedule baseline_schedule();

void to_json(nlohmann::json& j, const PiecewiseLinear& f);
void from_json(const nlohmann::json& j, PiecewiseLinear& f);
void to_json(nlohmann::json& j, const Schedule& s);
void from_json(const nlohmann::json& j, Schedule& s);

}  // namespace tamdp
