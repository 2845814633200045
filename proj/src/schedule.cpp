#include "tamdp/schedule.hpp"

#include <algorithm>

#include "tamdp/types.hpp"

namespace tamdp {

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error("schedule needs at least one breakpoint");
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (!(points_[i].first > points_[i - 1].first)) throw Error("schedule breakpoints must have increasing x");
}

double PiecewiseLinear::operator()(double x) const {
  if (x <= points_.front().first) return points_.front().second;
  if (x >= points_.back().first) return points_.back().second;
  auto hi = std::upper_bound(points_.begin(), points_.end(), x,
                             [](double v, const std::pair<double, double>& p) { return v < p.first; });
  auto lo = hi - 1;
  const double w = (x - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

PiecewiseLinear PiecewiseLinear::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error("schedule scale factor must be positive");
  auto pts = points_;
  for (auto& p : pts) p.first *= factor;
  return PiecewiseLinear(std::move(pts));
}

Schedule ensemble_schedule() {
  return {PiecewiseLinear({{0, 1.0}, {500, 1.0}, {1000, 0.1}}), PiecewiseLinear({{0, 0.9}, {500, 0.9}, {1000, 0.0}}),
          false};
}

Schedule baseline_schedule() {
  return {PiecewiseLinear({{0, 1.0}, {750, 1.0}, {3000, 0.1}}), PiecewiseLinear({{0, 0.9}, {750, 0.9}, {3000, 0.0}}),
          true};
}

void to_json(nlohmann::json& j, const PiecewiseLinear& f) {
  j = nlohmann::json::array();
  for (const auto& [x, y] : f.points()) j.push_back({x, y});
}

void from_json(const nlohmann::json& j, PiecewiseLinear& f) {
  f = PiecewiseLinear(j.get<std::vector<std::pair<double, double>>>());
}

void to_json(nlohmann::json& j, const Schedule& s) {
  j = {{"alpha", s.alpha}, {"epsilon", s.epsilon}, {"per_phase", s.per_phase}};
}

void from_json(const nlohmann::json& j, Schedule& s) {
  s.alpha = j.at("alpha").get<PiecewiseLinear>();
  s.epsilon = j.at("epsilon").get<PiecewiseLinear>();
  s.per_phase = j.value("per_phase", false);
}

}  // namespace tamdp
