#include "tamdp/time_q.hpp"

#include <algorithm>
#include <stdexcept>

namespace tamdp {

double phi_reward(const Objective& f, double total_reward, std::int64_t steps, bool terminal) {
  return terminal ? evaluate_objective(f, total_reward, steps) : 0.0;
}

TimeQAgent::TimeQAgent(const TaMdp& env, std::size_t num_objectives, double gamma, std::int64_t t_max, double alpha,
                       double epsilon)
    : TimeQAgent(EnvShape::of(env), num_objectives, gamma, t_max, alpha, epsilon) {}

TimeQAgent::TimeQAgent(EnvShape shape, std::size_t num_objectives, double gamma, std::int64_t t_max, double alpha,
                       double epsilon)
    : Agent(alpha, epsilon), shape_(std::move(shape)), gamma_(gamma), t_max_(t_max) {
  if (num_objectives < 1) throw std::invalid_argument("TimeQAgent needs at least one objective");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("TimeQAgent: gamma must lie in [0, 1]");
  if (t_max < 0) throw std::invalid_argument("TimeQAgent: t_max must be >= 0");
  slices_.assign(num_objectives, std::vector<std::vector<double>>(static_cast<std::size_t>(t_max) + 1));
}

std::size_t TimeQAgent::clamp(std::int64_t t) const {
  if (t < 0) throw std::invalid_argument("TimeQAgent: negative time step");
  return static_cast<std::size_t>(std::min(t, t_max_));
}

std::vector<double>& TimeQAgent::slice(std::size_t k, std::int64_t t) {
  auto& sl = slices_.at(k)[clamp(t)];
  if (sl.empty()) sl.assign(shape_.num_states() * shape_.num_actions, 0.0);
  return sl;
}

bool TimeQAgent::has_slice(std::size_t k, std::int64_t t) const { return !slices_.at(k)[clamp(t)].empty(); }

double TimeQAgent::q(std::size_t k, std::int64_t t, StateId s, ActionId a) const {
  const auto& sl = slices_.at(k)[clamp(t)];
  return sl.empty() ? 0.0 : sl[std::size_t{s} * shape_.num_actions + a];
}

void TimeQAgent::set_slices(std::vector<std::vector<std::vector<double>>> slices) {
  const std::size_t width = shape_.num_states() * shape_.num_actions;
  if (slices.empty()) throw std::invalid_argument("TimeQAgent: no objective slices");
  for (const auto& per_k : slices) {
    if (per_k.size() != static_cast<std::size_t>(t_max_) + 1)
      throw std::invalid_argument("TimeQAgent: slice count does not match t_max");
    for (const auto& sl : per_k)
      if (!sl.empty() && sl.size() != width) throw std::invalid_argument("TimeQAgent: slice size mismatch");
  }
  slices_ = std::move(slices);
}

void TimeQAgent::begin_episode(const EpisodeStart& start) {
  if (start.objective == nullptr) throw std::invalid_argument("TimeQAgent: episode started without an objective");
  if (start.objective_index >= slices_.size()) throw std::out_of_range("TimeQAgent: objective index out of range");
  objective_ = *start.objective;
  k_ = start.objective_index;
  t_ = 0;
}

ActionId TimeQAgent::act(StateId s, Rng& rng) {
  const auto& acts = shape_.actions.at(s);
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon()) return random_action(acts, rng);
  const auto& sl = slices_[k_][clamp(t_)];
  if (sl.empty()) return random_action(acts, rng);
  return argmax_action(std::span<const double>(sl.data() + std::size_t{s} * shape_.num_actions, shape_.num_actions),
                       acts, rng);
}

void TimeQAgent::observe(const Transition& tr) {
  if (learning()) {
    const double xi = phi_reward(objective_, tr.return_so_far, tr.t + 1, tr.terminal);
    update(k_, tr.t, tr.state, tr.action, xi, tr.next, tr.terminal);
  }
  t_ = tr.t + 1;
}

void TimeQAgent::update(std::size_t k, std::int64_t t, StateId s, ActionId a, double xi, StateId next,
                        bool terminal) {
  double boot = 0.0;
  if (!terminal) {
    const auto& nsl = slices_.at(k)[clamp(t + 1)];
    if (!nsl.empty()) {
      const std::span<const double> row(nsl.data() + std::size_t{next} * shape_.num_actions, shape_.num_actions);
      boot = gamma_ * max_value(row, shape_.actions.at(next));
    }
  }
  auto& sl = slice(k, t);
  double& cell = sl[std::size_t{s} * shape_.num_actions + a];
  cell = (1.0 - alpha()) * cell + alpha() * (xi + boot);
}

}  // namespace tamdp
