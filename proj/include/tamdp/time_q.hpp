#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tamdp/episode.hpp"
#include "tamdp/mdp.hpp"
#include "tamdp/objective.hpp"

namespace tamdp {

/// Reward seen by the baseline: 0 mid-episode, f(R, T) on the terminal step.
double phi_reward(const Objective& f, double total_reward, std::int64_t steps, bool terminal);

/// Q-learning with one table per objective and the time step as an extra
/// state dimension. Time steps beyond t_max share the t_max slice.
///
/// The return R is not part of the state, so objectives that depend on it
/// are learned on a non-Markov reward.
class TimeQAgent : public Agent {
 public:
  TimeQAgent(const TaMdp& env, std::size_t num_objectives, double gamma = 0.99, std::int64_t t_max = 1000,
             double alpha = 1.0, double epsilon = 0.0);
  TimeQAgent(EnvShape shape, std::size_t num_objectives, double gamma, std::int64_t t_max, double alpha,
             double epsilon);

  void begin_episode(const EpisodeStart& start) override;
  ActionId act(StateId s, Rng& rng) override;
  void observe(const Transition& tr) override;

  void update(std::size_t k, std::int64_t t, StateId s, ActionId a, double xi, StateId next, bool terminal);

  double q(std::size_t k, std::int64_t t, StateId s, ActionId a) const;
  /// Whether the (k, t) slice has been written. Unwritten slices read as 0.
  bool has_slice(std::size_t k, std::int64_t t) const;

  double gamma() const { return gamma_; }
  std::int64_t t_max() const { return t_max_; }
  std::size_t num_objectives() const { return slices_.size(); }
  const EnvShape& shape() const { return shape_; }

  /// Raw slice storage [k][t], each empty or S * A values (row-major by state).
  const std::vector<std::vector<std::vector<double>>>& slices() const { return slices_; }
  void set_slices(std::vector<std::vector<std::vector<double>>> slices);

 private:
  std::size_t clamp(std::int64_t t) const;
  std::vector<double>& slice(std::size_t k, std::int64_t t);

  EnvShape shape_;
  double gamma_;
  std::int64_t t_max_;
  std::vector<std::vector<std::vector<double>>> slices_;
  Objective objective_;
  std::size_t k_ = 0;
  std::int64_t t_ = 0;
};

}  // namespace tamdp
