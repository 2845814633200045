#pragma once

#include <cstddef>
#include <vector>

#include "tamdp/episode.hpp"
#include "tamdp/mdp.hpp"
#include "tamdp/types.hpp"

namespace tamdp {

/// gamma_i = i / (i + 1) for i = 1..base_count, with `fill` evenly spaced values
/// inserted into every gap between consecutive base values and between the
/// last base value and 1 (1 itself excluded). Ascending.
std::vector<double> gamma_ladder(std::size_t base_count = 14, std::size_t fill = 2);

/// One discount factor of the ensemble: its Q-table plus the undiscounted
/// return and step-count estimates of its greedy policy.
struct GammaModule {
  double gamma = 0.0;
  StateActionTable q;
  std::vector<double> r_exp;
  std::vector<double> t_exp;

  bool operator==(const GammaModule&) const = default;
};

/// Independent gamma-ensemble: Q-learning on every discount factor of the
/// ladder from the same transitions, with the module for an episode chosen by
/// the objective evaluated at the module's (r_exp, t_exp) at the start state.
class IgeAgent : public Agent {
 public:
  IgeAgent(const TaMdp& env, std::vector<double> gammas, double alpha = 1.0, double epsilon = 0.0);
  /// Rebuilds an agent from saved modules.
  IgeAgent(EnvShape shape, std::vector<GammaModule> modules, double alpha, double epsilon);

  void begin_episode(const EpisodeStart& start) override;
  ActionId act(StateId s, Rng& rng) override;
  void observe(const Transition& tr) override;

  /// Argmax of f(r_exp(s0), t_exp(s0)); ties go to the smaller t_exp, then to
  /// the lower index. Makes the result the active module.
  std::size_t select_module(StateId s0, const Objective& f);
  void update(StateId s, ActionId a, double r, StateId next, bool terminal);

  /// True when a attains the maximum of module m's q-row at s.
  bool is_greedy(std::size_t m, StateId s, ActionId a) const;

  const std::vector<GammaModule>& modules() const { return modules_; }
  const EnvShape& shape() const { return shape_; }
  std::size_t active_module() const { return active_; }
  void set_active_module(std::size_t m);

 private:
  EnvShape shape_;
  std::vector<GammaModule> modules_;
  std::size_t active_ = 0;
};

}  // namespace tamdp
