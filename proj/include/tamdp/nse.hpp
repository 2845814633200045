#pragma once

#include <cstddef>
#include <vector>

#include "tamdp/episode.hpp"
#include "tamdp/mdp.hpp"
#include "tamdp/types.hpp"

namespace tamdp {

/// Horizon-n module: q is the expected reward of the next n steps, r and t the
/// expected total reward and length of the whole episode under the module's
/// policy.
struct NStepModule {
  std::size_t n = 1;
  StateActionTable q;
  StateActionTable r;
  StateActionTable t;

  bool operator==(const NStepModule&) const = default;
};

/// n-step ensemble with M modules of horizons 1..M.
///
/// Greedy action of module n at s: keep the actions with t <= n (or, if there
/// are none, the ones with the smallest t), then those with the largest q, then
/// the smallest t, then the largest r. The episode starts on the module picked
/// by the objective and counts down one module per step, never below 1.
class NseAgent : public Agent {
 public:
  NseAgent(const TaMdp& env, std::size_t num_modules = 20, double alpha = 1.0, double epsilon = 0.0);
  NseAgent(EnvShape shape, std::vector<NStepModule> modules, double alpha, double epsilon);

  void begin_episode(const EpisodeStart& start) override;
  ActionId act(StateId s, Rng& rng) override;
  /// Learns from the transition (when learning) and then counts down.
  void observe(const Transition& tr) override;

  /// Greedy action of module n (1-based). Remaining ties are broken uniformly
  /// at random.
  ActionId greedy_action(std::size_t n, StateId s, Rng& rng) const;
  /// Same filter with remaining ties going to the lowest action id. Tied
  /// actions agree on q, r and t, so bootstrapping does not depend on the pick.
  ActionId greedy_action(std::size_t n, StateId s) const;

  /// Argmax over n of f(r_n, t_n) at (s0, greedy action of n); ties go to the
  /// smaller t, then to the lower n. Makes the result the active module.
  std::size_t select_module(StateId s0, const Objective& f);
  void countdown();
  void update(StateId s, ActionId a, double r, StateId next, bool terminal);

  /// Module of horizon n (1-based).
  const NStepModule& module(std::size_t n) const { return modules_.at(n - 1); }
  const std::vector<NStepModule>& modules() const { return modules_; }
  std::size_t num_modules() const { return modules_.size(); }
  const EnvShape& shape() const { return shape_; }
  std::size_t active_module() const { return active_; }
  void set_active_module(std::size_t n);

 private:
  std::vector<ActionId> filtered(std::size_t n, StateId s) const;

  EnvShape shape_;
  std::vector<NStepModule> modules_;
  std::size_t active_ = 1;
};

}  // namespace tamdp
