#pragma once

#include <cstdint>
#include <vector>

#include "tamdp/mdp.hpp"
#include "tamdp/objective.hpp"
#include "tamdp/types.hpp"

namespace tamdp {

struct EpisodeStep {
  StateId state = 0;
  ActionId action = 0;
  double reward = 0.0;

  bool operator==(const EpisodeStep&) const = default;
};

struct EpisodeTrace {
  std::vector<EpisodeStep> steps;
  double total_reward = 0.0;
  std::int64_t length = 0;
  double outcome = 0.0;
  /// False when the episode was cut at max_steps before reaching a terminal.
  bool terminated = false;
  StateId final_state = 0;

  bool operator==(const EpisodeTrace&) const = default;
};

struct EpisodeStart {
  StateId state = 0;
  const Objective* objective = nullptr;
  std::size_t objective_index = 0;
};

/// Everything an agent sees after one environment step.
struct Transition {
  StateId state = 0;
  ActionId action = 0;
  double reward = 0.0;
  StateId next = 0;
  bool terminal = false;
  /// Zero-based index of this step within the episode.
  std::int64_t t = 0;
  /// Sum of rewards up to and including this step.
  double return_so_far = 0.0;
};

/// What a tabular agent keeps of its environment: the available actions per
/// state and the terminal flags.
struct EnvShape {
  std::vector<std::vector<ActionId>> actions;
  std::vector<bool> terminal;
  std::size_t num_actions = 0;

  static EnvShape of(const TaMdp& env);
  std::size_t num_states() const { return actions.size(); }

  bool operator==(const EnvShape&) const = default;
};

/// Hooks driven by run_episode.
class Agent {
 public:
  virtual ~Agent() = default;

  /// Called once at episode start (module selection happens here).
  virtual void begin_episode(const EpisodeStart& start) = 0;
  virtual ActionId act(StateId s, Rng& rng) = 0;
  /// Called after every environment step. Learning updates only happen while
  /// learning() is true; per-episode bookkeeping always happens.
  virtual void observe(const Transition& tr) = 0;
  virtual void end_episode() {}

  double alpha() const { return alpha_; }
  double epsilon() const { return epsilon_; }
  bool learning() const { return learning_; }
  void set_alpha(double alpha);
  void set_epsilon(double epsilon);
  void set_learning(bool on) { learning_ = on; }

 protected:
  Agent(double alpha, double epsilon);

 private:
  double alpha_;
  double epsilon_;
  bool learning_ = true;
};

struct EpisodeOptions {
  std::int64_t max_steps = 1000;
  bool record_steps = true;
};

/// Runs one episode from env.start_state(). The episode stops on entering a
/// terminal or after max_steps steps; the outcome is f(R, T) of whatever was
/// accumulated.
EpisodeTrace run_episode(Agent& agent, const TaMdp& env, const Objective& f, std::size_t objective_index,
                         Rng& rng, const EpisodeOptions& options = {});

/// Uniformly random element of `actions`.
ActionId random_action(std::span<const ActionId> actions, Rng& rng);

/// Action of `actions` with the largest value in `row`; ties are broken
/// uniformly at random.
ActionId argmax_action(std::span<const double> row, std::span<const ActionId> actions, Rng& rng);

/// Largest value of `row` over `actions`.
double max_value(std::span<const double> row, std::span<const ActionId> actions);

}  // namespace tamdp
