#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tamdp/objective.hpp"
#include "tamdp/types.hpp"

namespace tamdp {

/// One successor of a (state, action) pair.
struct Outcome {
  StateId next = 0;
  double prob = 0.0;
  double reward = 0.0;

  bool operator==(const Outcome&) const = default;
};

struct StepResult {
  StateId next = 0;
  double reward = 0.0;
  bool terminal = false;
};

/// Tabular time-adaptive MDP: transition model, terminal set, start state and
/// the objectives that may be active in an episode.
///
/// Every state owns a list of available actions; terminal states have none.
/// Instances are immutable once built (see TaMdpBuilder) and can be shared
/// read-only between concurrent runs.
class TaMdp {
 public:
  std::size_t num_states() const { return state_names_.size(); }
  std::size_t num_actions() const { return action_names_.size(); }

  StateId start_state() const { return start_; }
  bool is_terminal(StateId s) const { return terminal_.at(s); }
  const std::vector<StateId>& terminals() const { return terminal_list_; }

  /// Actions available in s (empty for terminals).
  std::span<const ActionId> actions(StateId s) const { return actions_.at(s); }
  bool is_available(StateId s, ActionId a) const;

  std::span<const Outcome> outcomes(StateId s, ActionId a) const;
  double expected_reward(StateId s, ActionId a) const;

  const std::vector<Objective>& objectives() const { return objectives_; }
  const std::string& name() const { return name_; }
  const std::string& state_name(StateId s) const { return state_names_.at(s); }
  const std::string& action_name(ActionId a) const { return action_names_.at(a); }
  const std::vector<std::string>& state_names() const { return state_names_; }
  const std::vector<std::string>& action_names() const { return action_names_; }
  StateId state_id(const std::string& name) const;
  ActionId action_id(const std::string& name) const;

  /// Samples one transition. Rejects terminal s and unavailable a.
  StepResult step(StateId s, ActionId a, Rng& rng) const;

  /// Copy of this MDP with a different start state.
  TaMdp with_start(StateId s) const;

  bool operator==(const TaMdp&) const = default;

 private:
  friend class TaMdpBuilder;
  TaMdp() = default;

  std::string name_;
  std::vector<std::string> state_names_;
  std::vector<std::string> action_names_;
  std::vector<std::vector<ActionId>> actions_;
  // Outcomes of (s, a) live in outcomes_[offsets_[s*A + a] .. offsets_[s*A + a + 1]).
  std::vector<std::size_t> offsets_;
  std::vector<Outcome> outcomes_;
  std::vector<bool> terminal_;
  std::vector<StateId> terminal_list_;
  StateId start_ = 0;
  std::vector<Objective> objectives_;
};

/// Collects the pieces of a TaMdp and validates them in build().
class TaMdpBuilder {
 public:
  TaMdpBuilder(std::vector<std::string> state_names, std::vector<std::string> action_names);

  TaMdpBuilder& name(std::string name);
  TaMdpBuilder& start(StateId s);
  TaMdpBuilder& terminal(StateId s);
  /// Declares a available in s with the given successor distribution.
  /// Outcomes with the same successor are merged; their rewards must agree.
  TaMdpBuilder& transition(StateId s, ActionId a, std::vector<Outcome> outcomes);
  TaMdpBuilder& objective(Objective f);
  TaMdpBuilder& objectives(std::vector<Objective> fs);

  /// Throws Error when a distribution does not sum to 1 within 1e-9, the start
  /// is terminal, a terminal has outgoing transitions, or a non-terminal state
  /// has no available action.
  TaMdp build() const;

 private:
  std::string name_;
  std::vector<std::string> state_names_;
  std::vector<std::string> action_names_;
  std::vector<std::vector<std::vector<Outcome>>> rows_;  // [s][a], empty when unavailable
  std::vector<bool> terminal_;
  StateId start_ = 0;
  std::vector<Objective> objectives_;
};

}  // namespace tamdp
