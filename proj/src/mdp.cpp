#include "tamdp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tamdp {

bool TaMdp::is_available(StateId s, ActionId a) const {
  const auto& acts = actions_.at(s);
  return std::find(acts.begin(), acts.end(), a) != acts.end();
}

std::span<const Outcome> TaMdp::outcomes(StateId s, ActionId a) const {
  if (s >= num_states() || a >= num_actions()) throw std::out_of_range("TaMdp::outcomes: index out of range");
  const std::size_t idx = std::size_t{s} * num_actions() + a;
  return {outcomes_.data() + offsets_[idx], offsets_[idx + 1] - offsets_[idx]};
}

double TaMdp::expected_reward(StateId s, ActionId a) const {
  double r = 0.0;
  for (const auto& o : outcomes(s, a)) r += o.prob * o.reward;
  return r;
}

StateId TaMdp::state_id(const std::string& name) const {
  auto it = std::find(state_names_.begin(), state_names_.end(), name);
  if (it == state_names_.end()) throw Error("unknown state '" + name + "'");
  return static_cast<StateId>(it - state_names_.begin());
}

ActionId TaMdp::action_id(const std::string& name) const {
  auto it = std::find(action_names_.begin(), action_names_.end(), name);
  if (it == action_names_.end()) throw Error("unknown action '" + name + "'");
  return static_cast<ActionId>(it - action_names_.begin());
}

StepResult TaMdp::step(StateId s, ActionId a, Rng& rng) const {
  if (s >= num_states()) throw std::invalid_argument("step: state out of range");
  if (terminal_[s]) throw std::invalid_argument("step: state '" + state_names_[s] + "' is terminal");
  if (a >= num_actions() || !is_available(s, a))
    throw std::invalid_argument("step: action not available in state '" + state_names_[s] + "'");

  const auto outs = outcomes(s, a);
  const Outcome* chosen = &outs.back();
  if (outs.size() > 1) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    for (const auto& o : outs) {
      acc += o.prob;
      if (u < acc) {
        chosen = &o;
        break;
      }
    }
  }
  return {chosen->next, chosen->reward, terminal_[chosen->next]};
}

TaMdp TaMdp::with_start(StateId s) const {
  if (s >= num_states() || terminal_[s]) throw std::invalid_argument("with_start: start must be a non-terminal state");
  TaMdp copy = *this;
  copy.start_ = s;
  return copy;
}

TaMdpBuilder::TaMdpBuilder(std::vector<std::string> state_names, std::vector<std::string> action_names)
    : state_names_(std::move(state_names)),
      action_names_(std::move(action_names)),
      rows_(state_names_.size(), std::vector<std::vector<Outcome>>(action_names_.size())),
      terminal_(state_names_.size(), false) {
  if (state_names_.empty() || action_names_.empty()) throw Error("TaMdp needs at least one state and one action");
}

TaMdpBuilder& TaMdpBuilder::name(std::string name) {
  name_ = std::move(name);
  return *this;
}

TaMdpBuilder& TaMdpBuilder::start(StateId s) {
  if (s >= state_names_.size()) throw Error("start state out of range");
  start_ = s;
  return *this;
}

TaMdpBuilder& TaMdpBuilder::terminal(StateId s) {
  if (s >= state_names_.size()) throw Error("terminal state out of range");
  terminal_[s] = true;
  return *this;
}

TaMdpBuilder& TaMdpBuilder::transition(StateId s, ActionId a, std::vector<Outcome> outcomes) {
  if (s >= state_names_.size() || a >= action_names_.size()) throw Error("transition index out of range");
  if (outcomes.empty()) throw Error("transition needs at least one outcome");
  std::vector<Outcome> merged;
  for (const auto& o : outcomes) {
    if (o.next >= state_names_.size()) throw Error("transition successor out of range");
    if (!(o.prob >= 0.0)) throw Error("transition probabilities must be non-negative");
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Outcome& m) { return m.next == o.next; });
    if (it == merged.end()) {
      merged.push_back(o);
    } else {
      if (it->reward != o.reward) throw Error("conflicting rewards for the same successor");
      it->prob += o.prob;
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Outcome& o) { return o.prob == 0.0; }),
               merged.end());
  std::sort(merged.begin(), merged.end(), [](const Outcome& x, const Outcome& y) { return x.next < y.next; });
  rows_[s][a] = std::move(merged);
  return *this;
}

TaMdpBuilder& TaMdpBuilder::objective(Objective f) {
  objectives_.push_back(std::move(f));
  return *this;
}

TaMdpBuilder& TaMdpBuilder::objectives(std::vector<Objective> fs) {
  objectives_ = std::move(fs);
  return *this;
}

TaMdp TaMdpBuilder::build() const {
  const std::size_t S = state_names_.size();
  const std::size_t A = action_names_.size();
  if (terminal_[start_]) throw Error("start state '" + state_names_[start_] + "' is terminal");

  TaMdp m;
  m.name_ = name_;
  m.state_names_ = state_names_;
  m.action_names_ = action_names_;
  m.terminal_ = terminal_;
  m.start_ = start_;
  m.objectives_ = objectives_;
  m.actions_.resize(S);
  m.offsets_.reserve(S * A + 1);
  m.offsets_.push_back(0);

  for (std::size_t s = 0; s < S; ++s) {
    if (terminal_[s]) m.terminal_list_.push_back(static_cast<StateId>(s));
    for (std::size_t a = 0; a < A; ++a) {
      const auto& row = rows_[s][a];
      if (!row.empty()) {
        if (terminal_[s]) throw Error("terminal state '" + state_names_[s] + "' has outgoing transitions");
        double total = 0.0;
        for (const auto& o : row) total += o.prob;
        if (std::abs(total - 1.0) > 1e-9)
          throw Error("transition distribution of (" + state_names_[s] + ", " + action_names_[a] +
                      ") sums to " + std::to_string(total));
        m.actions_[s].push_back(static_cast<ActionId>(a));
        m.outcomes_.insert(m.outcomes_.end(), row.begin(), row.end());
      }
      m.offsets_.push_back(m.outcomes_.size());
    }
    if (!terminal_[s] && m.actions_[s].empty())
      throw Error("non-terminal state '" + state_names_[s] + "' has no available action");
  }
  if (m.terminal_list_.empty()) throw Error("TaMdp needs at least one terminal state");
  return m;
}

}  // namespace tamdp
