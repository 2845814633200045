#include "tamdp/nse.hpp"

#include <algorithm>
#include <stdexcept>

namespace tamdp {

namespace {

// Keeps the elements of `acts` whose value is best according to `better`.
template <class Value, class Better>
void keep_best(std::vector<ActionId>& acts, Value value, Better better) {
  double best = value(acts.front());
  for (ActionId a : acts)
    if (better(value(a), best)) best = value(a);
  std::erase_if(acts, [&](ActionId a) { return value(a) != best; });
}

}  // namespace

NseAgent::NseAgent(const TaMdp& env, std::size_t num_modules, double alpha, double epsilon)
    : Agent(alpha, epsilon), shape_(EnvShape::of(env)) {
  if (num_modules < 1) throw std::invalid_argument("NseAgent needs at least one module");
  const std::size_t S = shape_.num_states();
  const std::size_t A = shape_.num_actions;
  for (std::size_t n = 1; n <= num_modules; ++n)
    modules_.push_back({n, StateActionTable(S, A), StateActionTable(S, A), StateActionTable(S, A)});
}

NseAgent::NseAgent(EnvShape shape, std::vector<NStepModule> modules, double alpha, double epsilon)
    : Agent(alpha, epsilon), shape_(std::move(shape)), modules_(std::move(modules)) {
  if (modules_.empty()) throw std::invalid_argument("NseAgent needs at least one module");
  for (std::size_t i = 0; i < modules_.size(); ++i) {
    const auto& m = modules_[i];
    if (m.n != i + 1) throw std::invalid_argument("NseAgent: module horizons must run 1..M");
    for (const auto* tab : {&m.q, &m.r, &m.t})
      if (tab->num_states() != shape_.num_states() || tab->num_actions() != shape_.num_actions)
        throw std::invalid_argument("NseAgent: module tables do not match the environment");
  }
}

void NseAgent::set_active_module(std::size_t n) {
  if (n < 1 || n > modules_.size()) throw std::out_of_range("NseAgent: module horizon out of range");
  active_ = n;
}

std::vector<ActionId> NseAgent::filtered(std::size_t n, StateId s) const {
  if (shape_.terminal.at(s)) throw std::invalid_argument("greedy_action: state is terminal");
  const auto& m = modules_.at(n - 1);
  std::vector<ActionId> acts;
  const auto& all = shape_.actions[s];
  for (ActionId a : all)
    if (m.t(s, a) <= static_cast<double>(n)) acts.push_back(a);
  if (acts.empty()) {
    acts = all;
    keep_best(acts, [&](ActionId a) { return m.t(s, a); }, std::less<>());
  }
  keep_best(acts, [&](ActionId a) { return m.q(s, a); }, std::greater<>());
  keep_best(acts, [&](ActionId a) { return m.t(s, a); }, std::less<>());
  keep_best(acts, [&](ActionId a) { return m.r(s, a); }, std::greater<>());
  return acts;
}

ActionId NseAgent::greedy_action(std::size_t n, StateId s, Rng& rng) const { return random_action(filtered(n, s), rng); }

ActionId NseAgent::greedy_action(std::size_t n, StateId s) const { return filtered(n, s).front(); }

std::size_t NseAgent::select_module(StateId s0, const Objective& f) {
  std::size_t best = 0;
  double best_value = 0.0;
  double best_t = 0.0;
  for (std::size_t n = 1; n <= modules_.size(); ++n) {
    const ActionId a = greedy_action(n, s0);
    const auto& m = modules_[n - 1];
    const double v = expected_outcome(f, m.r(s0, a), m.t(s0, a));
    if (best == 0 || v > best_value || (v == best_value && m.t(s0, a) < best_t)) {
      best = n;
      best_value = v;
      best_t = m.t(s0, a);
    }
  }
  active_ = best;
  return best;
}

void NseAgent::countdown() { active_ = std::max<std::size_t>(1, active_ - 1); }

void NseAgent::begin_episode(const EpisodeStart& start) {
  if (start.objective == nullptr) throw std::invalid_argument("NseAgent: episode started without an objective");
  select_module(start.state, *start.objective);
}

ActionId NseAgent::act(StateId s, Rng& rng) {
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon()) return random_action(shape_.actions.at(s), rng);
  return greedy_action(active_, s, rng);
}

void NseAgent::observe(const Transition& tr) {
  if (learning()) update(tr.state, tr.action, tr.reward, tr.next, tr.terminal);
  countdown();
}

void NseAgent::update(StateId s, ActionId a, double r, StateId next, bool terminal) {
  const double lr = alpha();
  // Module 1 bootstraps r and t from itself and stores the immediate reward in q.
  {
    auto& m = modules_[0];
    double br = 0.0;
    double bt = 0.0;
    if (!terminal) {
      const ActionId b = greedy_action(1, next);
      br = m.r(next, b);
      bt = m.t(next, b);
    }
    m.q(s, a) = (1.0 - lr) * m.q(s, a) + lr * r;
    m.r(s, a) = (1.0 - lr) * m.r(s, a) + lr * (r + br);
    m.t(s, a) = (1.0 - lr) * m.t(s, a) + lr * (1.0 + bt);
  }
  for (std::size_t n = 2; n <= modules_.size(); ++n) {
    const auto& prev = modules_[n - 2];
    double bq = 0.0;
    double br = 0.0;
    double bt = 0.0;
    if (!terminal) {
      const ActionId b = greedy_action(n - 1, next);
      bq = prev.q(next, b);
      br = prev.r(next, b);
      bt = prev.t(next, b);
    }
    auto& m = modules_[n - 1];
    m.q(s, a) = (1.0 - lr) * m.q(s, a) + lr * (r + bq);
    m.r(s, a) = (1.0 - lr) * m.r(s, a) + lr * (r + br);
    m.t(s, a) = (1.0 - lr) * m.t(s, a) + lr * (1.0 + bt);
  }
}

}  // namespace tamdp
