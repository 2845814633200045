#include "tamdp/ige.hpp"

#include <stdexcept>

namespace tamdp {

std::vector<double> gamma_ladder(std::size_t base_count, std::size_t fill) {
  if (base_count < 1) throw std::invalid_argument("gamma_ladder: base_count must be >= 1");
  std::vector<double> out;
  out.reserve(base_count * (fill + 1));
  for (std::size_t i = 1; i <= base_count; ++i) {
    const double g = static_cast<double>(i) / static_cast<double>(i + 1);
    const double next = i < base_count ? static_cast<double>(i + 1) / static_cast<double>(i + 2) : 1.0;
    out.push_back(g);
    for (std::size_t k = 1; k <= fill; ++k)
      out.push_back(g + (next - g) * static_cast<double>(k) / static_cast<double>(fill + 1));
  }
  return out;
}

IgeAgent::IgeAgent(const TaMdp& env, std::vector<double> gammas, double alpha, double epsilon)
    : Agent(alpha, epsilon), shape_(EnvShape::of(env)) {
  if (gammas.empty()) throw std::invalid_argument("IgeAgent needs at least one discount factor");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0.0 && gammas[i] < 1.0)) throw std::invalid_argument("discount factors must lie in (0, 1)");
    if (i > 0 && !(gammas[i] > gammas[i - 1]))
      throw std::invalid_argument("discount factors must be strictly increasing");
  }
  const std::size_t S = shape_.num_states();
  for (double g : gammas)
    modules_.push_back({g, StateActionTable(S, shape_.num_actions), std::vector<double>(S), std::vector<double>(S)});
}

IgeAgent::IgeAgent(EnvShape shape, std::vector<GammaModule> modules, double alpha, double epsilon)
    : Agent(alpha, epsilon), shape_(std::move(shape)), modules_(std::move(modules)) {
  if (modules_.empty()) throw std::invalid_argument("IgeAgent needs at least one module");
  for (const auto& m : modules_) {
    if (m.q.num_states() != shape_.num_states() || m.q.num_actions() != shape_.num_actions ||
        m.r_exp.size() != shape_.num_states() || m.t_exp.size() != shape_.num_states())
      throw std::invalid_argument("IgeAgent: module tables do not match the environment");
  }
}

void IgeAgent::set_active_module(std::size_t m) {
  if (m >= modules_.size()) throw std::out_of_range("IgeAgent: module index out of range");
  active_ = m;
}

void IgeAgent::begin_episode(const EpisodeStart& start) {
  if (start.objective == nullptr) throw std::invalid_argument("IgeAgent: episode started without an objective");
  select_module(start.state, *start.objective);
}

std::size_t IgeAgent::select_module(StateId s0, const Objective& f) {
  std::size_t best = 0;
  double best_value = expected_outcome(f, modules_[0].r_exp[s0], modules_[0].t_exp[s0]);
  for (std::size_t m = 1; m < modules_.size(); ++m) {
    const double v = expected_outcome(f, modules_[m].r_exp[s0], modules_[m].t_exp[s0]);
    if (v > best_value || (v == best_value && modules_[m].t_exp[s0] < modules_[best].t_exp[s0])) {
      best = m;
      best_value = v;
    }
  }
  active_ = best;
  return best;
}

ActionId IgeAgent::act(StateId s, Rng& rng) {
  const auto& acts = shape_.actions.at(s);
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon()) return random_action(acts, rng);
  return argmax_action(modules_[active_].q.row(s), acts, rng);
}

void IgeAgent::observe(const Transition& tr) {
  if (learning()) update(tr.state, tr.action, tr.reward, tr.next, tr.terminal);
}

bool IgeAgent::is_greedy(std::size_t m, StateId s, ActionId a) const {
  const auto row = modules_.at(m).q.row(s);
  return row[a] == max_value(row, shape_.actions.at(s));
}

void IgeAgent::update(StateId s, ActionId a, double r, StateId next, bool terminal) {
  const double lr = alpha();
  for (std::size_t m = 0; m < modules_.size(); ++m) {
    auto& mod = modules_[m];
    const double boot = terminal ? 0.0 : mod.gamma * max_value(mod.q.row(next), shape_.actions[next]);
    mod.q(s, a) = (1.0 - lr) * mod.q(s, a) + lr * (r + boot);
    if (!is_greedy(m, s, a)) continue;
    const double r_next = terminal ? 0.0 : mod.r_exp[next];
    const double t_next = terminal ? 0.0 : mod.t_exp[next];
    mod.r_exp[s] = (1.0 - lr) * mod.r_exp[s] + lr * (r + r_next);
    mod.t_exp[s] = (1.0 - lr) * mod.t_exp[s] + lr * (1.0 + t_next);
  }
}

}  // namespace tamdp
