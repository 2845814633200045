#include "tamdp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace tamdp {

namespace {

// Plain transition lists that, unlike TaMdp, may hold several entries for the
// same successor. Used for the goal-restricted models.
struct Model {
  std::vector<std::vector<ActionId>> actions;
  std::vector<bool> terminal;
  std::size_t num_actions = 0;
  std::vector<std::vector<Outcome>> rows;  // [s * A + a]

  std::size_t num_states() const { return actions.size(); }
  const std::vector<Outcome>& row(StateId s, ActionId a) const { return rows[std::size_t{s} * num_actions + a]; }
};

Model model_of(const TaMdp& env) {
  Model m;
  m.num_actions = env.num_actions();
  m.actions.resize(env.num_states());
  m.terminal.resize(env.num_states());
  m.rows.resize(env.num_states() * env.num_actions());
  for (StateId s = 0; s < env.num_states(); ++s) {
    const auto acts = env.actions(s);
    m.actions[s].assign(acts.begin(), acts.end());
    m.terminal[s] = env.is_terminal(s);
    for (ActionId a : acts) {
      const auto outs = env.outcomes(s, a);
      m.rows[std::size_t{s} * m.num_actions + a].assign(outs.begin(), outs.end());
    }
  }
  return m;
}

void check_policy(const Model& m, const std::vector<ActionId>& policy) {
  if (policy.size() != m.num_states()) throw std::invalid_argument("policy must have one entry per state");
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (m.terminal[s]) continue;
    const auto& acts = m.actions[s];
    if (std::find(acts.begin(), acts.end(), policy[s]) == acts.end())
      throw std::invalid_argument("policy picks an unavailable action in state " + std::to_string(s));
  }
}

// States reachable from `from` under the policy (terminals included).
std::vector<bool> forward_reachable(const Model& m, const std::vector<ActionId>& policy, StateId from) {
  std::vector<bool> seen(m.num_states(), false);
  std::deque<StateId> todo{from};
  seen[from] = true;
  while (!todo.empty()) {
    const StateId s = todo.front();
    todo.pop_front();
    if (m.terminal[s]) continue;
    for (const auto& o : m.row(s, policy[s]))
      if (o.prob > 0.0 && !seen[o.next]) {
        seen[o.next] = true;
        todo.push_back(o.next);
      }
  }
  return seen;
}

// Non-terminal states from which the policy fails to terminate with
// probability 1: those that can reach a state with no path to a terminal.
std::vector<bool> improper_states(const Model& m, const std::vector<ActionId>& policy) {
  const std::size_t S = m.num_states();
  std::vector<std::vector<StateId>> preds(S);
  for (StateId s = 0; s < S; ++s) {
    if (m.terminal[s]) continue;
    for (const auto& o : m.row(s, policy[s]))
      if (o.prob > 0.0) preds[o.next].push_back(s);
  }
  auto backward = [&](std::vector<bool> mark) {
    std::deque<StateId> todo;
    for (StateId s = 0; s < S; ++s)
      if (mark[s]) todo.push_back(s);
    while (!todo.empty()) {
      const StateId s = todo.front();
      todo.pop_front();
      for (StateId p : preds[s])
        if (!mark[p]) {
          mark[p] = true;
          todo.push_back(p);
        }
    }
    return mark;
  };
  const auto reaches_terminal = backward(m.terminal);
  std::vector<bool> stuck(S, false);
  for (StateId s = 0; s < S; ++s) stuck[s] = !reaches_terminal[s];
  return backward(stuck);
}

PolicyValues evaluate(const Model& m, const std::vector<ActionId>& policy, std::optional<StateId> from,
                      const std::vector<std::string>* names) {
  check_policy(m, policy);
  const std::size_t S = m.num_states();
  std::vector<bool> active(S, true);
  if (from) active = forward_reachable(m, policy, *from);

  const auto bad = improper_states(m, policy);
  std::vector<StateId> offending;
  for (StateId s = 0; s < S; ++s)
    if (active[s] && bad[s]) offending.push_back(s);
  if (!offending.empty()) {
    std::string list;
    for (std::size_t i = 0; i < offending.size() && i < 8; ++i)
      list += (i ? ", " : "") + (names ? (*names)[offending[i]] : std::to_string(offending[i]));
    if (offending.size() > 8) list += ", ...";
    throw ImproperPolicyError("policy does not terminate with probability 1 from " + list, std::move(offending));
  }

  std::vector<int> index(S, -1);
  std::vector<StateId> states;
  for (StateId s = 0; s < S; ++s)
    if (active[s] && !m.terminal[s]) {
      index[s] = static_cast<int>(states.size());
      states.push_back(s);
    }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  PolicyValues out{std::vector<double>(S, nan), std::vector<double>(S, nan)};
  for (StateId s = 0; s < S; ++s)
    if (m.terminal[s]) out.reward[s] = out.steps[s] = 0.0;
  if (states.empty()) return out;

  const auto n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd b(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const StateId s = states[static_cast<std::size_t>(i)];
    double r = 0.0;
    for (const auto& o : m.row(s, policy[s])) {
      r += o.prob * o.reward;
      if (index[o.next] >= 0) A(i, index[o.next]) -= o.prob;
    }
    b(i, 0) = r;
    b(i, 1) = 1.0;
  }
  const Eigen::MatrixXd x = A.partialPivLu().solve(b);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.reward[states[static_cast<std::size_t>(i)]] = x(i, 0);
    out.steps[states[static_cast<std::size_t>(i)]] = x(i, 1);
  }
  return out;
}

// Cascade of the n-step recursion, written independently of NseAgent.
ActionId cascade(const Model& m, const StateActionTable& q, const StateActionTable& r, const StateActionTable& t,
                 std::size_t n, StateId s) {
  std::vector<ActionId> set;
  for (ActionId a : m.actions[s])
    if (t(s, a) <= static_cast<double>(n)) set.push_back(a);
  if (set.empty()) {
    double lo = std::numeric_limits<double>::infinity();
    for (ActionId a : m.actions[s]) lo = std::min(lo, t(s, a));
    for (ActionId a : m.actions[s])
      if (t(s, a) == lo) set.push_back(a);
  }
  auto narrow = [&](const StateActionTable& tab, bool maximize) {
    double best = tab(s, set.front());
    for (ActionId a : set) best = maximize ? std::max(best, tab(s, a)) : std::min(best, tab(s, a));
    std::vector<ActionId> kept;
    for (ActionId a : set)
      if (tab(s, a) == best) kept.push_back(a);
    set = std::move(kept);
  };
  narrow(q, true);
  narrow(t, false);
  narrow(r, true);
  return *std::min_element(set.begin(), set.end());
}

std::vector<double> absorption(const Model& m, const std::vector<ActionId>& policy, StateId s0,
                               const std::vector<StateId>& terminals) {
  const std::size_t S = m.num_states();
  std::vector<double> probs(terminals.size(), 0.0);
  if (m.terminal[s0]) {
    for (std::size_t k = 0; k < terminals.size(); ++k)
      if (terminals[k] == s0) probs[k] = 1.0;
    return probs;
  }
  const auto reach = forward_reachable(m, policy, s0);
  const auto bad = improper_states(m, policy);
  // States that can still terminate; the others contribute nothing.
  std::vector<int> index(S, -1);
  std::vector<StateId> states;
  for (StateId s = 0; s < S; ++s) {
    if (!reach[s] || m.terminal[s]) continue;
    bool can_end = !bad[s];
    if (!can_end) {
      // An improper state may still terminate with positive probability.
      std::vector<bool> seen = forward_reachable(m, policy, s);
      for (StateId x = 0; x < S && !can_end; ++x) can_end = seen[x] && m.terminal[x];
    }
    if (can_end) {
      index[s] = static_cast<int>(states.size());
      states.push_back(s);
    }
  }
  if (index[s0] < 0) return probs;
  std::vector<int> tindex(S, -1);
  for (std::size_t k = 0; k < terminals.size(); ++k) tindex[terminals[k]] = static_cast<int>(k);

  const auto n = static_cast<Eigen::Index>(states.size());
  const auto K = static_cast<Eigen::Index>(terminals.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, K);
  for (Eigen::Index i = 0; i < n; ++i) {
    const StateId s = states[static_cast<std::size_t>(i)];
    for (const auto& o : m.row(s, policy[s])) {
      if (tindex[o.next] >= 0)
        b(i, tindex[o.next]) += o.prob;
      else if (index[o.next] >= 0)
        A(i, index[o.next]) -= o.prob;
    }
  }
  const Eigen::MatrixXd x = A.partialPivLu().solve(b);
  for (Eigen::Index k = 0; k < K; ++k) probs[static_cast<std::size_t>(k)] = x(index[s0], k);
  return probs;
}

}  // namespace

ValueIterationResult value_iteration_gamma(const TaMdp& env, double gamma, double tol, std::size_t cap) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("value_iteration_gamma: gamma must lie in (0, 1]");
  const std::size_t S = env.num_states();
  StateActionTable q(S, env.num_actions());
  std::vector<double> v(S, 0.0);
  for (std::size_t it = 1; it <= cap; ++it) {
    double delta = 0.0;
    StateActionTable next(S, env.num_actions());
    for (StateId s = 0; s < S; ++s) {
      for (ActionId a : env.actions(s)) {
        double x = 0.0;
        for (const auto& o : env.outcomes(s, a)) x += o.prob * (o.reward + gamma * v[o.next]);
        next(s, a) = x;
        delta = std::max(delta, std::abs(x - q(s, a)));
      }
    }
    q = std::move(next);
    for (StateId s = 0; s < S; ++s) {
      if (env.is_terminal(s)) continue;
      const auto acts = env.actions(s);
      double best = q(s, acts.front());
      for (ActionId a : acts) best = std::max(best, q(s, a));
      v[s] = best;
    }
    if (delta < tol) return {std::move(q), it};
  }
  throw ConvergenceError("value iteration did not converge within " + std::to_string(cap) + " sweeps (gamma " +
                         std::to_string(gamma) + ")");
}

std::vector<ActionId> greedy_policy(const TaMdp& env, const StateActionTable& q) {
  std::vector<ActionId> policy(env.num_states(), 0);
  for (StateId s = 0; s < env.num_states(); ++s) {
    if (env.is_terminal(s)) continue;
    const auto acts = env.actions(s);
    ActionId best = acts.front();
    for (ActionId a : acts)
      if (q(s, a) > q(s, best)) best = a;
    policy[s] = best;
  }
  return policy;
}

NStepTables n_step_dp(const TaMdp& env, std::size_t M, double tol, std::size_t cap) {
  if (M < 1) throw std::invalid_argument("n_step_dp: M must be >= 1");
  const Model m = model_of(env);
  const std::size_t S = env.num_states();
  const std::size_t A = env.num_actions();
  NStepTables out;

  // Horizon 1: q is the immediate reward, r and t a fixed point.
  StateActionTable q1(S, A), r1(S, A), t1(S, A);
  for (StateId s = 0; s < S; ++s)
    for (ActionId a : m.actions[s]) {
      double x = 0.0;
      for (const auto& o : m.row(s, a)) x += o.prob * o.reward;
      q1(s, a) = x;
    }
  bool converged = false;
  for (std::size_t it = 1; it <= cap; ++it) {
    std::vector<ActionId> best(S, 0);
    for (StateId s = 0; s < S; ++s)
      if (!m.terminal[s]) best[s] = cascade(m, q1, r1, t1, 1, s);
    StateActionTable r(S, A), t(S, A);
    double delta = 0.0;
    for (StateId s = 0; s < S; ++s)
      for (ActionId a : m.actions[s]) {
        double xr = 0.0;
        double xt = 0.0;
        for (const auto& o : m.row(s, a)) {
          const bool end = m.terminal[o.next];
          xr += o.prob * (o.reward + (end ? 0.0 : r1(o.next, best[o.next])));
          xt += o.prob * (1.0 + (end ? 0.0 : t1(o.next, best[o.next])));
        }
        r(s, a) = xr;
        t(s, a) = xt;
        delta = std::max({delta, std::abs(xr - r1(s, a)), std::abs(xt - t1(s, a))});
      }
    r1 = std::move(r);
    t1 = std::move(t);
    out.iterations = it;
    if (delta < tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("n_step_dp: horizon-1 tables did not converge within " + std::to_string(cap) + " sweeps");
  out.q.push_back(std::move(q1));
  out.r.push_back(std::move(r1));
  out.t.push_back(std::move(t1));

  for (std::size_t n = 2; n <= M; ++n) {
    const auto& pq = out.q.back();
    const auto& pr = out.r.back();
    const auto& pt = out.t.back();
    std::vector<ActionId> best(S, 0);
    for (StateId s = 0; s < S; ++s)
      if (!m.terminal[s]) best[s] = cascade(m, pq, pr, pt, n - 1, s);
    StateActionTable q(S, A), r(S, A), t(S, A);
    for (StateId s = 0; s < S; ++s)
      for (ActionId a : m.actions[s]) {
        double xq = 0.0;
        double xr = 0.0;
        double xt = 0.0;
        for (const auto& o : m.row(s, a)) {
          const bool end = m.terminal[o.next];
          const ActionId b = best[o.next];
          xq += o.prob * (o.reward + (end ? 0.0 : pq(o.next, b)));
          xr += o.prob * (o.reward + (end ? 0.0 : pr(o.next, b)));
          xt += o.prob * (1.0 + (end ? 0.0 : pt(o.next, b)));
        }
        q(s, a) = xq;
        r(s, a) = xr;
        t(s, a) = xt;
      }
    out.q.push_back(std::move(q));
    out.r.push_back(std::move(r));
    out.t.push_back(std::move(t));
  }
  return out;
}

ActionId n_step_greedy(const TaMdp& env, const NStepTables& tables, std::size_t n, StateId s) {
  if (n < 1 || n > tables.size()) throw std::out_of_range("n_step_greedy: horizon out of range");
  if (env.is_terminal(s)) throw std::invalid_argument("n_step_greedy: state is terminal");
  return cascade(model_of(env), tables.q[n - 1], tables.r[n - 1], tables.t[n - 1], n, s);
}

PolicyValues policy_eval(const TaMdp& env, const std::vector<ActionId>& policy, std::optional<StateId> from) {
  return evaluate(model_of(env), policy, from, &env.state_names());
}

bool dominates(const ParetoPoint& a, const ParetoPoint& b) {
  return a.expected_reward >= b.expected_reward && a.expected_steps <= b.expected_steps &&
         (a.expected_reward > b.expected_reward || a.expected_steps < b.expected_steps);
}

std::vector<ParetoPoint> non_dominated(std::vector<ParetoPoint> points) {
  std::vector<ParetoPoint> out;
  for (const auto& p : points) {
    const bool beaten = std::any_of(points.begin(), points.end(), [&](const ParetoPoint& q) { return dominates(q, p); });
    const bool repeated = std::any_of(out.begin(), out.end(), [&](const ParetoPoint& q) {
      return q.expected_reward == p.expected_reward && q.expected_steps == p.expected_steps;
    });
    if (!beaten && !repeated) out.push_back(p);
  }
  std::stable_sort(out.begin(), out.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    return a.expected_steps < b.expected_steps ||
           (a.expected_steps == b.expected_steps && a.expected_reward < b.expected_reward);
  });
  return out;
}

std::vector<ParetoPoint> goal_points(const TaMdp& env, StateId s0) {
  constexpr double tol = 1e-12;
  constexpr std::size_t cap = 100000;
  if (env.is_terminal(s0)) throw std::invalid_argument("goal_points: s0 is terminal");
  const Model base = model_of(env);
  const std::size_t S = base.num_states();
  std::vector<ParetoPoint> out;

  for (StateId g : env.terminals()) {
    // Other terminals become walls: their probability mass stays in s with the
    // smallest reward of the action's non-terminal outcomes (0 if none).
    Model m = base;
    for (StateId s = 0; s < S; ++s) {
      if (m.terminal[s]) continue;
      for (ActionId a : m.actions[s]) {
        auto& row = m.rows[std::size_t{s} * m.num_actions + a];
        double wall = std::numeric_limits<double>::infinity();
        for (const auto& o : row)
          if (!m.terminal[o.next]) wall = std::min(wall, o.reward);
        if (!std::isfinite(wall)) wall = 0.0;
        for (auto& o : row)
          if (m.terminal[o.next] && o.next != g) o = {s, o.prob, wall};
      }
    }

    // States that can reach g with probability 1, and the actions that keep
    // them inside that set.
    std::vector<bool> inside(S, true);
    std::vector<std::vector<ActionId>> allowed(S);
    for (bool changed = true; changed;) {
      changed = false;
      for (StateId s = 0; s < S; ++s) {
        allowed[s].clear();
        if (m.terminal[s] || !inside[s]) continue;
        for (ActionId a : m.actions[s]) {
          const auto& row = m.row(s, a);
          if (std::all_of(row.begin(), row.end(), [&](const Outcome& o) { return o.next == g || inside[o.next]; }))
            allowed[s].push_back(a);
        }
      }
      std::vector<bool> reach(S, false);
      reach[g] = true;
      for (bool grew = true; grew;) {
        grew = false;
        for (StateId s = 0; s < S; ++s) {
          if (reach[s]) continue;
          for (ActionId a : allowed[s]) {
            const auto& row = m.row(s, a);
            if (std::any_of(row.begin(), row.end(), [&](const Outcome& o) { return o.prob > 0.0 && reach[o.next]; })) {
              reach[s] = grew = true;
              break;
            }
          }
        }
      }
      for (StateId s = 0; s < S; ++s) {
        const bool keep = !m.terminal[s] && inside[s] && reach[s];
        if (!m.terminal[s] && keep != inside[s]) {
          inside[s] = keep;
          changed = true;
        }
      }
    }
    if (!inside[s0]) continue;

    // Undiscounted value iteration over the allowed actions.
    std::vector<double> v(S, 0.0);
    std::vector<ActionId> policy(S, 0);
    bool converged = false;
    for (std::size_t it = 0; it < cap && !converged; ++it) {
      double delta = 0.0;
      std::vector<double> nv(S, 0.0);
      for (StateId s = 0; s < S; ++s) {
        if (!inside[s]) continue;
        double best = -std::numeric_limits<double>::infinity();
        for (ActionId a : allowed[s]) {
          double x = 0.0;
          for (const auto& o : m.row(s, a)) x += o.prob * (o.reward + (o.next == g ? 0.0 : v[o.next]));
          if (x > best) {
            best = x;
            policy[s] = a;
          }
        }
        nv[s] = best;
        delta = std::max(delta, std::abs(best - v[s]));
      }
      v = std::move(nv);
      converged = delta < tol;
    }
    if (!converged) throw ConvergenceError("goal_points: value iteration for " + env.state_name(g) + " did not converge");

    // Outside states are never visited; give them any action.
    for (StateId s = 0; s < S; ++s)
      if (!m.terminal[s] && !inside[s]) policy[s] = m.actions[s].front();
    // Terminal g is the only exit of the restricted model.
    for (StateId s = 0; s < S; ++s) m.terminal[s] = (s == g);
    for (StateId t : env.terminals())
      if (t != g) m.actions[t] = {0};
    const PolicyValues pv = evaluate(m, policy, s0, &env.state_names());
    out.push_back({pv.reward[s0], pv.steps[s0], "goal:" + env.state_name(g), g});
  }
  return out;
}

std::vector<ParetoPoint> enumerate_policies(const TaMdp& env, StateId s0, std::size_t max_policies) {
  const Model m = model_of(env);
  std::vector<StateId> free;
  std::size_t count = 1;
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (m.terminal[s]) continue;
    free.push_back(s);
    if (count > max_policies / m.actions[s].size() + 1) throw Error("enumerate_policies: too many policies");
    count *= m.actions[s].size();
  }
  if (count > max_policies) throw Error("enumerate_policies: too many policies");

  std::vector<std::size_t> digit(free.size(), 0);
  std::vector<ActionId> policy(m.num_states(), 0);
  std::vector<ParetoPoint> out;
  for (std::size_t k = 0; k < count; ++k) {
    std::string id = "policy:";
    for (std::size_t i = 0; i < free.size(); ++i) {
      policy[free[i]] = m.actions[free[i]][digit[i]];
      id += (i ? "," : "") + env.action_name(policy[free[i]]);
    }
    try {
      const PolicyValues pv = evaluate(m, policy, s0, nullptr);
      const auto probs = absorption(m, policy, s0, env.terminals());
      const auto it = std::max_element(probs.begin(), probs.end());
      out.push_back({pv.reward[s0], pv.steps[s0], id, env.terminals()[static_cast<std::size_t>(it - probs.begin())]});
    } catch (const ImproperPolicyError&) {
    }
    for (std::size_t i = 0; i < free.size(); ++i) {
      if (++digit[i] < m.actions[free[i]].size()) break;
      digit[i] = 0;
    }
  }
  return out;
}

std::vector<ParetoPoint> pareto_front(const TaMdp& env, StateId s0, const ParetoOptions& options) {
  ParetoMethod method = options.method;
  if (method == ParetoMethod::Auto) {
    const std::size_t free = env.num_states() - env.terminals().size();
    method = free <= options.exhaustive_max_states ? ParetoMethod::Exhaustive : ParetoMethod::PerGoal;
  }
  if (method == ParetoMethod::Exhaustive) return non_dominated(enumerate_policies(env, s0, options.max_policies));
  return non_dominated(goal_points(env, s0));
}

std::vector<double> absorption_probabilities(const TaMdp& env, const std::vector<ActionId>& policy, StateId s0) {
  const Model m = model_of(env);
  check_policy(m, policy);
  return absorption(m, policy, s0, env.terminals());
}

std::vector<SweepEntry> gamma_sweep(const TaMdp& env, const std::vector<double>& gammas, StateId s0, double tol) {
  const Model m = model_of(env);
  std::vector<SweepEntry> out;
  for (double gamma : gammas) {
    SweepEntry e;
    e.gamma = gamma;
    e.policy = greedy_policy(env, value_iteration_gamma(env, gamma, tol).q);
    const auto probs = absorption(m, e.policy, s0, env.terminals());
    const auto it = std::max_element(probs.begin(), probs.end());
    e.goal = env.terminals()[static_cast<std::size_t>(it - probs.begin())];
    e.goal_prob = *it;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace tamdp
