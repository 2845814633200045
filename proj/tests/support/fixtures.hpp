#pragma once

// Shared helpers for the unit, property and acceptance binaries.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tamdp/environments.hpp"
#include "tamdp/episode.hpp"
#include "tamdp/ige.hpp"
#include "tamdp/mdp.hpp"
#include "tamdp/nse.hpp"
#include "tamdp/oracle.hpp"

namespace tamdp::testing {

// Circular MDP tables for horizons 1..4, columns
// (s_a,a_L) (s_b,a_a) (s_b,a_b) (s_b,a_c) (s_c,a_R).
struct CircularRow {
  std::array<double, 5> q, r, t;
};

inline const std::array<CircularRow, 4>& circular_tables() {
  static const std::array<CircularRow, 4> rows{{
      {{0, 0, 2, 0, 1}, {0, 0, 3, 1, 1}, {1, 2, 3, 2, 1}},
      {{0, 0, 2, 1, 1}, {0, 0, 3, 1, 1}, {1, 2, 3, 2, 1}},
      {{0, 0, 3, 1, 1}, {0, 0, 3, 1, 1}, {1, 2, 3, 2, 1}},
      {{0, 0, 5, 1, 1}, {0, 0, 5, 1, 1}, {1, 2, 4, 2, 1}},
  }};
  return rows;
}

struct Cellref {
  const char* state;
  const char* action;
};

inline constexpr std::array<Cellref, 5> kCircularCells{
    {{"s_a", "a_L"}, {"s_b", "a_a"}, {"s_b", "a_b"}, {"s_b", "a_c"}, {"s_c", "a_R"}}};

// Line s0 -> s1 -> ... -> terminal with the given rewards, one action per state.
inline TaMdp chain(const std::vector<double>& rewards) {
  const std::size_t n = rewards.size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i <= n; ++i) names.push_back("s" + std::to_string(i));
  TaMdpBuilder b(names, {"go"});
  b.name("chain").start(0).terminal(static_cast<StateId>(n));
  for (std::size_t i = 0; i < n; ++i)
    b.transition(static_cast<StateId>(i), 0, {{static_cast<StateId>(i + 1), 1.0, rewards[i]}});
  return b.build();
}

// Deterministic MDP with at most 8 states and 3 actions. Action 0 of state i
// moves to a higher-numbered state, so every state can reach a terminal.
inline TaMdp random_deterministic_mdp(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int terminals = uni(1, 2);
  const int live = uni(2, 8 - terminals);
  const int S = live + terminals;
  const int A = uni(1, 3);
  std::vector<std::string> states, actions;
  for (int i = 0; i < S; ++i) states.push_back("s" + std::to_string(i));
  for (int a = 0; a < A; ++a) actions.push_back("a" + std::to_string(a));
  TaMdpBuilder b(states, actions);
  b.name("random").start(0);
  for (int g = live; g < S; ++g) b.terminal(static_cast<StateId>(g));
  auto reward = [&] { return uni(-8, 8) * 0.25; };
  for (int s = 0; s < live; ++s) {
    b.transition(static_cast<StateId>(s), 0, {{static_cast<StateId>(uni(s + 1, S - 1)), 1.0, reward()}});
    for (int a = 1; a < A; ++a)
      if (uni(0, 3) > 0) b.transition(static_cast<StateId>(s), static_cast<ActionId>(a),
                                      {{static_cast<StateId>(uni(0, S - 1)), 1.0, reward()}});
  }
  return b.build();
}

// One synchronous sweep of agent.update over every available (s, a). The
// environments passed here are deterministic.
template <class AgentT>
void sweep(AgentT& agent, const TaMdp& env) {
  Rng rng(0);
  for (StateId s = 0; s < env.num_states(); ++s) {
    if (env.is_terminal(s)) continue;
    for (ActionId a : env.actions(s)) {
      const auto o = env.outcomes(s, a).front();
      agent.update(s, a, o.reward, o.next, env.is_terminal(o.next));
    }
  }
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Trains with exploring episodes started round-robin from every non-terminal
// state until 25 batches in a row move the snapshot by at most tol
// (tol 0: not at all). Returns the number of batches used.
template <class AgentT, class Snapshot>
std::size_t train_until_stable(AgentT& agent, const TaMdp& env, Snapshot tables, std::uint64_t seed,
                               double tol = 0.0, std::size_t max_batches = 5000, std::int64_t max_steps = 40) {
  Rng rng(seed);
  std::vector<TaMdp> starts;
  for (StateId s = 0; s < env.num_states(); ++s)
    if (!env.is_terminal(s)) starts.push_back(env.with_start(s));
  const Objective f = Objective::total_reward();
  EpisodeOptions opt;
  opt.max_steps = max_steps;
  opt.record_steps = false;
  std::size_t stable = 0;
  for (std::size_t batch = 0; batch < max_batches; ++batch) {
    const auto before = tables(agent);
    for (int rep = 0; rep < 4; ++rep)
      for (const auto& e : starts) run_episode(agent, e, f, 0, rng, opt);
    const auto after = tables(agent);
    if (tol == 0.0 ? after == before : max_abs_diff(after, before) <= tol) {
      if (++stable == 25) return batch + 1;
    } else {
      stable = 0;
    }
  }
  return max_batches;
}

inline std::vector<double> nse_tables(const NseAgent& a) {
  std::vector<double> v;
  for (const auto& m : a.modules())
    for (const auto* tab : {&m.q, &m.r, &m.t}) v.insert(v.end(), tab->values().begin(), tab->values().end());
  return v;
}

// Only the q-tables: r_exp and t_exp grow without bound on greedy cycles.
inline std::vector<double> ige_q_tables(const IgeAgent& a) {
  std::vector<double> v;
  for (const auto& m : a.modules()) v.insert(v.end(), m.q.values().begin(), m.q.values().end());
  return v;
}

// Follows the greedy policy of a Q-table from s; true if it reaches a terminal.
inline bool greedy_reaches_terminal(const TaMdp& env, const StateActionTable& q, StateId s) {
  const auto pi = greedy_policy(env, q);
  for (std::size_t i = 0; i <= env.num_states(); ++i) {
    if (env.is_terminal(s)) return true;
    s = env.outcomes(s, pi[s]).front().next;
  }
  return false;
}

}  // namespace tamdp::testing
