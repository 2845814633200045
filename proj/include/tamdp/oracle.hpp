#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tamdp/mdp.hpp"
#include "tamdp/types.hpp"

namespace tamdp {

/// An iteration did not reach its tolerance within the cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A policy does not reach a terminal with probability 1 from some states.
class ImproperPolicyError : public Error {
 public:
  ImproperPolicyError(const std::string& what, std::vector<StateId> states)
      : Error(what), states_(std::move(states)) {}
  const std::vector<StateId>& states() const { return states_; }

 private:
  std::vector<StateId> states_;
};

struct ValueIterationResult {
  StateActionTable q;
  std::size_t iterations = 0;
};

/// Optimal discounted Q-values (sup-norm change below tol). Unavailable
/// actions and terminal rows stay 0. Throws ConvergenceError after `cap`
/// sweeps, which is what gamma = 1 on an MDP with reward cycles gives.
ValueIterationResult value_iteration_gamma(const TaMdp& env, double gamma, double tol = 1e-8,
                                           std::size_t cap = 100000);

/// Greedy policy of a Q-table; ties go to the lowest action id. Terminal
/// entries are 0.
std::vector<ActionId> greedy_policy(const TaMdp& env, const StateActionTable& q);

/// Tables of the n-step recursion for n = 1..M (index n - 1).
struct NStepTables {
  std::vector<StateActionTable> q;
  std::vector<StateActionTable> r;
  std::vector<StateActionTable> t;
  /// Sweeps needed by the horizon-1 fixed point.
  std::size_t iterations = 0;

  std::size_t size() const { return q.size(); }
};

/// Horizon-1 tables by fixed-point iteration (q is the expected immediate
/// reward, r and t follow the horizon-1 greedy action of the successor), then
/// horizons 2..M by backward induction on the greedy action of horizon n - 1.
NStepTables n_step_dp(const TaMdp& env, std::size_t M, double tol = 1e-12, std::size_t cap = 100000);

/// Greedy action of horizon n (1-based) in the n-step tables; ties go to the
/// lowest action id.
ActionId n_step_greedy(const TaMdp& env, const NStepTables& tables, std::size_t n, StateId s);

/// Expected total reward and length until termination under a policy.
struct PolicyValues {
  std::vector<double> reward;
  std::vector<double> steps;
};

/// Solves the linear expectation equations over non-terminal states.
/// Without `from`, every non-terminal state must reach a terminal with
/// probability 1; otherwise ImproperPolicyError names the offending states.
/// With `from`, only states reachable from it under the policy are checked
/// and evaluated; the rest are NaN.
PolicyValues policy_eval(const TaMdp& env, const std::vector<ActionId>& policy,
                         std::optional<StateId> from = std::nullopt);

struct ParetoPoint {
  double expected_reward = 0.0;
  double expected_steps = 0.0;
  std::string policy_id;
  /// Terminal the policy was built for (per-goal candidates) or the most
  /// likely terminal (enumerated policies).
  StateId goal = 0;
};

/// True when a has reward >= and steps <= those of b with one strict.
bool dominates(const ParetoPoint& a, const ParetoPoint& b);
/// Non-dominated subset, with duplicate (reward, steps) pairs kept once.
/// Sorted by expected steps.
std::vector<ParetoPoint> non_dominated(std::vector<ParetoPoint> points);

enum class ParetoMethod { Auto, Exhaustive, PerGoal };

struct ParetoOptions {
  ParetoMethod method = ParetoMethod::Auto;
  /// Auto uses exhaustive enumeration up to this many non-terminal states.
  std::size_t exhaustive_max_states = 12;
  /// Exhaustive enumeration refuses MDPs with more deterministic policies.
  std::size_t max_policies = 2'000'000;
};

/// Per terminal g: the policy with the largest expected reward among those
/// that reach g, computed on the MDP where every other terminal is a wall
/// (its probability mass stays in place). Goals that cannot be reached with
/// probability 1 from s0 are skipped. Intended for MDPs whose cycles have
/// negative reward, like the grids.
std::vector<ParetoPoint> goal_points(const TaMdp& env, StateId s0);

/// Evaluation at s0 of every proper deterministic stationary policy.
std::vector<ParetoPoint> enumerate_policies(const TaMdp& env, StateId s0, std::size_t max_policies);

/// Non-dominated (E[R], E[T]) pairs from s0.
std::vector<ParetoPoint> pareto_front(const TaMdp& env, StateId s0, const ParetoOptions& options = {});

/// Probability of ending in each terminal (same order as env.terminals())
/// when following `policy` from s0. Mass that never terminates is missing.
std::vector<double> absorption_probabilities(const TaMdp& env, const std::vector<ActionId>& policy, StateId s0);

struct SweepEntry {
  double gamma = 0.0;
  std::vector<ActionId> policy;
  /// Most likely terminal of the greedy policy from s0 and its probability
  /// (probability 0 when the policy never terminates).
  StateId goal = 0;
  double goal_prob = 0.0;
};

/// Value iteration for every discount factor.
std::vector<SweepEntry> gamma_sweep(const TaMdp& env, const std::vector<double>& gammas, StateId s0,
                                    double tol = 1e-8);

}  // namespace tamdp
