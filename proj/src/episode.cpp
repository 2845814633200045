#include "tamdp/episode.hpp"

#include <algorithm>
#include <stdexcept>

namespace tamdp {

Agent::Agent(double alpha, double epsilon) {
  set_alpha(alpha);
  set_epsilon(epsilon);
}

void Agent::set_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("learning rate must lie in [0, 1]");
  alpha_ = alpha;
}

void Agent::set_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("exploration rate must lie in [0, 1]");
  epsilon_ = epsilon;
}

ActionId random_action(std::span<const ActionId> actions, Rng& rng) {
  if (actions.empty()) throw std::invalid_argument("random_action: no actions available");
  std::uniform_int_distribution<std::size_t> pick(0, actions.size() - 1);
  return actions[pick(rng)];
}

ActionId argmax_action(std::span<const double> row, std::span<const ActionId> actions, Rng& rng) {
  if (actions.empty()) throw std::invalid_argument("argmax_action: no actions available");
  const double best = max_value(row, actions);
  std::size_t ties = 0;
  ActionId chosen = actions.front();
  // Reservoir sampling over the tied actions keeps a single pass.
  for (ActionId a : actions) {
    if (row[a] != best) continue;
    ++ties;
    if (ties == 1 || std::uniform_int_distribution<std::size_t>(0, ties - 1)(rng) == 0) chosen = a;
  }
  return chosen;
}

double max_value(std::span<const double> row, std::span<const ActionId> actions) {
  if (actions.empty()) throw std::invalid_argument("max_value: no actions available");
  double best = row[actions.front()];
  for (ActionId a : actions) best = std::max(best, row[a]);
  return best;
}

EnvShape EnvShape::of(const TaMdp& env) {
  EnvShape shape;
  shape.num_actions = env.num_actions();
  shape.actions.resize(env.num_states());
  shape.terminal.resize(env.num_states());
  for (StateId s = 0; s < env.num_states(); ++s) {
    const auto acts = env.actions(s);
    shape.actions[s].assign(acts.begin(), acts.end());
    shape.terminal[s] = env.is_terminal(s);
  }
  return shape;
}

EpisodeTrace run_episode(Agent& agent, const TaMdp& env, const Objective& f, std::size_t objective_index, Rng& rng,
                         const EpisodeOptions& options) {
  if (options.max_steps < 1) throw std::invalid_argument("run_episode: max_steps must be >= 1");

  EpisodeTrace trace;
  StateId s = env.start_state();
  agent.begin_episode({s, &f, objective_index});

  for (std::int64_t t = 0; t < options.max_steps; ++t) {
    const ActionId a = agent.act(s, rng);
    const StepResult res = env.step(s, a, rng);
    trace.total_reward += res.reward;
    trace.length = t + 1;
    if (options.record_steps) trace.steps.push_back({s, a, res.reward});
    agent.observe({s, a, res.reward, res.next, res.terminal, t, trace.total_reward});
    s = res.next;
    if (res.terminal) {
      trace.terminated = true;
      break;
    }
  }
  agent.end_episode();
  trace.final_state = s;
  trace.outcome = evaluate_objective(f, trace.total_reward, trace.length);
  return trace;
}

}  // namespace tamdp
