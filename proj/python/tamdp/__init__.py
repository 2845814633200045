"""Python front end of the tamdp C++ library.

Arrays come back as numpy arrays; structured results as plain dicts.
"""

import json as _json

from . import _tamdp
from ._tamdp import (
    Agent,
    IgeAgent,
    NseAgent,
    Objective,
    Rng,
    TaMdp,
    TamdpError,
    TimeQAgent,
    agent_from_json,
    benchmark_objectives,
    gamma_ladder,
    load_agent,
    load_env,
    n_step_dp,
    objective,
    policy_eval,
    run_episode,
    value_iteration,
)

__all__ = [
    "Agent", "IgeAgent", "NseAgent", "Objective", "Rng", "TaMdp", "TamdpError", "TimeQAgent",
    "agent_from_json", "benchmark_objectives", "default_config", "evaluate_agent", "gamma_ladder",
    "gamma_sweep", "load_agent", "load_env", "n_step_dp", "objective", "pareto_front",
    "paper_grid_spec", "policy_eval", "render_grid", "run_benchmark", "run_episode", "value_iteration",
]


def paper_grid_spec():
    """Grid description of the default benchmark environment."""
    return _json.loads(_tamdp.paper_grid_json())


def render_grid(spec):
    return _tamdp.render_grid(_json.dumps(spec))


def pareto_front(env, method="auto"):
    """Non-dominated (expected reward, expected steps) points from the start state."""
    return _json.loads(_tamdp.pareto_front(env, method))


def gamma_sweep(env, gammas=None):
    return _json.loads(_tamdp.gamma_sweep(env, gamma_ladder() if gammas is None else list(gammas)))


def evaluate_agent(agent, env, objective, episodes=100, seed=1, max_steps=1000):
    return _json.loads(_tamdp.evaluate_agent(agent, env, objective, episodes, seed, max_steps))


def default_config(preset="desk"):
    return _json.loads(_tamdp.default_config(preset))


def run_benchmark(config=None, out_dir=None, **overrides):
    """Runs the multi-phase benchmark.

    `config` is a dict with the keys of the JSON config file; keyword
    arguments override it. Returns a dict with per-run outcomes (runs x
    episodes array) and the mean and std curves across runs.
    """
    cfg = dict(config or {})
    cfg.update(overrides)
    res = _tamdp.run_benchmark(_json.dumps(cfg), out_dir or "")
    res["config"] = _json.loads(res["config"])
    return res
