// pybind11 surface of the library. Structured values cross the boundary as
// JSON text (the Python package turns them into dicts) or numpy arrays.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "tamdp/benchmark.hpp"
#include "tamdp/env_io.hpp"
#include "tamdp/environments.hpp"
#include "tamdp/episode.hpp"
#include "tamdp/ige.hpp"
#include "tamdp/nse.hpp"
#include "tamdp/oracle.hpp"
#include "tamdp/snapshot.hpp"
#include "tamdp/time_q.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace tamdp;

namespace {

py::array_t<double> table_array(const StateActionTable& t) {
  py::array_t<double> out({t.num_states(), t.num_actions()});
  std::copy(t.values().begin(), t.values().end(), out.mutable_data());
  return out;
}

py::array_t<double> stacked(const std::vector<StateActionTable>& ts) {
  const std::size_t S = ts.empty() ? 0 : ts[0].num_states();
  const std::size_t A = ts.empty() ? 0 : ts[0].num_actions();
  py::array_t<double> out({ts.size(), S, A});
  double* p = out.mutable_data();
  for (const auto& t : ts) p = std::copy(t.values().begin(), t.values().end(), p);
  return out;
}

Objective objective_arg(const py::object& f) {
  if (py::isinstance<Objective>(f)) return f.cast<Objective>();
  const auto name = f.cast<std::string>();
  auto o = named_objective(name);
  if (!o) throw Error("unknown objective '" + name + "'");
  return *o;
}

std::size_t objective_index(const TaMdp& env, const Objective& f) {
  for (std::size_t i = 0; i < env.objectives().size(); ++i)
    if (env.objectives()[i].name == f.name) return i;
  return 0;
}

json point_json(const TaMdp& env, const ParetoPoint& p) {
  return {{"expected_reward", p.expected_reward},
          {"expected_steps", p.expected_steps},
          {"policy_id", p.policy_id},
          {"goal", env.state_name(p.goal)}};
}

BenchmarkConfig config_arg(const std::string& text) {
  const json j = json::parse(text);
  BenchmarkConfig c;
  apply_config_json(c, j);
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_tamdp, m) {
  m.doc() = "Time-adaptive MDP agents, environments and exact oracles";

  py::register_exception<Error>(m, "TamdpError", PyExc_ValueError);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("__call__", [](Rng& r) { return r(); });

  // Objectives.
  py::class_<Objective>(m, "Objective")
      .def_readonly("name", &Objective::name)
      .def_property_readonly("kind", [](const Objective& f) { return std::string(to_string(f.kind)); })
      .def_readonly("threshold", &Objective::threshold)
      .def_readonly("base", &Objective::base)
      .def_readonly("penalty", &Objective::penalty)
      .def("__call__", &evaluate_objective, py::arg("total_reward"), py::arg("steps"))
      .def("expected", &expected_outcome, py::arg("expected_reward"), py::arg("expected_steps"))
      .def("__repr__", [](const Objective& f) { return "<Objective " + f.name + ">"; })
      .def("to_json", [](const Objective& f) { return json(f).dump(); })
      .def_static("from_json", [](const std::string& text) { return json::parse(text).get<Objective>(); });
  m.def("benchmark_objectives", &benchmark_objectives);
  m.def("objective", [](const std::string& name) { return objective_arg(py::str(name)); }, py::arg("name"));

  // Environments.
  py::class_<TaMdp>(m, "TaMdp")
      .def_property_readonly("name", &TaMdp::name)
      .def_property_readonly("num_states", &TaMdp::num_states)
      .def_property_readonly("num_actions", &TaMdp::num_actions)
      .def_property_readonly("start_state", &TaMdp::start_state)
      .def_property_readonly("state_names", &TaMdp::state_names)
      .def_property_readonly("action_names", &TaMdp::action_names)
      .def_property_readonly("terminals", &TaMdp::terminals)
      .def_property_readonly("objectives", &TaMdp::objectives)
      .def("is_terminal", &TaMdp::is_terminal, py::arg("state"))
      .def("actions", [](const TaMdp& e, StateId s) { auto a = e.actions(s); return std::vector<ActionId>(a.begin(), a.end()); },
           py::arg("state"))
      .def("outcomes",
           [](const TaMdp& e, StateId s, ActionId a) {
             std::vector<std::tuple<StateId, double, double>> out;
             for (const auto& o : e.outcomes(s, a)) out.emplace_back(o.next, o.prob, o.reward);
             return out;
           },
           py::arg("state"), py::arg("action"))
      .def("state_id", &TaMdp::state_id, py::arg("name"))
      .def("action_id", &TaMdp::action_id, py::arg("name"))
      .def("step",
           [](const TaMdp& e, StateId s, ActionId a, Rng& rng) {
             const auto r = e.step(s, a, rng);
             return std::make_tuple(r.next, r.reward, r.terminal);
           },
           py::arg("state"), py::arg("action"), py::arg("rng"))
      .def("with_start", &TaMdp::with_start, py::arg("state"))
      .def("to_json", [](const TaMdp& e) { return mdp_to_json(e).dump(); })
      .def_static("from_json", [](const std::string& text) { return env_from_json(json::parse(text)).mdp; });

  m.def("load_env", [](const std::string& name_or_path) { return resolve_env(name_or_path).mdp; },
        py::arg("name_or_path"), "paper_grid, circular or a JSON spec file");
  m.def("paper_grid_json", [] { return grid_to_json(paper_grid_spec()).dump(); });
  m.def("grid_from_json", [](const std::string& text) { return build_grid(grid_from_json(json::parse(text))); });
  m.def("render_grid", [](const std::string& text) { return render_grid(grid_from_json(json::parse(text))); });

  // Agents.
  py::class_<Agent, std::shared_ptr<Agent>>(m, "Agent")
      .def_property("alpha", &Agent::alpha, &Agent::set_alpha)
      .def_property("epsilon", &Agent::epsilon, &Agent::set_epsilon)
      .def_property("learning", &Agent::learning, &Agent::set_learning)
      .def_property_readonly("algo", [](const Agent& a) { return algo_name(a); })
      .def("act", &Agent::act, py::arg("state"), py::arg("rng"))
      .def("to_json", [](const Agent& a) { return agent_to_json(a).dump(); })
      .def("save", [](const Agent& a, const std::string& path) { save_agent(path, a); }, py::arg("path"));

  py::class_<IgeAgent, Agent, std::shared_ptr<IgeAgent>>(m, "IgeAgent")
      .def(py::init<const TaMdp&, std::vector<double>, double, double>(), py::arg("env"),
           py::arg("gammas") = gamma_ladder(), py::arg("alpha") = 1.0, py::arg("epsilon") = 0.0)
      .def_property_readonly("gammas",
                             [](const IgeAgent& a) {
                               std::vector<double> g;
                               for (const auto& mod : a.modules()) g.push_back(mod.gamma);
                               return g;
                             })
      .def("q", [](const IgeAgent& a, std::size_t i) { return table_array(a.modules().at(i).q); }, py::arg("module"))
      .def("expected_reward", [](const IgeAgent& a, std::size_t i) { return a.modules().at(i).r_exp; },
           py::arg("module"))
      .def("expected_steps", [](const IgeAgent& a, std::size_t i) { return a.modules().at(i).t_exp; },
           py::arg("module"))
      .def("select_module",
           [](IgeAgent& a, StateId s0, const py::object& f) { return a.select_module(s0, objective_arg(f)); },
           py::arg("s0"), py::arg("objective"))
      .def_property_readonly("active_module", &IgeAgent::active_module);

  py::class_<NseAgent, Agent, std::shared_ptr<NseAgent>>(m, "NseAgent")
      .def(py::init<const TaMdp&, std::size_t, double, double>(), py::arg("env"), py::arg("modules") = 20,
           py::arg("alpha") = 1.0, py::arg("epsilon") = 0.0)
      .def_property_readonly("num_modules", &NseAgent::num_modules)
      .def("q", [](const NseAgent& a, std::size_t n) { return table_array(a.module(n).q); }, py::arg("n"))
      .def("r", [](const NseAgent& a, std::size_t n) { return table_array(a.module(n).r); }, py::arg("n"))
      .def("t", [](const NseAgent& a, std::size_t n) { return table_array(a.module(n).t); }, py::arg("n"))
      .def("greedy_action", py::overload_cast<std::size_t, StateId>(&NseAgent::greedy_action, py::const_),
           py::arg("n"), py::arg("state"))
      .def("select_module",
           [](NseAgent& a, StateId s0, const py::object& f) { return a.select_module(s0, objective_arg(f)); },
           py::arg("s0"), py::arg("objective"))
      .def_property_readonly("active_module", &NseAgent::active_module);

  py::class_<TimeQAgent, Agent, std::shared_ptr<TimeQAgent>>(m, "TimeQAgent")
      .def(py::init<const TaMdp&, std::size_t, double, std::int64_t, double, double>(), py::arg("env"),
           py::arg("num_objectives") = 9, py::arg("gamma") = 0.99, py::arg("t_max") = 1000, py::arg("alpha") = 1.0,
           py::arg("epsilon") = 0.0)
      .def("q", &TimeQAgent::q, py::arg("k"), py::arg("t"), py::arg("state"), py::arg("action"));

  m.def("load_agent", [](const std::string& path) { return std::shared_ptr<Agent>(load_agent(path)); },
        py::arg("path"));
  m.def("agent_from_json", [](const std::string& text) { return std::shared_ptr<Agent>(agent_from_json(json::parse(text))); },
        py::arg("text"));

  m.def(
      "run_episode",
      [](Agent& agent, const TaMdp& env, const py::object& f, Rng& rng, std::int64_t max_steps, bool record) {
        const Objective obj = objective_arg(f);
        const auto tr = run_episode(agent, env, obj, objective_index(env, obj), rng, {max_steps, record});
        py::list steps;
        for (const auto& s : tr.steps) steps.append(py::make_tuple(s.state, s.action, s.reward));
        py::dict d;
        d["total_reward"] = tr.total_reward;
        d["length"] = tr.length;
        d["outcome"] = tr.outcome;
        d["terminated"] = tr.terminated;
        d["final_state"] = tr.final_state;
        d["steps"] = steps;
        return d;
      },
      py::arg("agent"), py::arg("env"), py::arg("objective"), py::arg("rng"), py::arg("max_steps") = 1000,
      py::arg("record_steps") = false);

  m.def(
      "evaluate_agent",
      [](Agent& agent, const TaMdp& env, const py::object& f, std::size_t episodes, std::uint64_t seed,
         std::int64_t max_steps) {
        const Objective obj = objective_arg(f);
        const auto st = evaluate_agent(agent, env, obj, objective_index(env, obj), episodes, seed, max_steps);
        return json{{"episodes", st.episodes},       {"mean", st.mean},
                    {"std", st.std},                 {"min", st.min},
                    {"max", st.max},                 {"mean_reward", st.mean_reward},
                    {"mean_length", st.mean_length}, {"truncated", st.truncated}}
            .dump();
      },
      py::arg("agent"), py::arg("env"), py::arg("objective"), py::arg("episodes") = 100, py::arg("seed") = 1,
      py::arg("max_steps") = 1000);

  // Oracles.
  m.def("gamma_ladder", &gamma_ladder, py::arg("base_count") = 14, py::arg("fill") = 2);
  m.def(
      "value_iteration",
      [](const TaMdp& env, double gamma, double tol) {
        const auto r = value_iteration_gamma(env, gamma, tol);
        return py::make_tuple(table_array(r.q), r.iterations);
      },
      py::arg("env"), py::arg("gamma"), py::arg("tol") = 1e-8);
  m.def(
      "n_step_dp",
      [](const TaMdp& env, std::size_t M) {
        const auto t = n_step_dp(env, M);
        py::dict d;
        d["q"] = stacked(t.q);
        d["r"] = stacked(t.r);
        d["t"] = stacked(t.t);
        d["iterations"] = t.iterations;
        std::vector<ActionId> greedy;
        for (std::size_t n = 1; n <= t.size(); ++n) greedy.push_back(n_step_greedy(env, t, n, env.start_state()));
        d["greedy_at_start"] = greedy;
        return d;
      },
      py::arg("env"), py::arg("modules") = 20);
  m.def(
      "policy_eval",
      [](const TaMdp& env, const std::vector<ActionId>& policy, std::optional<StateId> from) {
        const auto v = policy_eval(env, policy, from);
        return py::make_tuple(v.reward, v.steps);
      },
      py::arg("env"), py::arg("policy"), py::arg("start") = py::none());
  m.def(
      "pareto_front",
      [](const TaMdp& env, const std::string& method) {
        ParetoOptions o;
        if (method == "exhaustive")
          o.method = ParetoMethod::Exhaustive;
        else if (method == "per_goal")
          o.method = ParetoMethod::PerGoal;
        else if (method != "auto")
          throw Error("method must be auto, exhaustive or per_goal");
        json out = json::array();
        for (const auto& p : pareto_front(env, env.start_state(), o)) out.push_back(point_json(env, p));
        return out.dump();
      },
      py::arg("env"), py::arg("method") = "auto");
  m.def(
      "gamma_sweep",
      [](const TaMdp& env, const std::vector<double>& gammas) {
        json out = json::array();
        for (const auto& e : gamma_sweep(env, gammas, env.start_state()))
          out.push_back({{"gamma", e.gamma}, {"goal", env.state_name(e.goal)}, {"goal_prob", e.goal_prob}});
        return out.dump();
      },
      py::arg("env"), py::arg("gammas"));

  // Benchmark.
  m.def("default_config", [](const std::string& preset) { return config_to_json(preset_config(preset)).dump(); },
        py::arg("preset") = "desk");
  m.def(
      "run_benchmark",
      [](const std::string& config_text, const std::string& out_dir) {
        const BenchmarkConfig c = config_arg(config_text);
        const TaMdp env = resolve_env(c.env).mdp;
        RunResults res;
        {
          py::gil_scoped_release release;
          res = run_benchmark(c, env);
          if (!out_dir.empty()) write_results(out_dir, res, c.clip);
        }
        const auto curve = aggregate(res, c.clip);
        const std::size_t E = c.total_episodes();
        py::array_t<double> outcomes({res.runs.size(), E});
        double* p = outcomes.mutable_data();
        for (const auto& r : res.runs) p = std::copy(r.outcome.begin(), r.outcome.end(), p);
        std::vector<double> mean, sd;
        for (const auto& cp : curve) {
          mean.push_back(cp.mean);
          sd.push_back(cp.std);
        }
        py::dict d;
        d["config"] = config_to_json(res.config).dump();
        d["config_hash"] = res.config_hash;
        d["seeds"] = res.seeds;
        d["outcomes"] = outcomes;
        d["mean"] = mean;
        d["std"] = sd;
        return d;
      },
      py::arg("config"), py::arg("out_dir") = "");
}
