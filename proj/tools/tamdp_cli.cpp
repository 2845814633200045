// tamdp: benchmark, training, evaluation, oracle and plotting front end.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tamdp/benchmark.hpp"
#include "tamdp/env_io.hpp"
#include "tamdp/ige.hpp"
#include "tamdp/nse.hpp"
#include "tamdp/oracle.hpp"
#include "tamdp/snapshot.hpp"
#include "tamdp/svg_plot.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tamdp;

namespace {

// Flags shared by bench and train. Only flags given on the command line
// override the preset and the config file.
struct RunFlags {
  std::string config;
  std::string preset;
  std::string env;
  std::string algo;
  std::string phases;
  std::size_t runs = 0;
  std::size_t episodes = 0;
  std::uint64_t seed = 0;
  std::size_t modules = 0;
  std::size_t gamma_base = 0;
  std::size_t gamma_fill = 0;
  std::size_t workers = 0;
  std::int64_t max_steps = 0;
  double clip = 0.0;
  std::string out;
  CLI::Option* o_env = nullptr;
  CLI::Option* o_algo = nullptr;
  CLI::Option* o_phases = nullptr;
  CLI::Option* o_runs = nullptr;
  CLI::Option* o_episodes = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_modules = nullptr;
  CLI::Option* o_gamma_base = nullptr;
  CLI::Option* o_gamma_fill = nullptr;
  CLI::Option* o_workers = nullptr;
  CLI::Option* o_max_steps = nullptr;
  CLI::Option* o_clip = nullptr;
  CLI::Option* o_out = nullptr;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--config", f.config, "JSON config file");
  app->add_option("--preset", f.preset, "desk (10 runs x 1500 episodes/phase) or paper (100 x 6000)")
      ->check(CLI::IsMember({"desk", "paper"}));
  f.o_env = app->add_option("--env", f.env, "paper_grid, circular or a spec file");
  f.o_algo = app->add_option("--algo", f.algo, "ige, nse or tqlearn")->check(CLI::IsMember({"ige", "nse", "tqlearn"}));
  f.o_phases = app->add_option("--phases", f.phases, "comma separated objective names, e.g. f1,f4");
  f.o_runs = app->add_option("--runs", f.runs, "independent runs");
  f.o_episodes = app->add_option("--episodes", f.episodes, "episodes per phase");
  f.o_seed = app->add_option("--seed", f.seed, "base seed");
  f.o_modules = app->add_option("--modules", f.modules, "NSE module count");
  f.o_gamma_base = app->add_option("--gamma-base", f.gamma_base, "IGE base discount count");
  f.o_gamma_fill = app->add_option("--gamma-fill", f.gamma_fill, "IGE discounts inserted per gap");
  f.o_workers = app->add_option("--workers", f.workers, "worker threads (0: all cores)");
  f.o_max_steps = app->add_option("--max-steps", f.max_steps, "episode step cap");
  f.o_clip = app->add_option("--clip", f.clip, "lower clip for aggregated outcomes");
  f.o_out = app->add_option("--out", f.out, "output directory (bench) or snapshot file (train)");
}

std::vector<Objective> parse_phases(const std::string& text) {
  std::vector<Objective> out;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto f = named_objective(name);
    if (!f) throw Error("unknown objective '" + name + "'");
    out.push_back(*f);
  }
  if (out.empty()) throw Error("--phases is empty");
  return out;
}

BenchmarkConfig resolve_config(const RunFlags& f) {
  BenchmarkConfig c = f.preset.empty() ? BenchmarkConfig{} : preset_config(f.preset);
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw Error("cannot open " + f.config);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error(f.config + ": " + e.what());
    }
    apply_config_json(c, j);
  }
  if (*f.o_env) c.env = f.env;
  if (*f.o_algo) c.algo = algo_from_string(f.algo);
  if (*f.o_phases) c.phases = parse_phases(f.phases);
  if (*f.o_runs) c.runs = f.runs;
  if (*f.o_episodes) c.episodes_per_phase = f.episodes;
  if (*f.o_seed) c.seed = f.seed;
  if (*f.o_modules) c.modules = f.modules;
  if (*f.o_gamma_base) c.gamma_base = f.gamma_base;
  if (*f.o_gamma_fill) c.gamma_fill = f.gamma_fill;
  if (*f.o_workers) c.workers = f.workers;
  if (*f.o_max_steps) c.max_steps = f.max_steps;
  if (*f.o_clip) c.clip = f.clip;
  if (*f.o_out) c.out = f.out;
  c.validate();
  return c;
}

std::vector<PlotSeries> series_of(const std::vector<CurvePoint>& curve, const std::string& label) {
  PlotSeries s{label, {}, {}};
  for (const auto& p : curve) {
    s.mean.push_back(p.mean);
    s.std.push_back(p.std);
  }
  return {s};
}

PlotOptions plot_options_of(const std::vector<CurvePoint>& curve, const std::string& title) {
  PlotOptions o;
  o.title = title;
  std::size_t phase_len = 0;
  for (const auto& p : curve) {
    if (p.phase >= o.phase_names.size()) o.phase_names.resize(p.phase + 1);
    o.phase_names[p.phase] = p.objective;
    if (p.phase == 0) ++phase_len;
  }
  o.episodes_per_phase = o.phase_names.size() > 1 ? phase_len : 0;
  return o;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

int cmd_bench(const RunFlags& f) {
  BenchmarkConfig c = resolve_config(f);
  if (c.out.empty()) c.out = "results/" + std::string(to_string(c.algo));
  const EnvFile env = resolve_env(c.env);
  std::cerr << "bench: " << to_string(c.algo) << " on " << c.env << ", " << c.runs << " runs x " << c.phases.size()
            << " phases x " << c.episodes_per_phase << " episodes\n";
  const auto results = run_benchmark(c, env.mdp, [&](std::size_t done) {
    std::cerr << "\r  runs finished: " << done << "/" << c.runs << std::flush;
  });
  std::cerr << '\n';
  write_results(c.out, results, c.clip);
  const auto curve = aggregate(results, c.clip);
  write_text(fs::path(c.out) / "curves.svg",
             learning_curve_svg(series_of(curve, std::string(to_string(c.algo))),
                                plot_options_of(curve, std::string(to_string(c.algo)) + " on " + c.env)));

  // First-50 versus last-50 episode means of each phase.
  const std::size_t w = std::min<std::size_t>(50, c.episodes_per_phase);
  std::cout << "phase objective first" << w << " last" << w << " gap\n" << std::fixed << std::setprecision(3);
  for (std::size_t p = 0; p < c.phases.size(); ++p) {
    const std::size_t b = p * c.episodes_per_phase;
    const std::size_t e = b + c.episodes_per_phase;
    const double first = window_mean(curve, b, b + w);
    const double last = window_mean(curve, e - w, e);
    std::cout << p + 1 << ' ' << c.phases[p].name << ' ' << first << ' ' << last << ' ' << first - last << '\n';
  }
  std::cout << "results in " << c.out << '\n';
  return 0;
}

int cmd_train(const RunFlags& f) {
  BenchmarkConfig c = resolve_config(f);
  if (c.out.empty()) c.out = std::string(to_string(c.algo)) + "_agent.json";
  const EnvFile env = resolve_env(c.env);
  std::unique_ptr<Agent> agent;
  const RunRecord rec = run_single(c, env.mdp, 0, &agent);
  save_agent(c.out, *agent);
  double tail = 0.0;
  const std::size_t w = std::min<std::size_t>(50, rec.outcome.size());
  for (std::size_t i = rec.outcome.size() - w; i < rec.outcome.size(); ++i) tail += rec.outcome[i];
  std::cout << "trained " << to_string(c.algo) << " for " << rec.outcome.size() << " episodes; mean outcome of the last "
            << w << ": " << tail / static_cast<double>(w) << "\nsnapshot: " << c.out << '\n';
  return 0;
}

struct EvalFlags {
  std::string snapshot;
  std::string env = "paper_grid";
  std::string objective = "f1";
  std::size_t episodes = 100;
  std::uint64_t seed = 1;
  double epsilon = 0.0;
  std::int64_t max_steps = 1000;
};

int cmd_eval(const EvalFlags& f) {
  auto agent = load_agent(f.snapshot);
  const EnvFile env = resolve_env(f.env);
  std::optional<Objective> obj = named_objective(f.objective);
  std::size_t index = 0;
  if (!obj) {
    for (std::size_t i = 0; i < env.mdp.objectives().size(); ++i)
      if (env.mdp.objectives()[i].name == f.objective) {
        obj = env.mdp.objectives()[i];
        index = i;
      }
  } else {
    const auto& all = benchmark_objectives();
    for (std::size_t i = 0; i < all.size(); ++i)
      if (all[i].name == f.objective) index = i;
  }
  if (!obj) throw Error("unknown objective '" + f.objective + "'");
  agent->set_epsilon(f.epsilon);
  const auto st = evaluate_agent(*agent, env.mdp, *obj, index, f.episodes, f.seed, f.max_steps);
  json j{{"objective", obj->name}, {"episodes", st.episodes}, {"mean", st.mean},         {"std", st.std},
         {"min", st.min},          {"max", st.max},           {"mean_reward", st.mean_reward},
         {"mean_length", st.mean_length}, {"truncated", st.truncated}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct OracleFlags {
  std::string env = "paper_grid";
  std::string what = "pareto";
  std::size_t modules = 20;
  double gamma = 0.9;
  std::size_t gamma_base = 14;
  std::size_t gamma_fill = 2;
  std::string out;
};

json table_rows(const TaMdp& env, const StateActionTable& t) {
  json rows = json::object();
  for (StateId s = 0; s < env.num_states(); ++s) {
    if (env.is_terminal(s)) continue;
    json row = json::object();
    for (ActionId a : env.actions(s)) row[env.action_name(a)] = t(s, a);
    rows[env.state_name(s)] = row;
  }
  return rows;
}

int cmd_oracle(const OracleFlags& f) {
  const EnvFile env = resolve_env(f.env);
  const TaMdp& m = env.mdp;
  const StateId s0 = m.start_state();
  json j;
  if (f.what == "pareto") {
    json cands = json::array();
    for (const auto& p : goal_points(m, s0))
      cands.push_back({{"goal", m.state_name(p.goal)}, {"reward", p.expected_reward}, {"steps", p.expected_steps}});
    json front = json::array();
    for (const auto& p : pareto_front(m, s0))
      front.push_back({{"policy", p.policy_id}, {"reward", p.expected_reward}, {"steps", p.expected_steps}});
    j = {{"goal_candidates", cands}, {"front", front}};
  } else if (f.what == "sweep") {
    json rows = json::array();
    for (const auto& e : gamma_sweep(m, gamma_ladder(f.gamma_base, f.gamma_fill), s0))
      rows.push_back({{"gamma", e.gamma}, {"goal", m.state_name(e.goal)}, {"prob", e.goal_prob}});
    j = {{"sweep", rows}};
  } else if (f.what == "nstep") {
    const auto tabs = n_step_dp(m, f.modules);
    json mods = json::array();
    for (std::size_t n = 1; n <= tabs.size(); ++n) {
      const ActionId a = n_step_greedy(m, tabs, n, s0);
      mods.push_back({{"n", n},
                      {"greedy", m.action_name(a)},
                      {"reward", tabs.r[n - 1](s0, a)},
                      {"steps", tabs.t[n - 1](s0, a)},
                      {"q", table_rows(m, tabs.q[n - 1])},
                      {"r", table_rows(m, tabs.r[n - 1])},
                      {"t", table_rows(m, tabs.t[n - 1])}});
    }
    j = {{"modules", mods}, {"horizon1_sweeps", tabs.iterations}};
  } else if (f.what == "vi") {
    const auto vi = value_iteration_gamma(m, f.gamma);
    j = {{"gamma", f.gamma}, {"iterations", vi.iterations}, {"q", table_rows(m, vi.q)}};
  } else if (f.what == "spec") {
    j = env.grid ? grid_to_json(*env.grid) : mdp_to_json(m);
  } else if (f.what == "render") {
    if (!env.grid) throw Error("render needs a grid environment");
    std::cout << render_grid(*env.grid);
    return 0;
  }
  const std::string text = j.dump(2) + "\n";
  if (f.out.empty())
    std::cout << text;
  else
    write_text(f.out, text);
  return 0;
}

struct PlotFlags {
  std::vector<std::string> inputs;
  std::vector<std::string> labels;
  std::string out = "curves.svg";
  std::string title;
};

int cmd_plot(const PlotFlags& f) {
  std::vector<PlotSeries> series;
  std::vector<CurvePoint> first;
  for (std::size_t i = 0; i < f.inputs.size(); ++i) {
    fs::path p = f.inputs[i];
    if (fs::is_directory(p)) p /= "aggregate.csv";
    const auto curve = read_aggregate(p);
    if (i == 0) first = curve;
    const std::string label = i < f.labels.size() ? f.labels[i] : fs::path(f.inputs[i]).filename().string();
    auto s = series_of(curve, label);
    series.push_back(std::move(s.front()));
  }
  write_text(f.out, learning_curve_svg(series, plot_options_of(first, f.title)));
  std::cout << "wrote " << f.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tamdp: time-adaptive MDP agents, oracles and the nine-phase benchmark"};
  app.require_subcommand(1);

  RunFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "run the multi-phase benchmark and write CSV/JSON/SVG results");
  add_run_flags(bench, bench_flags);

  RunFlags train_flags;
  auto* train = app.add_subcommand("train", "train one agent through the phases and save a snapshot");
  add_run_flags(train, train_flags);

  EvalFlags eval_flags;
  auto* eval = app.add_subcommand("eval", "evaluate a snapshot on one objective without learning");
  eval->add_option("--snapshot", eval_flags.snapshot, "agent snapshot")->required();
  eval->add_option("--env", eval_flags.env, "environment the agent was trained on");
  eval->add_option("--objective", eval_flags.objective, "objective name (f1..f9)");
  eval->add_option("--episodes", eval_flags.episodes, "evaluation episodes");
  eval->add_option("--seed", eval_flags.seed, "seed");
  eval->add_option("--epsilon", eval_flags.epsilon, "exploration during evaluation");
  eval->add_option("--max-steps", eval_flags.max_steps, "episode step cap");

  OracleFlags oracle_flags;
  auto* oracle = app.add_subcommand("oracle", "exact DP: Pareto front, gamma sweep, n-step tables, VI, spec dump");
  oracle->add_option("--env", oracle_flags.env, "paper_grid, circular or a spec file");
  oracle->add_option("--what", oracle_flags.what, "pareto, sweep, nstep, vi, spec or render")
      ->check(CLI::IsMember({"pareto", "sweep", "nstep", "vi", "spec", "render"}));
  oracle->add_option("--modules", oracle_flags.modules, "horizon count for nstep");
  oracle->add_option("--gamma", oracle_flags.gamma, "discount for vi");
  oracle->add_option("--gamma-base", oracle_flags.gamma_base, "ladder base count for sweep");
  oracle->add_option("--gamma-fill", oracle_flags.gamma_fill, "ladder fill for sweep");
  oracle->add_option("--out", oracle_flags.out, "write JSON here instead of stdout");

  PlotFlags plot_flags;
  auto* plot = app.add_subcommand("plot", "render aggregate curves to SVG");
  plot->add_option("inputs", plot_flags.inputs, "aggregate.csv files or bench output directories")->required();
  plot->add_option("--label", plot_flags.labels, "legend label per input");
  plot->add_option("--out", plot_flags.out, "SVG file");
  plot->add_option("--title", plot_flags.title, "plot title");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*bench) return cmd_bench(bench_flags);
    if (*train) return cmd_train(train_flags);
    if (*eval) return cmd_eval(eval_flags);
    if (*oracle) return cmd_oracle(oracle_flags);
    if (*plot) return cmd_plot(plot_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
