#include "tamdp/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "tamdp/ige.hpp"
#include "tamdp/nse.hpp"
#include "tamdp/time_q.hpp"

namespace tamdp {

using nlohmann::json;

namespace {

constexpr std::size_t kPaperEpisodesPerPhase = 6000;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// FNV-1a, stable across platforms unlike std::hash.
std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// Objective slot of phase p for the baseline: phases with the same objective
// share one slice.
std::size_t objective_slot(const std::vector<Objective>& phases, std::size_t p) {
  for (std::size_t i = 0; i < p; ++i)
    if (phases[i] == phases[p]) return i;
  return p;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

std::string_view to_string(Algo algo) {
  switch (algo) {
    case Algo::Ige:
      return "ige";
    case Algo::Nse:
      return "nse";
    case Algo::TimeQ:
      return "tqlearn";
  }
  throw std::logic_error("unknown algorithm");
}

Algo algo_from_string(std::string_view text) {
  if (text == "ige") return Algo::Ige;
  if (text == "nse") return Algo::Nse;
  if (text == "tqlearn") return Algo::TimeQ;
  throw Error("unknown algorithm '" + std::string(text) + "' (expected ige, nse or tqlearn)");
}

void BenchmarkConfig::validate() const {
  if (phases.empty()) throw Error("benchmark needs at least one phase");
  if (runs < 1) throw Error("benchmark needs at least one run");
  if (episodes_per_phase < 1) throw Error("benchmark needs at least one episode per phase");
  if (modules < 1) throw Error("NSE needs at least one module");
  if (gamma_base < 1) throw Error("IGE needs at least one base discount factor");
  if (max_steps < 1) throw Error("max_steps must be >= 1");
}

BenchmarkConfig preset_config(std::string_view name) {
  BenchmarkConfig c;
  if (name == "desk") {
    c.runs = 10;
    c.episodes_per_phase = 1500;
  } else if (name != "paper") {
    throw Error("unknown preset '" + std::string(name) + "' (expected desk or paper)");
  }
  c.preset = std::string(name);
  return c;
}

void apply_config_json(BenchmarkConfig& c, const json& j) {
  try {
    if (j.contains("preset")) {
      // A preset in a config file resets everything it covers first.
      const auto keep_env = c.env;
      c = preset_config(j.at("preset").get<std::string>());
      c.env = keep_env;
    }
    if (j.contains("env")) c.env = j.at("env").get<std::string>();
    if (j.contains("algo")) c.algo = algo_from_string(j.at("algo").get<std::string>());
    if (j.contains("phases")) c.phases = j.at("phases").get<std::vector<Objective>>();
    if (j.contains("episodes_per_phase")) c.episodes_per_phase = j.at("episodes_per_phase").get<std::size_t>();
    if (j.contains("runs")) c.runs = j.at("runs").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("modules")) c.modules = j.at("modules").get<std::size_t>();
    if (j.contains("gamma_base")) c.gamma_base = j.at("gamma_base").get<std::size_t>();
    if (j.contains("gamma_fill")) c.gamma_fill = j.at("gamma_fill").get<std::size_t>();
    if (j.contains("tq_gamma")) c.tq_gamma = j.at("tq_gamma").get<double>();
    if (j.contains("t_max")) c.t_max = j.at("t_max").get<std::int64_t>();
    if (j.contains("schedule")) {
      if (j.at("schedule").is_null())
        c.schedule.reset();
      else
        c.schedule = j.at("schedule").get<Schedule>();
    }
    if (j.contains("max_steps")) c.max_steps = j.at("max_steps").get<std::int64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<std::size_t>();
    if (j.contains("clip")) c.clip = j.at("clip").get<double>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(std::string("malformed benchmark config: ") + e.what());
  }
}

json config_to_json(const BenchmarkConfig& c) {
  json j{{"env", c.env},
         {"algo", to_string(c.algo)},
         {"phases", c.phases},
         {"episodes_per_phase", c.episodes_per_phase},
         {"runs", c.runs},
         {"seed", c.seed},
         {"modules", c.modules},
         {"gamma_base", c.gamma_base},
         {"gamma_fill", c.gamma_fill},
         {"tq_gamma", c.tq_gamma},
         {"t_max", c.t_max},
         {"schedule", effective_schedule(c)},
         {"max_steps", c.max_steps},
         {"clip", c.clip},
         {"preset", c.preset}};
  return j;
}

Schedule effective_schedule(const BenchmarkConfig& c) {
  if (c.schedule) return *c.schedule;
  if (c.algo != Algo::TimeQ) return ensemble_schedule();
  Schedule s = baseline_schedule();
  const double factor = static_cast<double>(c.episodes_per_phase) / static_cast<double>(kPaperEpisodesPerPhase);
  s.alpha = s.alpha.scaled(factor);
  s.epsilon = s.epsilon.scaled(factor);
  return s;
}

std::unique_ptr<Agent> make_agent(const BenchmarkConfig& c, const TaMdp& env) {
  switch (c.algo) {
    case Algo::Ige:
      return std::make_unique<IgeAgent>(env, gamma_ladder(c.gamma_base, c.gamma_fill));
    case Algo::Nse:
      return std::make_unique<NseAgent>(env, c.modules);
    case Algo::TimeQ:
      return std::make_unique<TimeQAgent>(env, c.phases.size(), c.tq_gamma, c.t_max);
  }
  throw std::logic_error("unknown algorithm");
}

std::uint64_t run_seed(std::uint64_t base, std::size_t run) {
  // splitmix64 of (base, run): well separated streams for neighbouring runs.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(run) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RunRecord run_single(const BenchmarkConfig& c, const TaMdp& env, std::size_t run, std::unique_ptr<Agent>* agent_out) {
  c.validate();
  Rng rng(run_seed(c.seed, run));
  auto agent = make_agent(c, env);
  const Schedule sched = effective_schedule(c);
  const EpisodeOptions opts{c.max_steps, false};

  RunRecord rec;
  const std::size_t total = c.total_episodes();
  rec.outcome.reserve(total);
  rec.total_reward.reserve(total);
  rec.length.reserve(total);
  std::size_t global = 0;
  for (std::size_t p = 0; p < c.phases.size(); ++p) {
    const Objective& f = c.phases[p];
    const std::size_t slot = objective_slot(c.phases, p);
    for (std::size_t e = 0; e < c.episodes_per_phase; ++e, ++global) {
      const double x = static_cast<double>(sched.per_phase ? e : global);
      agent->set_alpha(sched.alpha(x));
      agent->set_epsilon(sched.epsilon(x));
      const auto trace = run_episode(*agent, env, f, slot, rng, opts);
      rec.outcome.push_back(trace.outcome);
      rec.total_reward.push_back(trace.total_reward);
      rec.length.push_back(trace.length);
    }
  }
  if (agent_out) *agent_out = std::move(agent);
  return rec;
}

RunResults run_benchmark(const BenchmarkConfig& c, const TaMdp& env,
                         const std::function<void(std::size_t)>& progress) {
  c.validate();
  RunResults res;
  res.config = c;
  res.config_hash = fnv1a_hex(config_to_json(c).dump());
  res.started = utc_now();
  res.runs.resize(c.runs);
  for (std::size_t i = 0; i < c.runs; ++i) res.seeds.push_back(run_seed(c.seed, i));

  std::size_t workers = c.workers ? c.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, c.runs);
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mu;
  std::exception_ptr failure;

  auto work = [&] {
    for (std::size_t i = next++; i < c.runs; i = next++) {
      try {
        res.runs[i] = run_single(c, env, i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = c.runs;
        return;
      }
      std::lock_guard lock(mu);
      ++done;
      if (progress) progress(done);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  res.finished = utc_now();
  return res;
}

std::vector<CurvePoint> aggregate(const RunResults& results, double clip_min) {
  if (results.runs.empty()) throw Error("aggregate needs at least one run");
  const auto& c = results.config;
  const std::size_t total = results.runs.front().outcome.size();
  for (const auto& r : results.runs)
    if (r.outcome.size() != total) throw Error("aggregate: runs have different lengths");

  std::vector<CurvePoint> curve;
  curve.reserve(total);
  const double n = static_cast<double>(results.runs.size());
  for (std::size_t e = 0; e < total; ++e) {
    double sum = 0.0;
    for (const auto& r : results.runs) sum += std::max(r.outcome[e], clip_min);
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& r : results.runs) {
      const double d = std::max(r.outcome[e], clip_min) - mean;
      sq += d * d;
    }
    const std::size_t phase = c.episodes_per_phase ? e / c.episodes_per_phase : 0;
    const std::string name = phase < c.phases.size() ? c.phases[phase].name : std::string();
    curve.push_back({e, phase, name, mean, std::sqrt(sq / n)});
  }
  return curve;
}

double window_mean(const std::vector<CurvePoint>& curve, std::size_t begin, std::size_t end) {
  if (begin >= end || end > curve.size()) throw std::out_of_range("window_mean: bad window");
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) s += curve[i].mean;
  return s / static_cast<double>(end - begin);
}

void write_results(const std::filesystem::path& dir, const RunResults& results, double clip_min) {
  std::filesystem::create_directories(dir);
  const auto& c = results.config;
  auto open = [&](const std::string& name) {
    std::ofstream out(dir / name);
    if (!out) throw Error("cannot write " + (dir / name).string());
    out << std::setprecision(17);
    return out;
  };
  for (std::size_t r = 0; r < results.runs.size(); ++r) {
    std::ostringstream name;
    name << "run_" << std::setw(3) << std::setfill('0') << r << ".csv";
    auto out = open(name.str());
    out << "episode,phase,objective,outcome,total_reward,length\n";
    const auto& rec = results.runs[r];
    for (std::size_t e = 0; e < rec.outcome.size(); ++e) {
      const std::size_t phase = e / c.episodes_per_phase;
      out << e << ',' << phase << ',' << c.phases[phase].name << ',' << rec.outcome[e] << ',' << rec.total_reward[e]
          << ',' << rec.length[e] << '\n';
    }
  }
  {
    auto out = open("aggregate.csv");
    out << "episode,phase,objective,mean,std\n";
    for (const auto& p : aggregate(results, clip_min))
      out << p.episode << ',' << p.phase << ',' << p.objective << ',' << p.mean << ',' << p.std << '\n';
  }
  {
    auto out = open("metadata.json");
    json meta{{"config", config_to_json(c)},
              {"config_hash", results.config_hash},
              {"seeds", results.seeds},
              {"started", results.started},
              {"finished", results.finished},
              {"clip", clip_min}};
    out << meta.dump(2) << '\n';
  }
}

std::vector<CurvePoint> read_aggregate(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "episode,phase,objective,mean,std") throw Error(path.string() + ": not an aggregate.csv file");
  std::vector<CurvePoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 5) throw Error(path.string() + ": malformed row '" + line + "'");
    out.push_back({std::stoul(cells[0]), std::stoul(cells[1]), cells[2], std::stod(cells[3]), std::stod(cells[4])});
  }
  return out;
}

EvalStats evaluate_agent(Agent& agent, const TaMdp& env, const Objective& f, std::size_t objective_index,
                         std::size_t episodes, std::uint64_t seed, std::int64_t max_steps) {
  if (episodes < 1) throw Error("evaluate_agent needs at least one episode");
  Rng rng(seed);
  const bool was_learning = agent.learning();
  agent.set_learning(false);
  EvalStats st;
  st.episodes = episodes;
  st.min = std::numeric_limits<double>::infinity();
  st.max = -std::numeric_limits<double>::infinity();
  std::vector<double> outs;
  try {
    for (std::size_t i = 0; i < episodes; ++i) {
      const auto tr = run_episode(agent, env, f, objective_index, rng, {max_steps, false});
      outs.push_back(tr.outcome);
      st.mean_reward += tr.total_reward;
      st.mean_length += static_cast<double>(tr.length);
      if (!tr.terminated) ++st.truncated;
      st.min = std::min(st.min, tr.outcome);
      st.max = std::max(st.max, tr.outcome);
    }
  } catch (...) {
    agent.set_learning(was_learning);
    throw;
  }
  agent.set_learning(was_learning);
  const double n = static_cast<double>(episodes);
  for (double o : outs) st.mean += o;
  st.mean /= n;
  for (double o : outs) st.std += (o - st.mean) * (o - st.mean);
  st.std = std::sqrt(st.std / n);
  st.mean_reward /= n;
  st.mean_length /= n;
  return st;
}

}  // namespace tamdp
