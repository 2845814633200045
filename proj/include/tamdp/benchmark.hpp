#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tamdp/episode.hpp"
#include "tamdp/mdp.hpp"
#include "tamdp/objective.hpp"
#include "tamdp/schedule.hpp"

namespace tamdp {

enum class Algo { Ige, Nse, TimeQ };

std::string_view to_string(Algo algo);
/// "ige", "nse" or "tqlearn".
Algo algo_from_string(std::string_view text);

struct BenchmarkConfig {
  /// "paper_grid", "circular" or a spec file path.
  std::string env = "paper_grid";
  Algo algo = Algo::Nse;
  std::vector<Objective> phases = benchmark_objectives();
  std::size_t episodes_per_phase = 6000;
  std::size_t runs = 100;
  std::uint64_t seed = 1;
  /// NSE horizon count.
  std::size_t modules = 20;
  /// IGE ladder.
  std::size_t gamma_base = 14;
  std::size_t gamma_fill = 2;
  /// Baseline discount and time cap.
  double tq_gamma = 0.99;
  std::int64_t t_max = 1000;
  /// Unset: ensemble_schedule() for IGE/NSE, baseline_schedule() scaled to
  /// episodes_per_phase / 6000 for the baseline.
  std::optional<Schedule> schedule;
  std::int64_t max_steps = 1000;
  /// 0 means one worker per hardware thread.
  std::size_t workers = 0;
  double clip = -10.0;
  std::string out;
  std::string preset = "paper";

  std::size_t total_episodes() const { return phases.size() * episodes_per_phase; }
  /// Throws Error on empty phases, zero runs or zero episodes.
  void validate() const;
};

/// "desk" (10 runs x 1500 episodes per phase) or "paper" (100 x 6000).
BenchmarkConfig preset_config(std::string_view name);

/// Overwrites the fields present in `j` (same key names as the struct,
/// algo as text, phases as objectives, schedule as {alpha, epsilon, per_phase}).
void apply_config_json(BenchmarkConfig& config, const nlohmann::json& j);
nlohmann::json config_to_json(const BenchmarkConfig& config);

/// Schedule the run uses (explicit or default).
Schedule effective_schedule(const BenchmarkConfig& config);

/// Fresh agent of the configured algorithm for `env`.
std::unique_ptr<Agent> make_agent(const BenchmarkConfig& config, const TaMdp& env);

/// Per-episode record of one run, in global episode order.
struct RunRecord {
  std::vector<double> outcome;
  std::vector<double> total_reward;
  std::vector<std::int64_t> length;
};

struct RunResults {
  BenchmarkConfig config;
  std::vector<RunRecord> runs;
  std::vector<std::uint64_t> seeds;
  std::string config_hash;
  std::string started;
  std::string finished;
};

/// Seed of run i derived from the base seed.
std::uint64_t run_seed(std::uint64_t base, std::size_t run);

/// Trains one fresh agent through all phases and returns its record. The
/// agent is handed back through `agent_out` when given.
RunRecord run_single(const BenchmarkConfig& config, const TaMdp& env, std::size_t run,
                     std::unique_ptr<Agent>* agent_out = nullptr);

/// All runs, spread over config.workers threads. Results depend only on the
/// config and seeds, not on the thread count. `progress` is called after
/// each finished run with the number of finished runs.
RunResults run_benchmark(const BenchmarkConfig& config, const TaMdp& env,
                         const std::function<void(std::size_t)>& progress = {});

struct CurvePoint {
  std::size_t episode = 0;
  std::size_t phase = 0;
  std::string objective;
  double mean = 0.0;
  double std = 0.0;
};

/// Per-episode mean and population standard deviation across runs, after
/// raising outcomes below clip_min to clip_min.
std::vector<CurvePoint> aggregate(const RunResults& results, double clip_min = -10.0);

/// Mean of curve points [begin, end) of `curve`.
double window_mean(const std::vector<CurvePoint>& curve, std::size_t begin, std::size_t end);

/// run_XXX.csv per run, aggregate.csv and metadata.json in `dir`.
void write_results(const std::filesystem::path& dir, const RunResults& results, double clip_min);
std::vector<CurvePoint> read_aggregate(const std::filesystem::path& path);

struct EvalStats {
  std::size_t episodes = 0;
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  double mean_reward = 0.0;
  double mean_length = 0.0;
  /// Episodes cut at max_steps.
  std::size_t truncated = 0;
};

/// Runs `episodes` episodes without learning at the agent's current epsilon.
EvalStats evaluate_agent(Agent& agent, const TaMdp& env, const Objective& f, std::size_t objective_index,
                         std::size_t episodes, std::uint64_t seed, std::int64_t max_steps = 1000);

}  // namespace tamdp
