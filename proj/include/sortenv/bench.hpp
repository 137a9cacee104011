#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "sortenv/agents.hpp"
#include "sortenv/config.hpp"

namespace sortenv {

struct TraceRow {
  int step = 0;
  double speed = 0.0;
  double mode = 0.0;  // plot coding 0 / 0.5 / 1.0
  double occupancy = 0.0;
  double accuracy = 0.0;
  double reward = 0.0;
  double cum_reward = 0.0;
  double purity = 1.0;

  bool operator==(const TraceRow&) const = default;
};

struct EpisodeTrace {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string agent;
  std::vector<TraceRow> rows;
};

struct EpisodeSummary {
  double mean_speed_pct = 0.0;   // 55 means mean speed fraction 0.55
  double purity_pct = 0.0;       // container purity at episode end, x100
  double cumulative_reward = 0.0;
  int speed_changes = 0;
};

struct EpisodeResult {
  EpisodeTrace trace;
  EpisodeSummary summary;
};

/// Reset with `seed` and drive `steps` steps with `agent`.
/// Throws ConfigError when the agent was built for another variant.
EpisodeResult run_episode(const EnvConfig& cfg, Agent& agent, int steps, std::uint64_t seed);

EpisodeSummary summarize(const EpisodeTrace& trace);

// Trace CSV: header `step,speed,mode,occupancy,accuracy,reward,cum_reward,purity`,
// fixed 6-decimal floats, '\n' line endings.
inline constexpr const char* kTraceHeader =
    "step,speed,mode,occupancy,accuracy,reward,cum_reward,purity";

void write_trace_csv(std::ostream& out, const EpisodeTrace& trace);
std::vector<TraceRow> read_trace_csv(std::istream& in);
/// Throws std::runtime_error when the file cannot be written.
void export_trace(const EpisodeTrace& trace, const std::string& path);

// ---------------------------------------------------------------------------
// Benchmark

struct Setup {
  std::string name;
  EnvConfig config;
};

/// The four evaluation conditions for one variant:
/// A random/no noise/no penalty, B seasonal/no noise/penalty 0.5,
/// C random/noise 0.3/no penalty, D seasonal/noise 0.3/penalty 0.5.
std::vector<Setup> standard_setups(Variant variant, const EnvConfig& base = {});

using AgentMaker = std::function<std::unique_ptr<Agent>(std::uint64_t episode_seed)>;

struct AgentSpec {
  std::string name;
  bool learns = false;
  /// Trains if needed for the setup and returns a maker of fresh agents.
  std::function<AgentMaker(const EnvConfig&, std::uint64_t train_seed)> prepare;
};

struct TrainingBudget {
  long steps = 100000;
  int episode_length = 250;
  QHyper hyper;
};

AgentSpec rba_spec();
AgentSpec qtable_spec(TrainingBudget budget = {});
AgentSpec random_spec();

struct BenchmarkRecord {
  std::string setup;
  std::string agent;
  std::string variant;
  int seeds = 0;
  double mean_reward = 0.0;
  double std_reward = 0.0;
  double mean_speed_pct = 0.0;
  double mean_purity_pct = 0.0;
  double mean_speed_changes = 0.0;
  bool trained = false;
  std::vector<std::uint64_t> seed_list;
  std::vector<EpisodeSummary> per_seed;  // sorted by seed
};

struct BenchmarkReport {
  int episode_steps = 50;
  std::vector<BenchmarkRecord> records;
};

struct BenchmarkOptions {
  int episode_steps = 50;
  bool parallel = true;
};

/// Evaluate every agent on every setup over `seeds`. Learning agents are
/// trained once per setup from scratch with a seed derived from the seed list.
/// Throws ArgumentError on an empty or non-distinct seed list.
BenchmarkReport run_benchmark(const std::vector<Setup>& setups,
                              const std::vector<AgentSpec>& agents,
                              const std::vector<std::uint64_t>& seeds,
                              const BenchmarkOptions& options = {});

/// One JSON object per line, one line per setup x agent.
void write_report_jsonl(std::ostream& out, const BenchmarkReport& report);
/// Aligned human-readable table; speed and purity rounded to one decimal.
void write_report_table(std::ostream& out, const BenchmarkReport& report);

double mean(const std::vector<double>& xs);
/// Sample standard deviation; 0 for fewer than two values.
double stddev(const std::vector<double>& xs);

}  // namespace sortenv
