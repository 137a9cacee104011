#include "sortenv/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sortenv/env.hpp"

namespace sortenv {

EpisodeResult run_episode(const EnvConfig& cfg, Agent& agent, int steps, std::uint64_t seed) {
  if (agent.variant() != cfg.variant) {
    throw ConfigError("agent '" + agent.name() + "' was built for the " +
                      std::string(to_string(agent.variant())) + " variant, environment is " +
                      std::string(to_string(cfg.variant)));
  }
  if (steps <= 0) throw ConfigError("episode needs a positive number of steps");

  EnvConfig run_cfg = cfg;
  run_cfg.episode_length = steps;
  run_cfg.seed = seed;
  SortingEnv env(run_cfg);

  EpisodeResult out;
  out.trace.config_digest = config_digest(run_cfg);
  out.trace.seed = seed;
  out.trace.agent = agent.name();
  out.trace.rows.reserve(static_cast<std::size_t>(steps));

  Observation obs = env.reset(seed);
  agent.begin_episode();
  double cum = 0.0;
  for (int t = 1; t <= steps; ++t) {
    const Action action = agent.act(obs);
    const StepResult r = env.step(action);
    agent.notify(r);
    cum += r.reward;
    out.trace.rows.push_back(TraceRow{t, r.info.speed, r.info.mode ? mode_code(*r.info.mode) : 0.0,
                                      r.info.occupancy, r.info.accuracy, r.reward, cum,
                                      r.info.purity});
    obs = r.observation;
  }
  out.summary = summarize(out.trace);
  return out;
}

EpisodeSummary summarize(const EpisodeTrace& trace) {
  EpisodeSummary s;
  if (trace.rows.empty()) return s;
  double speed_sum = 0.0;
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    speed_sum += trace.rows[i].speed;
    if (i > 0 && trace.rows[i].speed != trace.rows[i - 1].speed) ++s.speed_changes;
  }
  s.mean_speed_pct = 100.0 * speed_sum / static_cast<double>(trace.rows.size());
  s.purity_pct = 100.0 * trace.rows.back().purity;
  s.cumulative_reward = trace.rows.back().cum_reward;
  return s;
}

void write_trace_csv(std::ostream& out, const EpisodeTrace& trace) {
  out << kTraceHeader << '\n';
  char buf[256];
  for (const auto& r : trace.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.step, r.speed,
                  r.mode, r.occupancy, r.accuracy, r.reward, r.cum_reward, r.purity);
    out << buf;
  }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error("trace CSV: missing or unexpected header");
  }
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TraceRow r;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &r.step, &r.speed, &r.mode,
                    &r.occupancy, &r.accuracy, &r.reward, &r.cum_reward, &r.purity) != 8) {
      throw std::runtime_error("trace CSV: malformed row '" + line + "'");
    }
    rows.push_back(r);
  }
  return rows;
}

void export_trace(const EpisodeTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace to '" + path + "'");
  write_trace_csv(out, trace);
  out.flush();
  if (!out) throw std::runtime_error("error writing trace to '" + path + "'");
}

// ---------------------------------------------------------------------------

std::vector<Setup> standard_setups(Variant variant, const EnvConfig& base) {
  struct Row {
    const char* letter;
    InputType input;
    double noise;
    double penalty;
  };
  static constexpr Row kRows[] = {
      {"A", InputType::Random, 0.0, 0.0},
      {"B", InputType::Seasonal, 0.0, 0.5},
      {"C", InputType::Random, 0.3, 0.0},
      {"D", InputType::Seasonal, 0.3, 0.5},
  };
  std::vector<Setup> out;
  for (const auto& row : kRows) {
    EnvConfig c = base;
    c.variant = variant;
    c.input_type = row.input;
    c.obs_noise_level = row.noise;
    c.action_penalty = row.penalty;
    out.push_back({std::string(row.letter) + "-" + std::string(to_string(variant)), c});
  }
  return out;
}

AgentSpec rba_spec() {
  return {"rba", false, [](const EnvConfig& cfg, std::uint64_t) -> AgentMaker {
            auto table = std::make_shared<const RbaTable>(build_rba_table(cfg));
            return [table](std::uint64_t) { return std::make_unique<RbaAgent>(*table); };
          }};
}

AgentSpec qtable_spec(TrainingBudget budget) {
  return {"qtable", true, [budget](const EnvConfig& cfg, std::uint64_t train_seed) -> AgentMaker {
            auto table = std::make_shared<const QTable>(
                q_train(cfg, budget.hyper, budget.steps, budget.episode_length, train_seed).table);
            return [table](std::uint64_t seed) { return std::make_unique<QAgent>(table, 0.0, seed); };
          }};
}

AgentSpec random_spec() {
  return {"random", false, [](const EnvConfig& cfg, std::uint64_t) -> AgentMaker {
            const Variant v = cfg.variant;
            return [v](std::uint64_t seed) { return std::make_unique<RandomAgent>(v, seed); };
          }};
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

BenchmarkReport run_benchmark(const std::vector<Setup>& setups,
                              const std::vector<AgentSpec>& agents,
                              const std::vector<std::uint64_t>& seeds,
                              const BenchmarkOptions& options) {
  if (seeds.empty()) throw ArgumentError("benchmark needs at least one seed");
  std::vector<std::uint64_t> sorted = seeds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ArgumentError("benchmark seeds must be distinct");
  }

  std::uint64_t seed_digest = fnv1a64("benchmark");
  for (auto s : sorted) seed_digest = splitmix64(seed_digest ^ s);

  BenchmarkReport report;
  report.episode_steps = options.episode_steps;
  for (const auto& setup : setups) {
    setup.config.validate();
    for (const auto& spec : agents) {
      const std::uint64_t train_seed = splitmix64(seed_digest ^ fnv1a64(setup.name));
      const AgentMaker make = spec.prepare(setup.config, train_seed);

      const auto evaluate = [&](std::uint64_t seed) {
        auto agent = make(seed);
        return run_episode(setup.config, *agent, options.episode_steps, seed).summary;
      };
      std::vector<EpisodeSummary> per_seed(sorted.size());
      if (options.parallel) {
        std::vector<std::future<EpisodeSummary>> jobs;
        for (auto s : sorted) jobs.push_back(std::async(std::launch::async, evaluate, s));
        for (std::size_t i = 0; i < jobs.size(); ++i) per_seed[i] = jobs[i].get();
      } else {
        for (std::size_t i = 0; i < sorted.size(); ++i) per_seed[i] = evaluate(sorted[i]);
      }

      std::vector<double> rewards, speeds, purities, changes;
      for (const auto& s : per_seed) {
        rewards.push_back(s.cumulative_reward);
        speeds.push_back(s.mean_speed_pct);
        purities.push_back(s.purity_pct);
        changes.push_back(s.speed_changes);
      }
      BenchmarkRecord rec;
      rec.setup = setup.name;
      rec.agent = spec.name;
      rec.variant = std::string(to_string(setup.config.variant));
      rec.seeds = static_cast<int>(sorted.size());
      rec.mean_reward = mean(rewards);
      rec.std_reward = stddev(rewards);
      rec.mean_speed_pct = mean(speeds);
      rec.mean_purity_pct = mean(purities);
      rec.mean_speed_changes = mean(changes);
      rec.trained = spec.learns;
      rec.seed_list = sorted;
      rec.per_seed = std::move(per_seed);
      report.records.push_back(std::move(rec));
    }
  }
  return report;
}

namespace {

double round1(double x) { return std::round(x * 10.0) / 10.0; }

}  // namespace

void write_report_jsonl(std::ostream& out, const BenchmarkReport& report) {
  for (const auto& r : report.records) {
    nlohmann::json j;
    j["setup"] = r.setup;
    j["agent"] = r.agent;
    j["variant"] = r.variant;
    j["seeds"] = r.seeds;
    j["episode_steps"] = report.episode_steps;
    j["mean_reward"] = r.mean_reward;
    j["std_reward"] = r.std_reward;
    j["mean_speed_pct"] = round1(r.mean_speed_pct);
    j["mean_purity_pct"] = round1(r.mean_purity_pct);
    j["mean_speed_changes"] = r.mean_speed_changes;
    j["trained"] = r.trained;
    j["per_seed_reward"] = nlohmann::json::array();
    for (const auto& s : r.per_seed) j["per_seed_reward"].push_back(s.cumulative_reward);
    out << j.dump() << '\n';
  }
}

void write_report_table(std::ostream& out, const BenchmarkReport& report) {
  out << std::left << std::setw(12) << "setup" << std::setw(9) << "agent" << std::right
      << std::setw(8) << "speed" << std::setw(8) << "purity" << std::setw(10) << "reward"
      << std::setw(8) << "std" << std::setw(9) << "changes" << '\n';
  for (const auto& r : report.records) {
    out << std::left << std::setw(12) << r.setup << std::setw(9) << r.agent << std::right
        << std::fixed << std::setprecision(1) << std::setw(8) << round1(r.mean_speed_pct)
        << std::setw(8) << round1(r.mean_purity_pct) << std::setprecision(2) << std::setw(10)
        << r.mean_reward << std::setw(8) << r.std_reward << std::setprecision(1) << std::setw(9)
        << r.mean_speed_changes << '\n';
  }
  out.unsetf(std::ios::fixed);
}

}  // namespace sortenv
