#include "sortenv/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "sortenv/agents.hpp"
#include "sortenv/bench.hpp"
#include "sortenv/env.hpp"
#include "sortenv/input_gen.hpp"
#include "sortenv/server.hpp"
#include "sortenv/sorting_model.hpp"

namespace sortenv {

namespace {

struct EnvFlags {
  std::string env;
  std::string input;
  double noise = 0.0;
  double penalty = 0.0;
  std::uint64_t seed = 42;
  int steps = 50;
  std::string config_path;

  CLI::Option* env_opt = nullptr;
  CLI::Option* input_opt = nullptr;
  CLI::Option* noise_opt = nullptr;
  CLI::Option* penalty_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* steps_opt = nullptr;

  void add_to(CLI::App* app, bool with_variant = true) {
    if (with_variant) {
      env_opt = app->add_option("--env", env, "Environment variant")
                    ->check(CLI::IsMember({"basic", "advanced"}));
    }
    input_opt = app->add_option("--input", input, "Input generator")
                    ->check(CLI::IsMember({"random", "seasonal"}));
    noise_opt = app->add_option("--noise", noise, "Observation noise level")
                    ->check(CLI::NonNegativeNumber);
    penalty_opt = app->add_option("--penalty", penalty, "Penalty per speed change")
                      ->check(CLI::NonNegativeNumber);
    seed_opt = app->add_option("--seed", seed, "Root seed");
    steps_opt = app->add_option("--steps", steps, "Steps per episode")->check(CLI::PositiveNumber);
    app->add_option("--config", config_path, "Key-value config file")->check(CLI::ExistingFile);
  }

  EnvConfig build() const {
    EnvConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (env_opt && env_opt->count()) cfg.variant = parse_variant(env);
    if (input_opt->count()) cfg.input_type = parse_input_type(input);
    if (noise_opt->count()) cfg.obs_noise_level = noise;
    if (penalty_opt->count()) cfg.action_penalty = penalty;
    if (seed_opt->count()) cfg.seed = seed;
    if (steps_opt->count()) cfg.episode_length = steps;
    cfg.validate();
    return cfg;
  }
};

struct TrainFlags {
  long steps = 100000;
  int episode_length = 250;
  double learning_rate = 0.1;
  double discount = 0.9;
  std::string memory = "auto";

  void add_to(CLI::App* app) {
    app->add_option("--train-steps", steps, "Training budget in environment steps")
        ->check(CLI::PositiveNumber);
    app->add_option("--episode-length", episode_length, "Training episode length")
        ->check(CLI::PositiveNumber);
    app->add_option("--lr", learning_rate, "Q-learning rate")->check(CLI::Range(0.0, 1.0));
    app->add_option("--gamma", discount, "Discount factor")->check(CLI::Range(0.0, 1.0));
    app->add_option("--speed-memory", memory, "Include the previous speed in the Q state")
        ->check(CLI::IsMember({"auto", "on", "off"}));
  }

  TrainingBudget budget() const {
    TrainingBudget b;
    b.steps = steps;
    b.episode_length = episode_length;
    b.hyper.learning_rate = learning_rate;
    b.hyper.discount = discount;
    b.hyper.speed_memory = memory == "on"    ? SpeedMemory::On
                           : memory == "off" ? SpeedMemory::Off
                                             : SpeedMemory::Auto;
    return b;
  }
};

std::unique_ptr<Agent> make_agent(const std::string& kind, const EnvConfig& cfg,
                                  const std::string& table_path, const TrainingBudget& budget) {
  if (kind == "rba") return std::make_unique<RbaAgent>(build_rba_table(cfg));
  if (kind == "random") return std::make_unique<RandomAgent>(cfg.variant, cfg.seed);
  std::shared_ptr<const QTable> table;
  if (!table_path.empty()) {
    table = std::make_shared<const QTable>(load_qtable(table_path));
    if (table->variant() != cfg.variant) {
      throw ConfigError("Q-table was trained for the " + std::string(to_string(table->variant())) +
                        " variant");
    }
  } else {
    table = std::make_shared<const QTable>(
        q_train(cfg, budget.hyper, budget.steps, budget.episode_length, cfg.seed).table);
  }
  return std::make_unique<QAgent>(table, 0.0, cfg.seed);
}

void print_summary(std::ostream& out, const EpisodeResult& r) {
  out << std::fixed << std::setprecision(1) << "agent=" << r.trace.agent
      << " seed=" << r.trace.seed << " steps=" << r.trace.rows.size()
      << " mean_speed=" << r.summary.mean_speed_pct << " purity=" << r.summary.purity_pct
      << std::setprecision(3) << " reward=" << r.summary.cumulative_reward
      << " speed_changes=" << r.summary.speed_changes << '\n';
  out.unsetf(std::ios::fixed);
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  return file;
}

void write_surface(std::ostream& out, EnvConfig cfg) {
  cfg.base_noise_range = {0.0, 0.0};
  cfg.correct_mode_noise_range = {0.0, 0.0};
  cfg.incorrect_mode_noise_range = {0.0, 0.0};
  out << "speed_index,speed,occupancy,limit,accuracy,reward\n";
  char buf[160];
  for (int k = 1; k <= kSpeedCount; ++k) {
    for (int i = 0; i <= 100; ++i) {
      const double occ = i / 100.0;
      std::snprintf(buf, sizeof buf, "%d,%.1f,%.2f,%.6f,%.6f,%.6f\n", k, speed_fraction(k), occ,
                    cfg.limits.at(k), expected_accuracy(k, occ, cfg, true),
                    expected_reward(k, occ, cfg, true));
      out << buf;
    }
  }
}

void write_inputs(std::ostream& out, const EnvConfig& cfg, int steps) {
  InputGenerator gen(cfg.input_type, Rng::derive(cfg.seed, streams::kInput));
  out << "step,a,b,total,pattern\n";
  char buf[128];
  for (int t = 0; t < steps; ++t) {
    const MaterialMix m = gen.next();
    const int pattern = gen.phase() ? gen.phase()->pattern() : -1;
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f,%d\n", t, m.a, m.b, m.total(), pattern);
    out << buf;
  }
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Sorting-line reinforcement learning environment"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run one episode and export its trace");
  EnvFlags sim_env;
  sim_env.add_to(simulate);
  std::string sim_agent = "rba";
  std::string sim_table;
  std::string sim_out = "trace.csv";
  TrainFlags sim_train;
  simulate->add_option("--agent", sim_agent, "Agent")
      ->check(CLI::IsMember({"rba", "qtable", "random"}));
  simulate->add_option("--table", sim_table, "Q-table file (qtable agent)");
  simulate->add_option("--out", sim_out, "Trace CSV path ('-' for stdout)");
  sim_train.add_to(simulate);

  // train
  auto* train = app.add_subcommand("train", "Train a tabular Q-agent and save its table");
  EnvFlags train_env;
  train_env.add_to(train);
  TrainFlags train_flags;
  train_flags.add_to(train);
  std::string train_out = "qtable.txt";
  train->add_option("--out", train_out, "Output table path");

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Run the multi-seed benchmark over setups A-D");
  EnvFlags bench_env;
  bench_env.add_to(bench);
  int bench_seeds = 10;
  std::vector<std::string> bench_agents{"rba", "qtable"};
  std::string bench_out;
  TrainFlags bench_train;
  bench->add_option("--seeds", bench_seeds, "Number of evaluation seeds (seed, seed+1, ...)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--agents", bench_agents, "Agents to evaluate")
      ->check(CLI::IsMember({"rba", "qtable", "random"}))
      ->delimiter(',');
  bench->add_option("--out", bench_out, "JSON-lines report path");
  bench_train.add_to(bench);

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the environment over TCP");
  EnvFlags serve_env;
  serve_env.add_to(serve);
  std::string bind_address = "127.0.0.1";
  unsigned short port = 5555;
  serve->add_option("--bind", bind_address, "Bind address");
  serve->add_option("--port", port, "TCP port (0 picks a free one)");

  // surface
  auto* surface = app.add_subcommand("surface", "Emit the noise-free accuracy/reward grid as CSV");
  EnvFlags surface_env;
  surface_env.add_to(surface);
  std::string surface_out = "-";
  surface->add_option("--out", surface_out, "CSV path ('-' for stdout)");

  // inputs
  auto* inputs = app.add_subcommand("inputs", "Emit the raw input sequence as CSV");
  EnvFlags inputs_env;
  inputs_env.add_to(inputs);
  std::string inputs_out = "-";
  inputs->add_option("--out", inputs_out, "CSV path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (simulate->parsed()) {
      const EnvConfig cfg = sim_env.build();
      auto agent = make_agent(sim_agent, cfg, sim_table, sim_train.budget());
      const EpisodeResult r = run_episode(cfg, *agent, cfg.episode_length, cfg.seed);
      if (sim_out == "-") {
        write_trace_csv(std::cout, r.trace);
      } else {
        export_trace(r.trace, sim_out);
      }
      print_summary(sim_out == "-" ? std::cerr : std::cout, r);
    } else if (train->parsed()) {
      const EnvConfig cfg = train_env.build();
      const TrainingBudget b = train_flags.budget();
      const TrainResult r = q_train(cfg, b.hyper, b.steps, b.episode_length, cfg.seed);
      save_qtable(train_out, r.table);
      std::cout << "trained " << r.steps << " steps over " << r.episodes << " episodes -> "
                << train_out << '\n';
    } else if (bench->parsed()) {
      const EnvConfig base = bench_env.build();
      std::vector<Setup> setups;
      const std::vector<Variant> variants =
          bench_env.env_opt->count() ? std::vector<Variant>{base.variant}
                                     : std::vector<Variant>{Variant::Basic, Variant::Advanced};
      for (Variant v : variants) {
        for (auto& s : standard_setups(v, base)) setups.push_back(std::move(s));
      }
      std::vector<AgentSpec> specs;
      for (const auto& name : bench_agents) {
        if (name == "rba") specs.push_back(rba_spec());
        if (name == "qtable") specs.push_back(qtable_spec(bench_train.budget()));
        if (name == "random") specs.push_back(random_spec());
      }
      std::vector<std::uint64_t> seeds;
      for (int i = 0; i < bench_seeds; ++i) seeds.push_back(base.seed + static_cast<std::uint64_t>(i));
      BenchmarkOptions opts;
      opts.episode_steps = base.episode_length;
      const BenchmarkReport report = run_benchmark(setups, specs, seeds, opts);
      if (!bench_out.empty()) {
        std::ofstream file(bench_out);
        if (!file) throw std::runtime_error("cannot write '" + bench_out + "'");
        write_report_jsonl(file, report);
      }
      write_report_table(std::cout, report);
    } else if (serve->parsed()) {
      const EnvConfig cfg = serve_env.build();
      EnvServer server(cfg, bind_address, port);
      std::cout << "listening on " << bind_address << ':' << server.port() << std::endl;
      server.run(true);
      std::cout << "shutting down" << std::endl;
    } else if (surface->parsed()) {
      std::ofstream file;
      write_surface(open_output(surface_out, file), surface_env.build());
    } else if (inputs->parsed()) {
      const EnvConfig cfg = inputs_env.build();
      std::ofstream file;
      write_inputs(open_output(inputs_out, file), cfg, cfg.episode_length);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sortenv
