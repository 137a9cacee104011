#include "sortenv/agents.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "sortenv/env.hpp"
#include "sortenv/sorting_model.hpp"

namespace sortenv {

int observation_bin(double input_total, int bins) {
  if (!(input_total >= 0.0 && input_total <= 1.0)) {
    throw ArgumentError("observation " + std::to_string(input_total) + " outside [0, 1]");
  }
  const int bin = static_cast<int>(input_total * bins);
  return bin >= bins ? bins - 1 : bin;
}

double bin_center(int bin, int bins) { return (bin + 0.5) / bins; }

int observation_category(const Observation& obs, Variant v) {
  if (v == Variant::Basic) return 0;
  if (!obs.ratio_category) throw ArgumentError("advanced observation without ratio category");
  return static_cast<int>(*obs.ratio_category);
}

// ---------------------------------------------------------------------------

RbaTable::RbaTable(Variant variant, int bins, std::vector<Action> cells)
    : variant_(variant), bins_(bins), cells_(std::move(cells)) {
  if (bins_ < 2) throw ArgumentError("RBA table needs at least 2 bins");
  if (cells_.size() != static_cast<std::size_t>(bins_ * category_count(variant_))) {
    throw ArgumentError("RBA table cell count does not match bins x categories");
  }
}

const Action& RbaTable::lookup(int bin, int category) const {
  return cells_.at(static_cast<std::size_t>(bin * category_count(variant_) + category));
}

Action best_immediate_action(double occ, const EnvConfig& cfg, SortingMode ratio_category) {
  Action best;
  double best_reward = -INFINITY;
  for (int speed = 1; speed <= kSpeedCount; ++speed) {
    if (cfg.variant == Variant::Basic) {
      const double r = expected_reward(speed, occ, cfg);
      if (r > best_reward) {
        best_reward = r;
        best = Action{speed, std::nullopt};
      }
      continue;
    }
    for (int m = 0; m < kModeCount; ++m) {
      const auto mode = static_cast<SortingMode>(m);
      const double r = expected_reward(speed, occ, cfg, mode == ratio_category);
      if (r > best_reward) {
        best_reward = r;
        best = Action{speed, mode};
      }
    }
  }
  return best;
}

RbaTable build_rba_table(const EnvConfig& cfg, int bins) {
  if (bins < 2) throw ArgumentError("RBA table needs at least 2 bins");
  const int cats = category_count(cfg.variant);
  std::vector<Action> cells;
  cells.reserve(static_cast<std::size_t>(bins * cats));
  for (int bin = 0; bin < bins; ++bin) {
    for (int cat = 0; cat < cats; ++cat) {
      cells.push_back(
          best_immediate_action(bin_center(bin, bins), cfg, static_cast<SortingMode>(cat)));
    }
  }
  return RbaTable(cfg.variant, bins, std::move(cells));
}

Action RbaAgent::act(const Observation& obs) {
  const int bin = observation_bin(obs.input_total, table_.bins());
  return table_.lookup(bin, observation_category(obs, table_.variant()));
}

Action RandomAgent::act(const Observation&) {
  return action_from_index(variant_, rng_.uniform_int(0, action_count(variant_) - 1));
}

ConstantAgent::ConstantAgent(Variant variant, Action action)
    : variant_(variant), action_(action) {
  if (!action_valid_for(action_, variant_)) throw ArgumentError("constant action invalid for variant");
}

// ---------------------------------------------------------------------------

void QHyper::validate() const {
  const auto in_unit = [](double x) { return x > 0.0 && x <= 1.0; };
  if (!in_unit(learning_rate)) throw ArgumentError("learning rate must lie in (0, 1]");
  if (!(discount >= 0.0 && discount <= 1.0)) throw ArgumentError("discount must lie in [0, 1]");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0) ||
      !(epsilon_end >= 0.0 && epsilon_end <= 1.0)) {
    throw ArgumentError("epsilon must lie in [0, 1]");
  }
  if (!(epsilon_decay_fraction >= 0.0 && epsilon_decay_fraction <= 1.0)) {
    throw ArgumentError("epsilon decay fraction must lie in [0, 1]");
  }
  if (bins < 2) throw ArgumentError("Q-table needs at least 2 bins");
}

bool resolve_speed_memory(SpeedMemory mode, const EnvConfig& cfg) {
  switch (mode) {
    case SpeedMemory::On: return true;
    case SpeedMemory::Off: return false;
    case SpeedMemory::Auto: return cfg.action_penalty > 0.0;
  }
  return false;
}

QTable::QTable(Variant variant, int bins, bool speed_memory)
    : variant_(variant), bins_(bins), speed_memory_(speed_memory) {
  if (bins_ < 2) throw ArgumentError("Q-table needs at least 2 bins");
  values_.assign(static_cast<std::size_t>(states()) * actions(), 0.0);
}

std::size_t QTable::index(int state, int action) const {
  return static_cast<std::size_t>(state) * actions() + action;
}

int QTable::state_index(int bin, int category, std::optional<int> prev_speed) const {
  const int slot = speed_memory_ ? prev_speed.value_or(0) : 0;
  return (bin * category_count(variant_) + category) * memory_slots() + slot;
}

int QTable::state_of(const Observation& obs, std::optional<int> prev_speed) const {
  return state_index(observation_bin(obs.input_total, bins_), observation_category(obs, variant_),
                     prev_speed);
}

double QTable::max_value(int state) const { return at(state, greedy(state)); }

int QTable::greedy(int state) const {
  const int modes = variant_ == Variant::Basic ? 1 : kModeCount;
  int best = 0;
  double best_value = -INFINITY;
  for (int speed = 0; speed < kSpeedCount; ++speed) {
    for (int m = 0; m < modes; ++m) {
      const int a = m * kSpeedCount + speed;
      if (at(state, a) > best_value) {
        best_value = at(state, a);
        best = a;
      }
    }
  }
  return best;
}

void write_qtable(std::ostream& out, const QTable& t) {
  out << "sortenv-qtable 1\n"
      << "variant " << to_string(t.variant()) << '\n'
      << "bins " << t.bins() << '\n'
      << "actions " << t.actions() << '\n'
      << "memory " << t.memory_slots() << '\n'
      << "states " << t.states() << '\n';
  char buf[32];
  for (int s = 0; s < t.states(); ++s) {
    for (int a = 0; a < t.actions(); ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", t.at(s, a));
      out << (a ? " " : "") << buf;
    }
    out << '\n';
  }
}

QTable read_qtable(std::istream& in) {
  const auto expect = [&](const char* key) {
    std::string word;
    if (!(in >> word) || word != key) {
      throw ArgumentError(std::string("Q-table: expected '") + key + "'");
    }
  };
  int version = 0, bins = 0, actions = 0, memory = 0, states = 0;
  std::string variant;
  expect("sortenv-qtable");
  in >> version;
  if (version != 1) throw ArgumentError("Q-table: unsupported version");
  expect("variant");
  in >> variant;
  expect("bins");
  in >> bins;
  expect("actions");
  in >> actions;
  expect("memory");
  in >> memory;
  expect("states");
  in >> states;
  if (!in) throw ArgumentError("Q-table: malformed header");
  if (memory != 1 && memory != kSpeedCount + 1) throw ArgumentError("Q-table: bad memory slots");
  QTable t(parse_variant(variant), bins, memory != 1);
  if (t.actions() != actions || t.states() != states) {
    throw ArgumentError("Q-table: header dimensions are inconsistent");
  }
  for (int s = 0; s < states; ++s) {
    for (int a = 0; a < actions; ++a) {
      double v = 0.0;
      if (!(in >> v) || !std::isfinite(v)) throw ArgumentError("Q-table: truncated or bad value");
      t.at(s, a) = v;
    }
  }
  return t;
}

void save_qtable(const std::string& path, const QTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write Q-table to '" + path + "'");
  write_qtable(out, table);
  if (!out) throw std::runtime_error("error writing Q-table to '" + path + "'");
}

QTable load_qtable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open Q-table '" + path + "'");
  return read_qtable(in);
}

Action q_act(const QTable& table, int state, double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ArgumentError("epsilon must lie in [0, 1]");
  if (epsilon > 0.0 && rng.uniform01() < epsilon) {
    return action_from_index(table.variant(), rng.uniform_int(0, table.actions() - 1));
  }
  return action_from_index(table.variant(), table.greedy(state));
}

TrainResult q_train(const EnvConfig& cfg, const QHyper& hyper, long total_steps,
                    int episode_length, std::uint64_t seed) {
  hyper.validate();
  if (total_steps <= 0) throw ArgumentError("training needs a positive step budget");
  if (episode_length <= 0) throw ArgumentError("episode length must be positive");

  TrainResult result{QTable(cfg.variant, hyper.bins, resolve_speed_memory(hyper.speed_memory, cfg)),
                     {}, 0, 0};
  QTable& q = result.table;
  result.state_visits.assign(static_cast<std::size_t>(q.states()), 0);

  EnvConfig env_cfg = cfg;
  env_cfg.episode_length = episode_length;
  SortingEnv env(env_cfg);
  Rng explore = Rng::derive(seed, streams::kAgent);
  const std::uint64_t episode_root = splitmix64(seed ^ fnv1a64("training-episodes"));
  const double decay_steps = hyper.epsilon_decay_fraction * static_cast<double>(total_steps);

  long step = 0;
  while (step < total_steps) {
    Observation obs = env.reset(splitmix64(episode_root + static_cast<std::uint64_t>(result.episodes)));
    ++result.episodes;
    std::optional<int> prev;
    int s = q.state_of(obs, prev);
    bool done = false;
    while (!done && step < total_steps) {
      const double eps =
          static_cast<double>(step) < decay_steps
              ? hyper.epsilon_start +
                    (hyper.epsilon_end - hyper.epsilon_start) * static_cast<double>(step) / decay_steps
              : hyper.epsilon_end;
      const Action action = q_act(q, s, eps, explore);
      const StepResult r = env.step(action);
      prev = action.speed_index;
      const int s_next = q.state_of(r.observation, prev);
      // Episode ends are time limits, not terminal states, so always bootstrap.
      const double target = r.reward + hyper.discount * q.max_value(s_next);
      double& value = q.at(s, action_to_index(action));
      value += hyper.learning_rate * (target - value);
      ++result.state_visits[static_cast<std::size_t>(s)];
      s = s_next;
      done = r.done;
      ++step;
    }
  }
  result.steps = step;
  return result;
}

QAgent::QAgent(std::shared_ptr<const QTable> table, double epsilon, std::uint64_t seed)
    : table_(std::move(table)), epsilon_(epsilon), rng_(Rng::derive(seed, streams::kAgent)) {
  if (!table_) throw ArgumentError("QAgent needs a table");
  if (!(epsilon_ >= 0.0 && epsilon_ <= 1.0)) throw ArgumentError("epsilon must lie in [0, 1]");
}

Action QAgent::act(const Observation& obs) {
  const Action a = q_act(*table_, table_->state_of(obs, prev_speed_), epsilon_, rng_);
  prev_speed_ = a.speed_index;
  return a;
}

}  // namespace sortenv
