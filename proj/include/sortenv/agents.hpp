#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sortenv/config.hpp"
#include "sortenv/rng.hpp"
#include "sortenv/types.hpp"

namespace sortenv {

inline constexpr int kDefaultBins = 20;

/// Equal-width bin of an observed input total. Throws ArgumentError outside [0, 1].
int observation_bin(double input_total, int bins);
double bin_center(int bin, int bins);

/// Number of ratio categories an agent distinguishes (1 basic, 3 advanced).
constexpr int category_count(Variant v) { return v == Variant::Basic ? 1 : kModeCount; }
int observation_category(const Observation& obs, Variant v);

class Agent {
 public:
  virtual ~Agent() = default;

  virtual std::string name() const = 0;
  virtual Variant variant() const = 0;
  virtual Action act(const Observation& obs) = 0;
  virtual void notify(const StepResult&) {}
  /// Called before the first act() of an episode.
  virtual void begin_episode() {}
};

// ---------------------------------------------------------------------------
// Rule-based agent

/// Greedy lookup table: best penalty-free expected immediate reward per
/// (observation bin, ratio category), evaluated at the bin center.
class RbaTable {
 public:
  RbaTable(Variant variant, int bins, std::vector<Action> cells);

  const Action& lookup(int bin, int category) const;
  Variant variant() const { return variant_; }
  int bins() const { return bins_; }
  const std::vector<Action>& cells() const { return cells_; }

 private:
  Variant variant_;
  int bins_;
  std::vector<Action> cells_;  // bin-major, then category
};

/// Action with the highest expected immediate reward at an assumed occupancy.
/// In the advanced variant `ratio_category` is taken as the correct mode.
/// Ties go to the lower speed index, then to the lower mode.
Action best_immediate_action(double occupancy, const EnvConfig& cfg,
                             SortingMode ratio_category = SortingMode::Basic);

RbaTable build_rba_table(const EnvConfig& cfg, int bins = kDefaultBins);

class RbaAgent final : public Agent {
 public:
  explicit RbaAgent(RbaTable table) : table_(std::move(table)) {}

  std::string name() const override { return "rba"; }
  Variant variant() const override { return table_.variant(); }
  Action act(const Observation& obs) override;

  const RbaTable& table() const { return table_; }

 private:
  RbaTable table_;
};

/// Uniformly random valid actions.
class RandomAgent final : public Agent {
 public:
  RandomAgent(Variant variant, std::uint64_t seed)
      : variant_(variant), rng_(Rng::derive(seed, streams::kAgent)) {}

  std::string name() const override { return "random"; }
  Variant variant() const override { return variant_; }
  Action act(const Observation&) override;

 private:
  Variant variant_;
  Rng rng_;
};

/// Always returns the same action.
class ConstantAgent final : public Agent {
 public:
  ConstantAgent(Variant variant, Action action);

  std::string name() const override { return "constant"; }
  Variant variant() const override { return variant_; }
  Action act(const Observation&) override { return action_; }

 private:
  Variant variant_;
  Action action_;
};

// ---------------------------------------------------------------------------
// Tabular Q-learning

/// Whether the Q-agent's state includes its own previous speed. Auto turns it
/// on exactly when speed changes are penalized, since only then does the
/// previous speed affect rewards.
enum class SpeedMemory { Auto, On, Off };

struct QHyper {
  double learning_rate = 0.1;
  double discount = 0.9;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_decay_fraction = 0.5;  // of total training steps
  int bins = kDefaultBins;
  SpeedMemory speed_memory = SpeedMemory::Auto;

  void validate() const;
};

/// Q-values over (observation bin, ratio category, previous-speed slot) x action.
/// With speed memory, slot 0 means "no previous speed" and slot k is speed k.
class QTable {
 public:
  QTable(Variant variant, int bins, bool speed_memory);

  Variant variant() const { return variant_; }
  int bins() const { return bins_; }
  bool speed_memory() const { return speed_memory_; }
  int actions() const { return action_count(variant_); }
  int memory_slots() const { return speed_memory_ ? kSpeedCount + 1 : 1; }
  int states() const { return bins_ * category_count(variant_) * memory_slots(); }

  int state_index(int bin, int category, std::optional<int> prev_speed) const;
  int state_of(const Observation& obs, std::optional<int> prev_speed) const;

  double& at(int state, int action) { return values_[index(state, action)]; }
  double at(int state, int action) const { return values_[index(state, action)]; }
  double max_value(int state) const;
  /// Argmax action index; ties go to the lower speed index, then lower mode.
  int greedy(int state) const;

  const std::vector<double>& values() const { return values_; }
  bool operator==(const QTable&) const = default;

 private:
  std::size_t index(int state, int action) const;

  Variant variant_;
  int bins_;
  bool speed_memory_;
  std::vector<double> values_;
};

/// Flat text format:
///   sortenv-qtable 1
///   variant <basic|advanced>
///   bins <n>
///   actions <n>
///   memory <slots>
///   states <n>
/// then one row per state with `actions` values, state-index order.
void write_qtable(std::ostream& out, const QTable& table);
QTable read_qtable(std::istream& in);
void save_qtable(const std::string& path, const QTable& table);
QTable load_qtable(const std::string& path);

/// Epsilon-greedy choice on the table for a given state.
Action q_act(const QTable& table, int state, double epsilon, Rng& rng);

struct TrainResult {
  QTable table;
  std::vector<long> state_visits;
  long steps = 0;
  int episodes = 0;
};

/// One-step Q-learning on `cfg` for `total_steps` environment steps, split
/// into episodes of `episode_length`. Epsilon decays linearly from
/// epsilon_start to epsilon_end over the first epsilon_decay_fraction of the
/// steps. Episode seeds and exploration draws are derived from `seed`.
TrainResult q_train(const EnvConfig& cfg, const QHyper& hyper, long total_steps,
                    int episode_length, std::uint64_t seed);

bool resolve_speed_memory(SpeedMemory mode, const EnvConfig& cfg);

class QAgent final : public Agent {
 public:
  QAgent(std::shared_ptr<const QTable> table, double epsilon = 0.0, std::uint64_t seed = 0);

  std::string name() const override { return "qtable"; }
  Variant variant() const override { return table_->variant(); }
  Action act(const Observation& obs) override;
  void begin_episode() override { prev_speed_.reset(); }

 private:
  std::shared_ptr<const QTable> table_;
  double epsilon_;
  Rng rng_;
  std::optional<int> prev_speed_;
};

}  // namespace sortenv
