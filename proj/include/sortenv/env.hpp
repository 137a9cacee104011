#pragma once

#include <cstdint>
#include <optional>

#include "sortenv/config.hpp"
#include "sortenv/input_gen.hpp"
#include "sortenv/rng.hpp"
#include "sortenv/types.hpp"

namespace sortenv {

/// Full pipeline state. `belt_accuracy` is the accuracy computed for the
/// current belt contents; it moves to `machine_accuracy` together with the
/// material and is used when that material is sorted one step later.
struct EnvState {
  MaterialMix input;
  MaterialMix belt;
  MaterialMix machine;
  StorageTally storage;
  int speed_index = 1;
  SortingMode mode = SortingMode::Basic;
  double belt_accuracy = 1.0;
  double machine_accuracy = 1.0;
  std::optional<int> prev_speed_index;
  int step_count = 0;
  bool done = false;
  double generated_total = 0.0;
};

/// Multiplicative observation noise: clamp(t * (1 + u), 0, 1).
double perturb_observation(double input_total, double u);

/// Agent-visible view of an input stage. Draws exactly one value u from
/// [-noise_level, +noise_level] on `rng`, even when the level is zero.
Observation observe_input(const MaterialMix& input, const EnvConfig& cfg, Rng& rng);

/// The sorting line. One instance is single-threaded; separate instances are
/// independent.
///
/// Each step runs, in order: sort the machine contents with the accuracy that
/// was computed while they were on the belt; shift belt -> machine and
/// input -> belt and draw a new input; apply the action; compute the accuracy
/// of the new belt contents; compute the reward; observe the new input.
class SortingEnv {
 public:
  explicit SortingEnv(EnvConfig cfg);

  Observation reset(std::optional<std::uint64_t> seed_override = std::nullopt);
  StepResult step(const Action& action);

  const EnvState& state() const { return state_; }
  const EnvConfig& config() const { return cfg_; }
  Variant variant() const { return cfg_.variant; }
  bool started() const { return started_; }

  /// Material currently inside the pipeline plus everything stored.
  double accounted_total() const;

 private:
  EnvConfig cfg_;
  EnvState state_;
  InputGenerator input_gen_;
  Rng sorting_rng_;
  Rng obs_rng_;
  bool started_ = false;
};

}  // namespace sortenv
