#pragma once

#include "sortenv/config.hpp"
#include "sortenv/rng.hpp"
#include "sortenv/types.hpp"

namespace sortenv {

/// Belt occupancy as a fraction of capacity.
double occupancy(const MaterialMix& belt);

/// Deterministic part of the speed/occupancy accuracy surface:
/// 1 within the speed's occupancy limit, 1 - excess * lambda beyond it,
/// clamped to [0, 1].
double pre_noise_accuracy(int speed_index, double occupancy,
                          const OccupancyLimitMap& limits, double lambda);

/// Accuracy with an explicit noise value subtracted, clamped to [0, 1].
double base_accuracy(int speed_index, double occupancy,
                     const OccupancyLimitMap& limits, double lambda, double noise);

/// Same, drawing noise uniformly from `noise_range` (one draw).
double base_accuracy(int speed_index, double occupancy,
                     const OccupancyLimitMap& limits, double lambda,
                     Range noise_range, Rng& rng);

/// Correct sorting mode for a mix. Ratios exactly 3 or 1/3 resolve to Basic;
/// b == 0 with a > 0 counts as an infinite ratio; an empty mix is Basic.
SortingMode classify_ratio(const MaterialMix& mix);

/// Mode adjustment of a pre-noise accuracy: +0.15 (capped at 1) when the mode
/// is correct, -0.10 (floored at 0) otherwise, minus `noise`, clamped.
double apply_mode(double alpha, bool mode_correct, double noise);

/// Same, drawing the noise from the correct- or incorrect-mode range (one draw).
double apply_mode(double alpha, SortingMode chosen, SortingMode correct,
                  Range correct_range, Range incorrect_range, Rng& rng);

struct SortOutcome {
  MaterialMix containers;  // a: container A contents, b: container B contents
  StorageTally tally;
};

/// Route machine contents into the two containers with accuracy `alpha`.
SortOutcome sort_transfer(const MaterialMix& machine, double alpha);

/// Correctly sorted mass over total stored mass; 1 for an empty store.
double purity(const StorageTally& tally);

/// Per-step reward. Below threshold the reward is a flat -0.1. The action
/// penalty is subtracted on any speed change, whatever the accuracy.
double step_reward(double alpha, double speed, const EnvConfig& cfg, bool speed_changed);

/// Expected accuracy of one step with every noise term at the mean of its
/// range. For the basic variant `mode_correct` is ignored.
double expected_accuracy(int speed_index, double occupancy, const EnvConfig& cfg,
                         bool mode_correct = true);

/// Expected penalty-free immediate reward for a speed at a given occupancy.
double expected_reward(int speed_index, double occupancy, const EnvConfig& cfg,
                       bool mode_correct = true);

}  // namespace sortenv
