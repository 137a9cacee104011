#include "sortenv/sorting_model.hpp"

#include <algorithm>

namespace sortenv {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

constexpr double kCorrectModeBonus = 0.15;
constexpr double kIncorrectModeMalus = 0.10;
constexpr double kBelowThresholdReward = -0.1;

}  // namespace

double occupancy(const MaterialMix& belt) { return (belt.a + belt.b) / 100.0; }

double pre_noise_accuracy(int speed_index, double occ, const OccupancyLimitMap& limits,
                          double lambda) {
  const double limit = limits.at(speed_index);
  if (occ <= limit) return 1.0;
  return clamp01(1.0 - (occ - limit) * lambda);
}

double base_accuracy(int speed_index, double occ, const OccupancyLimitMap& limits,
                     double lambda, double noise) {
  const double limit = limits.at(speed_index);
  if (occ <= limit) return clamp01(1.0 - noise);
  return clamp01(1.0 - (occ - limit) * lambda - noise);
}

double base_accuracy(int speed_index, double occ, const OccupancyLimitMap& limits,
                     double lambda, Range noise_range, Rng& rng) {
  const double noise = rng.uniform(noise_range.lo, noise_range.hi);
  return base_accuracy(speed_index, occ, limits, lambda, noise);
}

SortingMode classify_ratio(const MaterialMix& mix) {
  // a/b > 3 and a/b < 1/3 without dividing; b == 0 < a lands in the first branch.
  if (mix.a > 3.0 * mix.b) return SortingMode::Positive;
  if (3.0 * mix.a < mix.b) return SortingMode::Negative;
  return SortingMode::Basic;
}

double apply_mode(double alpha, bool mode_correct, double noise) {
  const double adjusted = mode_correct ? std::min(alpha + kCorrectModeBonus, 1.0)
                                       : std::max(alpha - kIncorrectModeMalus, 0.0);
  return clamp01(adjusted - noise);
}

double apply_mode(double alpha, SortingMode chosen, SortingMode correct, Range correct_range,
                  Range incorrect_range, Rng& rng) {
  const bool ok = chosen == correct;
  const Range r = ok ? correct_range : incorrect_range;
  return apply_mode(alpha, ok, rng.uniform(r.lo, r.hi));
}

SortOutcome sort_transfer(const MaterialMix& machine, double alpha) {
  SortOutcome out;
  out.tally.a_true = alpha * machine.a;
  out.tally.b_true = alpha * machine.b;
  // Complements by subtraction so each material's two parts add back to it.
  out.tally.b_false = machine.a - out.tally.a_true;
  out.tally.a_false = machine.b - out.tally.b_true;
  out.containers.a = out.tally.a_true + out.tally.a_false;
  out.containers.b = out.tally.b_true + out.tally.b_false;
  return out;
}

double purity(const StorageTally& t) {
  const double total = t.total();
  if (total <= 0.0) return 1.0;
  return (t.a_true + t.b_true) / total;
}

double step_reward(double alpha, double speed, const EnvConfig& cfg, bool speed_changed) {
  const double penalty = speed_changed ? cfg.action_penalty : 0.0;
  if (alpha < cfg.threshold) return kBelowThresholdReward - penalty;
  return cfg.r_acc * (alpha - cfg.threshold) / (1.0 - cfg.threshold) +
         cfg.r_speed * (speed - 0.1) / 0.9 - penalty;
}

double expected_accuracy(int speed_index, double occ, const EnvConfig& cfg, bool mode_correct) {
  if (cfg.variant == Variant::Basic) {
    return base_accuracy(speed_index, occ, cfg.limits, cfg.lambda, cfg.base_noise_range.mean());
  }
  const double alpha = pre_noise_accuracy(speed_index, occ, cfg.limits, cfg.lambda);
  const Range r = mode_correct ? cfg.correct_mode_noise_range : cfg.incorrect_mode_noise_range;
  return apply_mode(alpha, mode_correct, r.mean());
}

double expected_reward(int speed_index, double occ, const EnvConfig& cfg, bool mode_correct) {
  const double alpha = expected_accuracy(speed_index, occ, cfg, mode_correct);
  return step_reward(alpha, speed_fraction(speed_index), cfg, false);
}

}  // namespace sortenv
