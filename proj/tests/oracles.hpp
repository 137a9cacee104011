#pragma once

// Direct-evaluation oracles for the sorting formulas. Written from the
// formulas themselves, independent of the library code paths, and used only
// by tests.

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

/// Linear default limit map: speed v tolerates occupancy up to 1.1 - v.
inline double default_limit(int speed_index) {
  const double v = speed_index / 10.0;
  double lim = 1.1 - v;
  if (lim < 0.1) lim = 0.1;
  if (lim > 1.0) lim = 1.0;
  // Snap to the nearest tenth so the grid matches exact decimal limits.
  return std::round(lim * 10.0) / 10.0;
}

inline double base_accuracy(double occ, double limit, double lambda, double noise) {
  const double excess = occ > limit ? occ - limit : 0.0;
  return clamp01(1.0 - excess * lambda - noise);
}

/// Ratio classes with a/b computed by division: b == 0 treated as +inf.
/// 0 basic, 1 positive, 2 negative.
inline int classify(double a, double b) {
  if (a == 0.0 && b == 0.0) return 0;
  const double ratio = b == 0.0 ? std::numeric_limits<double>::infinity() : a / b;
  if (ratio > 3.0) return 1;
  if (ratio < 1.0 / 3.0) return 2;
  return 0;
}

inline double apply_mode(double alpha, bool correct, double noise) {
  double adjusted = correct ? alpha + 0.15 : alpha - 0.10;
  if (adjusted > 1.0) adjusted = 1.0;
  if (adjusted < 0.0) adjusted = 0.0;
  return clamp01(adjusted - noise);
}

struct Sorted {
  double s_a, s_b, a_true, a_false, b_true, b_false;
};

inline Sorted sort_transfer(double a, double b, double alpha) {
  return {alpha * a + (1.0 - alpha) * b, alpha * b + (1.0 - alpha) * a,
          alpha * a,                     (1.0 - alpha) * b,
          alpha * b,                     (1.0 - alpha) * a};
}

inline double purity(double a_true, double a_false, double b_true, double b_false) {
  const double total = a_true + a_false + b_true + b_false;
  return total == 0.0 ? 1.0 : (a_true + b_true) / total;
}

inline double reward(double alpha, double v, double threshold, double r_acc, double r_speed,
                     double penalty, bool changed) {
  const double p = changed ? penalty : 0.0;
  if (alpha < threshold) return -0.1 - p;
  return r_acc * ((alpha - threshold) / (1.0 - threshold)) + r_speed * ((v - 0.1) / 0.9) - p;
}

/// Penalty-free one-step reward with all noise zero, default constants.
inline double noiseless_reward(int speed_index, double occ) {
  const double alpha = base_accuracy(occ, default_limit(speed_index), 3.0, 0.0);
  return reward(alpha, speed_index / 10.0, 0.7, 0.5, 0.5, 0.0, false);
}

}  // namespace oracle
