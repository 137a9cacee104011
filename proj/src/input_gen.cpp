#include "sortenv/input_gen.hpp"

namespace sortenv {

Range level_range(InputLevel level) {
  switch (level) {
    case InputLevel::Little: return {10.0, 30.0};
    case InputLevel::Medium: return {40.0, 60.0};
    case InputLevel::Much: return {70.0, 90.0};
  }
  return {};
}

// Aligned with the three sorting modes: A-heavy input mostly classifies as
// positive, B-heavy as negative.
Range regime_a_fraction(RatioRegime regime) {
  switch (regime) {
    case RatioRegime::AHeavy: return {0.70, 0.90};
    case RatioRegime::Balanced: return {0.40, 0.60};
    case RatioRegime::BHeavy: return {0.10, 0.30};
  }
  return {};
}

namespace {

MaterialMix split(double total, double a_fraction) {
  const double a = total * a_fraction;
  return {a, total - a};
}

}  // namespace

MaterialMix random_input(Rng& rng) {
  const double total = rng.uniform(kRandomTotalRange.lo, kRandomTotalRange.hi);
  const double frac = rng.uniform01();
  return split(total, frac);
}

MaterialMix seasonal_input(SeasonalPhase& phase, Rng& rng) {
  if (phase.remaining_steps <= 0) {
    const int pattern = rng.uniform_int(0, 8);
    phase.level = static_cast<InputLevel>(pattern / 3);
    phase.regime = static_cast<RatioRegime>(pattern % 3);
    phase.length = rng.uniform_int(kMinPhaseLength, kMaxPhaseLength);
    phase.remaining_steps = phase.length;
  }
  const Range level = level_range(phase.level);
  const Range frac = regime_a_fraction(phase.regime);
  const double total = rng.uniform(level.lo, level.hi);
  const double a_fraction = rng.uniform(frac.lo, frac.hi);
  --phase.remaining_steps;
  return split(total, a_fraction);
}

InputGenerator::InputGenerator(InputType kind, Rng stream) : kind_(kind), rng_(stream) {
  if (kind_ == InputType::Seasonal) phase_ = SeasonalPhase{};
}

MaterialMix InputGenerator::next() {
  return kind_ == InputType::Random ? random_input(rng_) : seasonal_input(*phase_, rng_);
}

}  // namespace sortenv
