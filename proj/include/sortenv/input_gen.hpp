#pragma once

#include <array>
#include <optional>

#include "sortenv/config.hpp"
#include "sortenv/rng.hpp"
#include "sortenv/types.hpp"

namespace sortenv {

enum class InputLevel { Little, Medium, Much };
enum class RatioRegime { AHeavy, Balanced, BHeavy };

/// Total-quantity range (percent) for a seasonal level.
Range level_range(InputLevel level);
/// Fraction of the total that is material A, per ratio regime.
Range regime_a_fraction(RatioRegime regime);

inline constexpr Range kRandomTotalRange{5.0, 95.0};
inline constexpr int kMinPhaseLength = 10;
inline constexpr int kMaxPhaseLength = 12;

struct SeasonalPhase {
  InputLevel level = InputLevel::Little;
  RatioRegime regime = RatioRegime::Balanced;
  int remaining_steps = 0;
  int length = 0;

  /// 0..8, level-major.
  int pattern() const { return static_cast<int>(level) * 3 + static_cast<int>(regime); }
};

/// Uniform total in [5, 95], A fraction uniform in [0, 1]. Two draws.
MaterialMix random_input(Rng& rng);

/// Seasonal draw. When the phase is exhausted a new pattern (one integer draw
/// over the 9 patterns) and length (one integer draw over {10,11,12}) are
/// chosen first; then total and A fraction are drawn (two draws).
MaterialMix seasonal_input(SeasonalPhase& phase, Rng& rng);

/// Owns the generator stream and, for seasonal input, the current phase.
class InputGenerator {
 public:
  InputGenerator(InputType kind, Rng stream);

  MaterialMix next();

  InputType kind() const { return kind_; }
  const std::optional<SeasonalPhase>& phase() const { return phase_; }

 private:
  InputType kind_;
  Rng rng_;
  std::optional<SeasonalPhase> phase_;
};

}  // namespace sortenv
