#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sortenv {

/// Seeded random stream used by every stochastic part of the simulator.
///
/// Streams are derived from one root seed and a label, so draws on one stream
/// never shift another stream's sequence. The derivation is frozen:
///
///   stream_seed = splitmix64(root_seed ^ fnv1a64(label))
///
/// and the engine is std::mt19937_64 seeded with stream_seed. A uniform double
/// consumes exactly one engine output (top 53 bits). A uniform integer in
/// [lo, hi] also consumes exactly one output. These rules are what makes
/// traces bit-identical across runs of the same build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  static Rng derive(std::uint64_t root_seed, std::string_view label);

  /// Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi). Returns lo when lo == hi.
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<double>(hi - lo + 1);
    const int k = static_cast<int>(uniform01() * span);
    return lo + (k > hi - lo ? hi - lo : k);
  }

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view text);
std::uint64_t splitmix64(std::uint64_t x);

/// Stream labels used by the environment and agents.
namespace streams {
inline constexpr std::string_view kInput = "input-generation";
inline constexpr std::string_view kSorting = "sorting-noise";
inline constexpr std::string_view kObservation = "observation-noise";
inline constexpr std::string_view kAgent = "agent-exploration";
}  // namespace streams

}  // namespace sortenv
