#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>

#include "sortenv/types.hpp"

namespace sortenv {

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  double mean() const { return 0.5 * (lo + hi); }
  bool operator==(const Range&) const = default;
};

/// Maximum belt occupancy per speed index at which pre-noise accuracy stays 1.
/// Entries must be non-increasing in speed.
class OccupancyLimitMap {
 public:
  /// limit(v) = clamp(1.1 - v, 0.1, 1.0).
  OccupancyLimitMap();
  explicit OccupancyLimitMap(const std::array<double, kSpeedCount>& limits);

  double at(int speed_index) const;
  const std::array<double, kSpeedCount>& values() const { return limits_; }
  bool monotone() const;

  bool operator==(const OccupancyLimitMap&) const = default;

 private:
  std::array<double, kSpeedCount> limits_{};
};

struct EnvConfig {
  Variant variant = Variant::Basic;
  InputType input_type = InputType::Random;
  double obs_noise_level = 0.0;
  double action_penalty = 0.0;
  double threshold = 0.7;
  double lambda = 3.0;
  double r_acc = 0.5;
  double r_speed = 0.5;
  Range base_noise_range{0.10, 0.15};
  Range correct_mode_noise_range{0.0, 0.05};
  Range incorrect_mode_noise_range{0.10, 0.15};
  OccupancyLimitMap limits;
  int episode_length = 50;
  std::uint64_t seed = 42;

  /// Throws ConfigError on the first violated invariant.
  void validate() const;

  bool operator==(const EnvConfig&) const = default;
};

/// Apply one `key = value` setting. Throws ConfigError on unknown keys or bad values.
void apply_setting(EnvConfig& cfg, std::string_view key, std::string_view value);

/// Parse a key-value config file. '#' starts a comment; blank lines are skipped.
EnvConfig parse_config(std::istream& in, EnvConfig base = {});
EnvConfig load_config(const std::string& path, EnvConfig base = {});

/// Canonical key-value text for a config; parse_config(format_config(c)) == c.
std::string format_config(const EnvConfig& cfg);

/// Stable 64-bit digest of the canonical text, printed as 16 hex digits.
std::string config_digest(const EnvConfig& cfg);

}  // namespace sortenv
