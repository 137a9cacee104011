#include "sortenv/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sortenv/rng.hpp"

namespace sortenv {

namespace {

std::array<double, kSpeedCount> default_limits() {
  std::array<double, kSpeedCount> out{};
  for (int k = 1; k <= kSpeedCount; ++k) {
    // (11 - k) / 10 keeps the grid values correctly rounded.
    out[k - 1] = std::clamp((11 - k) / 10.0, 0.1, 1.0);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("config key '" + std::string(key) + "': not a number: '" +
                      std::string(text) + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config key '" + std::string(key) + "': not an integer: '" +
                      std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config key '" + std::string(key) + "': not an unsigned integer: '" +
                      std::string(text) + "'");
  }
  return v;
}

// "lo, hi"
Range parse_range(std::string_view key, std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw ConfigError("config key '" + std::string(key) + "': expected 'lo, hi'");
  }
  return {parse_double(key, text.substr(0, comma)), parse_double(key, text.substr(comma + 1))};
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_range(const char* name, Range r) {
  if (!(r.lo <= r.hi)) {
    throw ConfigError(std::string(name) + ": lo must not exceed hi");
  }
  if (r.lo < 0.0 || r.hi > 1.0) {
    throw ConfigError(std::string(name) + ": bounds must lie in [0, 1]");
  }
}

}  // namespace

OccupancyLimitMap::OccupancyLimitMap() : limits_(default_limits()) {}

OccupancyLimitMap::OccupancyLimitMap(const std::array<double, kSpeedCount>& limits)
    : limits_(limits) {}

double OccupancyLimitMap::at(int speed_index) const {
  if (speed_index < 1 || speed_index > kSpeedCount) {
    throw ArgumentError("speed index " + std::to_string(speed_index) + " out of range 1..10");
  }
  return limits_[speed_index - 1];
}

bool OccupancyLimitMap::monotone() const {
  for (int i = 0; i < kSpeedCount; ++i) {
    if (limits_[i] < 0.0 || limits_[i] > 1.0) return false;
    if (i > 0 && limits_[i] > limits_[i - 1]) return false;
  }
  return true;
}

void EnvConfig::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
  if (!(obs_noise_level >= 0.0)) throw ConfigError("obs_noise_level must be >= 0");
  if (!(action_penalty >= 0.0)) throw ConfigError("action_penalty must be >= 0");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (!(r_acc >= 0.0) || !(r_speed >= 0.0)) throw ConfigError("reward weights must be >= 0");
  check_range("base_noise_range", base_noise_range);
  check_range("correct_mode_noise_range", correct_mode_noise_range);
  check_range("incorrect_mode_noise_range", incorrect_mode_noise_range);
  if (!limits.monotone()) {
    throw ConfigError("occupancy_limits must lie in [0, 1] and be non-increasing in speed");
  }
  if (episode_length <= 0) throw ConfigError("episode_length must be positive");
}

void apply_setting(EnvConfig& cfg, std::string_view key, std::string_view raw) {
  const auto value = trim(raw);
  try {
    if (key == "variant") {
      cfg.variant = parse_variant(value);
    } else if (key == "input_type") {
      cfg.input_type = parse_input_type(value);
    } else if (key == "obs_noise_level") {
      cfg.obs_noise_level = parse_double(key, value);
    } else if (key == "action_penalty") {
      cfg.action_penalty = parse_double(key, value);
    } else if (key == "threshold") {
      cfg.threshold = parse_double(key, value);
    } else if (key == "lambda") {
      cfg.lambda = parse_double(key, value);
    } else if (key == "r_acc") {
      cfg.r_acc = parse_double(key, value);
    } else if (key == "r_speed") {
      cfg.r_speed = parse_double(key, value);
    } else if (key == "base_noise_range") {
      cfg.base_noise_range = parse_range(key, value);
    } else if (key == "correct_mode_noise_range") {
      cfg.correct_mode_noise_range = parse_range(key, value);
    } else if (key == "incorrect_mode_noise_range") {
      cfg.incorrect_mode_noise_range = parse_range(key, value);
    } else if (key == "occupancy_limits") {
      std::array<double, kSpeedCount> lim{};
      std::size_t pos = 0;
      for (int i = 0; i < kSpeedCount; ++i) {
        const auto next = value.find(',', pos);
        if ((next == std::string_view::npos) != (i == kSpeedCount - 1)) {
          throw ConfigError("occupancy_limits: expected 10 comma-separated values");
        }
        lim[i] = parse_double(key, value.substr(pos, next - pos));
        pos = next + 1;
      }
      cfg.limits = OccupancyLimitMap(lim);
    } else if (key == "episode_length") {
      const auto n = parse_int(key, value);
      if (n <= 0 || n > 100000000) throw ConfigError("episode_length must be positive");
      cfg.episode_length = static_cast<int>(n);
    } else if (key == "seed") {
      cfg.seed = parse_u64(key, value);
    } else {
      throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

EnvConfig parse_config(std::istream& in, EnvConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    apply_setting(base, trim(view.substr(0, eq)), view.substr(eq + 1));
  }
  base.validate();
  return base;
}

EnvConfig load_config(const std::string& path, EnvConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

std::string format_config(const EnvConfig& c) {
  std::ostringstream out;
  out << "variant = " << to_string(c.variant) << '\n'
      << "input_type = " << to_string(c.input_type) << '\n'
      << "obs_noise_level = " << fmt_double(c.obs_noise_level) << '\n'
      << "action_penalty = " << fmt_double(c.action_penalty) << '\n'
      << "threshold = " << fmt_double(c.threshold) << '\n'
      << "lambda = " << fmt_double(c.lambda) << '\n'
      << "r_acc = " << fmt_double(c.r_acc) << '\n'
      << "r_speed = " << fmt_double(c.r_speed) << '\n';
  const auto range = [&](const char* name, Range r) {
    out << name << " = " << fmt_double(r.lo) << ", " << fmt_double(r.hi) << '\n';
  };
  range("base_noise_range", c.base_noise_range);
  range("correct_mode_noise_range", c.correct_mode_noise_range);
  range("incorrect_mode_noise_range", c.incorrect_mode_noise_range);
  out << "occupancy_limits = ";
  for (int i = 0; i < kSpeedCount; ++i) {
    out << (i ? ", " : "") << fmt_double(c.limits.values()[i]);
  }
  out << '\n'
      << "episode_length = " << c.episode_length << '\n'
      << "seed = " << c.seed << '\n';
  return out.str();
}

std::string config_digest(const EnvConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(format_config(cfg))));
  return buf;
}

}  // namespace sortenv
