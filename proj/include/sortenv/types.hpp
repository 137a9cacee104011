#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sortenv {

// Errors. Configuration problems, protocol misuse (stepping a finished
// episode) and bad arguments are distinct so callers can map them to exit
// codes or wire error codes.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Quantities of material A and B at one stage, in percent of stage capacity.
struct MaterialMix {
  double a = 0.0;
  double b = 0.0;

  double total() const { return a + b; }
  bool valid() const { return a >= 0.0 && b >= 0.0 && a + b <= 100.0; }
  bool operator==(const MaterialMix&) const = default;
};

enum class Variant { Basic, Advanced };
enum class InputType { Random, Seasonal };
enum class SortingMode { Basic, Positive, Negative };

inline constexpr int kSpeedCount = 10;
inline constexpr int kModeCount = 3;

/// Number of discrete actions for a variant: 10 speeds, times 3 modes when advanced.
constexpr int action_count(Variant v) {
  return v == Variant::Basic ? kSpeedCount : kSpeedCount * kModeCount;
}

/// Speed fraction for a 1-based speed index (1 -> 0.1, 10 -> 1.0).
constexpr double speed_fraction(int speed_index) { return speed_index / 10.0; }

/// Plot coding for modes in traces: basic 0, positive 0.5, negative 1.0.
constexpr double mode_code(SortingMode m) {
  switch (m) {
    case SortingMode::Basic: return 0.0;
    case SortingMode::Positive: return 0.5;
    case SortingMode::Negative: return 1.0;
  }
  return 0.0;
}

std::string_view to_string(Variant v);
std::string_view to_string(InputType t);
std::string_view to_string(SortingMode m);
Variant parse_variant(std::string_view s);
InputType parse_input_type(std::string_view s);
SortingMode parse_mode(std::string_view s);

/// Agent command. Basic actions carry no mode; advanced actions always do.
struct Action {
  int speed_index = 1;
  std::optional<SortingMode> mode;

  bool operator==(const Action&) const = default;
};

/// Flat action index used on the wire and in Q-tables:
/// basic: speed_index - 1; advanced: mode * 10 + speed_index - 1.
int action_to_index(const Action& a);
Action action_from_index(Variant v, int index);
bool action_valid_for(const Action& a, Variant v);

/// What the agent sees: the (possibly noisy) normalized input total, plus the
/// ratio category of the input in the advanced variant.
struct Observation {
  double input_total = 0.0;
  std::optional<SortingMode> ratio_category;

  bool operator==(const Observation&) const = default;
};

/// Cumulative storage contents, split by correct/incorrect routing.
/// a_false is material B that ended up in container A; b_false is A in B.
struct StorageTally {
  double a_true = 0.0;
  double a_false = 0.0;
  double b_true = 0.0;
  double b_false = 0.0;

  double total() const { return a_true + a_false + b_true + b_false; }
  StorageTally& operator+=(const StorageTally& o) {
    a_true += o.a_true;
    a_false += o.a_false;
    b_true += o.b_true;
    b_false += o.b_false;
    return *this;
  }
  bool operator==(const StorageTally&) const = default;
};

struct StepInfo {
  double accuracy = 0.0;
  double occupancy = 0.0;
  double speed = 0.0;
  double purity = 1.0;
  bool mode_correct = true;
  int speed_index = 1;
  std::optional<SortingMode> mode;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

}  // namespace sortenv
