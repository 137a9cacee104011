#include "sortenv/types.hpp"

#include <string>

namespace sortenv {

std::string_view to_string(Variant v) {
  return v == Variant::Basic ? "basic" : "advanced";
}

std::string_view to_string(InputType t) {
  return t == InputType::Random ? "random" : "seasonal";
}

std::string_view to_string(SortingMode m) {
  switch (m) {
    case SortingMode::Basic: return "basic";
    case SortingMode::Positive: return "positive";
    case SortingMode::Negative: return "negative";
  }
  return "basic";
}

Variant parse_variant(std::string_view s) {
  if (s == "basic") return Variant::Basic;
  if (s == "advanced") return Variant::Advanced;
  throw ArgumentError("unknown environment variant '" + std::string(s) + "'");
}

InputType parse_input_type(std::string_view s) {
  if (s == "random") return InputType::Random;
  if (s == "seasonal") return InputType::Seasonal;
  throw ArgumentError("unknown input type '" + std::string(s) + "'");
}

SortingMode parse_mode(std::string_view s) {
  if (s == "basic") return SortingMode::Basic;
  if (s == "positive") return SortingMode::Positive;
  if (s == "negative") return SortingMode::Negative;
  throw ArgumentError("unknown sorting mode '" + std::string(s) + "'");
}

bool action_valid_for(const Action& a, Variant v) {
  if (a.speed_index < 1 || a.speed_index > kSpeedCount) return false;
  return v == Variant::Basic ? !a.mode.has_value() : a.mode.has_value();
}

int action_to_index(const Action& a) {
  const int speed = a.speed_index - 1;
  return a.mode ? static_cast<int>(*a.mode) * kSpeedCount + speed : speed;
}

Action action_from_index(Variant v, int index) {
  if (index < 0 || index >= action_count(v)) {
    throw ArgumentError("action index " + std::to_string(index) + " out of range");
  }
  Action a;
  a.speed_index = index % kSpeedCount + 1;
  if (v == Variant::Advanced) a.mode = static_cast<SortingMode>(index / kSpeedCount);
  return a;
}

}  // namespace sortenv
