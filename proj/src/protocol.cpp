#include "sortenv/protocol.hpp"

#include <json.hpp>

namespace sortenv {

namespace {

using nlohmann::json;

std::string error_response(std::string_view code, const std::string& message) {
  return json{{"type", "error"}, {"code", code}, {"message", message}}.dump();
}

json observation_json(const Observation& obs) {
  json j{{"input_total", obs.input_total}};
  j["ratio_category"] = obs.ratio_category ? json(to_string(*obs.ratio_category)) : json(nullptr);
  return j;
}

json info_json(const StepInfo& info) {
  json j{{"accuracy", info.accuracy},
         {"occupancy", info.occupancy},
         {"speed", info.speed},
         {"speed_index", info.speed_index},
         {"purity", info.purity},
         {"mode_correct", info.mode_correct}};
  j["mode"] = info.mode ? json(to_string(*info.mode)) : json(nullptr);
  return j;
}

json spec_json(const EnvConfig& cfg) {
  json actions = json::array();
  for (int i = 0; i < action_count(cfg.variant); ++i) {
    const Action a = action_from_index(cfg.variant, i);
    json entry{{"index", i}, {"speed_index", a.speed_index}, {"speed", speed_fraction(a.speed_index)}};
    entry["mode"] = a.mode ? json(to_string(*a.mode)) : json(nullptr);
    actions.push_back(entry);
  }
  json fields = json::array({json{{"name", "input_total"}, {"type", "box"}, {"low", 0.0}, {"high", 1.0}}});
  if (cfg.variant == Variant::Advanced) {
    fields.push_back(json{{"name", "ratio_category"},
                          {"type", "categorical"},
                          {"values", {"basic", "positive", "negative"}}});
  }
  return json{{"type", "spec"},
              {"protocol", "sortenv"},
              {"version", kProtocolVersion},
              {"variant", to_string(cfg.variant)},
              {"input_type", to_string(cfg.input_type)},
              {"episode_length", cfg.episode_length},
              {"n_actions", action_count(cfg.variant)},
              {"actions", actions},
              {"observation", fields}};
}

std::string setting_text(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (i) out += ", ";
      out += setting_text(value[i]);
    }
    return out;
  }
  if (value.is_number() || value.is_boolean()) return value.dump();
  throw ConfigError("unsupported config value " + value.dump());
}

Action parse_action(const json& j, Variant variant) {
  if (j.is_number_integer()) {
    return action_from_index(variant, j.get<int>());
  }
  if (j.is_object()) {
    if (!j.contains("speed") || !j["speed"].is_number_integer()) {
      throw ArgumentError("action object needs an integer 'speed' (1..10)");
    }
    Action a{j["speed"].get<int>(), std::nullopt};
    if (j.contains("mode") && !j["mode"].is_null()) {
      if (!j["mode"].is_string()) throw ArgumentError("action 'mode' must be a string");
      a.mode = parse_mode(j["mode"].get<std::string>());
    }
    if (!action_valid_for(a, variant)) {
      throw ArgumentError("action is not valid for the " + std::string(to_string(variant)) +
                          " variant");
    }
    return a;
  }
  throw ArgumentError("'action' must be an integer index or an object");
}

}  // namespace

ProtocolSession::ProtocolSession(EnvConfig base) : base_(std::move(base)), active_(base_) {
  base_.validate();
}

std::string ProtocolSession::handle(std::string_view line) {
  json req;
  try {
    req = json::parse(line);
  } catch (const json::parse_error& e) {
    return error_response(wire_error::kBadRequest, std::string("malformed JSON: ") + e.what());
  }
  if (!req.is_object() || !req.contains("op") || !req["op"].is_string()) {
    return error_response(wire_error::kBadRequest, "request must be an object with a string 'op'");
  }
  const std::string op = req["op"].get<std::string>();

  if (op == "hello") {
    if (req.contains("version") &&
        (!req["version"].is_number_integer() || req["version"].get<int>() != kProtocolVersion)) {
      return error_response(wire_error::kVersion,
                            "server speaks protocol version " + std::to_string(kProtocolVersion));
    }
    return spec_json(active_).dump();
  }

  if (op == "reset") {
    EnvConfig cfg = base_;
    try {
      if (req.contains("config")) {
        if (!req["config"].is_object()) throw ConfigError("'config' must be an object");
        for (const auto& [key, value] : req["config"].items()) {
          apply_setting(cfg, key, setting_text(value));
        }
      }
      cfg.validate();
    } catch (const ConfigError& e) {
      return error_response(wire_error::kBadConfig, e.what());
    }
    std::optional<std::uint64_t> seed;
    if (req.contains("seed") && !req["seed"].is_null()) {
      if (!req["seed"].is_number_unsigned()) {
        return error_response(wire_error::kBadRequest, "'seed' must be a non-negative integer");
      }
      seed = req["seed"].get<std::uint64_t>();
    }
    active_ = cfg;
    env_ = std::make_unique<SortingEnv>(cfg);
    const Observation obs = env_->reset(seed);
    json resp{{"type", "state"}, {"observation", observation_json(obs)}, {"reward", 0.0},
              {"done", false}, {"step", 0}};
    resp["info"] = nullptr;
    return resp.dump();
  }

  if (op == "step") {
    if (!env_) return error_response(wire_error::kNoEpisode, "step before reset");
    if (env_->state().done) {
      return error_response(wire_error::kEpisodeDone, "episode finished; send reset");
    }
    if (!req.contains("action")) return error_response(wire_error::kBadAction, "missing 'action'");
    Action action;
    try {
      action = parse_action(req["action"], active_.variant);
    } catch (const ArgumentError& e) {
      return error_response(wire_error::kBadAction, e.what());
    }
    const StepResult r = env_->step(action);
    return json{{"type", "state"},
                {"observation", observation_json(r.observation)},
                {"reward", r.reward},
                {"done", r.done},
                {"step", env_->state().step_count},
                {"info", info_json(r.info)}}
        .dump();
  }

  if (op == "close") {
    closed_ = true;
    env_.reset();
    return json{{"type", "closed"}}.dump();
  }

  return error_response(wire_error::kUnknownOp, "unknown op '" + op + "'");
}

}  // namespace sortenv
