#include <gtest/gtest.h>

#include <json.hpp>

#include "sortenv/agents.hpp"
#include "sortenv/bench.hpp"
#include "sortenv/protocol.hpp"

using namespace sortenv;
using nlohmann::json;

namespace {

json call(ProtocolSession& s, const std::string& line) { return json::parse(s.handle(line)); }

void expect_error(const json& j, std::string_view code) {
  EXPECT_EQ(j["type"], "error");
  EXPECT_EQ(j["code"], code) << j.dump();
}

}  // namespace

TEST(Protocol, HelloDescribesSpaces) {
  ProtocolSession basic(EnvConfig{});
  const json spec = call(basic, R"({"op":"hello","version":1})");
  EXPECT_EQ(spec["type"], "spec");
  EXPECT_EQ(spec["n_actions"], 10);
  EXPECT_EQ(spec["actions"].size(), 10u);
  EXPECT_EQ(spec["observation"].size(), 1u);

  EnvConfig adv;
  adv.variant = Variant::Advanced;
  ProtocolSession advanced(adv);
  const json aspec = call(advanced, R"({"op":"hello"})");
  EXPECT_EQ(aspec["n_actions"], 30);
  EXPECT_EQ(aspec["actions"][17]["speed_index"], 8);
  EXPECT_EQ(aspec["actions"][17]["mode"], "positive");
  EXPECT_EQ(aspec["observation"].size(), 2u);
}

TEST(Protocol, VersionMismatch) {
  ProtocolSession s(EnvConfig{});
  expect_error(call(s, R"({"op":"hello","version":2})"), wire_error::kVersion);
  expect_error(call(s, R"({"op":"hello","version":"1"})"), wire_error::kVersion);
}

TEST(Protocol, StepBeforeReset) {
  ProtocolSession s(EnvConfig{});
  expect_error(call(s, R"({"op":"step","action":3})"), wire_error::kNoEpisode);
}

TEST(Protocol, MalformedRequestsKeepSessionAlive) {
  ProtocolSession s(EnvConfig{});
  expect_error(call(s, "{not json"), wire_error::kBadRequest);
  expect_error(call(s, "[1,2]"), wire_error::kBadRequest);
  expect_error(call(s, R"({"op":7})"), wire_error::kBadRequest);
  expect_error(call(s, R"({"op":"dance"})"), wire_error::kUnknownOp);
  expect_error(call(s, R"({"op":"reset","seed":-1})"), wire_error::kBadRequest);
  EXPECT_EQ(call(s, R"({"op":"reset","seed":1})")["type"], "state");
  EXPECT_EQ(call(s, R"({"op":"step","action":0})")["type"], "state");
}

TEST(Protocol, BadActions) {
  ProtocolSession s(EnvConfig{});
  call(s, R"({"op":"reset","seed":1})");
  expect_error(call(s, R"({"op":"step"})"), wire_error::kBadAction);
  expect_error(call(s, R"({"op":"step","action":10})"), wire_error::kBadAction);
  expect_error(call(s, R"({"op":"step","action":-1})"), wire_error::kBadAction);
  expect_error(call(s, R"({"op":"step","action":{"speed":11}})"), wire_error::kBadAction);
  expect_error(call(s, R"({"op":"step","action":{"speed":3,"mode":"basic"}})"),
               wire_error::kBadAction);
  expect_error(call(s, R"({"op":"step","action":"fast"})"), wire_error::kBadAction);
  const json ok = call(s, R"({"op":"step","action":{"speed":3}})");
  EXPECT_EQ(ok["info"]["speed_index"], 3);
  EXPECT_EQ(ok["step"], 1);
}

TEST(Protocol, EpisodeDoneAndReset) {
  ProtocolSession s(EnvConfig{});
  call(s, R"({"op":"reset","seed":3,"config":{"episode_length":2}})");
  EXPECT_FALSE(call(s, R"({"op":"step","action":4})")["done"].get<bool>());
  EXPECT_TRUE(call(s, R"({"op":"step","action":4})")["done"].get<bool>());
  expect_error(call(s, R"({"op":"step","action":4})"), wire_error::kEpisodeDone);
  EXPECT_EQ(call(s, R"({"op":"reset","seed":3})")["step"], 0);
  EXPECT_EQ(call(s, R"({"op":"step","action":4})")["step"], 1);
}

TEST(Protocol, BadConfig) {
  ProtocolSession s(EnvConfig{});
  expect_error(call(s, R"({"op":"reset","config":{"variant":"deluxe"}})"), wire_error::kBadConfig);
  expect_error(call(s, R"({"op":"reset","config":{"threshold":1.5}})"), wire_error::kBadConfig);
  expect_error(call(s, R"({"op":"reset","config":{"warp":1}})"), wire_error::kBadConfig);
  expect_error(call(s, R"({"op":"reset","config":[1]})"), wire_error::kBadConfig);
  // A failed reset leaves no episode behind.
  expect_error(call(s, R"({"op":"step","action":1})"), wire_error::kNoEpisode);
}

TEST(Protocol, ConfigOverridesSelectVariant) {
  ProtocolSession s(EnvConfig{});
  const json st = call(s, R"({"op":"reset","seed":5,"config":{"variant":"advanced",
      "input_type":"seasonal","base_noise_range":[0.0,0.0]}})");
  EXPECT_TRUE(st["observation"]["ratio_category"].is_string());
  EXPECT_EQ(call(s, R"({"op":"hello"})")["n_actions"], 30);
  const json r = call(s, R"({"op":"step","action":{"speed":2,"mode":"negative"}})");
  EXPECT_EQ(r["info"]["mode"], "negative");
  EXPECT_EQ(call(s, R"({"op":"step","action":29})")["info"]["speed_index"], 10);
}

TEST(Protocol, MatchesInProcessEpisode) {
  EnvConfig cfg;
  cfg.obs_noise_level = 0.3;
  RbaAgent agent(build_rba_table(cfg));
  const EpisodeResult ref = run_episode(cfg, agent, 50, 42);

  ProtocolSession s(cfg);
  json st = call(s, R"({"op":"reset","seed":42})");
  for (const auto& row : ref.trace.rows) {
    const Action a = agent.act({st["observation"]["input_total"].get<double>(), std::nullopt});
    st = call(s, json{{"op", "step"}, {"action", action_to_index(a)}}.dump());
    ASSERT_EQ(st["reward"].get<double>(), row.reward);
    ASSERT_EQ(st["info"]["speed"].get<double>(), row.speed);
  }
  EXPECT_TRUE(st["done"].get<bool>());
}

TEST(Protocol, InterleavedSessionsAreIsolated) {
  ProtocolSession a(EnvConfig{}), b(EnvConfig{}), solo(EnvConfig{});
  call(a, R"({"op":"reset","seed":9})");
  call(b, R"({"op":"reset","seed":9,"config":{"obs_noise_level":0.3}})");
  call(solo, R"({"op":"reset","seed":9})");
  for (int t = 0; t < 20; ++t) {
    const std::string step = json{{"op", "step"}, {"action", t % 10}}.dump();
    call(b, step);
    EXPECT_EQ(call(a, step), call(solo, step));
  }
}

TEST(Protocol, Close) {
  ProtocolSession s(EnvConfig{});
  call(s, R"({"op":"reset","seed":1})");
  EXPECT_EQ(call(s, R"({"op":"close"})")["type"], "closed");
  EXPECT_TRUE(s.closed());
  expect_error(call(s, R"({"op":"step","action":1})"), wire_error::kNoEpisode);
}
