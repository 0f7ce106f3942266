/*
 * Copyright 2026 The otwb Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "otwb/errors.hpp"
#include "otwb/json_io.hpp"
#include "test_util.hpp"

using namespace otwb;
using namespace otwb::testing;
using nlohmann::json;

TEST(ReplicaNames, RoundTrip) {
  EXPECT_EQ(replica_from_string("server"), kServerId);
  EXPECT_EQ(replica_from_string("c12"), 12);
  for (ReplicaId r : {0, 1, 7}) EXPECT_EQ(replica_from_string(replica_name(r)), r);
  EXPECT_THROW(replica_from_string("c"), ScheduleError);
  EXPECT_THROW(replica_from_string("c1x"), ScheduleError);
  EXPECT_THROW(replica_from_string("client1"), ScheduleError);
}

TEST(ScheduleJson, ScenarioRoundTrips) {
  const auto s = podc16_schedule();
  const json j = to_json(s);
  EXPECT_EQ(j.at("format"), kFormatVersion);
  EXPECT_EQ(j.at("steps").size(), s.steps.size());
  EXPECT_EQ(j.at("steps")[0], json::parse(R"({"type":"generate","cid":1,"op":{"kind":"ins","glyph":"x","pos":0}})"));
  EXPECT_EQ(j.at("steps")[1], json::parse(R"({"type":"deliver","to":"server","from":"c1"})"));
  EXPECT_EQ(schedule_from_json(j), s);
}

TEST(ScheduleJson, RandomSchedulesRoundTrip) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto s = corpus_schedule(seed);
    auto back = schedule_from_json(json::parse(to_json(s).dump()));
    EXPECT_EQ(back, s) << seed;
    ASSERT_TRUE(back.rng.has_value());
    EXPECT_EQ(back.rng->seed, seed);
  }
}

TEST(ScheduleJson, MinimalDocument) {
  auto s = schedule_from_json(json::parse(R"({"format":1,"n_clients":2})"));
  EXPECT_EQ(s.n_clients, 2);
  EXPECT_TRUE(s.steps.empty());
  EXPECT_EQ(s.priority_rule, PriorityRule::kSmallerWins);
}

TEST(ScheduleJson, MalformedDocumentsAreRejected) {
  const char* bad[] = {
      R"([])",
      R"({"format":2,"n_clients":1,"steps":[]})",
      R"({"format":1,"steps":[]})",
      R"({"format":1,"n_clients":"3","steps":[]})",
      R"({"format":1,"n_clients":1,"priority_rule":"random","steps":[]})",
      R"({"format":1,"n_clients":1,"steps":[{"type":"jump"}]})",
      R"({"format":1,"n_clients":1,"steps":[{"type":"generate","cid":1,"op":{"kind":"ins","pos":0}}]})",
      R"({"format":1,"n_clients":1,"steps":[{"type":"generate","cid":1,"op":{"kind":"ins","glyph":"xy","pos":0}}]})",
      R"({"format":1,"n_clients":1,"steps":[{"type":"generate","cid":1,"op":{"kind":"swap"}}]})",
      R"({"format":1,"n_clients":1,"steps":[{"type":"generate","cid":2,"op":{"kind":"read"}}]})",
      R"({"format":1,"n_clients":1,"steps":[{"type":"deliver","to":"c1","from":"c1"}]})",
      R"({"format":1,"n_clients":1,"steps":[{"type":"deliver","to":"server","from":"bob"}]})",
  };
  for (const char* doc : bad) EXPECT_THROW(schedule_from_json(json::parse(doc)), ScheduleError) << doc;
}

TEST(ScheduleJson, LoadFromFile) {
  const auto dir = std::filesystem::temp_directory_path() / "otwb_json_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "ok.json") << to_json(podc16_schedule()).dump(2);
    std::ofstream(dir / "broken.json") << "{\"format\": 1,";
  }
  EXPECT_EQ(load_schedule((dir / "ok.json").string()), podc16_schedule());
  EXPECT_THROW(load_schedule((dir / "broken.json").string()), ScheduleError);
  EXPECT_THROW(load_schedule((dir / "missing.json").string()), std::exception);
  std::filesystem::remove_all(dir);
}

TEST(TraceJson, Shape) {
  const auto r = run(podc16_schedule());
  const json j = to_json(r.trace);
  EXPECT_EQ(j.at("format"), 1);
  EXPECT_EQ(j.at("protocol"), "cjupiter");
  EXPECT_EQ(j.at("priority_rule"), "smaller_wins");
  EXPECT_TRUE(j.at("rng").is_null());
  ASSERT_EQ(j.at("events").size(), r.trace.events.size());
  const auto& first = j.at("events")[0];
  EXPECT_EQ(first.at("type"), "do");
  EXPECT_EQ(first.at("replica"), "c1");
  EXPECT_EQ(first.at("clock").size(), 4U);
  for (const auto& e : j.at("events")) {
    if (e.at("type") == "send") {
      EXPECT_TRUE(e.contains("to"));
      EXPECT_FALSE(e.contains("list"));
    } else {
      EXPECT_TRUE(e.contains("list"));
    }
  }
}

TEST(TraceJson, DjupiterSendsBroadcast) {
  const json j = to_json(run(podc16_schedule(), RunConfig{Protocol::kDJupiter}).trace);
  bool any = false;
  for (const auto& e : j.at("events")) {
    if (e.at("type") == "send") {
      EXPECT_EQ(e.at("to"), "broadcast");
      any = true;
    }
  }
  EXPECT_TRUE(any);
}

TEST(TraceJson, SameSeedSameBytes) {
  for (std::uint64_t seed : {0ULL, 17ULL, 123456789ULL}) {
    const auto a = to_json(run(random_schedule(3, 6, seed)).trace).dump(2);
    const auto b = to_json(run(random_schedule(3, 6, seed)).trace).dump(2);
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find("mt19937_64"), std::string::npos);
  }
}

TEST(VerdictJson, Fields) {
  Verdict ok{"convergence", true, "", nullptr};
  EXPECT_EQ(to_json(ok).at("satisfied"), true);
  Verdict bad{"strong_spec", false, "cycle", json{{"cycle", {"a", "b"}}}};
  const auto j = to_json(std::vector<Verdict>{ok, bad});
  ASSERT_EQ(j.size(), 2U);
  EXPECT_EQ(j[1].at("check"), "strong_spec");
  EXPECT_EQ(j[1].at("witness").at("cycle")[1], "b");
}
