// Copyright 2026 The grindopt Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#include <charconv>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "grindopt/cli.hpp"
#include "grindopt/errors.hpp"
#include "grindopt/serialization.hpp"
#include "grindopt/store.hpp"

using namespace grindopt;

namespace {

SessionDocument sample_document() {
  SessionConfig config;
  config.seed = 4;
  config.trial_cap = 6;
  SessionDocument doc;
  doc.id = "sample";
  doc.created_at = "2026-01-02T03:04:05Z";
  doc.updated_at = "2026-01-02T03:04:06Z";
  doc.state = run_simulation(default_plant(), config).state();
  return doc;
}

}  // namespace

TEST_SUITE("serialization") {
  TEST_CASE("shortest round-trip number formatting") {
    for (double v : {0.1, 1.0 / 3.0, 2329.5, 1e-300, -7.25e12, 0.0}) {
      const std::string text = format_double(v);
      double back = 0.0;
      std::from_chars(text.data(), text.data() + text.size(), back);
      CHECK(back == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(7.0) == "7");
  }

  TEST_CASE("timestamps are UTC ISO-8601") {
    CHECK(utc_timestamp(std::chrono::system_clock::time_point{}) == "1970-01-01T00:00:00Z");
    CHECK(utc_timestamp(std::chrono::system_clock::time_point{std::chrono::seconds(1'700'000'000)}) ==
          "2023-11-14T22:13:20Z");
  }

  TEST_CASE("documents round-trip exactly") {
    const SessionDocument doc = sample_document();
    const std::string text = dump_document(doc);
    const SessionDocument back = parse_document(text);
    CHECK(back.id == doc.id);
    CHECK(back.created_at == doc.created_at);
    CHECK(back.updated_at == doc.updated_at);
    CHECK(back.schema_version == kSchemaVersion);
    CHECK(back.state == doc.state);
    CHECK(dump_document(back) == text);
  }

  TEST_CASE("unknown top-level fields survive a round trip") {
    Json j = to_json(sample_document());
    j["operator_notes"] = {{"shift", "B"}, {"values", {1, 2, 3}}};
    j["x_flag"] = true;
    const SessionDocument doc = document_from_json(j);
    CHECK(doc.extra.size() == 2);
    const Json again = parse_json(dump_document(doc));
    CHECK(again["operator_notes"] == j["operator_notes"]);
    CHECK(again["x_flag"] == true);
  }

  TEST_CASE("trial tokens persist") {
    SessionDocument doc = sample_document();
    doc.trial_tokens["abc"] = {{"payload", {{"k", 1}}}, {"response", {{"status", 200}}}};
    const SessionDocument back = parse_document(dump_document(doc));
    CHECK(back.trial_tokens == doc.trial_tokens);
  }

  TEST_CASE("syntax errors carry their byte offset") {
    const std::string text = "{\"id\": \"x\", \"trials\": [1, 2,, 3]}";
    try {
      parse_document(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.byte_offset() == text.find(",,") + 2);
    }
    CHECK_THROWS_AS(parse_document(""), ParseError);
  }

  TEST_CASE("schema errors name the offending field") {
    Json j = to_json(sample_document());
    j["trials"][1]["params"]["feed_rate_mmpm"] = "fast";
    j["config"]["epsilon_U"] = -1;
    try {
      document_from_json(j);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      bool saw_feed = false;
      for (const auto& f : e.errors()) {
        saw_feed = saw_feed || f.field == "trials[1].params.feed_rate_mmpm";
      }
      CHECK(saw_feed);
    }
    try {
      parse_document(j.dump());
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.byte_offset() == 0);
    }
    Json newer = to_json(sample_document());
    newer["schema_version"] = kSchemaVersion + 1;
    CHECK_THROWS_AS(document_from_json(newer), ValidationError);
  }

  TEST_CASE("config fields use unit-suffixed names") {
    const Json j = to_json(SessionConfig{});
    CHECK(j["domain"]["cutting_speed_mps"]["min"] == 12.0);
    CHECK(j["domain"]["feed_rate_mmpm"]["max"] == 40.0);
    CHECK(j["constraints"]["temperature"]["limit_C"] == 585.0);
    CHECK(j["constraints"]["roughness"]["limit_nm"] == 230.0);
    CHECK(j["epsilon_U"] == 0.04);
    CHECK(config_from_json(j) == SessionConfig{});
    CHECK(config_from_json(Json::object()) == SessionConfig{});
  }

  TEST_CASE("plant configuration round trip and recalibration") {
    const PlantModel plant = default_plant();
    CHECK(plant_from_json(to_json(plant)) == plant);
    Json j = Json::object();
    j["calibration"] = {{"cutting_speed_mps", 20.0}, {"feed_rate_mmpm", 12.0}, {"interval_inserts", 4.0}};
    CHECK(true_surfaces(plant_from_json(j), {20.0, 12.0}).dressing_interval_inserts == 4.0);
    Json bad = Json::object();
    bad["insert_cap"] = 0;
    CHECK_THROWS_AS(plant_from_json(bad), ValidationError);
  }

  TEST_CASE("trial log CSV") {
    const SessionDocument doc = sample_document();
    const std::string csv = trial_log_csv(doc.state.trials);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line ==
          "index,cutting_speed_mps,feed_rate_mmpm,first_side_temp_C,max_roughness_nm,dressing_interval_inserts,"
          "censored,cost_U,origin");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      CHECK(std::count(line.begin(), line.end(), ',') == 8);
      ++rows;
    }
    CHECK(rows == doc.state.trials.size());
    CHECK(csv.find(",random-init\n") != std::string::npos);
  }

  TEST_CASE("atomic store round trip and listing") {
    const auto dir = fixtures::temp_dir("store");
    const SessionStore store(dir);
    SessionDocument doc = sample_document();
    store.save(doc);
    doc.id = "another_one";
    store.save(doc);
    CHECK(store.exists("sample"));
    CHECK(store.list() == std::vector<std::string>{"another_one", "sample"});
    CHECK(store.load("sample").state == doc.state);
    CHECK_THROWS_AS(store.load("missing"), NotFoundError);
    CHECK_THROWS_AS(store.path_for("../etc/passwd"), ValidationError);
    CHECK_THROWS_AS(store.path_for(""), ValidationError);
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      CHECK(entry.path().extension() == ".json");
    }
    std::filesystem::remove_all(dir);
  }
}
