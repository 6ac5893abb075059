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

#ifndef GRINDOPT_SERIALIZATION_HPP
#define GRINDOPT_SERIALIZATION_HPP

#include <chrono>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

#include "grindopt/plant_sim.hpp"
#include "grindopt/session.hpp"

namespace grindopt {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// A persisted session. Top-level keys this version does not know about are
/// kept in `extra` and written back unchanged.
struct SessionDocument {
  int schema_version = kSchemaVersion;
  std::string id;
  std::string created_at;
  std::string updated_at;
  SessionState state;
  /// Client-supplied trial tokens mapped to {"payload", "response"}, so a
  /// retried submission returns the original response.
  Json trial_tokens = Json::object();
  Json extra = Json::object();
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp(std::chrono::system_clock::time_point when);

Json to_json(const ProcessParams& params);
Json to_json(const TrialOutcome& outcome);
Json to_json(const TrialRecord& trial);
Json to_json(const Recommendation& recommendation);
Json to_json(const ConvergenceStatus& status);
Json to_json(const gp::Hyperparams& hyper);
Json to_json(const SessionConfig& config);
Json to_json(const PlantModel& plant);
Json to_json(const SessionDocument& doc);

// The readers below start from defaults, override the fields present, and
// throw ValidationError listing every malformed field by its dotted path.
ProcessParams params_from_json(const Json& j);
TrialOutcome outcome_from_json(const Json& j);
SessionConfig config_from_json(const Json& j);
/// Starts from default_plant(). A "calibration" object {cutting_speed_mps,
/// feed_rate_mmpm, interval_inserts} re-solves the dulling slope after the
/// other fields are applied.
PlantModel plant_from_json(const Json& j);
SessionDocument document_from_json(const Json& j);

std::string dump_document(const SessionDocument& doc);
/// Throws ParseError carrying the byte offset of a syntax error; a document
/// that parses but does not match the schema reports offset 0.
SessionDocument parse_document(std::string_view text);

/// Parse arbitrary JSON text, mapping syntax errors to ParseError.
Json parse_json(std::string_view text);

/// Trial log with the fixed export header, one row per trial.
std::string trial_log_csv(std::span<const TrialRecord> trials);

/// Surface grid: cutting_speed_mps,feed_rate_mmpm,mean,variance.
std::string surface_csv(std::span<const SurfacePoint> points);

}  // namespace grindopt

#endif  // GRINDOPT_SERIALIZATION_HPP
