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

#include "grindopt/serialization.hpp"

#include <charconv>
#include <cmath>
#include <ctime>
#include <set>

#include "grindopt/errors.hpp"

namespace grindopt {

namespace {

// Collects field errors while walking a JSON tree so one response can report
// all of them.
class Reader {
 public:
  explicit Reader(std::vector<FieldError>& errors) : errors_(errors) {}

  void fail(const std::string& path, const std::string& message) { errors_.push_back({path, message}); }

  // Returns the member, or nullptr when absent. Records an error when
  // `required` and absent.
  const Json* member(const Json& obj, const std::string& path, std::string_view key, bool required = false) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) {
        fail(join(path, key), "is required");
      }
      return nullptr;
    }
    return &*it;
  }

  bool object(const Json& j, const std::string& path) {
    if (!j.is_object()) {
      fail(path.empty() ? "body" : path, "must be an object");
      return false;
    }
    return true;
  }

  void number(const Json& obj, const std::string& path, std::string_view key, double& out, bool required = false) {
    if (const Json* v = member(obj, path, key, required)) {
      if (!v->is_number()) {
        fail(join(path, key), "must be a number");
        return;
      }
      out = v->get<double>();
    }
  }

  template <typename Int>
  void integer(const Json& obj, const std::string& path, std::string_view key, Int& out, bool required = false) {
    if (const Json* v = member(obj, path, key, required)) {
      if (!v->is_number_integer() || (std::is_unsigned_v<Int> && !v->is_number_unsigned())) {
        fail(join(path, key), std::is_unsigned_v<Int> ? "must be a non-negative integer" : "must be an integer");
        return;
      }
      out = v->get<Int>();
    }
  }

  void boolean(const Json& obj, const std::string& path, std::string_view key, bool& out, bool required = false) {
    if (const Json* v = member(obj, path, key, required)) {
      if (!v->is_boolean()) {
        fail(join(path, key), "must be true or false");
        return;
      }
      out = v->get<bool>();
    }
  }

  void string(const Json& obj, const std::string& path, std::string_view key, std::string& out,
              bool required = false) {
    if (const Json* v = member(obj, path, key, required)) {
      if (!v->is_string()) {
        fail(join(path, key), "must be a string");
        return;
      }
      out = v->get<std::string>();
    }
  }

  // Optional number that may also be null.
  void nullable(const Json& obj, const std::string& path, std::string_view key, std::optional<double>& out) {
    if (const Json* v = member(obj, path, key)) {
      if (v->is_null()) {
        out.reset();
      } else if (v->is_number()) {
        out = v->get<double>();
      } else {
        fail(join(path, key), "must be a number or null");
      }
    }
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }

  static std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

 private:
  std::vector<FieldError>& errors_;
};

void throw_if_any(std::vector<FieldError>& errors) {
  if (!errors.empty()) {
    throw ValidationError(std::move(errors));
  }
}

Json range_json(double lo, double hi) { return Json{{"min", lo}, {"max", hi}}; }

void read_range(Reader& r, const Json& obj, const std::string& path, std::string_view key, double& lo, double& hi) {
  if (const Json* v = r.member(obj, path, key)) {
    const auto sub = Reader::join(path, key);
    if (r.object(*v, sub)) {
      r.number(*v, sub, "min", lo);
      r.number(*v, sub, "max", hi);
    }
  }
}

void read_params(Reader& r, const Json& j, const std::string& path, ProcessParams& out) {
  if (!r.object(j, path)) {
    return;
  }
  r.number(j, path, "cutting_speed_mps", out.cutting_speed_mps, true);
  r.number(j, path, "feed_rate_mmpm", out.feed_rate_mmpm, true);
}

void read_outcome(Reader& r, const Json& j, const std::string& path, TrialOutcome& out) {
  if (!r.object(j, path)) {
    return;
  }
  r.number(j, path, "first_side_temp_C", out.first_side_temperature_c, true);
  r.number(j, path, "max_roughness_nm", out.max_roughness_nm, true);
  r.number(j, path, "dressing_interval_inserts", out.dressing_interval_inserts, true);
  r.boolean(j, path, "censored", out.censored);
}

void read_origin(Reader& r, const Json& obj, const std::string& path, TrialOrigin& out) {
  std::string name;
  r.string(obj, path, "origin", name);
  if (name.empty()) {
    return;
  }
  if (auto o = parse_origin(name)) {
    out = *o;
  } else {
    r.fail(Reader::join(path, "origin"), "must be random-init, acquisition or manual");
  }
}

void read_config(Reader& r, const Json& j, const std::string& path, SessionConfig& c) {
  if (!r.object(j, path)) {
    return;
  }
  if (const Json* d = r.member(j, path, "domain")) {
    const auto sub = Reader::join(path, "domain");
    if (r.object(*d, sub)) {
      read_range(r, *d, sub, "cutting_speed_mps", c.domain.lower(0), c.domain.upper(0));
      read_range(r, *d, sub, "feed_rate_mmpm", c.domain.lower(1), c.domain.upper(1));
    }
  }
  if (const Json* cs = r.member(j, path, "constraints")) {
    const auto sub = Reader::join(path, "constraints");
    if (r.object(*cs, sub)) {
      if (const Json* t = r.member(*cs, sub, "temperature")) {
        const auto tp = Reader::join(sub, "temperature");
        if (r.object(*t, tp)) {
          r.number(*t, tp, "limit_C", c.temperature.limit);
          r.number(*t, tp, "p_min", c.temperature.p_min);
        }
      }
      if (const Json* ra = r.member(*cs, sub, "roughness")) {
        const auto rp = Reader::join(sub, "roughness");
        if (r.object(*ra, rp)) {
          r.number(*ra, rp, "limit_nm", c.roughness.limit);
          r.number(*ra, rp, "p_min", c.roughness.p_min);
        }
      }
    }
  }
  if (const Json* k = r.member(j, path, "cost")) {
    const auto sub = Reader::join(path, "cost");
    if (r.object(*k, sub)) {
      auto& p = c.cost;
      r.number(*k, sub, "removed_volume_per_insert_mm3", p.removed_volume_per_insert_mm3);
      r.number(*k, sub, "sides_per_insert", p.sides_per_insert);
      r.number(*k, sub, "infeed_per_side_mm", p.infeed_per_side_mm);
      r.number(*k, sub, "dressing_time_s", p.dressing_time_s);
      r.number(*k, sub, "wheel_layer_thickness_mm", p.wheel_layer_thickness_mm);
      r.number(*k, sub, "wheel_dressing_wear_mm", p.wheel_dressing_wear_mm);
      r.number(*k, sub, "dresser_thickness_mm", p.dresser_thickness_mm);
      r.number(*k, sub, "dresser_dressing_wear_mm", p.dresser_dressing_wear_mm);
      r.number(*k, sub, "machine_rate_U_per_h", p.machine_rate_u_per_h);
      r.number(*k, sub, "wheel_cost_U", p.wheel_cost_u);
      r.number(*k, sub, "dresser_cost_U", p.dresser_cost_u);
    }
  }
  r.number(j, path, "epsilon_U", c.epsilon_u);
  r.integer(j, path, "seed", c.seed);
  r.integer(j, path, "trial_cap", c.trial_cap);
  r.integer(j, path, "initial_trials", c.initial_trials);
  if (const Json* cv = r.member(j, path, "convergence")) {
    const auto sub = Reader::join(path, "convergence");
    if (r.object(*cv, sub)) {
      r.integer(*cv, sub, "window", c.convergence.window);
      r.number(*cv, sub, "feed_span_mmpm", c.convergence.feed_span_mmpm);
      r.number(*cv, sub, "speed_span_mps", c.convergence.speed_span_mps);
    }
  }
  if (const Json* h = r.member(j, path, "hyperparameters")) {
    const auto sub = Reader::join(path, "hyperparameters");
    if (r.object(*h, sub)) {
      r.integer(*h, sub, "restarts", c.hyper_restarts);
      auto& b = c.hyper_bounds;
      read_range(r, *h, sub, "signal_variance", b.signal_variance.lower, b.signal_variance.upper);
      read_range(r, *h, sub, "length_scale", b.length_scale.lower, b.length_scale.upper);
      read_range(r, *h, sub, "noise_variance", b.noise_variance.lower, b.noise_variance.upper);
    }
  }
  if (const Json* g = r.member(j, path, "acquisition_grid")) {
    const auto sub = Reader::join(path, "acquisition_grid");
    if (r.object(*g, sub)) {
      r.integer(*g, sub, "grid_n", c.grid.grid_n);
      r.integer(*g, sub, "refine_starts", c.grid.refine_starts);
      r.number(*g, sub, "refine_tolerance", c.grid.refine_tolerance);
      r.integer(*g, sub, "refine_max_evaluations", c.grid.refine_max_evaluations);
    }
  }
}

void read_hyper(Reader& r, const Json& j, const std::string& path, gp::Hyperparams& h) {
  if (!r.object(j, path)) {
    return;
  }
  r.number(j, path, "signal_variance", h.signal_variance, true);
  r.number(j, path, "noise_variance", h.noise_variance, true);
  if (const Json* ls = r.member(j, path, "length_scales", true)) {
    const auto sub = Reader::join(path, "length_scales");
    if (!ls->is_array()) {
      r.fail(sub, "must be an array of numbers");
      return;
    }
    h.length_scales.clear();
    for (std::size_t i = 0; i < ls->size(); ++i) {
      if (!(*ls)[i].is_number()) {
        r.fail(Reader::index(sub, i), "must be a number");
        continue;
      }
      h.length_scales.push_back((*ls)[i].get<double>());
    }
  }
}

void read_recommendation(Reader& r, const Json& j, const std::string& path, Recommendation& rec) {
  if (!r.object(j, path)) {
    return;
  }
  if (const Json* p = r.member(j, path, "params", true)) {
    read_params(r, *p, Reader::join(path, "params"), rec.params);
  }
  r.number(j, path, "expected_cost_U", rec.expected_cost_u, true);
  r.number(j, path, "cost_ci_halfwidth_U", rec.cost_ci_halfwidth_u, true);
  if (const Json* f = r.member(j, path, "feasibility")) {
    const auto sub = Reader::join(path, "feasibility");
    if (r.object(*f, sub)) {
      for (const auto& [name, value] : f->items()) {
        if (!value.is_number()) {
          r.fail(Reader::join(sub, name), "must be a number");
          continue;
        }
        rec.feasibility[name] = value.get<double>();
      }
    }
  }
}

void read_status(Reader& r, const Json& j, const std::string& path, ConvergenceStatus& s) {
  if (!r.object(j, path)) {
    return;
  }
  r.integer(j, path, "trial_count", s.trial_count);
  r.boolean(j, path, "converged", s.converged);
  r.nullable(j, path, "criterion_value_U", s.criterion_value_u);
  r.integer(j, path, "consecutive_hits", s.consecutive_hits);
  r.nullable(j, path, "recent_feed_span_mmpm", s.recent_feed_span_mmpm);
  r.nullable(j, path, "recent_speed_span_mps", s.recent_speed_span_mps);
}

template <typename T, typename Fn>
void read_array(Reader& r, const Json& obj, std::string_view key, std::vector<T>& out, Fn&& read_item) {
  const Json* arr = r.member(obj, "", key);
  if (!arr) {
    return;
  }
  const std::string path(key);
  if (!arr->is_array()) {
    r.fail(path, "must be an array");
    return;
  }
  out.clear();
  for (std::size_t i = 0; i < arr->size(); ++i) {
    T item;
    read_item((*arr)[i], Reader::index(path, i), item);
    out.push_back(std::move(item));
  }
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

void append_csv_number(std::string& out, double value) { out += format_double(value); }

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string utc_timestamp(std::chrono::system_clock::time_point when) {
  const std::time_t t = std::chrono::system_clock::to_time_t(when);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json to_json(const ProcessParams& params) {
  return Json{{"cutting_speed_mps", params.cutting_speed_mps}, {"feed_rate_mmpm", params.feed_rate_mmpm}};
}

Json to_json(const TrialOutcome& outcome) {
  return Json{{"first_side_temp_C", outcome.first_side_temperature_c},
              {"max_roughness_nm", outcome.max_roughness_nm},
              {"dressing_interval_inserts", outcome.dressing_interval_inserts},
              {"censored", outcome.censored}};
}

Json to_json(const TrialRecord& trial) {
  return Json{{"index", trial.index},
              {"params", to_json(trial.params)},
              {"outcome", to_json(trial.outcome)},
              {"cost_U", trial.cost_u},
              {"origin", std::string(to_string(trial.origin))},
              {"out_of_domain", trial.out_of_domain}};
}

Json to_json(const Recommendation& rec) {
  Json feasibility = Json::object();
  for (const auto& [name, p] : rec.feasibility) {
    feasibility[name] = p;
  }
  return Json{{"params", to_json(rec.params)},
              {"expected_cost_U", rec.expected_cost_u},
              {"cost_ci_halfwidth_U", rec.cost_ci_halfwidth_u},
              {"feasibility", std::move(feasibility)}};
}

Json to_json(const ConvergenceStatus& s) {
  return Json{{"trial_count", s.trial_count},
              {"converged", s.converged},
              {"criterion_value_U", optional_json(s.criterion_value_u)},
              {"consecutive_hits", s.consecutive_hits},
              {"recent_feed_span_mmpm", optional_json(s.recent_feed_span_mmpm)},
              {"recent_speed_span_mps", optional_json(s.recent_speed_span_mps)}};
}

Json to_json(const gp::Hyperparams& h) {
  return Json{{"signal_variance", h.signal_variance},
              {"length_scales", h.length_scales},
              {"noise_variance", h.noise_variance}};
}

Json to_json(const SessionConfig& c) {
  const auto& p = c.cost;
  const auto& b = c.hyper_bounds;
  return Json{
      {"domain",
       {{"cutting_speed_mps", range_json(c.domain.lower(0), c.domain.upper(0))},
        {"feed_rate_mmpm", range_json(c.domain.lower(1), c.domain.upper(1))}}},
      {"constraints",
       {{"temperature", {{"limit_C", c.temperature.limit}, {"p_min", c.temperature.p_min}}},
        {"roughness", {{"limit_nm", c.roughness.limit}, {"p_min", c.roughness.p_min}}}}},
      {"cost",
       {{"removed_volume_per_insert_mm3", p.removed_volume_per_insert_mm3},
        {"sides_per_insert", p.sides_per_insert},
        {"infeed_per_side_mm", p.infeed_per_side_mm},
        {"dressing_time_s", p.dressing_time_s},
        {"wheel_layer_thickness_mm", p.wheel_layer_thickness_mm},
        {"wheel_dressing_wear_mm", p.wheel_dressing_wear_mm},
        {"dresser_thickness_mm", p.dresser_thickness_mm},
        {"dresser_dressing_wear_mm", p.dresser_dressing_wear_mm},
        {"machine_rate_U_per_h", p.machine_rate_u_per_h},
        {"wheel_cost_U", p.wheel_cost_u},
        {"dresser_cost_U", p.dresser_cost_u}}},
      {"epsilon_U", c.epsilon_u},
      {"seed", c.seed},
      {"trial_cap", c.trial_cap},
      {"initial_trials", c.initial_trials},
      {"convergence",
       {{"window", c.convergence.window},
        {"feed_span_mmpm", c.convergence.feed_span_mmpm},
        {"speed_span_mps", c.convergence.speed_span_mps}}},
      {"hyperparameters",
       {{"restarts", c.hyper_restarts},
        {"signal_variance", range_json(b.signal_variance.lower, b.signal_variance.upper)},
        {"length_scale", range_json(b.length_scale.lower, b.length_scale.upper)},
        {"noise_variance", range_json(b.noise_variance.lower, b.noise_variance.upper)}}},
      {"acquisition_grid",
       {{"grid_n", c.grid.grid_n},
        {"refine_starts", c.grid.refine_starts},
        {"refine_tolerance", c.grid.refine_tolerance},
        {"refine_max_evaluations", c.grid.refine_max_evaluations}}},
  };
}

Json to_json(const PlantModel& p) {
  return Json{
      {"roughness",
       {{"base_nm", p.roughness_base_nm},
        {"speed_slope_nm_per_mps", p.roughness_speed_slope},
        {"feed_slope_nm_per_mmpm", p.roughness_feed_slope},
        {"noise_sd_nm", p.roughness_noise_nm}}},
      {"temperature",
       {{"base_C", p.temperature_base_c},
        {"feed_slope_C_per_mmpm", p.temperature_feed_slope},
        {"speed_slope_C_per_mps", p.temperature_speed_slope},
        {"dulling_slope_C_per_mm3", p.dulling_slope_c_per_mm3},
        {"noise_sd_C", p.temperature_noise_c},
        {"burn_threshold_C", p.burn_threshold_c}}},
      {"insert_cap", p.insert_cap},
      {"removed_volume_per_insert_mm3", p.removed_volume_per_insert_mm3},
      {"sides_per_insert", p.sides_per_insert},
  };
}

Json to_json(const SessionDocument& doc) {
  const auto& s = doc.state;
  Json trials = Json::array();
  for (const auto& t : s.trials) {
    trials.push_back(to_json(t));
  }
  Json pending = Json::array();
  for (const auto& p : s.pending) {
    pending.push_back(Json{{"params", to_json(p.params)}, {"origin", std::string(to_string(p.origin))}});
  }
  Json recs = Json::array();
  for (const auto& r : s.recommendations) {
    recs.push_back(Json{{"trial_count", r.trial_count},
                        {"p_min_temperature", r.p_min_temperature},
                        {"p_min_roughness", r.p_min_roughness},
                        {"recommendation", r.recommendation ? to_json(*r.recommendation) : Json(nullptr)}});
  }
  Json convergence = Json::array();
  for (const auto& c : s.convergence) {
    convergence.push_back(to_json(c));
  }
  Json hyper = Json::object();
  for (const auto& [name, h] : s.hyperparameters) {
    hyper[name] = to_json(h);
  }

  Json out{{"schema_version", doc.schema_version},
           {"id", doc.id},
           {"created_at", doc.created_at},
           {"updated_at", doc.updated_at},
           {"config", to_json(s.config)},
           {"trials", std::move(trials)},
           {"pending", std::move(pending)},
           {"recommendations", std::move(recs)},
           {"convergence", std::move(convergence)},
           {"hyperparameters", std::move(hyper)},
           {"models_current", s.models_current},
           {"hyperparameter_fallback", s.hyperparameter_fallback}};
  if (!doc.trial_tokens.empty()) {
    out["trial_tokens"] = doc.trial_tokens;
  }
  for (const auto& [key, value] : doc.extra.items()) {
    if (!out.contains(key)) {
      out[key] = value;
    }
  }
  return out;
}

ProcessParams params_from_json(const Json& j) {
  std::vector<FieldError> errors;
  Reader r(errors);
  ProcessParams out;
  read_params(r, j, "", out);
  throw_if_any(errors);
  return out;
}

TrialOutcome outcome_from_json(const Json& j) {
  std::vector<FieldError> errors;
  Reader r(errors);
  TrialOutcome out;
  read_outcome(r, j, "", out);
  throw_if_any(errors);
  return out;
}

SessionConfig config_from_json(const Json& j) {
  std::vector<FieldError> errors;
  Reader r(errors);
  SessionConfig out;
  read_config(r, j, "", out);
  throw_if_any(errors);
  return out;
}

PlantModel plant_from_json(const Json& j) {
  std::vector<FieldError> errors;
  Reader r(errors);
  PlantModel p = default_plant();
  if (!r.object(j, "")) {
    throw_if_any(errors);
  }
  if (const Json* ra = r.member(j, "", "roughness"); ra && r.object(*ra, "roughness")) {
    r.number(*ra, "roughness", "base_nm", p.roughness_base_nm);
    r.number(*ra, "roughness", "speed_slope_nm_per_mps", p.roughness_speed_slope);
    r.number(*ra, "roughness", "feed_slope_nm_per_mmpm", p.roughness_feed_slope);
    r.number(*ra, "roughness", "noise_sd_nm", p.roughness_noise_nm);
  }
  if (const Json* t = r.member(j, "", "temperature"); t && r.object(*t, "temperature")) {
    r.number(*t, "temperature", "base_C", p.temperature_base_c);
    r.number(*t, "temperature", "feed_slope_C_per_mmpm", p.temperature_feed_slope);
    r.number(*t, "temperature", "speed_slope_C_per_mps", p.temperature_speed_slope);
    r.number(*t, "temperature", "dulling_slope_C_per_mm3", p.dulling_slope_c_per_mm3);
    r.number(*t, "temperature", "noise_sd_C", p.temperature_noise_c);
    r.number(*t, "temperature", "burn_threshold_C", p.burn_threshold_c);
  }
  r.number(j, "", "insert_cap", p.insert_cap);
  r.number(j, "", "removed_volume_per_insert_mm3", p.removed_volume_per_insert_mm3);
  r.integer(j, "", "sides_per_insert", p.sides_per_insert);

  std::optional<std::pair<ProcessParams, double>> anchor;
  if (const Json* c = r.member(j, "", "calibration"); c && r.object(*c, "calibration")) {
    ProcessParams at;
    double interval = 0.0;
    read_params(r, *c, "calibration", at);
    r.number(*c, "calibration", "interval_inserts", interval, true);
    anchor.emplace(at, interval);
  }
  throw_if_any(errors);
  if (anchor) {
    try {
      p = calibrate_dulling(p, anchor->first, anchor->second);
    } catch (const ContractViolation& e) {
      throw ValidationError("calibration", e.what());
    }
  }
  p.validate();
  return p;
}

SessionDocument document_from_json(const Json& j) {
  static const std::set<std::string, std::less<>> kKnown = {
      "schema_version", "id",          "created_at",      "updated_at",     "config",         "trials",
      "pending",        "recommendations", "convergence", "hyperparameters", "models_current", "hyperparameter_fallback", "trial_tokens"};

  std::vector<FieldError> errors;
  Reader r(errors);
  SessionDocument doc;
  if (!r.object(j, "")) {
    throw_if_any(errors);
  }
  r.integer(j, "", "schema_version", doc.schema_version, true);
  if (doc.schema_version > kSchemaVersion) {
    r.fail("schema_version", "document is newer than this build understands");
  }
  r.string(j, "", "id", doc.id, true);
  r.string(j, "", "created_at", doc.created_at);
  r.string(j, "", "updated_at", doc.updated_at);

  auto& s = doc.state;
  if (const Json* c = r.member(j, "", "config", true)) {
    read_config(r, *c, "config", s.config);
  }
  read_array(r, j, "trials", s.trials, [&](const Json& item, const std::string& path, TrialRecord& t) {
    if (!r.object(item, path)) {
      return;
    }
    r.integer(item, path, "index", t.index, true);
    if (const Json* p = r.member(item, path, "params", true)) {
      read_params(r, *p, Reader::join(path, "params"), t.params);
    }
    if (const Json* o = r.member(item, path, "outcome", true)) {
      read_outcome(r, *o, Reader::join(path, "outcome"), t.outcome);
    }
    r.number(item, path, "cost_U", t.cost_u, true);
    read_origin(r, item, path, t.origin);
    r.boolean(item, path, "out_of_domain", t.out_of_domain);
  });
  read_array(r, j, "pending", s.pending, [&](const Json& item, const std::string& path, Proposal& p) {
    if (!r.object(item, path)) {
      return;
    }
    if (const Json* pp = r.member(item, path, "params", true)) {
      read_params(r, *pp, Reader::join(path, "params"), p.params);
    }
    read_origin(r, item, path, p.origin);
  });
  read_array(r, j, "recommendations", s.recommendations,
             [&](const Json& item, const std::string& path, RecommendationRecord& rec) {
               if (!r.object(item, path)) {
                 return;
               }
               r.integer(item, path, "trial_count", rec.trial_count);
               r.number(item, path, "p_min_temperature", rec.p_min_temperature);
               r.number(item, path, "p_min_roughness", rec.p_min_roughness);
               if (const Json* body = r.member(item, path, "recommendation"); body && !body->is_null()) {
                 Recommendation value;
                 read_recommendation(r, *body, Reader::join(path, "recommendation"), value);
                 rec.recommendation = std::move(value);
               }
             });
  read_array(r, j, "convergence", s.convergence,
             [&](const Json& item, const std::string& path, ConvergenceStatus& c) { read_status(r, item, path, c); });
  if (const Json* h = r.member(j, "", "hyperparameters"); h && r.object(*h, "hyperparameters")) {
    for (const auto& [name, value] : h->items()) {
      gp::Hyperparams hp;
      read_hyper(r, value, Reader::join("hyperparameters", name), hp);
      s.hyperparameters[name] = std::move(hp);
    }
  }
  r.boolean(j, "", "models_current", s.models_current);
  r.boolean(j, "", "hyperparameter_fallback", s.hyperparameter_fallback);
  if (const Json* tokens = r.member(j, "", "trial_tokens")) {
    if (r.object(*tokens, "trial_tokens")) {
      doc.trial_tokens = *tokens;
    }
  }

  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) {
      doc.extra[key] = value;
    }
  }
  throw_if_any(errors);
  return doc;
}

std::string dump_document(const SessionDocument& doc) { return to_json(doc).dump(2) + "\n"; }

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
}

SessionDocument parse_document(std::string_view text) {
  const Json j = parse_json(text);
  try {
    return document_from_json(j);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), 0);
  }
}

std::string trial_log_csv(std::span<const TrialRecord> trials) {
  std::string out =
      "index,cutting_speed_mps,feed_rate_mmpm,first_side_temp_C,max_roughness_nm,dressing_interval_inserts,censored,"
      "cost_U,origin\n";
  for (const auto& t : trials) {
    out += std::to_string(t.index);
    for (double v : {t.params.cutting_speed_mps, t.params.feed_rate_mmpm, t.outcome.first_side_temperature_c,
                     t.outcome.max_roughness_nm, t.outcome.dressing_interval_inserts}) {
      out += ',';
      append_csv_number(out, v);
    }
    out += t.outcome.censored ? ",true," : ",false,";
    append_csv_number(out, t.cost_u);
    out += ',';
    out += to_string(t.origin);
    out += '\n';
  }
  return out;
}

std::string surface_csv(std::span<const SurfacePoint> points) {
  std::string out = "cutting_speed_mps,feed_rate_mmpm,mean,variance\n";
  for (const auto& p : points) {
    append_csv_number(out, p.params.cutting_speed_mps);
    out += ',';
    append_csv_number(out, p.params.feed_rate_mmpm);
    out += ',';
    append_csv_number(out, p.prediction.mean);
    out += ',';
    append_csv_number(out, p.prediction.variance);
    out += '\n';
  }
  return out;
}

}  // namespace grindopt
