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

#include "grindopt/service.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>

#include "httplib.h"

#include "grindopt/errors.hpp"

namespace grindopt {

struct SessionService::Snapshot {
  SessionDocument doc;
  Session session;
};

struct SessionService::Entry {
  std::mutex writer;
  std::mutex publish;
  std::shared_ptr<const Snapshot> current;

  std::shared_ptr<const Snapshot> load() {
    std::lock_guard lock(publish);
    return current;
  }
  void store(std::shared_ptr<const Snapshot> next) {
    std::lock_guard lock(publish);
    current = std::move(next);
  }
};

namespace {

constexpr int kDefaultSurfaceGrid = 61;
constexpr int kMaxSurfaceGrid = 301;

Response json_response(int status, const Json& body) { return {status, body.dump(), "application/json"}; }

Response error_response(int status, std::string_view kind, std::string_view message, Json extra = Json::object()) {
  Json body{{"error", kind}, {"message", message}};
  for (auto& [k, v] : extra.items()) {
    body[k] = v;
  }
  return json_response(status, body);
}

template <typename Fn>
Response guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    Json fields = Json::array();
    for (const auto& f : e.errors()) {
      fields.push_back(Json{{"field", f.field}, {"message", f.message}});
    }
    return error_response(422, "validation", e.what(), Json{{"fields", std::move(fields)}});
  } catch (const ParseError& e) {
    return error_response(400, "parse", e.what(), Json{{"byte_offset", e.byte_offset()}});
  } catch (const NotFoundError& e) {
    return error_response(404, "not_found", e.what());
  } catch (const ConflictError& e) {
    return error_response(409, "conflict", e.what());
  } catch (const NumericalError& e) {
    return error_response(500, "numerical", e.what(), Json{{"attempted_jitter", e.attempted_jitter()}});
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

std::string random_id() {
  std::random_device device;
  const std::uint64_t bits = (static_cast<std::uint64_t>(device()) << 32) ^ device();
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(bits));
  return buf;
}

Json parse_body(std::string_view body) {
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    return Json::object();
  }
  Json j = parse_json(body);
  if (!j.is_object()) {
    throw ValidationError("body", "must be a JSON object");
  }
  return j;
}

double parse_probability(const std::string& text, const std::string& field) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ValidationError(field, "must be a number");
  }
  return value;
}

Json models_summary(const Session& session) {
  const auto& state = session.state();
  Json out{{"fitted", session.has_models()},
           {"training_points", state.trials.size()},
           {"hyperparameter_fallback", state.hyperparameter_fallback}};
  if (session.has_models()) {
    Json quantities = Json::object();
    for (const auto& [name, hyper] : state.hyperparameters) {
      quantities[name] = Json{{"hyperparameters", to_json(hyper)},
                              {"log_marginal_likelihood", session.model(name).log_marginal_likelihood()}};
    }
    out["quantities"] = std::move(quantities);
  }
  return out;
}

}  // namespace

SessionService::SessionService(SessionStore store, ServiceOptions options)
    : store_(std::move(store)), options_(std::move(options)) {
  if (!options_.make_id) {
    options_.make_id = random_id;
  }
}

SessionService::~SessionService() = default;

std::shared_ptr<SessionService::Entry> SessionService::entry(std::string_view id) {
  std::lock_guard lock(entries_mutex_);
  if (const auto it = entries_.find(id); it != entries_.end()) {
    return it->second;
  }
  auto doc = store_.load(id);
  auto session = Session::restore(doc.state);
  auto e = std::make_shared<Entry>();
  e->current = std::make_shared<const Snapshot>(Snapshot{std::move(doc), std::move(session)});
  entries_.emplace(std::string(id), e);
  return e;
}

std::shared_ptr<const SessionService::Snapshot> SessionService::snapshot(std::string_view id) {
  return entry(id)->load();
}

Response SessionService::create_session(std::string_view body) {
  return guarded([&] {
    const Json j = parse_body(body);
    SessionConfig config = config_from_json(j);
    if (!j.contains("seed")) {
      config.seed = options_.default_seed;
    }
    Session session = Session::create(std::move(config));

    SessionDocument doc;
    do {
      doc.id = options_.make_id();
    } while (store_.exists(doc.id));
    doc.created_at = doc.updated_at = utc_timestamp(options_.clock());
    doc.state = session.state();
    store_.save(doc);

    Json proposals = Json::array();
    for (const auto& p : session.pending()) {
      proposals.push_back(to_json(p.params));
    }
    Json out{{"id", doc.id}, {"proposals", std::move(proposals)}, {"config", to_json(session.config())}};

    auto e = std::make_shared<Entry>();
    e->current = std::make_shared<const Snapshot>(Snapshot{std::move(doc), std::move(session)});
    {
      std::lock_guard lock(entries_mutex_);
      entries_.insert_or_assign(out["id"].get<std::string>(), std::move(e));
    }
    return json_response(201, out);
  });
}

Response SessionService::list_sessions() const {
  return guarded([&] { return json_response(200, Json{{"sessions", store_.list()}}); });
}

Response SessionService::get_session(std::string_view id) {
  return guarded([&] { return json_response(200, to_json(snapshot(id)->doc)); });
}

Response SessionService::post_trial(std::string_view id, std::string_view body) {
  return guarded([&] {
    const auto e = entry(id);
    const Json j = parse_body(body);

    std::vector<FieldError> errors;
    auto collect = [&](std::string_view key, auto&& parse) {
      const auto it = j.find(key);
      if (it == j.end()) {
        errors.push_back({std::string(key), "is required"});
        return;
      }
      try {
        parse(*it);
      } catch (const ValidationError& err) {
        for (const auto& f : err.errors()) {
          errors.push_back({std::string(key) + "." + f.field, f.message});
        }
      }
    };
    ProcessParams params;
    TrialOutcome outcome;
    collect("params", [&](const Json& v) { params = params_from_json(v); });
    collect("outcome", [&](const Json& v) {
      outcome = outcome_from_json(v);
      outcome.validate();
    });
    std::optional<TrialOrigin> origin;
    if (const auto it = j.find("origin"); it != j.end()) {
      const auto parsed = it->is_string() ? parse_origin(it->get<std::string>()) : std::nullopt;
      if (!parsed) {
        errors.push_back({"origin", "must be random-init, acquisition or manual"});
      }
      origin = parsed;
    }
    std::optional<std::string> token;
    if (const auto it = j.find("trial_token"); it != j.end()) {
      if (!it->is_string() || it->get<std::string>().empty()) {
        errors.push_back({"trial_token", "must be a non-empty string"});
      } else {
        token = it->get<std::string>();
      }
    }
    if (!errors.empty()) {
      throw ValidationError(std::move(errors));
    }

    std::lock_guard writer(e->writer);
    const auto current = e->load();
    const Json payload{{"params", j.at("params")},
                       {"outcome", j.at("outcome")},
                       {"origin", j.contains("origin") ? j.at("origin") : Json(nullptr)}};
    if (token) {
      if (const auto it = current->doc.trial_tokens.find(*token); it != current->doc.trial_tokens.end()) {
        if (it->at("payload") != payload) {
          throw ConflictError("trial token '" + *token + "' was already used with a different payload");
        }
        return json_response(200, it->at("response"));
      }
    }

    Session session = current->session;
    const TrialRecord trial = session.record_trial(params, outcome, origin);
    const StepReport report = session.advance();

    Json out{{"trial", to_json(trial)},
             {"models", models_summary(session)},
             {"recommendation", report.recommendation ? to_json(*report.recommendation) : Json(nullptr)},
             {"next_proposal", report.next_proposal ? to_json(*report.next_proposal) : Json(nullptr)},
             {"convergence", to_json(report.convergence)},
             {"at_cap", session.at_cap()}};

    SessionDocument doc = current->doc;
    doc.state = session.state();
    doc.updated_at = utc_timestamp(options_.clock());
    if (token) {
      doc.trial_tokens[*token] = Json{{"payload", payload}, {"response", out}};
    }
    store_.save(doc);
    e->store(std::make_shared<const Snapshot>(Snapshot{std::move(doc), std::move(session)}));
    return json_response(200, out);
  });
}

Response SessionService::get_recommendation(std::string_view id, std::optional<std::string> p_min_temperature,
                                            std::optional<std::string> p_min_roughness) {
  return guarded([&] {
    const auto snap = snapshot(id);
    const auto& config = snap->session.config();
    double p_t = config.temperature.p_min;
    double p_ra = config.roughness.p_min;
    std::vector<FieldError> errors;
    auto read = [&](const std::optional<std::string>& text, const char* field, double& out) {
      if (!text) {
        return;
      }
      try {
        out = parse_probability(*text, field);
      } catch (const ValidationError& err) {
        errors.insert(errors.end(), err.errors().begin(), err.errors().end());
      }
    };
    read(p_min_temperature, "pT", p_t);
    read(p_min_roughness, "pRa", p_ra);
    if (!errors.empty()) {
      throw ValidationError(std::move(errors));
    }
    if (!snap->session.has_models()) {
      throw ConflictError("models are fitted once two trials are recorded");
    }
    const auto rec = snap->session.recommend_optimum(p_t, p_ra);
    if (!rec) {
      return Response{204, "", "application/json"};
    }
    Json out = to_json(*rec);
    out["p_min_temperature"] = p_t;
    out["p_min_roughness"] = p_ra;
    out["trial_count"] = snap->session.trials().size();
    return json_response(200, out);
  });
}

Response SessionService::get_surfaces(std::string_view id, std::optional<std::string> quantity,
                                      std::optional<std::string> grid_n) {
  return guarded([&] {
    const std::string name = quantity.value_or(std::string(kCost));
    if (name != kCost && name != kTemperature && name != kRoughness) {
      throw ValidationError("quantity", "must be one of cost, temperature, roughness");
    }
    int n = kDefaultSurfaceGrid;
    if (grid_n) {
      const auto* end = grid_n->data() + grid_n->size();
      const auto [ptr, ec] = std::from_chars(grid_n->data(), end, n);
      if (ec != std::errc() || ptr != end || n < 2 || n > kMaxSurfaceGrid) {
        throw ValidationError("n", "must be an integer from 2 to " + std::to_string(kMaxSurfaceGrid));
      }
    }
    const auto snap = snapshot(id);
    const auto points = snap->session.surface(name, n);
    Json rows = Json::array();
    for (const auto& p : points) {
      rows.push_back(Json::array(
          {p.params.cutting_speed_mps, p.params.feed_rate_mmpm, p.prediction.mean, p.prediction.variance}));
    }
    return json_response(200, Json{{"quantity", name},
                                   {"grid_n", n},
                                   {"columns", {"cutting_speed_mps", "feed_rate_mmpm", "mean", "variance"}},
                                   {"rows", std::move(rows)}});
  });
}

Response SessionService::export_log(std::string_view id) {
  return guarded([&] {
    const auto snap = snapshot(id);
    return Response{200, trial_log_csv(snap->session.trials()), "text/csv"};
  });
}

struct HttpServer::Impl {
  SessionService& service;
  httplib::Server server;

  explicit Impl(SessionService& s) : service(s) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });

    constexpr const char* kId = R"(/sessions/([A-Za-z0-9_-]+))";
    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, service.create_session(req.body));
    });
    server.Get("/sessions", [this](const httplib::Request&, httplib::Response& res) {
      send(res, service.list_sessions());
    });
    server.Get(kId, [this](const httplib::Request& req, httplib::Response& res) {
      send(res, service.get_session(req.matches[1].str()));
    });
    server.Post(std::string(kId) + "/trials", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, service.post_trial(req.matches[1].str(), req.body));
    });
    server.Get(std::string(kId) + "/recommendation", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, service.get_recommendation(req.matches[1].str(), param(req, "pT"), param(req, "pRa")));
    });
    server.Get(std::string(kId) + "/surfaces", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, service.get_surfaces(req.matches[1].str(), param(req, "quantity"), param(req, "n")));
    });
    server.Get(std::string(kId) + "/export", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, service.export_log(req.matches[1].str()));
    });
  }

  static std::optional<std::string> param(const httplib::Request& req, const char* name) {
    if (!req.has_param(name)) {
      return std::nullopt;
    }
    return req.get_param_value(name);
  }

  static void send(httplib::Response& res, const Response& r) {
    res.status = r.status;
    if (r.status != 204) {
      res.set_content(r.body, r.content_type);
    }
  }
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() = default;

int HttpServer::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpServer::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace grindopt
