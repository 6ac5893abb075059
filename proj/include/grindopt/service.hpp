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

#ifndef GRINDOPT_SERVICE_HPP
#define GRINDOPT_SERVICE_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "grindopt/serialization.hpp"
#include "grindopt/session.hpp"
#include "grindopt/store.hpp"

namespace grindopt {

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct ServiceOptions {
  /// Seed for sessions whose configuration does not name one.
  std::uint64_t default_seed = 1;
  std::function<std::chrono::system_clock::time_point()> clock = [] { return std::chrono::system_clock::now(); };
  /// Session id generator; random hex by default.
  std::function<std::string()> make_id;
};

/// HTTP-independent handlers for the session API. Every mutation goes through
/// Session; this layer only parses, locks, persists and formats.
///
/// Writers to one session are serialized; different sessions proceed in
/// parallel. Reads work on the last committed snapshot without taking the
/// writer lock.
class SessionService {
 public:
  explicit SessionService(SessionStore store, ServiceOptions options = {});
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  Response create_session(std::string_view body);
  Response list_sessions() const;
  Response get_session(std::string_view id);
  Response post_trial(std::string_view id, std::string_view body);
  Response get_recommendation(std::string_view id, std::optional<std::string> p_min_temperature,
                              std::optional<std::string> p_min_roughness);
  Response get_surfaces(std::string_view id, std::optional<std::string> quantity, std::optional<std::string> grid_n);
  Response export_log(std::string_view id);

  const SessionStore& store() const noexcept { return store_; }

 private:
  struct Snapshot;
  struct Entry;

  std::shared_ptr<Entry> entry(std::string_view id);
  std::shared_ptr<const Snapshot> snapshot(std::string_view id);

  SessionStore store_;
  ServiceOptions options_;
  std::mutex entries_mutex_;
  std::map<std::string, std::shared_ptr<Entry>, std::less<>> entries_;
};

/// cpp-httplib front end for a SessionService.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Bind to an ephemeral port and return it, or -1.
  int bind_to_any_port(const std::string& host);
  bool bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace grindopt

#endif  // GRINDOPT_SERVICE_HPP
