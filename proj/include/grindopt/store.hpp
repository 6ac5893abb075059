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

#ifndef GRINDOPT_STORE_HPP
#define GRINDOPT_STORE_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "grindopt/serialization.hpp"

namespace grindopt {

/// Write `contents` next to `path` and rename it into place, so readers see
/// either the previous file or the complete new one.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Throws NotFoundError if the file does not exist.
std::string read_file(const std::filesystem::path& path);

void save_document_file(const std::filesystem::path& path, const SessionDocument& doc);
/// Throws NotFoundError or ParseError.
SessionDocument load_document_file(const std::filesystem::path& path);

/// One JSON document per session in a directory, named <id>.json.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path directory);

  const std::filesystem::path& directory() const noexcept { return directory_; }

  void save(const SessionDocument& doc) const;
  SessionDocument load(std::string_view id) const;
  bool exists(std::string_view id) const;
  /// Stored session ids in lexicographic order.
  std::vector<std::string> list() const;

  /// Ids are limited to [A-Za-z0-9_-]{1,128}; throws ValidationError otherwise.
  std::filesystem::path path_for(std::string_view id) const;

 private:
  std::filesystem::path directory_;
};

}  // namespace grindopt

#endif  // GRINDOPT_STORE_HPP
