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

#include "grindopt/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <fstream>
#include <sstream>
#include <system_error>

#include "grindopt/errors.hpp"

namespace grindopt {

namespace fs = std::filesystem;

namespace {

std::atomic<unsigned long> temp_counter{0};

[[noreturn]] void throw_errno(const std::string& what) {
  throw std::system_error(errno, std::generic_category(), what);
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view contents) {
  const fs::path temp = path.string() + ".tmp." + std::to_string(::getpid()) + "." +
                        std::to_string(temp_counter.fetch_add(1, std::memory_order_relaxed));
  const int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw_errno("cannot create " + temp.string());
  }
  const char* p = contents.data();
  std::size_t left = contents.size();
  while (left > 0) {
    const ssize_t n = ::write(fd, p, left);
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      const int saved = errno;
      ::close(fd);
      ::unlink(temp.c_str());
      errno = saved;
      throw_errno("cannot write " + temp.string());
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    const int saved = errno;
    ::unlink(temp.c_str());
    errno = saved;
    throw_errno("cannot flush " + temp.string());
  }
  if (::rename(temp.c_str(), path.c_str()) != 0) {
    const int saved = errno;
    ::unlink(temp.c_str());
    errno = saved;
    throw_errno("cannot rename onto " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw NotFoundError("no such file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void save_document_file(const fs::path& path, const SessionDocument& doc) {
  write_file_atomic(path, dump_document(doc));
}

SessionDocument load_document_file(const fs::path& path) { return parse_document(read_file(path)); }

SessionStore::SessionStore(fs::path directory) : directory_(std::move(directory)) {
  fs::create_directories(directory_);
}

fs::path SessionStore::path_for(std::string_view id) const {
  const bool ok = !id.empty() && id.size() <= 128 && std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
  });
  if (!ok) {
    throw ValidationError("id", "session ids use 1 to 128 characters from [A-Za-z0-9_-]");
  }
  return directory_ / (std::string(id) + ".json");
}

void SessionStore::save(const SessionDocument& doc) const { save_document_file(path_for(doc.id), doc); }

SessionDocument SessionStore::load(std::string_view id) const {
  const auto path = path_for(id);
  if (!fs::exists(path)) {
    throw NotFoundError("no session '" + std::string(id) + "'");
  }
  return load_document_file(path);
}

bool SessionStore::exists(std::string_view id) const { return fs::exists(path_for(id)); }

std::vector<std::string> SessionStore::list() const {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(directory_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace grindopt
