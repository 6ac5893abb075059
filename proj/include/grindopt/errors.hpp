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

#ifndef GRINDOPT_ERRORS_HPP
#define GRINDOPT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace grindopt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (dimension mismatch, non-positive
/// physical quantity, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

struct FieldError {
  std::string field;
  std::string message;
};

/// User-facing input rejected; carries one message per offending field.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<FieldError> errors)
      : Error(summarize(errors)), errors_(std::move(errors)) {}
  ValidationError(std::string field, std::string message)
      : ValidationError(std::vector<FieldError>{{std::move(field), std::move(message)}}) {}

  const std::vector<FieldError>& errors() const noexcept { return errors_; }

 private:
  static std::string summarize(const std::vector<FieldError>& errors) {
    std::string out = "validation failed";
    for (const auto& e : errors) {
      out += "; " + e.field + ": " + e.message;
    }
    return out;
  }

  std::vector<FieldError> errors_;
};

/// Cholesky factorization failed at every jitter level that was tried.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::vector<double> attempted_jitter)
      : Error(what), attempted_jitter_(std::move(attempted_jitter)) {}

  const std::vector<double>& attempted_jitter() const noexcept { return attempted_jitter_; }

 private:
  std::vector<double> attempted_jitter_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Operation not allowed in the current session state (converged, at cap, ...).
class ConflictError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : Error(what), byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace grindopt

#endif  // GRINDOPT_ERRORS_HPP
