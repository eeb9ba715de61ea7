// Copyright 2026 The Authors.
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

#ifndef SIMEXPLAIN_ERRORS_H_
#define SIMEXPLAIN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace simexplain {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind {
  kValidation,      // bad input, schema or configuration (exit 2)
  kOracle,          // black box failed or returned garbage (exit 3)
  kNonConvergence,  // only raised when warnings are escalated (exit 4)
  kUnsupported,     // metric not defined for an explainer (exit 2)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::kValidation, what) {}
};

class OracleError : public Error {
 public:
  explicit OracleError(const std::string& what)
      : Error(ErrorKind::kOracle, what) {}
};

class NonConvergenceError : public Error {
 public:
  explicit NonConvergenceError(const std::string& what)
      : Error(ErrorKind::kNonConvergence, what) {}
};

class UnsupportedMetricError : public Error {
 public:
  explicit UnsupportedMetricError(const std::string& what)
      : Error(ErrorKind::kUnsupported, what) {}
};

// Process exit code for an error category.
int exit_code(ErrorKind kind);

}  // namespace simexplain

#endif  // SIMEXPLAIN_ERRORS_H_
