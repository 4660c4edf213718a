// Copyright 2026 The xbarlife Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace xbarlife {

// Values double as CLI exit codes.
enum class ErrorCode : int {
  ok = 0,
  internal = 1,
  invalid = 2,
  solver = 3,
  io = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Bad configuration, malformed input file, or violated precondition.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCode::invalid, what) {}
};

/// Non-physical argument to a device-model function.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::invalid, what) {}
};

/// More synapses than crossbar cells, or a placement that does not fit.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what)
      : Error(ErrorCode::invalid, what) {}
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double achieved_residual)
      : Error(ErrorCode::solver, what), residual_(achieved_residual) {}

  double achieved_residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

}  // namespace xbarlife
