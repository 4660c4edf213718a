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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xbarlife/matrix.hpp"

namespace xbarlife {

/// N rows x N columns, amperes/volts in %.9e.
std::string matrix_to_csv(const SquareMatrix<double>& m);
/// Integer cycles; the unlimited sentinel is written as "inf".
std::string matrix_to_csv(const SquareMatrix<std::uint64_t>& m);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

struct RunManifest {
  std::string command;
  std::string config_path;
  std::string output_dir;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string parameter_hash;

  std::string to_json() const;
};

/// Files staged in memory and published together: every file is first
/// written under a temporary name, then renamed into place, so a failure
/// leaves no partial outputs behind.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(std::string name, std::string content);
  const std::filesystem::path& dir() const { return dir_; }
  std::vector<std::filesystem::path> commit();

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace xbarlife
