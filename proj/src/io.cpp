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

#include "xbarlife/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <system_error>

#include <unistd.h>

#include "json.hpp"
#include "xbarlife/endurance.hpp"
#include "xbarlife/error.hpp"

namespace xbarlife {

namespace fs = std::filesystem;

std::string matrix_to_csv(const SquareMatrix<double>& m) {
  std::string out;
  const std::size_t n = m.size();
  out.reserve(n * n * 17);
  char buf[32];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const int len = std::snprintf(buf, sizeof buf, "%.9e", m(i, j));
      if (j) out += ',';
      out.append(buf, static_cast<std::size_t>(len));
    }
    out += '\n';
  }
  return out;
}

std::string matrix_to_csv(const SquareMatrix<std::uint64_t>& m) {
  std::string out;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out += ',';
      const std::uint64_t v = m(i, j);
      out += v == kUnlimited ? std::string("inf") : std::to_string(v);
    }
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config_path"] = config_path;
  j["output_dir"] = output_dir;
  j["seed"] = seed;
  j["tool_version"] = tool_version;
  j["parameter_hash"] = parameter_hash;
  return j.dump(2) + "\n";
}

void OutputSet::add(std::string name, std::string content) {
  files_.emplace_back(std::move(name), std::move(content));
}

std::vector<fs::path> OutputSet::commit() {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory " + dir_.string() +
                        ": " + ec.message());

  const std::string suffix = ".tmp" + std::to_string(::getpid());
  std::vector<fs::path> staged;
  const auto discard = [&] {
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (const auto& [name, content] : files_) {
    const fs::path tmp = dir_ / (name + suffix);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    staged.push_back(tmp);
    if (out) out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      discard();
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::vector<fs::path> published;
  for (std::size_t k = 0; k < files_.size(); ++k) {
    const fs::path target = dir_ / files_[k].first;
    fs::rename(staged[k], target, ec);
    if (ec) {
      discard();
      throw IoError("cannot publish " + target.string() + ": " + ec.message());
    }
    published.push_back(target);
  }
  files_.clear();
  return published;
}

}  // namespace xbarlife
