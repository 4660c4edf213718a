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

// Clustered SNN workloads: per-synapse spike counts for one crossbar-sized
// cluster, optionally with the firing times behind them.
//
// File format (JSON):
//   {"cluster_id": "...", "window_seconds": T,
//    "synapses": [{"id": 0, "spikes_per_image": 3, "times": [..]}, ...]}

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace xbarlife {

using SynapseId = std::uint64_t;

struct Synapse {
  SynapseId id = 0;
  std::uint64_t spikes_per_image = 0;
  std::optional<std::vector<double>> times;  // s, strictly increasing

  bool operator==(const Synapse&) const = default;
};

struct ClusteredWorkload {
  std::string cluster_id;
  double window_seconds = 1.0;
  std::vector<Synapse> synapses;

  /// Throws ConfigError naming the first offending synapse. A capacity, when
  /// given, bounds the synapse count.
  void validate(std::optional<std::size_t> capacity = std::nullopt) const;

  bool operator==(const ClusteredWorkload&) const = default;
};

/// Mean inter-spike interval of a sorted spike train; needs at least two
/// spikes.
double average_isi(std::span<const double> times);

struct UniformSpikes {
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
};
struct LogNormalSpikes {
  double mu = 0.0;
  double sigma = 1.0;
};
/// P(k) proportional to k^-s on k = 1..k_max.
struct ZipfSpikes {
  double s = 1.2;
  std::uint64_t k_max = 100;
};

using SpikeDistribution = std::variant<UniformSpikes, LogNormalSpikes, ZipfSpikes>;

/// "uniform(lo,hi)", "lognormal(mu,sigma)", "zipf(s)" or "zipf(s,k_max)".
SpikeDistribution parse_distribution(std::string_view spec);
std::string to_string(const SpikeDistribution& d);

/// Synapse ids 0..n-1; the spike stream is a pure function of `seed`.
ClusteredWorkload generate_workload(std::size_t n_synapses,
                                    const SpikeDistribution& distribution,
                                    std::uint64_t seed);

ClusteredWorkload parse_workload_json(std::string_view text);
ClusteredWorkload load_workload(const std::filesystem::path& path);
std::string workload_to_json(const ClusteredWorkload& w);
/// "synapse_id,spikes_per_image" rows in input order.
std::string workload_to_csv(const ClusteredWorkload& w);

}  // namespace xbarlife
