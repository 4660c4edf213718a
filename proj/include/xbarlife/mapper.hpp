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

// Synapse-to-cell placement inside one crossbar and the inference lifetime it
// yields: the minimum over occupied cells of floor(endurance / spikes).

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xbarlife/endurance.hpp"
#include "xbarlife/matrix.hpp"
#include "xbarlife/workload.hpp"

namespace xbarlife {

enum class PlacementStrategy { baseline_row_major, random, endurance_aware };

std::string_view to_string(PlacementStrategy s);

struct Assignment {
  SynapseId id = 0;
  CellIndex cell;

  bool operator==(const Assignment&) const = default;
};

struct Placement {
  PlacementStrategy strategy = PlacementStrategy::baseline_row_major;
  std::uint64_t seed = 0;  // random strategy only
  std::size_t n = 0;
  std::vector<Assignment> assignment;

  /// Injective and inside the n x n array.
  void validate() const;
};

/// Synapses in ascending id order fill cells row-major.
Placement place_baseline(const ClusteredWorkload& workload, std::size_t n);

/// Uniformly random injective placement (Fisher-Yates over all cells).
Placement place_random(const ClusteredWorkload& workload, std::size_t n,
                       std::uint64_t seed);

struct EnduranceAwareOptions {
  // Swap pass on the limiting synapse. The sorted pairing is already optimal
  // for the separable max-min objective, so this only matters for callers
  // that replace the objective.
  bool local_search = false;
  std::size_t max_swaps = 10'000;
};

/// Hottest synapse to the most enduring cell, rank for rank. Ties: synapse id
/// ascending, then (row, col) ascending.
Placement place_endurance_aware(const ClusteredWorkload& workload,
                                const EnduranceMap& endurance,
                                const EnduranceAwareOptions& options = {});

struct LifetimeReport {
  std::uint64_t lifetime_images = kUnlimited;
  std::optional<CellIndex> limiting_cell;
  std::optional<SynapseId> limiting_synapse;
  std::uint64_t baseline_lifetime_images = kUnlimited;
  double improvement_vs_baseline = 1.0;
};

/// Minimum per-synapse lifetime and its argmin (lowest synapse id on ties).
/// Returns kUnlimited when no occupied cell ever disturbs.
struct LimitingSynapse {
  std::uint64_t lifetime_images = kUnlimited;
  std::optional<CellIndex> cell;
  std::optional<SynapseId> synapse;
};
LimitingSynapse placement_lifetime(const Placement& placement,
                                   const ClusteredWorkload& workload,
                                   const EnduranceMap& endurance);

/// ours / baseline, with equal sentinels giving 1 and a zero baseline giving
/// +inf (or 1 when ours is also zero).
double improvement_ratio(std::uint64_t ours, std::uint64_t baseline);

/// Evaluates `placement` and compares against the row-major baseline on the
/// same endurance map.
LifetimeReport evaluate_lifetime(const Placement& placement,
                                 const ClusteredWorkload& workload,
                                 const EnduranceMap& endurance);

/// {strategy, assignment:[{id,row,col}], lifetime_images,
///  improvement_vs_baseline, ...}
std::string placement_to_json(const Placement& placement,
                              const LifetimeReport& report);

}  // namespace xbarlife
