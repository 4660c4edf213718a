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

#include "xbarlife/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include "json.hpp"
#include "xbarlife/error.hpp"

namespace xbarlife {

namespace {

void require_capacity(const ClusteredWorkload& w, std::size_t n) {
  if (n == 0) throw ConfigError("crossbar dimension must be >= 1");
  w.validate(n * n);
}

std::vector<std::size_t> ids_ascending(const ClusteredWorkload& w) {
  std::vector<std::size_t> order(w.synapses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return w.synapses[a].id < w.synapses[b].id;
  });
  return order;
}

}  // namespace

std::string_view to_string(PlacementStrategy s) {
  switch (s) {
    case PlacementStrategy::baseline_row_major: return "baseline-row-major";
    case PlacementStrategy::random: return "random";
    case PlacementStrategy::endurance_aware: return "endurance-aware";
  }
  return "?";
}

void Placement::validate() const {
  std::vector<std::uint8_t> used(n * n, 0);
  for (const Assignment& a : assignment) {
    if (a.cell.row >= n || a.cell.col >= n)
      throw CapacityError("synapse " + std::to_string(a.id) +
                          " assigned outside the crossbar");
    auto& slot = used[a.cell.row * n + a.cell.col];
    if (slot)
      throw ConfigError("placement is not injective: cell (" +
                        std::to_string(a.cell.row) + ", " +
                        std::to_string(a.cell.col) + ") used twice");
    slot = 1;
  }
}

Placement place_baseline(const ClusteredWorkload& workload, std::size_t n) {
  require_capacity(workload, n);
  Placement p{PlacementStrategy::baseline_row_major, 0, n, {}};
  p.assignment.reserve(workload.synapses.size());
  std::size_t slot = 0;
  for (std::size_t k : ids_ascending(workload)) {
    p.assignment.push_back({workload.synapses[k].id, {slot / n, slot % n}});
    ++slot;
  }
  return p;
}

Placement place_random(const ClusteredWorkload& workload, std::size_t n,
                       std::uint64_t seed) {
  require_capacity(workload, n);
  std::vector<std::size_t> cells(n * n);
  std::iota(cells.begin(), cells.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Fisher-Yates with explicit modulo-free draws for portability.
  for (std::size_t i = cells.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() %
                                    bound;
    std::uint64_t x;
    do {
      x = rng();
    } while (x >= limit);
    std::swap(cells[i - 1], cells[x % bound]);
  }
  Placement p{PlacementStrategy::random, seed, n, {}};
  std::size_t slot = 0;
  for (std::size_t k : ids_ascending(workload)) {
    const std::size_t c = cells[slot++];
    p.assignment.push_back({workload.synapses[k].id, {c / n, c % n}});
  }
  return p;
}

namespace {

struct Occupant {
  std::uint64_t spikes;
  SynapseId id;
};

std::uint64_t lifetime_at(const EnduranceMap& e, CellIndex c,
                          std::uint64_t spikes) {
  return inference_lifetime(e.cycles[c], spikes);
}

void local_search(Placement& p, const ClusteredWorkload& w,
                  const EnduranceMap& e, std::size_t max_swaps) {
  const std::size_t n = p.n;
  std::unordered_map<SynapseId, std::uint64_t> spikes;
  for (const Synapse& s : w.synapses) spikes[s.id] = s.spikes_per_image;
  // occupant index per cell, or npos
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> at(n * n, npos);
  for (std::size_t k = 0; k < p.assignment.size(); ++k)
    at[p.assignment[k].cell.row * n + p.assignment[k].cell.col] = k;

  for (std::size_t swaps = 0; swaps < max_swaps; ++swaps) {
    std::size_t worst = npos;
    std::uint64_t worst_life = kUnlimited;
    for (std::size_t k = 0; k < p.assignment.size(); ++k) {
      const auto life =
          lifetime_at(e, p.assignment[k].cell, spikes[p.assignment[k].id]);
      if (worst == npos || life < worst_life) {
        worst = k;
        worst_life = life;
      }
    }
    if (worst == npos || worst_life == kUnlimited) return;

    const CellIndex from = p.assignment[worst].cell;
    const std::uint64_t s_worst = spikes[p.assignment[worst].id];
    std::size_t best_cell = npos;
    std::uint64_t best_pair = worst_life;
    for (std::size_t c = 0; c < n * n; ++c) {
      const CellIndex to{c / n, c % n};
      if (to == from) continue;
      std::uint64_t pair = lifetime_at(e, to, s_worst);
      if (at[c] != npos)
        pair = std::min(pair,
                        lifetime_at(e, from, spikes[p.assignment[at[c]].id]));
      if (pair > best_pair) {
        best_pair = pair;
        best_cell = c;
      }
    }
    if (best_cell == npos) return;
    const std::size_t other = at[best_cell];
    const std::size_t from_slot = from.row * n + from.col;
    p.assignment[worst].cell = {best_cell / n, best_cell % n};
    at[best_cell] = worst;
    at[from_slot] = other;
    if (other != npos) p.assignment[other].cell = from;
  }
}

}  // namespace

Placement place_endurance_aware(const ClusteredWorkload& workload,
                                const EnduranceMap& endurance,
                                const EnduranceAwareOptions& options) {
  const std::size_t n = endurance.size();
  require_capacity(workload, n);

  std::vector<std::size_t> order(workload.synapses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Synapse& x = workload.synapses[a];
    const Synapse& y = workload.synapses[b];
    if (x.spikes_per_image != y.spikes_per_image)
      return x.spikes_per_image > y.spikes_per_image;
    return x.id < y.id;
  });

  std::vector<std::size_t> cells(n * n);
  std::iota(cells.begin(), cells.end(), std::size_t{0});
  const auto ev = endurance.cycles.values();
  // Row-major index order is (row, col) lexicographic order.
  std::stable_sort(cells.begin(), cells.end(),
                   [&](std::size_t a, std::size_t b) { return ev[a] > ev[b]; });

  Placement p{PlacementStrategy::endurance_aware, 0, n, {}};
  p.assignment.reserve(order.size());
  for (std::size_t r = 0; r < order.size(); ++r)
    p.assignment.push_back(
        {workload.synapses[order[r]].id, {cells[r] / n, cells[r] % n}});
  if (options.local_search)
    local_search(p, workload, endurance, options.max_swaps);
  return p;
}

LimitingSynapse placement_lifetime(const Placement& placement,
                                   const ClusteredWorkload& workload,
                                   const EnduranceMap& endurance) {
  if (placement.n != endurance.size())
    throw ConfigError("placement is for a " + std::to_string(placement.n) +
                      "x crossbar but the endurance map is " +
                      std::to_string(endurance.size()) + "x");
  placement.validate();
  std::unordered_map<SynapseId, std::uint64_t> spikes;
  spikes.reserve(workload.synapses.size());
  for (const Synapse& s : workload.synapses) spikes[s.id] = s.spikes_per_image;
  if (placement.assignment.size() != spikes.size())
    throw ConfigError("placement covers " +
                      std::to_string(placement.assignment.size()) +
                      " synapses but the workload has " +
                      std::to_string(spikes.size()));

  LimitingSynapse out;
  for (const Assignment& a : placement.assignment) {
    const auto it = spikes.find(a.id);
    if (it == spikes.end())
      throw ConfigError("placement names unknown synapse " +
                        std::to_string(a.id));
    const std::uint64_t life = lifetime_at(endurance, a.cell, it->second);
    if (life == kUnlimited) continue;
    if (!out.synapse || life < out.lifetime_images ||
        (life == out.lifetime_images && a.id < *out.synapse)) {
      out.lifetime_images = life;
      out.cell = a.cell;
      out.synapse = a.id;
    }
  }
  return out;
}

double improvement_ratio(std::uint64_t ours, std::uint64_t baseline) {
  if (ours == baseline) return 1.0;
  if (baseline == kUnlimited) return 0.0;
  if (ours == kUnlimited) return std::numeric_limits<double>::infinity();
  if (baseline == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(ours) / static_cast<double>(baseline);
}

LifetimeReport evaluate_lifetime(const Placement& placement,
                                 const ClusteredWorkload& workload,
                                 const EnduranceMap& endurance) {
  const LimitingSynapse ours = placement_lifetime(placement, workload, endurance);
  const LimitingSynapse base = placement_lifetime(
      place_baseline(workload, endurance.size()), workload, endurance);
  LifetimeReport r;
  r.lifetime_images = ours.lifetime_images;
  r.limiting_cell = ours.cell;
  r.limiting_synapse = ours.synapse;
  r.baseline_lifetime_images = base.lifetime_images;
  r.improvement_vs_baseline =
      improvement_ratio(ours.lifetime_images, base.lifetime_images);
  return r;
}

std::string placement_to_json(const Placement& placement,
                              const LifetimeReport& report) {
  using nlohmann::ordered_json;
  const auto images = [](std::uint64_t v) -> ordered_json {
    if (v == kUnlimited) return "unlimited";
    return v;
  };
  ordered_json doc;
  doc["strategy"] = to_string(placement.strategy);
  doc["n"] = placement.n;
  ordered_json list = ordered_json::array();
  for (const Assignment& a : placement.assignment)
    list.push_back({{"id", a.id}, {"row", a.cell.row}, {"col", a.cell.col}});
  doc["assignment"] = std::move(list);
  doc["lifetime_images"] = images(report.lifetime_images);
  if (std::isfinite(report.improvement_vs_baseline))
    doc["improvement_vs_baseline"] = report.improvement_vs_baseline;
  else
    doc["improvement_vs_baseline"] = "inf";
  doc["baseline_lifetime_images"] = images(report.baseline_lifetime_images);
  if (report.limiting_cell) {
    doc["limiting_cell"] = {{"row", report.limiting_cell->row},
                            {"col", report.limiting_cell->col}};
    doc["limiting_synapse"] = *report.limiting_synapse;
  } else {
    doc["limiting_cell"] = nullptr;
    doc["limiting_synapse"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

}  // namespace xbarlife
