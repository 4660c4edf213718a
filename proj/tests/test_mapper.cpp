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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/oracles.hpp"
#include "xbarlife/error.hpp"
#include "xbarlife/mapper.hpp"

using namespace xbarlife;

namespace {

ClusteredWorkload workload(const std::vector<std::uint64_t>& spikes) {
  ClusteredWorkload w;
  w.cluster_id = "t";
  for (std::size_t k = 0; k < spikes.size(); ++k)
    w.synapses.push_back({k, spikes[k], std::nullopt});
  return w;
}

EnduranceMap endurance(std::size_t n, const std::vector<std::uint64_t>& e) {
  EnduranceMap m{SquareMatrix<std::uint64_t>(n, 0), 1e-3};
  std::copy(e.begin(), e.end(), m.cycles.values().begin());
  return m;
}

struct Instance {
  ClusteredWorkload workload;
  EnduranceMap map;
};

Instance random_instance(std::mt19937_64& rng, std::size_t n,
                         std::size_t synapses, bool with_zeros) {
  std::uniform_int_distribution<std::uint64_t> e(0, 5000), s(with_zeros ? 0 : 1, 60);
  std::vector<std::uint64_t> cycles(n * n), spikes(synapses);
  for (auto& c : cycles) c = e(rng);
  if (with_zeros && n * n > 1) cycles[rng() % cycles.size()] = kUnlimited;
  for (auto& v : spikes) v = s(rng);
  auto w = workload(spikes);
  std::shuffle(w.synapses.begin(), w.synapses.end(), rng);
  return {std::move(w), endurance(n, cycles)};
}

}  // namespace

TEST_CASE("baseline is row-major in id order") {
  auto w = workload({5, 5, 5, 5});
  std::reverse(w.synapses.begin(), w.synapses.end());
  const auto p = place_baseline(w, 2);
  CHECK(p.strategy == PlacementStrategy::baseline_row_major);
  const std::vector<CellIndex> expect{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (const auto& a : p.assignment) CHECK(a.cell == expect[a.id]);
  CHECK(place_baseline(workload({1}), 2).assignment.at(0).cell == CellIndex{0, 0});
  CHECK_THROWS_AS(place_baseline(workload({1, 1, 1, 1, 1}), 2), CapacityError);
}

TEST_CASE("heavy synapse goes to the strong cell") {
  auto w = workload({10, 1});
  EnduranceMap m = endurance(2, {100, 1000, 0, 0});
  const auto p = place_endurance_aware(w, m);
  CHECK(p.assignment.at(0).cell == CellIndex{0, 1});
  const bool weak = p.assignment.at(1).cell == CellIndex{1, 0} ||
                    p.assignment.at(1).cell == CellIndex{0, 0};
  CHECK(weak);
  // On a one-row map the only other cell is (0,0).
  ClusteredWorkload two = workload({10, 1});
  EnduranceMap strip{SquareMatrix<std::uint64_t>(2, 0), 1e-3};
  strip.cycles(0, 0) = 100;
  strip.cycles(0, 1) = 1000;
  strip.cycles(1, 0) = 50;
  strip.cycles(1, 1) = 50;
  const auto q = place_endurance_aware(two, strip);
  CHECK(q.assignment.at(0).cell == CellIndex{0, 1});
  CHECK(q.assignment.at(1).cell == CellIndex{0, 0});
  const auto r = evaluate_lifetime(q, two, strip);
  CHECK(r.lifetime_images == 100);
}

TEST_CASE("uniform spikes follow endurance-sorted cells") {
  auto w = workload({4, 4, 4});
  const EnduranceMap m = endurance(2, {10, 30, 30, 20});
  const auto p = place_endurance_aware(w, m);
  CHECK(p.assignment.at(0).cell == CellIndex{0, 1});
  CHECK(p.assignment.at(1).cell == CellIndex{1, 0});
  CHECK(p.assignment.at(2).cell == CellIndex{1, 1});
}

TEST_CASE("lifetime evaluation") {
  const auto one = workload({10});
  const EnduranceMap m = endurance(2, {1000, 1, 1, 1});
  const auto r = evaluate_lifetime(place_baseline(one, 2), one, m);
  CHECK(r.lifetime_images == 100);
  REQUIRE(r.limiting_cell);
  CHECK(*r.limiting_cell == CellIndex{0, 0});
  CHECK(*r.limiting_synapse == 0);
  CHECK(r.improvement_vs_baseline == 1.0);

  const auto idle = workload({0, 0});
  const auto z = evaluate_lifetime(place_baseline(idle, 2), idle, m);
  CHECK(z.lifetime_images == kUnlimited);
  CHECK(!z.limiting_cell);

  Placement outside = place_baseline(one, 2);
  outside.n = 3;
  outside.assignment[0].cell = {2, 2};
  CHECK_THROWS_AS(evaluate_lifetime(outside, one, m), ConfigError);
}

TEST_CASE("improvement ratio edge cases") {
  CHECK(improvement_ratio(10, 5) == 2.0);
  CHECK(improvement_ratio(5, 5) == 1.0);
  CHECK(improvement_ratio(kUnlimited, kUnlimited) == 1.0);
  CHECK(improvement_ratio(0, 0) == 1.0);
  CHECK(std::isinf(improvement_ratio(3, 0)));
  CHECK(std::isinf(improvement_ratio(kUnlimited, 7)));
}

TEST_CASE("placement validation") {
  Placement p = place_baseline(workload({1, 1}), 2);
  p.assignment[1].cell = p.assignment[0].cell;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("random placement is injective and seeded") {
  const auto w = workload(std::vector<std::uint64_t>(12, 1));
  const auto a = place_random(w, 4, 9), b = place_random(w, 4, 9);
  CHECK(a.assignment == b.assignment);
  CHECK(a.assignment != place_random(w, 4, 10).assignment);
  CHECK_NOTHROW(a.validate());
}

TEST_CASE("greedy equals the exhaustive optimum on small instances") {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(6, n * n);
    const auto inst = random_instance(rng, n, k, trial % 5 == 0);
    const auto got = evaluate_lifetime(place_endurance_aware(inst.workload, inst.map),
                                       inst.workload, inst.map);
    std::vector<std::uint64_t> spikes;
    for (const auto& s : inst.workload.synapses) spikes.push_back(s.spikes_per_image);
    const std::vector<std::uint64_t> cycles(inst.map.cycles.values().begin(),
                                            inst.map.cycles.values().end());
    CHECK(got.lifetime_images == oracle::best_lifetime(spikes, cycles));
  }
}

TEST_CASE("endurance-aware dominates the baseline") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const std::size_t k = 1 + rng() % (n * n);
    const auto inst = random_instance(rng, n, k, trial % 3 == 0);
    const auto ours = evaluate_lifetime(place_endurance_aware(inst.workload, inst.map),
                                        inst.workload, inst.map);
    CHECK(ours.lifetime_images >= ours.baseline_lifetime_images);
    CHECK(ours.improvement_vs_baseline >= 1.0);
  }
}

TEST_CASE("input order does not change the lifetime") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(rng, 5, 20, false);
    const auto a = evaluate_lifetime(place_endurance_aware(inst.workload, inst.map),
                                     inst.workload, inst.map);
    std::shuffle(inst.workload.synapses.begin(), inst.workload.synapses.end(), rng);
    const auto b = evaluate_lifetime(place_endurance_aware(inst.workload, inst.map),
                                     inst.workload, inst.map);
    CHECK(a.lifetime_images == b.lifetime_images);
  }
}

TEST_CASE("local search never makes things worse") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = random_instance(rng, 4, 12, false);
    EnduranceAwareOptions o;
    o.local_search = true;
    const auto plain = evaluate_lifetime(place_endurance_aware(inst.workload, inst.map),
                                         inst.workload, inst.map);
    const auto refined = evaluate_lifetime(
        place_endurance_aware(inst.workload, inst.map, o), inst.workload, inst.map);
    CHECK(refined.lifetime_images >= plain.lifetime_images);
  }
}

TEST_CASE("placement json layout") {
  const auto w = workload({10, 1});
  const EnduranceMap m = endurance(2, {100, 1000, 5, 5});
  const auto p = place_endurance_aware(w, m);
  const auto text = placement_to_json(p, evaluate_lifetime(p, w, m));
  CHECK(text.find("\"strategy\": \"endurance-aware\"") != std::string::npos);
  CHECK(text.find("\"assignment\"") < text.find("\"lifetime_images\""));
  CHECK(text.find("\"improvement_vs_baseline\"") != std::string::npos);
  CHECK(text.find("\"row\": 0") != std::string::npos);
}
