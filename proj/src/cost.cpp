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

#include "xbarlife/cost.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xbarlife/error.hpp"

namespace xbarlife {

void CostModelParams::validate() const {
  if (transistors_per_neuron < 1 || capacitors_per_neuron < 1 ||
      bits_per_cell < 1)
    throw ConfigError("cost model element counts must be >= 1");
  const auto pos = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!pos(feature_size) || !pos(transistor_area) || !pos(capacitor_area) ||
      !pos(nvm_area))
    throw ConfigError("cost model areas and feature size must be > 0");
}

CostModelParams CostModelParams::unit_areas(double feature_size) {
  CostModelParams p;
  p.feature_size = feature_size;
  p.transistor_area = p.capacitor_area = p.nvm_area = 1.0;
  return p;
}

namespace {
void require_size(std::size_t n) {
  if (n < 1) throw ConfigError("crossbar dimension must be >= 1");
}
double f2(const CostModelParams& p) { return p.feature_size * p.feature_size; }
}  // namespace

double neuron_area(std::size_t n, const CostModelParams& p) {
  require_size(n);
  p.validate();
  const double per_neuron = p.transistors_per_neuron * p.transistor_area +
                            p.capacitors_per_neuron * p.capacitor_area;
  return 2.0 * static_cast<double>(n) * per_neuron;
}

double synapse_area(std::size_t n, const CostModelParams& p) {
  require_size(n);
  p.validate();
  const double nn = static_cast<double>(n);
  return nn * nn * (p.transistor_area + p.nvm_area);
}

double total_bits(std::size_t n, const CostModelParams& p) {
  require_size(n);
  p.validate();
  const double nn = static_cast<double>(n);
  return p.bits_per_cell * nn * nn;
}

CostPerBit cost_per_bit(std::size_t n, const CostModelParams& p) {
  const double nn = static_cast<double>(n);
  CostPerBit c;
  c.exact = f2(p) * (neuron_area(n, p) + synapse_area(n, p)) / total_bits(n, p);
  c.approx = f2(p) * (27.0 + 2.0 * nn) / nn;
  return c;
}

std::vector<CostSweepRow> cost_sweep(const std::vector<std::size_t>& sizes,
                                     const CostModelParams& p) {
  if (sizes.empty()) throw ConfigError("cost sweep needs at least one size");
  std::vector<CostSweepRow> rows;
  rows.reserve(sizes.size());
  double peak = 0.0;
  for (std::size_t n : sizes) {
    const CostPerBit c = cost_per_bit(n, p);
    rows.push_back({n, c.exact, c.approx, 0.0});
    peak = std::max(peak, c.exact);
  }
  for (auto& r : rows) r.normalized = r.exact / peak;
  return rows;
}

}  // namespace xbarlife
