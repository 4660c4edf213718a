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

// Area and cost-per-bit of an N x N crossbar: 2N neurons of
// (transistors_per_neuron T + capacitors_per_neuron C) and N^2 1T-1R cells,
// in units of F^2, over bits_per_cell * N^2 bits.

#pragma once

#include <cstddef>
#include <vector>

namespace xbarlife {

struct CostModelParams {
  unsigned transistors_per_neuron = 20;
  unsigned capacitors_per_neuron = 1;
  unsigned bits_per_cell = 2;
  double feature_size = 1.0;  // F, nm (cost scales with F^2)
  // Element areas in F^2. The defaults make the exact model coincide with
  // the closed form F^2 (27 + 2N) / N: 20T + 1C = 27 and 1T + 1R = 4.
  double transistor_area = 1.0;
  double capacitor_area = 7.0;
  double nvm_area = 3.0;

  void validate() const;

  /// Every element occupies one F^2.
  static CostModelParams unit_areas(double feature_size = 1.0);
};

/// 2n (T_n T + C_n C), in F^2.
double neuron_area(std::size_t n, const CostModelParams& p);
/// n^2 (1T + 1R), in F^2.
double synapse_area(std::size_t n, const CostModelParams& p);
/// bits_per_cell * n^2.
double total_bits(std::size_t n, const CostModelParams& p);

struct CostPerBit {
  double exact = 0.0;   // F^2 * nm^2 per bit: (neuron + synapse area) / bits
  double approx = 0.0;  // F^2 (27 + 2N) / N
};

CostPerBit cost_per_bit(std::size_t n, const CostModelParams& p);

struct CostSweepRow {
  std::size_t n = 0;
  double exact = 0.0;
  double approx = 0.0;
  double normalized = 0.0;  // exact / max(exact over the sweep)
};

/// Sweep for one technology node, normalized within the sweep.
std::vector<CostSweepRow> cost_sweep(const std::vector<std::size_t>& sizes,
                                     const CostModelParams& p);

}  // namespace xbarlife
