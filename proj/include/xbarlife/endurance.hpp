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

// OxRRAM read-disturb kinetics and the endurance/lifetime arithmetic built on
// them.
//
// HRS cells lose their state when stress shrinks the vertical filament gap:
//
//   dg/dt = -v0 * exp(-Ea / kT) * sinh(gamma * a0 / L * q V / kT)
//   gamma = gamma0 - beta * (g / g0)^3
//
// LRS cells disturb through lateral filament growth, with an empirical
// transition time t = 10^(-14.7 V + 6.7) s that has no temperature term.
//
// Energies are in eV and kT = k_boltzmann * temperature is in eV, so q = 1
// when V is in volts.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

#include "xbarlife/circuit.hpp"
#include "xbarlife/matrix.hpp"

namespace xbarlife {

struct TechnologyParams {
  double v0 = 10.0;                  // m/s, filament-growth velocity prefactor
  double e_a = 0.6;                  // eV
  double temperature = 300.0;        // K
  double k_boltzmann = 8.617333262e-5;  // eV/K
  double a0 = 0.25e-9;               // m, atomic hopping distance
  double oxide_thickness = 5.0e-9;   // m
  double q_charge = 1.0;             // e, with kT in eV
  double gamma0 = 16.5;
  double beta = 1.25;
  double g0 = 2.0e-9;                // m, initial gap
  double g_min = 0.1e-9;             // m, HRS disturbed at g <= g_min
  double feature_size = 65.0;        // nm
  double horizon = 1.0e12;           // s, integration stops here

  double thermal_energy() const { return k_boltzmann * temperature; }
  void validate() const;
};

/// Time-to-disturb marker for a cell that survives past the horizon (or sees
/// no stress).
inline constexpr double kNeverDisturbed =
    std::numeric_limits<double>::infinity();
/// Cycle / image count sentinel for "never disturbed".
inline constexpr std::uint64_t kUnlimited =
    std::numeric_limits<std::uint64_t>::max();

/// gamma0 - beta * (g / g0)^3
double field_enhancement(double gap, const TechnologyParams& p);

/// dg/dt in m/s. Throws DomainError for gap <= 0.
double gap_rate(double gap, double voltage, const TechnologyParams& p);

struct HrsIntegration {
  double time = kNeverDisturbed;
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

/// Integrates the gap from g0 down to g_min with an adaptive Dormand-Prince
/// 5(4) scheme (relative error 1e-6 per step, steps capped at dt_max) and
/// locates the crossing by bisecting the final step. Returns kNeverDisturbed
/// if the horizon is reached first.
HrsIntegration integrate_hrs(
    double voltage, const TechnologyParams& p,
    double dt_max = std::numeric_limits<double>::infinity());

double time_to_disturb_hrs(
    double voltage, const TechnologyParams& p,
    double dt_max = std::numeric_limits<double>::infinity());

/// 10^(-14.7 V + 6.7) seconds.
double time_to_disturb_lrs(double voltage);

double time_to_disturb(ResistanceState state, double voltage,
                       const TechnologyParams& p);

/// floor(t_disturb / pulse_width); kUnlimited when t_disturb is infinite.
std::uint64_t endurance_cycles(double t_disturb, double pulse_width);

/// floor(endurance / spikes_per_image); kUnlimited for zero spikes or
/// unlimited endurance.
std::uint64_t inference_lifetime(std::uint64_t endurance,
                                 std::uint64_t spikes_per_image);

struct EnduranceMap {
  SquareMatrix<std::uint64_t> cycles;
  double pulse_width = 1e-3;  // s

  std::size_t size() const { return cycles.size(); }
};

/// Per-cell dispatch: HRS cells through the gap ODE, LRS cells through the
/// empirical law. Cells are independent, so `jobs` > 1 splits rows across
/// threads without changing the result. Non-conducting cells see no stress.
EnduranceMap endurance_map(const SolveResult& solve,
                           const CellStateMatrix& cells,
                           const TechnologyParams& p, double pulse_width,
                           unsigned jobs = 1);

}  // namespace xbarlife
