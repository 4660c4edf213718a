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

// DC model of an N x N 1T-1R crossbar with resistive wire parasitics.
//
// Every crosspoint (i, j) owns two circuit nodes: a wordline node and a
// bitline node, bridged by the cell branch (device + access transistor).
// Wordline i is driven through r_driver at its column-0 end. Bitline j is
// terminated at its row-(N-1) end by one bitline segment into an ideal
// virtual ground. Cell (0, N-1) therefore sits on the longest current path
// and cell (N-1, 0) on the shortest.
//
// Wire capacitances are carried in the geometry for completeness but play no
// role in a DC operating point.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "xbarlife/matrix.hpp"

namespace xbarlife {

enum class SenseMode { virtual_ground };

struct CrossbarGeometry {
  std::size_t n = 0;
  double r_wordline_segment = 0.0;  // ohm
  double r_bitline_segment = 0.0;   // ohm
  double r_driver = 0.0;            // ohm
  SenseMode sense = SenseMode::virtual_ground;
  double c_wordline_segment = 0.0;  // farad, unused in DC analysis
  double c_bitline_segment = 0.0;   // farad, unused in DC analysis

  void validate() const;
};

/// HRS encodes logic 00; LRS1..LRS3 encode 01, 10, 11 with decreasing
/// resistance.
enum class ResistanceState : std::uint8_t { hrs = 0, lrs1 = 1, lrs2 = 2, lrs3 = 3 };

std::string_view to_string(ResistanceState s);
ResistanceState parse_resistance_state(std::string_view text);
inline bool is_lrs(ResistanceState s) { return s != ResistanceState::hrs; }

struct StateResistances {
  double hrs = 1.0e6;
  double lrs1 = 0.0;
  double lrs2 = 0.0;
  double lrs3 = 1.0e4;

  double of(ResistanceState s) const;
  void validate() const;

  /// LRS1 and LRS2 placed log-uniformly between HRS and LRS3.
  static StateResistances log_spaced(double hrs, double lrs3);
};

struct CellStateMatrix {
  SquareMatrix<ResistanceState> states;
  StateResistances levels;
  double r_access = 5.0e3;  // ohm, series access transistor

  std::size_t size() const { return states.size(); }
  double state_resistance(std::size_t row, std::size_t col) const {
    return levels.of(states(row, col));
  }
  double branch_resistance(std::size_t row, std::size_t col) const {
    return state_resistance(row, col) + r_access;
  }
  void validate() const;

  static CellStateMatrix uniform(std::size_t n, ResistanceState state,
                                 const StateResistances& levels,
                                 double r_access);
};

/// Which wordlines fire and, optionally, which access transistors are on.
/// Undriven wordlines are held at 0 V. A cell whose access device is off is
/// an open branch.
struct ActivationPattern {
  std::vector<bool> driven;
  double v_spike = 1.0;
  std::optional<SquareMatrix<std::uint8_t>> access;

  bool conducts(std::size_t row, std::size_t col) const {
    return !access || (*access)(row, col) != 0;
  }
  void validate(std::size_t n) const;

  static ActivationPattern all_rows(std::size_t n, double v_spike);
  /// All rows driven, only `cell` has its access device on.
  static ActivationPattern single_cell(std::size_t n, double v_spike,
                                       CellIndex cell);
};

class CrossbarNetwork {
 public:
  CrossbarNetwork(CrossbarGeometry geometry, CellStateMatrix cells);

  std::size_t n() const { return geometry_.n; }
  std::size_t unknowns() const { return 2 * geometry_.n * geometry_.n; }
  const CrossbarGeometry& geometry() const { return geometry_; }
  const CellStateMatrix& cells() const { return cells_; }

  std::size_t wordline_node(std::size_t row, std::size_t col) const {
    return row * geometry_.n + col;
  }
  std::size_t bitline_node(std::size_t row, std::size_t col) const {
    return geometry_.n * geometry_.n + row * geometry_.n + col;
  }

 private:
  CrossbarGeometry geometry_;
  CellStateMatrix cells_;
};

/// Throws ConfigError when geometry and cell matrix disagree or either is
/// invalid.
CrossbarNetwork build_network(const CrossbarGeometry& geometry,
                              const CellStateMatrix& cells);

enum class SolverKind { automatic, direct, iterative };

struct SolveOptions {
  double tolerance = 1e-9;  // relative residual ||Gx - b|| / ||b||
  SolverKind method = SolverKind::automatic;
  std::size_t direct_max_n = 64;  // automatic: direct up to this N
  std::size_t max_iterations = 0;  // 0: 20 * unknowns
};

struct SolveResult {
  SquareMatrix<double> cell_voltage;  // wordline node minus bitline node, V
  SquareMatrix<double> cell_current;  // A, zero for non-conducting cells
  SquareMatrix<std::uint8_t> conducting;
  std::vector<double> bitline_current;  // A, into each post-synaptic neuron
  std::vector<double> driver_current;   // A, out of each wordline driver
  std::vector<double> node_voltage;     // 2N^2 unknowns, wordline block first
  double v_spike = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  SolverKind method = SolverKind::direct;

  double total_driver_current() const;
  double total_sense_current() const;
};

SolveResult solve_dc(const CrossbarNetwork& network,
                     const ActivationPattern& activation,
                     const SolveOptions& options = {});

enum class ReadMode {
  isolated_path,  // all rows driven, only the measured cell's access on
  full_array,     // all rows driven, every access device on
};

std::string_view to_string(ReadMode m);
ReadMode parse_read_mode(std::string_view text);

inline CellIndex longest_path_cell(std::size_t n) { return {0, n - 1}; }
inline CellIndex shortest_path_cell(std::size_t n) { return {n - 1, 0}; }

/// Spike voltage that makes `cell` carry `target_current`. One solve at 1 V,
/// then scaled (the network is linear in the source voltage).
double calibrate_spike_voltage(const CrossbarNetwork& network,
                               double target_current, CellIndex cell,
                               ReadMode mode = ReadMode::isolated_path,
                               const SolveOptions& options = {});

struct Disparity {
  double i_shortest = 0.0;  // A at 1 V, cell (N-1, 0)
  double i_longest = 0.0;   // A at 1 V, cell (0, N-1)
  double percent = 0.0;     // 100 * (i_shortest - i_longest) / i_shortest
};

Disparity current_disparity(const CrossbarNetwork& network,
                            ReadMode mode = ReadMode::isolated_path,
                            const SolveOptions& options = {});

struct SegmentCalibration {
  double r_segment = 0.0;  // ohm, applied to both wordline and bitline
  double disparity_percent = 0.0;
  std::size_t evaluations = 0;
};

/// Finds the per-segment resistance (shared by wordlines and bitlines) at
/// which an n x n crossbar of `cells` shows `target_percent` disparity.
/// Disparity is monotone in the segment resistance, so this brackets and
/// bisects in log space.
SegmentCalibration calibrate_segment_resistance(
    const CrossbarGeometry& geometry_template, const CellStateMatrix& cells,
    double target_percent, ReadMode mode = ReadMode::isolated_path,
    const SolveOptions& options = {}, double percent_tolerance = 1e-6);

}  // namespace xbarlife
