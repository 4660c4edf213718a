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

// Technology / geometry configuration.
//
// A TOML subset: [section] headers (dotted names allowed), key = value lines
// with decimal numbers, "strings" or true/false, and # comments. Units per
// key are documented in config/default.toml. Unknown sections or keys are
// rejected.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xbarlife/circuit.hpp"
#include "xbarlife/cost.hpp"
#include "xbarlife/endurance.hpp"

namespace xbarlife {

struct NodeProfile {
  int node_nm = 65;
  double feature_size = 65.0;        // nm
  double r_wordline_segment = 0.0;   // ohm
  double r_bitline_segment = 0.0;    // ohm
  double c_wordline_segment = 0.0;   // F, unused
  double c_bitline_segment = 0.0;    // F, unused
};

struct ToolConfig {
  TechnologyParams technology;
  int default_node = 65;

  // [crossbar]
  std::size_t n = 128;
  double r_driver = 100.0;           // ohm
  double target_current = 50e-6;     // A, read current on the longest path
  double v_stress = 0.1;             // V, spike voltage for endurance studies
  double pulse_width = 1e-3;         // s
  double tolerance = 1e-9;
  ReadMode read_mode = ReadMode::isolated_path;
  ResistanceState read_state = ResistanceState::lrs3;
  double c_wordline_segment = 0.0;
  double c_bitline_segment = 0.0;

  // [cells]
  StateResistances levels = StateResistances::log_spaced(1.0e6, 1.0e4);
  double r_access = 5.0e3;

  CostModelParams cost;

  // [calibration]: per-segment resistance fitted at the reference node;
  // other nodes scale it by reference_node / feature_size unless their
  // [node.X] section overrides it.
  std::size_t calibration_n = 128;
  double calibration_target = 39.2;  // percent
  int reference_node = 65;
  double r_segment = 38.4263830922;  // ohm

  std::map<int, NodeProfile> nodes;  // filled by finalize()

  /// Fills default node profiles and checks every invariant.
  void finalize();
  const NodeProfile& node(int node_nm) const;
  CrossbarGeometry geometry(std::size_t n, int node_nm) const;
  TechnologyParams technology_for(int node_nm) const;
  CellStateMatrix uniform_cells(std::size_t n, ResistanceState s) const;
  SolveOptions solve_options() const;
  std::vector<int> node_list() const;
  /// Every resolved value, key-sorted; the basis of parameter hashes.
  std::string canonical_json() const;
};

ToolConfig default_config();
ToolConfig parse_config(std::string_view text);
ToolConfig load_config(const std::filesystem::path& path);

}  // namespace xbarlife
