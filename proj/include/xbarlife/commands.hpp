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

// Batch experiments behind the CLI. Each run_* validates its inputs, computes
// everything in memory, then publishes its files plus manifest.json in one
// commit. The compute_* helpers return the same data without touching disk.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "xbarlife/circuit.hpp"
#include "xbarlife/config.hpp"
#include "xbarlife/cost.hpp"
#include "xbarlife/endurance.hpp"
#include "xbarlife/mapper.hpp"
#include "xbarlife/workload.hpp"

namespace xbarlife {

std::string tool_version();

struct RunOptions {
  std::string config_path;  // recorded verbatim in the manifest
  std::filesystem::path out_dir;
  std::optional<std::size_t> size;
  std::optional<int> node;
  std::optional<ResistanceState> state;
  std::optional<double> pulse_width;
  std::optional<double> v_spike;
  std::optional<ReadMode> mode;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::vector<std::size_t> sizes;
  std::vector<int> nodes;
  std::string workload_path;
  std::string generator;  // e.g. "zipf(1.2)"
  std::optional<std::size_t> synapses;
  bool local_search = false;
};

struct CommandOutput {
  std::vector<std::filesystem::path> files;
  std::string summary;
};

struct CurrentMap {
  SolveResult solve;
  std::size_t n = 0;
  int node = 0;
  ResistanceState state = ResistanceState::lrs3;
};

/// Full-array solve. Without an explicit spike voltage, the voltage is
/// calibrated so the longest-path cell carries config.target_current.
CurrentMap compute_current_map(const ToolConfig& config, std::size_t n,
                               int node, ResistanceState state,
                               std::optional<double> v_spike);

struct EnduranceStudy {
  SolveResult solve;
  EnduranceMap endurance;
  CellStateMatrix cells;
  std::size_t n = 0;
  int node = 0;
};

/// Full-array solve at v_spike (default config.v_stress), then per-cell
/// read endurance.
EnduranceStudy compute_endurance_map(const ToolConfig& config, std::size_t n,
                                     int node, ResistanceState state,
                                     double pulse_width,
                                     std::optional<double> v_spike,
                                     unsigned jobs = 1);

struct DisparityPoint {
  std::size_t n = 0;
  Disparity disparity;
  double v_spike = 0.0;  // V giving config.target_current on the longest path
};

std::vector<DisparityPoint> disparity_sweep(const ToolConfig& config,
                                            const std::vector<std::size_t>& sizes,
                                            int node, ResistanceState state,
                                            ReadMode mode, unsigned jobs = 1);

struct OptimizeStudy {
  ClusteredWorkload workload;
  Placement baseline;
  Placement optimized;
  LifetimeReport baseline_report;
  LifetimeReport report;
};

OptimizeStudy optimize_placement(const ClusteredWorkload& workload,
                                 const EnduranceMap& endurance,
                                 bool local_search = false);

CommandOutput run_current_map(const ToolConfig& config, const RunOptions& opt);
CommandOutput run_endurance_map(const ToolConfig& config, const RunOptions& opt);
CommandOutput run_disparity_sweep(const ToolConfig& config, const RunOptions& opt);
CommandOutput run_cost_sweep(const ToolConfig& config, const RunOptions& opt);
CommandOutput run_optimize(const ToolConfig& config, const RunOptions& opt);
CommandOutput run_calibrate(const ToolConfig& config, const RunOptions& opt);

}  // namespace xbarlife
