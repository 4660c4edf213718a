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

#include "xbarlife/xbarlife.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <string_view>

#include "xbarlife/circuit.hpp"
#include "xbarlife/commands.hpp"
#include "xbarlife/config.hpp"
#include "xbarlife/cost.hpp"
#include "xbarlife/endurance.hpp"
#include "xbarlife/error.hpp"
#include "xbarlife/mapper.hpp"
#include "xbarlife/workload.hpp"

using namespace xbarlife;

struct xbl_config {
  ToolConfig value;
};
struct xbl_network {
  CrossbarNetwork value;
};
struct xbl_solution {
  SolveResult value;
};
struct xbl_workload {
  ClusteredWorkload value;
};

namespace {

thread_local std::string g_last_error;

xbl_status fail(xbl_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
xbl_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return XBL_OK;
  } catch (const Error& e) {
    return fail(static_cast<xbl_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(XBL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(XBL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(XBL_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

ResistanceState to_state(int s) {
  if (s < 0 || s > 3) throw ConfigError("unknown resistance state");
  return static_cast<ResistanceState>(s);
}

ReadMode to_mode(int m) {
  if (m == XBL_READ_ISOLATED) return ReadMode::isolated_path;
  if (m == XBL_READ_FULL) return ReadMode::full_array;
  throw ConfigError("unknown read mode");
}

TechnologyParams to_tech(const xbl_technology& t) {
  TechnologyParams p;
  p.v0 = t.v0;
  p.e_a = t.e_a;
  p.temperature = t.temperature;
  p.k_boltzmann = t.k_boltzmann;
  p.a0 = t.a0;
  p.oxide_thickness = t.oxide_thickness;
  p.q_charge = t.q_charge;
  p.gamma0 = t.gamma0;
  p.beta = t.beta;
  p.g0 = t.g0;
  p.g_min = t.g_min;
  p.feature_size = t.feature_size;
  p.horizon = t.horizon;
  p.validate();
  return p;
}

xbl_technology from_tech(const TechnologyParams& p) {
  xbl_technology t;
  t.v0 = p.v0;
  t.e_a = p.e_a;
  t.temperature = p.temperature;
  t.k_boltzmann = p.k_boltzmann;
  t.a0 = p.a0;
  t.oxide_thickness = p.oxide_thickness;
  t.q_charge = p.q_charge;
  t.gamma0 = p.gamma0;
  t.beta = p.beta;
  t.g0 = p.g0;
  t.g_min = p.g_min;
  t.feature_size = p.feature_size;
  t.horizon = p.horizon;
  return t;
}

void copy_out(std::span<const double> src, double* out, std::size_t len) {
  require(out != nullptr, "output buffer is null");
  if (len < src.size())
    throw ConfigError("output buffer holds " + std::to_string(len) +
                      " values, need " + std::to_string(src.size()));
  std::copy(src.begin(), src.end(), out);
}

}  // namespace

extern "C" {

const char* xbl_version(void) {
  static const std::string v = tool_version();
  return v.c_str();
}

const char* xbl_last_error(void) { return g_last_error.c_str(); }

xbl_status xbl_config_default(xbl_config** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new xbl_config{default_config()};
  });
}

xbl_status xbl_config_load(const char* path, xbl_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new xbl_config{load_config(path)};
  });
}

xbl_status xbl_config_parse(const char* text, xbl_config** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new xbl_config{parse_config(text)};
  });
}

void xbl_config_free(xbl_config* config) { delete config; }

xbl_status xbl_config_geometry(const xbl_config* config, std::size_t n,
                               int node_nm, xbl_geometry* out) {
  return guarded([&] {
    require(config != nullptr && out != nullptr, "null argument");
    const int nm = node_nm == 0 ? config->value.default_node : node_nm;
    const CrossbarGeometry g =
        config->value.geometry(n == 0 ? config->value.n : n, nm);
    *out = {g.n, g.r_wordline_segment, g.r_bitline_segment, g.r_driver};
  });
}

xbl_status xbl_config_cell_levels(const xbl_config* config,
                                  xbl_cell_levels* out) {
  return guarded([&] {
    require(config != nullptr && out != nullptr, "null argument");
    const auto& l = config->value.levels;
    *out = {l.hrs, l.lrs1, l.lrs2, l.lrs3, config->value.r_access};
  });
}

xbl_status xbl_config_technology(const xbl_config* config, int node_nm,
                                 xbl_technology* out) {
  return guarded([&] {
    require(config != nullptr && out != nullptr, "null argument");
    const int nm = node_nm == 0 ? config->value.default_node : node_nm;
    *out = from_tech(config->value.technology_for(nm));
  });
}

xbl_status xbl_network_build(const xbl_geometry* geometry,
                             const xbl_cell_levels* levels,
                             const uint8_t* states, xbl_state fill,
                             xbl_network** out) {
  return guarded([&] {
    require(geometry != nullptr && levels != nullptr && out != nullptr,
            "null argument");
    CrossbarGeometry g;
    g.n = geometry->n;
    g.r_wordline_segment = geometry->r_wordline_segment;
    g.r_bitline_segment = geometry->r_bitline_segment;
    g.r_driver = geometry->r_driver;
    g.validate();
    StateResistances l{levels->r_hrs, levels->r_lrs1, levels->r_lrs2,
                       levels->r_lrs3};
    CellStateMatrix cells =
        CellStateMatrix::uniform(g.n, to_state(fill), l, levels->r_access);
    if (states != nullptr) {
      for (std::size_t k = 0; k < g.n * g.n; ++k)
        cells.states.values()[k] = to_state(states[k]);
    }
    *out = new xbl_network{build_network(g, cells)};
  });
}

xbl_status xbl_network_from_config(const xbl_config* config, std::size_t n,
                                   int node_nm, xbl_state state,
                                   xbl_network** out) {
  return guarded([&] {
    require(config != nullptr && out != nullptr, "null argument");
    const ToolConfig& c = config->value;
    const std::size_t size = n == 0 ? c.n : n;
    const int nm = node_nm == 0 ? c.default_node : node_nm;
    *out = new xbl_network{build_network(
        c.geometry(size, nm), c.uniform_cells(size, to_state(state)))};
  });
}

std::size_t xbl_network_size(const xbl_network* network) {
  return network ? network->value.n() : 0;
}

std::size_t xbl_network_unknowns(const xbl_network* network) {
  return network ? network->value.unknowns() : 0;
}

void xbl_network_free(xbl_network* network) { delete network; }

xbl_status xbl_solve_dc(const xbl_network* network, double v_spike,
                        const uint8_t* driven, const uint8_t* access,
                        double tolerance, xbl_solution** out) {
  return guarded([&] {
    require(network != nullptr && out != nullptr, "null argument");
    const std::size_t n = network->value.n();
    ActivationPattern act = ActivationPattern::all_rows(n, v_spike);
    if (driven != nullptr)
      for (std::size_t i = 0; i < n; ++i) act.driven[i] = driven[i] != 0;
    if (access != nullptr) {
      SquareMatrix<std::uint8_t> on(n, 0);
      for (std::size_t k = 0; k < n * n; ++k)
        on.values()[k] = access[k] != 0 ? 1 : 0;
      act.access = std::move(on);
    }
    SolveOptions opts;
    if (tolerance > 0) opts.tolerance = tolerance;
    *out = new xbl_solution{solve_dc(network->value, act, opts)};
  });
}

void xbl_solution_free(xbl_solution* solution) { delete solution; }

std::size_t xbl_solution_size(const xbl_solution* solution) {
  return solution ? solution->value.cell_current.size() : 0;
}

double xbl_solution_residual(const xbl_solution* solution) {
  return solution ? solution->value.residual : NAN;
}

xbl_status xbl_solution_cell_currents(const xbl_solution* solution,
                                      double* out, std::size_t len) {
  return guarded([&] {
    require(solution != nullptr, "null solution");
    copy_out(solution->value.cell_current.values(), out, len);
  });
}

xbl_status xbl_solution_cell_voltages(const xbl_solution* solution,
                                      double* out, std::size_t len) {
  return guarded([&] {
    require(solution != nullptr, "null solution");
    copy_out(solution->value.cell_voltage.values(), out, len);
  });
}

xbl_status xbl_solution_bitline_currents(const xbl_solution* solution,
                                         double* out, std::size_t len) {
  return guarded([&] {
    require(solution != nullptr, "null solution");
    copy_out(solution->value.bitline_current, out, len);
  });
}

xbl_status xbl_solution_driver_currents(const xbl_solution* solution,
                                        double* out, std::size_t len) {
  return guarded([&] {
    require(solution != nullptr, "null solution");
    copy_out(solution->value.driver_current, out, len);
  });
}

xbl_status xbl_solution_node_voltages(const xbl_solution* solution,
                                      double* out, std::size_t len) {
  return guarded([&] {
    require(solution != nullptr, "null solution");
    copy_out(solution->value.node_voltage, out, len);
  });
}

xbl_status xbl_calibrate_spike_voltage(const xbl_network* network,
                                       double target_current, std::size_t row,
                                       std::size_t col, xbl_read_mode mode,
                                       double* v_spike) {
  return guarded([&] {
    require(network != nullptr && v_spike != nullptr, "null argument");
    *v_spike = calibrate_spike_voltage(network->value, target_current,
                                       {row, col}, to_mode(mode));
  });
}

xbl_status xbl_current_disparity(const xbl_network* network,
                                 xbl_read_mode mode, double* percent,
                                 double* i_shortest, double* i_longest) {
  return guarded([&] {
    require(network != nullptr, "null network");
    const Disparity d = current_disparity(network->value, to_mode(mode));
    if (percent) *percent = d.percent;
    if (i_shortest) *i_shortest = d.i_shortest;
    if (i_longest) *i_longest = d.i_longest;
  });
}

xbl_status xbl_gap_rate(const xbl_technology* tech, double gap,
                        double voltage, double* rate) {
  return guarded([&] {
    require(tech != nullptr && rate != nullptr, "null argument");
    *rate = gap_rate(gap, voltage, to_tech(*tech));
  });
}

xbl_status xbl_time_to_disturb_hrs(const xbl_technology* tech, double voltage,
                                   double* seconds) {
  return guarded([&] {
    require(tech != nullptr && seconds != nullptr, "null argument");
    *seconds = time_to_disturb_hrs(voltage, to_tech(*tech));
  });
}

xbl_status xbl_time_to_disturb_lrs(double voltage, double* seconds) {
  return guarded([&] {
    require(seconds != nullptr, "null argument");
    *seconds = time_to_disturb_lrs(voltage);
  });
}

xbl_status xbl_endurance_cycles(double t_disturb, double pulse_width,
                                uint64_t* cycles) {
  return guarded([&] {
    require(cycles != nullptr, "null argument");
    *cycles = endurance_cycles(t_disturb, pulse_width);
  });
}

uint64_t xbl_inference_lifetime(uint64_t endurance,
                                uint64_t spikes_per_image) {
  return inference_lifetime(endurance, spikes_per_image);
}

xbl_status xbl_endurance_map(const xbl_network* network,
                             const xbl_solution* solution,
                             const xbl_technology* tech, double pulse_width,
                             uint64_t* cycles, std::size_t len) {
  return guarded([&] {
    require(network != nullptr && solution != nullptr && tech != nullptr &&
                cycles != nullptr,
            "null argument");
    const EnduranceMap m = endurance_map(solution->value,
                                         network->value.cells(),
                                         to_tech(*tech), pulse_width);
    const auto v = m.cycles.values();
    if (len < v.size()) throw ConfigError("output buffer too small");
    std::copy(v.begin(), v.end(), cycles);
  });
}

xbl_status xbl_cost_per_bit(std::size_t n, double feature_size,
                            int unit_areas, double* exact, double* approx) {
  return guarded([&] {
    CostModelParams p = unit_areas ? CostModelParams::unit_areas(feature_size)
                                   : CostModelParams{};
    p.feature_size = feature_size;
    const CostPerBit c = cost_per_bit(n, p);
    if (exact) *exact = c.exact;
    if (approx) *approx = c.approx;
  });
}

xbl_status xbl_average_isi(const double* times, std::size_t count,
                           double* isi) {
  return guarded([&] {
    require(isi != nullptr && (times != nullptr || count == 0),
            "null argument");
    *isi = average_isi(std::span<const double>(times, count));
  });
}

xbl_status xbl_workload_load(const char* path, xbl_workload** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new xbl_workload{load_workload(path)};
  });
}

xbl_status xbl_workload_parse(const char* json, xbl_workload** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    *out = new xbl_workload{parse_workload_json(json)};
  });
}

xbl_status xbl_workload_generate(std::size_t n_synapses,
                                 const char* distribution, uint64_t seed,
                                 xbl_workload** out) {
  return guarded([&] {
    require(distribution != nullptr && out != nullptr, "null argument");
    *out = new xbl_workload{generate_workload(
        n_synapses, parse_distribution(distribution), seed)};
  });
}

std::size_t xbl_workload_size(const xbl_workload* workload) {
  return workload ? workload->value.synapses.size() : 0;
}

xbl_status xbl_workload_to_json(const xbl_workload* workload, char* buf,
                                std::size_t cap, std::size_t* needed) {
  return guarded([&] {
    require(workload != nullptr, "null workload");
    const std::string text = workload_to_json(workload->value);
    if (needed) *needed = text.size() + 1;
    if (buf != nullptr && cap > 0) {
      const std::size_t k = std::min(cap - 1, text.size());
      std::memcpy(buf, text.data(), k);
      buf[k] = '\0';
    }
  });
}

void xbl_workload_free(xbl_workload* workload) { delete workload; }

xbl_status xbl_place(const xbl_workload* workload, const uint64_t* endurance,
                     std::size_t n, int strategy, uint64_t seed,
                     std::size_t* rows, std::size_t* cols,
                     xbl_lifetime* report) {
  return guarded([&] {
    require(workload != nullptr && endurance != nullptr, "null argument");
    require(n > 0, "array size must be positive");
    EnduranceMap map{SquareMatrix<std::uint64_t>(n, 0), 0.0};
    std::copy(endurance, endurance + n * n, map.cycles.values().begin());
    Placement placement;
    switch (strategy) {
      case 0: placement = place_baseline(workload->value, n); break;
      case 1: placement = place_random(workload->value, n, seed); break;
      case 2: placement = place_endurance_aware(workload->value, map); break;
      default: throw ConfigError("unknown placement strategy");
    }
    for (std::size_t k = 0; k < placement.assignment.size(); ++k) {
      if (rows) rows[k] = placement.assignment[k].cell.row;
      if (cols) cols[k] = placement.assignment[k].cell.col;
    }
    if (report) {
      const LifetimeReport r =
          evaluate_lifetime(placement, workload->value, map);
      report->lifetime_images = r.lifetime_images;
      report->baseline_lifetime_images = r.baseline_lifetime_images;
      report->improvement_vs_baseline = r.improvement_vs_baseline;
      report->limiting_row = r.limiting_cell ? r.limiting_cell->row : SIZE_MAX;
      report->limiting_col = r.limiting_cell ? r.limiting_cell->col : SIZE_MAX;
      report->limiting_synapse = r.limiting_synapse.value_or(UINT64_MAX);
    }
  });
}

void xbl_run_options_init(xbl_run_options* options) {
  if (options == nullptr) return;
  std::memset(options, 0, sizeof *options);
  options->state = -1;
  options->mode = -1;
  options->jobs = 1;
}

xbl_status xbl_run(const char* command, const xbl_config* config,
                   const xbl_run_options* options, char* summary,
                   std::size_t summary_cap) {
  return guarded([&] {
    require(command != nullptr && config != nullptr && options != nullptr,
            "null argument");
    require(options->out_dir != nullptr && *options->out_dir != '\0',
            "an output directory is required");
    RunOptions o;
    if (options->config_path) o.config_path = options->config_path;
    o.out_dir = options->out_dir;
    if (options->size > 0) o.size = options->size;
    if (options->node != 0) o.node = options->node;
    if (options->state >= 0) o.state = to_state(options->state);
    if (options->pulse_width > 0) o.pulse_width = options->pulse_width;
    if (options->v_spike > 0) o.v_spike = options->v_spike;
    if (options->mode >= 0) o.mode = to_mode(options->mode);
    o.seed = options->seed;
    o.jobs = options->jobs == 0 ? 1 : options->jobs;
    if (options->sizes)
      o.sizes.assign(options->sizes, options->sizes + options->sizes_count);
    if (options->nodes)
      o.nodes.assign(options->nodes, options->nodes + options->nodes_count);
    if (options->workload_path) o.workload_path = options->workload_path;
    if (options->generator) o.generator = options->generator;
    if (options->synapses > 0) o.synapses = options->synapses;
    o.local_search = options->local_search != 0;

    const std::string_view cmd(command);
    const ToolConfig& c = config->value;
    CommandOutput result;
    if (cmd == "current-map") result = run_current_map(c, o);
    else if (cmd == "endurance-map") result = run_endurance_map(c, o);
    else if (cmd == "disparity-sweep") result = run_disparity_sweep(c, o);
    else if (cmd == "cost-sweep") result = run_cost_sweep(c, o);
    else if (cmd == "optimize") result = run_optimize(c, o);
    else if (cmd == "calibrate") result = run_calibrate(c, o);
    else throw ConfigError("unknown command '" + std::string(cmd) + "'");

    if (summary != nullptr && summary_cap > 0) {
      const std::size_t k = std::min(summary_cap - 1, result.summary.size());
      std::memcpy(summary, result.summary.data(), k);
      summary[k] = '\0';
    }
  });
}

}  // extern "C"
