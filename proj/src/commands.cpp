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

#include "xbarlife/commands.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "json.hpp"
#include "xbarlife/error.hpp"
#include "xbarlife/io.hpp"

namespace xbarlife {

namespace {

using ojson = nlohmann::ordered_json;

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

ojson options_json(const RunOptions& o) {
  ojson j;
  j["size"] = o.size ? ojson(*o.size) : ojson(nullptr);
  j["node"] = o.node ? ojson(*o.node) : ojson(nullptr);
  j["state"] = o.state ? ojson(std::string(to_string(*o.state))) : ojson(nullptr);
  j["pulse_width"] = o.pulse_width ? ojson(*o.pulse_width) : ojson(nullptr);
  j["v_spike"] = o.v_spike ? ojson(*o.v_spike) : ojson(nullptr);
  j["mode"] = o.mode ? ojson(std::string(to_string(*o.mode))) : ojson(nullptr);
  j["seed"] = o.seed;
  j["sizes"] = o.sizes;
  j["nodes"] = o.nodes;
  j["workload_path"] = o.workload_path;
  j["generator"] = o.generator;
  j["synapses"] = o.synapses ? ojson(*o.synapses) : ojson(nullptr);
  j["local_search"] = o.local_search;
  return j;
}

std::string parameter_hash(const std::string& command, const ToolConfig& c,
                           const RunOptions& o, const std::string& extra = {}) {
  // The output directory and --jobs do not affect results.
  return hex64(fnv1a64(command + "\n" + c.canonical_json() + "\n" +
                       options_json(o).dump() + "\n" + extra));
}

CommandOutput finish(OutputSet& out, const std::string& command,
                     const ToolConfig& c, const RunOptions& o,
                     std::string summary, const std::string& extra = {}) {
  RunManifest m;
  m.command = command;
  m.config_path = o.config_path;
  m.output_dir = o.out_dir.string();
  m.seed = o.seed;
  m.tool_version = tool_version();
  m.parameter_hash = parameter_hash(command, c, o, extra);
  out.add("manifest.json", m.to_json());
  CommandOutput result;
  result.files = out.commit();
  result.summary = std::move(summary);
  return result;
}

void require_out_dir(const RunOptions& o) {
  if (o.out_dir.empty()) throw ConfigError("an output directory (--out) is required");
}

int pick_node(const ToolConfig& c, const RunOptions& o) {
  const int nm = o.node.value_or(c.default_node);
  c.node(nm);
  return nm;
}

ojson cell_json(CellIndex c) { return {{"row", c.row}, {"col", c.col}}; }

std::string technology_hash(const TechnologyParams& t) {
  std::ostringstream os;
  os.precision(17);
  os << t.v0 << ' ' << t.e_a << ' ' << t.temperature << ' ' << t.k_boltzmann
     << ' ' << t.a0 << ' ' << t.oxide_thickness << ' ' << t.q_charge << ' '
     << t.gamma0 << ' ' << t.beta << ' ' << t.g0 << ' ' << t.g_min << ' '
     << t.horizon << ' ' << t.feature_size;
  return hex64(fnv1a64(os.str()));
}

template <typename Fn>
auto parallel_map(std::size_t count, unsigned jobs, Fn fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> results(count);
  const std::size_t width = std::max(1u, jobs);
  for (std::size_t base = 0; base < count; base += width) {
    std::vector<std::future<R>> batch;
    const std::size_t end = std::min(count, base + width);
    for (std::size_t k = base; k < end; ++k)
      batch.push_back(std::async(width > 1 ? std::launch::async
                                           : std::launch::deferred,
                                 fn, k));
    for (std::size_t k = base; k < end; ++k) results[k] = batch[k - base].get();
  }
  return results;
}

}  // namespace

std::string tool_version() { return XBARLIFE_VERSION; }

CurrentMap compute_current_map(const ToolConfig& config, std::size_t n,
                               int node, ResistanceState state,
                               std::optional<double> v_spike) {
  const auto net =
      build_network(config.geometry(n, node), config.uniform_cells(n, state));
  const SolveOptions so = config.solve_options();
  const double v = v_spike ? *v_spike
                           : calibrate_spike_voltage(net, config.target_current,
                                                     longest_path_cell(n),
                                                     config.read_mode, so);
  return {solve_dc(net, ActivationPattern::all_rows(n, v), so), n, node, state};
}

EnduranceStudy compute_endurance_map(const ToolConfig& config, std::size_t n,
                                     int node, ResistanceState state,
                                     double pulse_width,
                                     std::optional<double> v_spike,
                                     unsigned jobs) {
  EnduranceStudy s;
  s.n = n;
  s.node = node;
  s.cells = config.uniform_cells(n, state);
  const auto net = build_network(config.geometry(n, node), s.cells);
  s.solve = solve_dc(net,
                     ActivationPattern::all_rows(n, v_spike.value_or(config.v_stress)),
                     config.solve_options());
  s.endurance = endurance_map(s.solve, s.cells, config.technology_for(node),
                              pulse_width, jobs);
  return s;
}

std::vector<DisparityPoint> disparity_sweep(const ToolConfig& config,
                                            const std::vector<std::size_t>& sizes,
                                            int node, ResistanceState state,
                                            ReadMode mode, unsigned jobs) {
  if (sizes.empty()) throw ConfigError("disparity sweep needs at least one size");
  for (std::size_t n : sizes) config.geometry(n, node);
  std::vector<std::size_t> sorted = sizes;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return parallel_map(sorted.size(), jobs, [&](std::size_t k) {
    const std::size_t n = sorted[k];
    const auto net = build_network(config.geometry(n, node),
                                   config.uniform_cells(n, state));
    DisparityPoint p;
    p.n = n;
    p.disparity = current_disparity(net, mode, config.solve_options());
    p.v_spike = config.target_current / p.disparity.i_longest;
    return p;
  });
}

OptimizeStudy optimize_placement(const ClusteredWorkload& workload,
                                 const EnduranceMap& endurance,
                                 bool local_search) {
  OptimizeStudy s;
  s.workload = workload;
  s.baseline = place_baseline(workload, endurance.size());
  EnduranceAwareOptions eo;
  eo.local_search = local_search;
  s.optimized = place_endurance_aware(workload, endurance, eo);
  s.baseline_report = evaluate_lifetime(s.baseline, workload, endurance);
  s.report = evaluate_lifetime(s.optimized, workload, endurance);
  return s;
}

CommandOutput run_current_map(const ToolConfig& config, const RunOptions& opt) {
  require_out_dir(opt);
  const std::size_t n = opt.size.value_or(config.n);
  const int node = pick_node(config, opt);
  const ResistanceState state = opt.state.value_or(config.read_state);
  const CurrentMap m = compute_current_map(config, n, node, state, opt.v_spike);

  ojson meta;
  meta["n"] = n;
  meta["node"] = node;
  meta["state"] = std::string(to_string(state));
  meta["mode"] = "full";
  meta["v_spike"] = m.solve.v_spike;
  meta["target_current"] = opt.v_spike ? ojson(nullptr) : ojson(config.target_current);
  meta["calibration_mode"] =
      opt.v_spike ? ojson(nullptr) : ojson(std::string(to_string(config.read_mode)));
  meta["residual"] = m.solve.residual;
  meta["iterations"] = m.solve.iterations;
  meta["units"] = "A";
  meta["i_shortest_path"] = m.solve.cell_current[shortest_path_cell(n)];
  meta["i_longest_path"] = m.solve.cell_current[longest_path_cell(n)];

  OutputSet out(opt.out_dir);
  out.add("current_map.csv", matrix_to_csv(m.solve.cell_current));
  out.add("current_map.json", dump(meta));
  std::ostringstream summary;
  summary << "current map " << n << "x" << n << " at " << node
          << " nm, v_spike " << format_double(m.solve.v_spike) << " V";
  return finish(out, "current-map", config, opt, summary.str());
}

CommandOutput run_endurance_map(const ToolConfig& config, const RunOptions& opt) {
  require_out_dir(opt);
  const std::size_t n = opt.size.value_or(config.n);
  const int node = pick_node(config, opt);
  const ResistanceState state = opt.state.value_or(ResistanceState::hrs);
  const double pw = opt.pulse_width.value_or(config.pulse_width);
  const EnduranceStudy s =
      compute_endurance_map(config, n, node, state, pw, opt.v_spike, opt.jobs);

  const auto cycles = s.endurance.cycles.values();
  const auto [lo, hi] = std::minmax_element(cycles.begin(), cycles.end());
  const auto at = [&](auto it) {
    const auto k = static_cast<std::size_t>(it - cycles.begin());
    return CellIndex{k / n, k % n};
  };
  ojson meta;
  meta["n"] = n;
  meta["node"] = node;
  meta["state"] = std::string(to_string(state));
  meta["pulse_width"] = pw;
  meta["v_spike"] = s.solve.v_spike;
  meta["temperature"] = config.technology.temperature;
  meta["params_hash"] = technology_hash(config.technology_for(node));
  meta["min_cycles"] = *lo;
  meta["min_cell"] = cell_json(at(lo));
  meta["max_cycles"] = *hi;
  meta["max_cell"] = cell_json(at(hi));
  meta["residual"] = s.solve.residual;

  OutputSet out(opt.out_dir);
  out.add("endurance_map.csv", matrix_to_csv(s.endurance.cycles));
  out.add("endurance_map.json", dump(meta));
  std::ostringstream summary;
  summary << "endurance map " << n << "x" << n << " (" << to_string(state)
          << ") cycles " << *lo << ".." << *hi;
  return finish(out, "endurance-map", config, opt, summary.str());
}

CommandOutput run_disparity_sweep(const ToolConfig& config,
                                  const RunOptions& opt) {
  require_out_dir(opt);
  const int node = pick_node(config, opt);
  const ResistanceState state = opt.state.value_or(config.read_state);
  const ReadMode mode = opt.mode.value_or(config.read_mode);
  const std::vector<std::size_t> sizes =
      opt.sizes.empty() ? std::vector<std::size_t>{32, 64, 128, 256} : opt.sizes;
  const auto points = disparity_sweep(config, sizes, node, state, mode, opt.jobs);

  OutputSet out(opt.out_dir);
  std::string csv = "n,i_shortest_A,i_longest_A,disparity_percent,v_spike_V\n";
  std::ostringstream summary;
  summary << "disparity at " << node << " nm (" << to_string(mode) << "):";
  for (const auto& p : points) {
    char line[160];
    std::snprintf(line, sizeof line, "%zu,%.9e,%.9e,%.6f,%.9e\n", p.n,
                  p.disparity.i_shortest, p.disparity.i_longest,
                  p.disparity.percent, p.v_spike);
    csv += line;
    ojson j;
    j["n"] = p.n;
    j["node"] = node;
    j["state"] = std::string(to_string(state));
    j["mode"] = std::string(to_string(mode));
    j["i_shortest_at_1V"] = p.disparity.i_shortest;
    j["i_longest_at_1V"] = p.disparity.i_longest;
    j["disparity_percent"] = p.disparity.percent;
    j["v_spike_for_target"] = p.v_spike;
    j["target_current"] = config.target_current;
    out.add("disparity_n" + std::to_string(p.n) + ".json", dump(j));
    char s[64];
    std::snprintf(s, sizeof s, " %zu:%.2f%%", p.n, p.disparity.percent);
    summary << s;
  }
  out.add("disparity.csv", csv);
  return finish(out, "disparity-sweep", config, opt, summary.str());
}

CommandOutput run_cost_sweep(const ToolConfig& config, const RunOptions& opt) {
  require_out_dir(opt);
  const std::vector<int> nodes = opt.nodes.empty() ? config.node_list() : opt.nodes;
  const std::vector<std::size_t> sizes =
      opt.sizes.empty() ? std::vector<std::size_t>{16, 32, 64, 128, 256}
                        : opt.sizes;
  OutputSet out(opt.out_dir);
  std::string merged = "node,n,exact_cost,approx_cost,normalized_cost\n";
  for (int nm : nodes) {
    CostModelParams p = config.cost;
    p.feature_size = config.node(nm).feature_size;
    const auto rows = cost_sweep(sizes, p);
    std::string csv = "n,exact_cost,approx_cost,normalized_cost\n";
    for (const auto& r : rows) {
      char line[160];
      std::snprintf(line, sizeof line, "%zu,%.9e,%.9e,%.9f\n", r.n, r.exact,
                    r.approx, r.normalized);
      csv += line;
      merged += std::to_string(nm) + "," + line;
    }
    out.add("cost_" + std::to_string(nm) + "nm.csv", csv);
  }
  out.add("cost_sweep.csv", merged);
  return finish(out, "cost-sweep", config, opt,
                "cost sweep over " + std::to_string(nodes.size()) +
                    " nodes x " + std::to_string(sizes.size()) + " sizes");
}

CommandOutput run_optimize(const ToolConfig& config, const RunOptions& opt) {
  require_out_dir(opt);
  const std::size_t n = opt.size.value_or(config.n);
  const int node = pick_node(config, opt);
  const ResistanceState state = opt.state.value_or(ResistanceState::hrs);
  const double pw = opt.pulse_width.value_or(config.pulse_width);
  if (!opt.workload_path.empty() && !opt.generator.empty())
    throw ConfigError("give either --workload or --generate, not both");

  ClusteredWorkload wl;
  std::string extra;
  if (!opt.workload_path.empty()) {
    wl = load_workload(opt.workload_path);
    extra = workload_to_json(wl);
  } else {
    const SpikeDistribution d =
        parse_distribution(opt.generator.empty() ? "zipf(1.2)" : opt.generator);
    wl = generate_workload(opt.synapses.value_or(n * n), d, opt.seed);
  }
  wl.validate(n * n);

  const EnduranceStudy s =
      compute_endurance_map(config, n, node, state, pw, opt.v_spike, opt.jobs);
  const OptimizeStudy o = optimize_placement(wl, s.endurance, opt.local_search);

  OutputSet out(opt.out_dir);
  out.add("placement.json", placement_to_json(o.optimized, o.report));
  out.add("baseline_placement.json",
          placement_to_json(o.baseline, o.baseline_report));
  out.add("workload.csv", workload_to_csv(wl));
  std::ostringstream summary;
  summary << "lifetime " << o.report.lifetime_images << " images vs baseline "
          << o.report.baseline_lifetime_images << " (x"
          << format_double(o.report.improvement_vs_baseline) << ")";
  return finish(out, "optimize", config, opt, summary.str(), extra);
}

CommandOutput run_calibrate(const ToolConfig& config, const RunOptions& opt) {
  require_out_dir(opt);
  const std::size_t n = opt.size.value_or(config.calibration_n);
  const int node = opt.node.value_or(config.reference_node);
  const ResistanceState state = opt.state.value_or(config.read_state);
  const ReadMode mode = opt.mode.value_or(config.read_mode);
  CrossbarGeometry g = config.geometry(n, config.node(node).node_nm);
  const SegmentCalibration cal = calibrate_segment_resistance(
      g, config.uniform_cells(n, state), config.calibration_target, mode,
      config.solve_options());

  ojson j;
  j["n"] = n;
  j["node"] = node;
  j["state"] = std::string(to_string(state));
  j["mode"] = std::string(to_string(mode));
  j["target_disparity_percent"] = config.calibration_target;
  j["r_segment"] = cal.r_segment;
  j["disparity_percent"] = cal.disparity_percent;
  j["evaluations"] = cal.evaluations;
  OutputSet out(opt.out_dir);
  out.add("calibration.json", dump(j));
  char summary[160];
  std::snprintf(summary, sizeof summary,
                "r_segment = %.10g ohm at %d nm gives %.4f%% disparity", cal.r_segment,
                node, cal.disparity_percent);
  return finish(out, "calibrate", config, opt, summary);
}

}  // namespace xbarlife
