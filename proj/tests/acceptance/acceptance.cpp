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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "xbarlife/circuit.hpp"
#include "xbarlife/commands.hpp"
#include "xbarlife/config.hpp"
#include "xbarlife/cost.hpp"
#include "xbarlife/endurance.hpp"
#include "xbarlife/mapper.hpp"
#include "xbarlife/workload.hpp"

using namespace xbarlife;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <typename... A>
std::string fmt(const char* f, A... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

void guard(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("threw: ") + e.what());
  }
}

const ToolConfig& config() {
  static const ToolConfig c = default_config();
  return c;
}

// ---- 1 ----
double g_r_segment = 0.0;

void disparity_trend() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& c = config();
  const auto cells = c.uniform_cells(128, c.read_state);
  const auto cal = calibrate_segment_resistance(c.geometry(128, 65), cells, 39.2,
                                                c.read_mode, c.solve_options());
  g_r_segment = cal.r_segment;
  const std::map<std::size_t, double> expected{{32, 13.3}, {64, 25.1}, {128, 39.2},
                                            {256, 55.8}};
  std::string detail = fmt("r_segment=%.6f ohm;", cal.r_segment);
  bool ok = true;
  double prev = -1.0;
  for (const auto& [n, target] : expected) {
    CrossbarGeometry g = c.geometry(n, 65);
    g.r_wordline_segment = g.r_bitline_segment = cal.r_segment;
    const double d = current_disparity(build_network(g, c.uniform_cells(n, c.read_state)),
                                       c.read_mode, c.solve_options())
                         .percent;
    const double tol = n == 128 ? 2.0 : 5.0;
    ok = ok && std::fabs(d - target) <= tol && d > prev;
    prev = d;
    detail += fmt(" %zu:%.2f%% (expected %.1f)", n, d, target);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ok = ok && secs <= 60.0;
  report(1, ok, detail + fmt("; %.1f s", secs));
}

// ---- 2 ----
void spike_voltage() {
  const auto& c = config();
  const std::size_t n = 128;
  const auto net = build_network(c.geometry(n, 65), c.uniform_cells(n, c.read_state));
  const auto cell = longest_path_cell(n);
  bool ok = true;
  std::string detail;
  for (ReadMode mode : {ReadMode::isolated_path, ReadMode::full_array}) {
    const double v = calibrate_spike_voltage(net, 50e-6, cell, mode, c.solve_options());
    const auto act = mode == ReadMode::isolated_path
                         ? ActivationPattern::single_cell(n, v, cell)
                         : ActivationPattern::all_rows(n, v);
    const double i = solve_dc(net, act, c.solve_options()).cell_current[cell];
    ok = ok && rel(i, 50e-6) <= 1e-3;
    detail += fmt("%s: v=%.6f V i=%.6f uA; ", std::string(to_string(mode)).c_str(),
                  v, i * 1e6);
  }
  report(2, ok, detail);
}

// ---- 3 ----
void solver_oracle() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> seg(1.0, 60.0);
  double worst_v = 0.0, worst_c = 0.0;
  for (std::size_t n : {2u, 3u}) {
    for (int trial = 0; trial < 10; ++trial) {
      CrossbarGeometry g;
      g.n = n;
      g.r_wordline_segment = seg(rng);
      g.r_bitline_segment = seg(rng);
      g.r_driver = 100.0;
      auto cells = config().uniform_cells(n, ResistanceState::lrs3);
      for (auto& s : cells.states.values()) s = static_cast<ResistanceState>(rng() % 4);
      const auto net = build_network(g, cells);
      const auto act = ActivationPattern::all_rows(n, 1.0);
      const auto r = solve_dc(net, act);
      oracle::CrossbarSpec s;
      s.n = n;
      s.r_wl = g.r_wordline_segment;
      s.r_bl = g.r_bitline_segment;
      s.r_driver = g.r_driver;
      s.driven.assign(n, true);
      for (std::size_t k = 0; k < n * n; ++k)
        s.branch.push_back(cells.branch_resistance(k / n, k % n));
      const auto o = oracle::crossbar(s);
      for (std::size_t k = 0; k < net.unknowns(); ++k)
        worst_v = std::max(worst_v, rel(r.node_voltage[k], double(o.node[k])));
      worst_c = std::max(worst_c, rel(r.total_driver_current(), r.total_sense_current()));
    }
  }
  report(3, worst_v <= 1e-9 && worst_c <= 1e-8,
         fmt("max node rel err %.2e, driver vs sense %.2e", worst_v, worst_c));
}

// ---- 4 ----
void worked_example() {
  const auto e = endurance_cycles(1000e-3, 1e-3);
  const auto l = inference_lifetime(1000, 10);
  report(4, e == 1000 && l == 100,
         fmt("endurance_cycles=%llu inference_lifetime=%llu", (unsigned long long)e,
             (unsigned long long)l));
}

// ---- 5 ----
void lrs_law() {
  const double t0 = time_to_disturb_lrs(0.0);
  double worst = 0.0;
  for (double v : {0.0, 0.05, 0.2, 0.5, 1.0})
    worst = std::max(worst, rel(time_to_disturb_lrs(v) /
                                    time_to_disturb_lrs(v + 1.0 / 14.7),
                                10.0));
  const double e0 = rel(t0, std::pow(10.0, 6.7));
  report(5, e0 <= 1e-12 && worst <= 1e-9,
         fmt("t(0)=%.6e s (rel %.1e), decade step rel err %.1e", t0, e0, worst));
}

// ---- 6 ----
void hrs_integration() {
  const TechnologyParams p = config().technology_for(65);
  oracle::Device d;
  bool ok = true;
  std::string detail;
  for (double v : {0.2, 0.3, 0.5}) {
    const double t = time_to_disturb_hrs(v, p);
    const double ref = oracle::crossing_time_euler(v, d, t / 1e6);
    ok = ok && rel(t, ref) <= 5e-3;
    detail += fmt("v=%.1f: %.6e s vs %.6e (%.3f%%); ", v, t, ref, 100 * rel(t, ref));
  }
  double prev = INFINITY;
  bool mono = true;
  for (int k = 1; k <= 20; ++k) {
    const double t = time_to_disturb_hrs(0.05 * k, p);
    mono = mono && t < prev;
    prev = t;
  }
  report(6, ok && mono, detail + (mono ? "strictly decreasing on 0.05..1.0 V"
                                       : "NOT monotone"));
}

// ---- 7 ----
EnduranceMap g_map;

void endurance_asymmetry() {
  const auto& c = config();
  auto cfg = c;
  if (g_r_segment > 0.0) cfg.r_segment = g_r_segment;
  cfg.nodes.clear();
  cfg.finalize();
  const auto s = compute_endurance_map(cfg, 128, 65, ResistanceState::hrs,
                                       cfg.pulse_width, std::nullopt, 1);
  g_map = s.endurance;
  const auto v = s.endurance.cycles.values();
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  const std::size_t n = 128;
  const auto bl = s.endurance.cycles(n - 1, 0), tr = s.endurance.cycles(0, n - 1);
  const auto min_count = std::count(v.begin(), v.end(), *mn);
  const bool ok = bl == *mn && min_count == 1 && tr == *mx;
  report(7, ok,
         fmt("min %llu at bottom-left (unique=%s), max %llu, top-right %llu "
             "(%lld cells share the max)",
             (unsigned long long)*mn, min_count == 1 ? "yes" : "no",
             (unsigned long long)*mx, (unsigned long long)tr,
             (long long)std::count(v.begin(), v.end(), *mx)));
}

// ---- 8 ----
void cost_model() {
  bool ok = true;
  std::string detail;
  for (int nm : {90, 65, 45, 32}) {
    CostModelParams p = config().cost;
    p.feature_size = nm;
    const auto rows = cost_sweep({16, 32, 64, 128, 256}, p);
    for (std::size_t k = 1; k < rows.size(); ++k)
      ok = ok && rows[k].normalized < rows[k - 1].normalized;
    detail += fmt("%dnm 256:%.4f; ", nm, rows.back().normalized);
  }
  CostModelParams unit;
  unit.feature_size = 1.0;
  const double a = cost_per_bit(16, unit).approx;
  report(8, ok && a == 3.6875, detail + fmt("approx(16,F=1)=%.6f", a));
}

// ---- 9 ----
void mapper_optimality() {
  std::mt19937_64 rng(9);
  int small_ok = 0, big_ok = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + t % 2;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(6, n * n);
    EnduranceMap m{SquareMatrix<std::uint64_t>(n, 0), 1e-3};
    for (auto& e : m.cycles.values()) e = rng() % 10000;
    ClusteredWorkload w;
    std::vector<std::uint64_t> spikes;
    for (std::size_t s = 0; s < k; ++s) {
      spikes.push_back(rng() % 50);
      w.synapses.push_back({s, spikes.back(), std::nullopt});
    }
    const auto r = evaluate_lifetime(place_endurance_aware(w, m), w, m);
    const std::vector<std::uint64_t> cyc(m.cycles.values().begin(), m.cycles.values().end());
    if (r.lifetime_images == oracle::best_lifetime(spikes, cyc)) ++small_ok;
  }
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 4 + t % 13;
    const std::size_t k = 1 + rng() % (n * n);
    EnduranceMap m{SquareMatrix<std::uint64_t>(n, 0), 1e-3};
    for (auto& e : m.cycles.values()) e = 100 + rng() % 100000;
    ClusteredWorkload w;
    for (std::size_t s = 0; s < k; ++s) w.synapses.push_back({s, rng() % 200, std::nullopt});
    const auto r = evaluate_lifetime(place_endurance_aware(w, m), w, m);
    if (r.lifetime_images >= r.baseline_lifetime_images) ++big_ok;
  }
  report(9, small_ok == 200 && big_ok == 1000,
         fmt("optimal %d/200 small, dominant %d/1000 large", small_ok, big_ok));
}

// ---- 10 ----
void skew_improvement() {
  if (g_map.cycles.empty()) {
    report(10, false, "no endurance map");
    return;
  }
  const std::size_t n = 128;
  std::vector<double> geo;
  std::string detail;
  for (double s : {1.0, 1.2, 1.5}) {
    double log_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto w = generate_workload(n * n, ZipfSpikes{s, 100}, seed);
      const auto r = evaluate_lifetime(place_endurance_aware(w, g_map), w, g_map);
      log_sum += std::log(r.improvement_vs_baseline);
    }
    geo.push_back(std::exp(log_sum / 50.0));
    detail += fmt("s=%.1f: %.4f; ", s, geo.back());
  }
  const bool ok = geo[1] > 1.0 && geo[0] <= geo[1] && geo[1] <= geo[2];
  report(10, ok, "geometric-mean improvement " + detail);
}

// ---- 11 ----
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[e.path().filename().string()] = s.str();
  }
  return files;
}

void reproducibility() {
  const fs::path root = fs::temp_directory_path() / "xbl_acceptance_repro";
  fs::remove_all(root);
  using Runner = CommandOutput (*)(const ToolConfig&, const RunOptions&);
  const std::vector<std::pair<std::string, Runner>> commands{
      {"current-map", run_current_map},       {"endurance-map", run_endurance_map},
      {"disparity-sweep", run_disparity_sweep}, {"cost-sweep", run_cost_sweep},
      {"optimize", run_optimize},             {"calibrate", run_calibrate}};
  int same = 0;
  std::string differing;
  for (const auto& [name, fn] : commands) {
    RunOptions o;
    o.out_dir = root / name;
    o.config_path = "default";
    o.seed = 17;
    o.size = 64;
    if (name == "disparity-sweep") o.sizes = {16, 32, 64};
    if (name == "optimize") o.generator = "zipf(1.2)";
    fn(config(), o);
    const auto first = snapshot(o.out_dir);
    o.jobs = 2;
    fn(config(), o);
    if (snapshot(o.out_dir) == first) ++same;
    else differing += " " + name;
  }
  fs::remove_all(root);
  report(11, same == int(commands.size()),
         fmt("%d/%zu commands byte-identical on rerun", same, commands.size()) +
             differing);
}

}  // namespace

int main() {
  guard(1, disparity_trend);
  guard(2, spike_voltage);
  guard(3, solver_oracle);
  guard(4, worked_example);
  guard(5, lrs_law);
  guard(6, hrs_integration);
  guard(7, endurance_asymmetry);
  guard(8, cost_model);
  guard(9, mapper_optimality);
  guard(10, skew_improvement);
  guard(11, reproducibility);
  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
