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

#include "xbarlife/circuit.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "xbarlife/error.hpp"

namespace xbarlife {

namespace {

constexpr std::ptrdiff_t kGround = -1;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

std::string fmt_double(double x) { return std::to_string(x); }

// Physical nodes map onto solver unknowns. A zero-ohm wordline collapses the
// whole row onto one unknown; a zero-ohm bitline ties every bitline node to
// the virtual ground.
struct NodeMap {
  std::vector<std::ptrdiff_t> index;  // physical node -> unknown or kGround
  std::size_t unknowns = 0;
};

NodeMap map_nodes(const CrossbarNetwork& net) {
  const std::size_t n = net.n();
  const auto& g = net.geometry();
  NodeMap m;
  m.index.assign(net.unknowns(), kGround);
  for (std::size_t i = 0; i < n; ++i) {
    if (g.r_wordline_segment == 0.0) {
      const auto u = static_cast<std::ptrdiff_t>(m.unknowns++);
      for (std::size_t j = 0; j < n; ++j) m.index[net.wordline_node(i, j)] = u;
    } else {
      for (std::size_t j = 0; j < n; ++j)
        m.index[net.wordline_node(i, j)] =
            static_cast<std::ptrdiff_t>(m.unknowns++);
    }
  }
  if (g.r_bitline_segment > 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m.index[net.bitline_node(i, j)] =
            static_cast<std::ptrdiff_t>(m.unknowns++);
  }
  return m;
}

class Stamper {
 public:
  explicit Stamper(std::size_t unknowns) : rhs_(Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(unknowns))) {}

  void conductance(std::ptrdiff_t a, std::ptrdiff_t b, double g) {
    if (a == b) return;
    if (a != kGround) add(a, a, g);
    if (b != kGround) add(b, b, g);
    if (a != kGround && b != kGround) {
      add(a, b, -g);
      add(b, a, -g);
    }
  }

  // Norton source: conductance g to a node held at `volts`.
  void source(std::ptrdiff_t a, double g, double volts) {
    if (a == kGround) return;
    add(a, a, g);
    rhs_[a] += g * volts;
  }

  std::vector<Eigen::Triplet<double>>& triplets() { return triplets_; }
  Eigen::VectorXd& rhs() { return rhs_; }

 private:
  void add(std::ptrdiff_t r, std::ptrdiff_t c, double v) {
    triplets_.emplace_back(static_cast<Eigen::Index>(r),
                           static_cast<Eigen::Index>(c), v);
  }

  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::VectorXd rhs_;
};

double relative_residual(const Eigen::SparseMatrix<double>& a,
                         const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double bn = b.norm();
  const double rn = (a * x - b).norm();
  return bn > 0.0 ? rn / bn : rn;
}

}  // namespace

void CrossbarGeometry::validate() const {
  if (n < 2) throw ConfigError("crossbar dimension n must be >= 2, got " +
                               std::to_string(n));
  if (!std::isfinite(r_wordline_segment) || r_wordline_segment < 0.0)
    throw ConfigError("r_wordline_segment must be >= 0 ohm, got " +
                      fmt_double(r_wordline_segment));
  if (!std::isfinite(r_bitline_segment) || r_bitline_segment < 0.0)
    throw ConfigError("r_bitline_segment must be >= 0 ohm, got " +
                      fmt_double(r_bitline_segment));
  if (!positive_finite(r_driver))
    throw ConfigError("r_driver must be > 0 ohm, got " + fmt_double(r_driver));
  if (c_wordline_segment < 0.0 || c_bitline_segment < 0.0)
    throw ConfigError("segment capacitances must be >= 0");
}

std::string_view to_string(ResistanceState s) {
  switch (s) {
    case ResistanceState::hrs: return "hrs";
    case ResistanceState::lrs1: return "lrs1";
    case ResistanceState::lrs2: return "lrs2";
    case ResistanceState::lrs3: return "lrs3";
  }
  return "?";
}

ResistanceState parse_resistance_state(std::string_view text) {
  if (text == "hrs" || text == "HRS") return ResistanceState::hrs;
  if (text == "lrs1" || text == "LRS1") return ResistanceState::lrs1;
  if (text == "lrs2" || text == "LRS2") return ResistanceState::lrs2;
  if (text == "lrs3" || text == "LRS3") return ResistanceState::lrs3;
  throw ConfigError("unknown resistance state '" + std::string(text) +
                    "' (expected hrs, lrs1, lrs2 or lrs3)");
}

double StateResistances::of(ResistanceState s) const {
  switch (s) {
    case ResistanceState::hrs: return hrs;
    case ResistanceState::lrs1: return lrs1;
    case ResistanceState::lrs2: return lrs2;
    case ResistanceState::lrs3: return lrs3;
  }
  return hrs;
}

void StateResistances::validate() const {
  if (!(positive_finite(lrs3) && lrs2 > lrs3 && lrs1 > lrs2 && hrs > lrs1 &&
        std::isfinite(hrs)))
    throw ConfigError("state resistances must satisfy hrs > lrs1 > lrs2 > "
                      "lrs3 > 0");
}

StateResistances StateResistances::log_spaced(double hrs, double lrs3) {
  const double ratio = std::cbrt(lrs3 / hrs);
  return {hrs, hrs * ratio, hrs * ratio * ratio, lrs3};
}

void CellStateMatrix::validate() const {
  levels.validate();
  if (!std::isfinite(r_access) || r_access < 0.0)
    throw ConfigError("r_access must be >= 0 ohm");
}

CellStateMatrix CellStateMatrix::uniform(std::size_t n, ResistanceState state,
                                         const StateResistances& levels,
                                         double r_access) {
  return {SquareMatrix<ResistanceState>(n, state), levels, r_access};
}

void ActivationPattern::validate(std::size_t n) const {
  if (driven.size() != n)
    throw ConfigError("activation has " + std::to_string(driven.size()) +
                      " wordline flags for a " + std::to_string(n) +
                      "-row crossbar");
  bool any = false;
  for (bool d : driven) any = any || d;
  if (!any) throw ConfigError("activation must drive at least one wordline");
  if (!positive_finite(v_spike))
    throw ConfigError("v_spike must be > 0 V, got " + fmt_double(v_spike));
  if (access && access->size() != n)
    throw ConfigError("access mask dimension does not match crossbar");
}

ActivationPattern ActivationPattern::all_rows(std::size_t n, double v_spike) {
  return {std::vector<bool>(n, true), v_spike, std::nullopt};
}

ActivationPattern ActivationPattern::single_cell(std::size_t n,
                                                 double v_spike,
                                                 CellIndex cell) {
  SquareMatrix<std::uint8_t> mask(n, 0);
  mask[cell] = 1;
  return {std::vector<bool>(n, true), v_spike, std::move(mask)};
}

CrossbarNetwork::CrossbarNetwork(CrossbarGeometry geometry,
                                 CellStateMatrix cells)
    : geometry_(geometry), cells_(std::move(cells)) {
  geometry_.validate();
  cells_.validate();
  if (cells_.size() != geometry_.n)
    throw ConfigError("geometry is " + std::to_string(geometry_.n) + "x" +
                      std::to_string(geometry_.n) + " but cell matrix is " +
                      std::to_string(cells_.size()) + "x" +
                      std::to_string(cells_.size()));
}

CrossbarNetwork build_network(const CrossbarGeometry& geometry,
                              const CellStateMatrix& cells) {
  return CrossbarNetwork(geometry, cells);
}

double SolveResult::total_driver_current() const {
  double s = 0.0;
  for (double i : driver_current) s += i;
  return s;
}

double SolveResult::total_sense_current() const {
  double s = 0.0;
  for (double i : bitline_current) s += i;
  return s;
}

SolveResult solve_dc(const CrossbarNetwork& network,
                     const ActivationPattern& activation,
                     const SolveOptions& options) {
  const std::size_t n = network.n();
  activation.validate(n);
  if (!positive_finite(options.tolerance))
    throw ConfigError("solver tolerance must be > 0");

  const auto& geom = network.geometry();
  const auto& cells = network.cells();
  const NodeMap map = map_nodes(network);
  const auto idx = [&](std::size_t node) { return map.index[node]; };

  Stamper st(map.unknowns);
  const double g_driver = 1.0 / geom.r_driver;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = activation.driven[i] ? activation.v_spike : 0.0;
    st.source(idx(network.wordline_node(i, 0)), g_driver, v);
  }
  if (geom.r_wordline_segment > 0.0) {
    const double g = 1.0 / geom.r_wordline_segment;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j + 1 < n; ++j)
        st.conductance(idx(network.wordline_node(i, j)),
                       idx(network.wordline_node(i, j + 1)), g);
  }
  if (geom.r_bitline_segment > 0.0) {
    const double g = 1.0 / geom.r_bitline_segment;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i + 1 < n; ++i)
        st.conductance(idx(network.bitline_node(i, j)),
                       idx(network.bitline_node(i + 1, j)), g);
      st.conductance(idx(network.bitline_node(n - 1, j)), kGround, g);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (activation.conducts(i, j))
        st.conductance(idx(network.wordline_node(i, j)),
                       idx(network.bitline_node(i, j)),
                       1.0 / cells.branch_resistance(i, j));

  const auto dim = static_cast<Eigen::Index>(map.unknowns);
  Eigen::SparseMatrix<double> g_matrix(dim, dim);
  g_matrix.setFromTriplets(st.triplets().begin(), st.triplets().end());
  g_matrix.makeCompressed();
  const Eigen::VectorXd& b = st.rhs();

  SolveResult out;
  SolverKind kind = options.method;
  if (kind == SolverKind::automatic)
    kind = n <= options.direct_max_n ? SolverKind::direct
                                     : SolverKind::iterative;
  out.method = kind;

  Eigen::VectorXd x;
  if (kind == SolverKind::direct) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(g_matrix);
    // Positive resistances plus a driver on every row and a ground on every
    // bitline make G symmetric positive definite.
    assert(ldlt.info() == Eigen::Success);
    if (ldlt.info() != Eigen::Success)
      throw SolverError("conductance matrix factorization failed",
                        std::numeric_limits<double>::infinity());
    x = ldlt.solve(b);
    out.iterations = 1;
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(0.5 * options.tolerance);
    const std::size_t budget = options.max_iterations > 0
                                   ? options.max_iterations
                                   : 20 * map.unknowns;
    cg.setMaxIterations(static_cast<Eigen::Index>(budget));
    cg.compute(g_matrix);
    x = cg.solve(b);
    out.iterations = static_cast<std::size_t>(cg.iterations());
  }
  out.residual = relative_residual(g_matrix, x, b);
  if (!(out.residual <= options.tolerance))
    throw SolverError("DC solve did not converge: relative residual " +
                          std::to_string(out.residual) + " > tolerance " +
                          std::to_string(options.tolerance) + " after " +
                          std::to_string(out.iterations) + " iterations",
                      out.residual);

  const auto node_v = [&](std::size_t node) {
    const auto u = idx(node);
    return u == kGround ? 0.0 : x[u];
  };
  out.v_spike = activation.v_spike;
  out.node_voltage.resize(network.unknowns());
  for (std::size_t k = 0; k < network.unknowns(); ++k)
    out.node_voltage[k] = node_v(k);

  out.cell_voltage = SquareMatrix<double>(n, 0.0);
  out.cell_current = SquareMatrix<double>(n, 0.0);
  out.conducting = SquareMatrix<std::uint8_t>(n, 0);
  out.bitline_current.assign(n, 0.0);
  out.driver_current.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = node_v(network.wordline_node(i, j)) -
                       node_v(network.bitline_node(i, j));
      out.cell_voltage(i, j) = v;
      if (activation.conducts(i, j)) {
        out.conducting(i, j) = 1;
        out.cell_current(i, j) = v / cells.branch_resistance(i, j);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double v = activation.driven[i] ? activation.v_spike : 0.0;
    out.driver_current[i] = (v - node_v(network.wordline_node(i, 0))) * g_driver;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (geom.r_bitline_segment > 0.0) {
      out.bitline_current[j] =
          node_v(network.bitline_node(n - 1, j)) / geom.r_bitline_segment;
    } else {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += out.cell_current(i, j);
      out.bitline_current[j] = s;
    }
  }
  return out;
}

std::string_view to_string(ReadMode m) {
  return m == ReadMode::isolated_path ? "isolated" : "full";
}

ReadMode parse_read_mode(std::string_view text) {
  if (text == "isolated" || text == "isolated_path")
    return ReadMode::isolated_path;
  if (text == "full" || text == "full_array") return ReadMode::full_array;
  throw ConfigError("unknown read mode '" + std::string(text) +
                    "' (expected isolated or full)");
}

namespace {

ActivationPattern read_activation(std::size_t n, ReadMode mode, CellIndex cell,
                                  double v) {
  return mode == ReadMode::isolated_path
             ? ActivationPattern::single_cell(n, v, cell)
             : ActivationPattern::all_rows(n, v);
}

double read_current(const CrossbarNetwork& net, CellIndex cell, ReadMode mode,
                    const SolveOptions& options) {
  return solve_dc(net, read_activation(net.n(), mode, cell, 1.0), options)
      .cell_current[cell];
}

}  // namespace

double calibrate_spike_voltage(const CrossbarNetwork& network,
                               double target_current, CellIndex cell,
                               ReadMode mode, const SolveOptions& options) {
  if (!positive_finite(target_current))
    throw ConfigError("target current must be > 0 A");
  if (cell.row >= network.n() || cell.col >= network.n())
    throw ConfigError("calibration cell outside the crossbar");
  const double i_unit = read_current(network, cell, mode, options);
  if (!(i_unit > 0.0))
    throw SolverError("calibration cell carries no current at 1 V", 0.0);
  return target_current / i_unit;
}

Disparity current_disparity(const CrossbarNetwork& network, ReadMode mode,
                            const SolveOptions& options) {
  const std::size_t n = network.n();
  Disparity d;
  if (mode == ReadMode::isolated_path) {
    d.i_shortest = read_current(network, shortest_path_cell(n), mode, options);
    d.i_longest = read_current(network, longest_path_cell(n), mode, options);
  } else {
    const auto r = solve_dc(network, ActivationPattern::all_rows(n, 1.0),
                            options);
    d.i_shortest = r.cell_current[shortest_path_cell(n)];
    d.i_longest = r.cell_current[longest_path_cell(n)];
  }
  d.percent = 100.0 * (d.i_shortest - d.i_longest) / d.i_shortest;
  return d;
}

SegmentCalibration calibrate_segment_resistance(
    const CrossbarGeometry& geometry_template, const CellStateMatrix& cells,
    double target_percent, ReadMode mode, const SolveOptions& options,
    double percent_tolerance) {
  if (!(target_percent > 0.0 && target_percent < 100.0))
    throw ConfigError("target disparity must lie in (0, 100) percent");

  SegmentCalibration cal;
  const auto eval = [&](double log_r) {
    CrossbarGeometry g = geometry_template;
    g.r_wordline_segment = g.r_bitline_segment = std::exp(log_r);
    ++cal.evaluations;
    return current_disparity(build_network(g, cells), mode, options).percent -
           target_percent;
  };

  // Bracket by decades outward from 1..10 ohm (extreme ratios make the
  // system needlessly stiff), then Illinois false position on log(r).
  const double log_min = std::log(1e-6), log_max = std::log(1e6);
  const double decade = std::log(10.0);
  double lo = 0.0, hi = decade;
  double f_lo = eval(lo), f_hi = eval(hi);
  while (f_lo > 0.0 && lo > log_min + 1e-9) {
    hi = lo;
    f_hi = f_lo;
    lo -= decade;
    f_lo = eval(lo);
  }
  while (f_hi < 0.0 && hi < log_max - 1e-9) {
    lo = hi;
    f_lo = f_hi;
    hi += decade;
    f_hi = eval(hi);
  }
  if (f_lo > 0.0 || f_hi < 0.0)
    throw SolverError("target disparity not reachable within 1e-6..1e6 ohm",
                      0.0);
  double x = lo, fx = f_lo;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    fx = eval(x);
    if (std::fabs(fx) <= percent_tolerance) break;
    if (fx < 0.0) {
      lo = x;
      f_lo = fx;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = x;
      f_hi = fx;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
  }
  cal.r_segment = std::exp(x);
  cal.disparity_percent = fx + target_percent;
  return cal;
}

}  // namespace xbarlife
