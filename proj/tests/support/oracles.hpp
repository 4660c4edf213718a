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

// Reference implementations used only by tests. None of them call into the
// library's numerics.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

// ---- dense nodal analysis ----

struct Resistor {
  long a;  // -1 is ground
  long b;
  double ohms;
};

struct Source {  // ideal voltage source behind a series resistor
  long node;
  double volts;
  double ohms;
};

// Gaussian elimination with partial pivoting in long double.
inline std::vector<long double> gauss_solve(std::vector<long double> a,
                                            std::vector<long double> b,
                                            std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::fabs(a[r * n + k]) > std::fabs(a[p * n + k])) p = r;
    if (a[p * n + k] == 0.0L) throw std::runtime_error("singular");
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[p * n + c]);
      std::swap(b[k], b[p]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const long double f = a[r * n + k] / a[k * n + k];
      for (std::size_t c = k; c < n; ++c) a[r * n + c] -= f * a[k * n + c];
      b[r] -= f * b[k];
    }
  }
  std::vector<long double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    long double s = b[k];
    for (std::size_t c = k + 1; c < n; ++c) s -= a[k * n + c] * x[c];
    x[k] = s / a[k * n + k];
  }
  return x;
}

inline std::vector<long double> nodal_solve(std::size_t nodes,
                                            const std::vector<Resistor>& rs,
                                            const std::vector<Source>& ss) {
  std::vector<long double> g(nodes * nodes, 0.0L), rhs(nodes, 0.0L);
  for (const auto& r : rs) {
    const long double c = 1.0L / r.ohms;
    if (r.a >= 0) g[r.a * nodes + r.a] += c;
    if (r.b >= 0) g[r.b * nodes + r.b] += c;
    if (r.a >= 0 && r.b >= 0) {
      g[r.a * nodes + r.b] -= c;
      g[r.b * nodes + r.a] -= c;
    }
  }
  for (const auto& s : ss) {
    const long double c = 1.0L / s.ohms;
    g[s.node * nodes + s.node] += c;
    rhs[s.node] += c * s.volts;
  }
  return gauss_solve(std::move(g), std::move(rhs), nodes);
}

struct CrossbarSpec {
  std::size_t n = 2;
  double r_wl = 1.0;
  double r_bl = 1.0;
  double r_driver = 1.0;
  std::vector<double> branch;  // n*n, ohms; infinity = open
  std::vector<bool> driven;    // n
  double v = 1.0;
};

struct CrossbarSolution {
  std::vector<long double> node;  // wordline block then bitline block
  std::vector<long double> cell_current;
  long double driver_total = 0.0L;
  long double sense_total = 0.0L;
};

// Wordline node (i,j) = i*n+j, bitline node = n*n + i*n+j. Each row is fed at
// column 0 through r_driver; each column drains from row n-1 through one
// bitline segment into ground.
inline CrossbarSolution crossbar(const CrossbarSpec& s) {
  const std::size_t n = s.n;
  const auto w = [&](std::size_t i, std::size_t j) { return long(i * n + j); };
  const auto bl = [&](std::size_t i, std::size_t j) {
    return long(n * n + i * n + j);
  };
  std::vector<Resistor> rs;
  std::vector<Source> ss;
  for (std::size_t i = 0; i < n; ++i) {
    ss.push_back({w(i, 0), s.driven[i] ? s.v : 0.0, s.r_driver});
    for (std::size_t j = 0; j + 1 < n; ++j)
      rs.push_back({w(i, j), w(i, j + 1), s.r_wl});
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i + 1 < n; ++i)
      rs.push_back({bl(i, j), bl(i + 1, j), s.r_bl});
    rs.push_back({bl(n - 1, j), -1, s.r_bl});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::isfinite(s.branch[i * n + j]))
        rs.push_back({w(i, j), bl(i, j), s.branch[i * n + j]});

  CrossbarSolution out;
  out.node = nodal_solve(2 * n * n, rs, ss);
  out.cell_current.assign(n * n, 0.0L);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::isfinite(s.branch[i * n + j]))
        out.cell_current[i * n + j] =
            (out.node[w(i, j)] - out.node[bl(i, j)]) / s.branch[i * n + j];
  for (std::size_t i = 0; i < n; ++i)
    out.driver_total +=
        ((s.driven[i] ? s.v : 0.0) - out.node[w(i, 0)]) / s.r_driver;
  for (std::size_t j = 0; j < n; ++j)
    out.sense_total += out.node[bl(n - 1, j)] / s.r_bl;
  return out;
}

// ---- filament gap ODE ----

struct Device {
  double v0 = 10.0, e_a = 0.6, temperature = 300.0, k = 8.617333262e-5;
  double a0 = 0.25e-9, thickness = 5.0e-9, q = 1.0;
  double gamma0 = 16.5, beta = 1.25, g0 = 2.0e-9, g_min = 0.1e-9;
};

inline double rate(double g, double v, const Device& d) {
  const double kt = d.k * d.temperature;
  const double ratio = g / d.g0;
  const double gamma = d.gamma0 - d.beta * ratio * ratio * ratio;
  return -d.v0 * std::exp(-d.e_a / kt) *
         std::sinh(gamma * d.a0 / d.thickness * d.q * v / kt);
}

// The ODE is autonomous, so t = integral from g_min to g0 of dg / |rate(g)|.
// Composite Simpson on a uniform grid.
inline double crossing_time_quadrature(double v, const Device& d,
                                       std::size_t panels = 200000) {
  const double h = (d.g0 - d.g_min) / double(panels);
  double s = 0.0;
  for (std::size_t k = 0; k <= panels; ++k) {
    const double g = d.g_min + h * double(k);
    const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    s += w / std::fabs(rate(g, v, d));
  }
  return s * h / 3.0;
}

// Forward Euler with fixed dt; the crossing is interpolated inside the last
// step.
inline double crossing_time_euler(double v, const Device& d, double dt) {
  double g = d.g0, t = 0.0;
  for (std::uint64_t step = 0; step < 100000000ULL; ++step) {
    const double dg = rate(g, v, d) * dt;
    if (g + dg <= d.g_min) return t + dt * (g - d.g_min) / (-dg);
    g += dg;
    t += dt;
  }
  return std::numeric_limits<double>::infinity();
}

// ---- assignment brute force ----

// max over injective maps of min floor(endurance/spikes); zero-spike synapses
// never limit. Returns UINT64_MAX when nothing limits.
inline std::uint64_t best_lifetime(const std::vector<std::uint64_t>& spikes,
                                   const std::vector<std::uint64_t>& endurance) {
  const std::size_t k = spikes.size(), m = endurance.size();
  std::uint64_t best = 0;
  bool any = false;
  std::vector<bool> used(m, false);
  std::vector<std::size_t> pick(k);
  const auto value = [&] {
    std::uint64_t life = UINT64_MAX;
    for (std::size_t s = 0; s < k; ++s) {
      if (spikes[s] == 0 || endurance[pick[s]] == UINT64_MAX) continue;
      life = std::min(life, endurance[pick[s]] / spikes[s]);
    }
    return life;
  };
  const auto rec = [&](auto&& self, std::size_t s) -> void {
    if (s == k) {
      const std::uint64_t life = value();
      if (!any || life > best) best = life;
      any = true;
      return;
    }
    for (std::size_t c = 0; c < m; ++c) {
      if (used[c]) continue;
      used[c] = true;
      pick[s] = c;
      self(self, s + 1);
      used[c] = false;
    }
  };
  rec(rec, 0);
  return best;
}

}  // namespace oracle
