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

#include "xbarlife/endurance.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "xbarlife/error.hpp"

namespace xbarlife {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

// Valid for any real gap; stage values of a large trial step may overshoot
// below zero before the step is rejected or bisected.
double rate_unchecked(double gap, double voltage, const TechnologyParams& p) {
  const double kt = p.thermal_energy();
  const double ratio = gap / p.g0;
  const double gamma = p.gamma0 - p.beta * ratio * ratio * ratio;
  return -p.v0 * std::exp(-p.e_a / kt) *
         std::sinh(gamma * p.a0 / p.oxide_thickness * p.q_charge * voltage /
                   kt);
}

struct Step {
  double y5;
  double err;
};

// One Dormand-Prince 5(4) step of the autonomous scalar ODE.
Step dopri_step(double y, double h, double voltage, const TechnologyParams& p) {
  const auto f = [&](double g) { return rate_unchecked(g, voltage, p); };
  const double k1 = f(y);
  const double k2 = f(y + h * (1.0 / 5.0) * k1);
  const double k3 = f(y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
  const double k4 =
      f(y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
  const double k5 =
      f(y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                 64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
  const double k6 =
      f(y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                 46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                 5103.0 / 18656.0 * k5));
  const double y5 = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                             125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 +
                             11.0 / 84.0 * k6);
  const double k7 = f(y5);
  const double y4 =
      y + h * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 +
               393.0 / 640.0 * k4 - 92097.0 / 339200.0 * k5 +
               187.0 / 2100.0 * k6 + 1.0 / 40.0 * k7);
  return {y5, std::fabs(y5 - y4)};
}

constexpr double kStepTolerance = 1e-6;
constexpr std::size_t kMaxSteps = 10'000'000;

}  // namespace

void TechnologyParams::validate() const {
  const auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("technology parameter ") + what);
  };
  need(positive_finite(v0), "v0 must be > 0");
  need(positive_finite(e_a), "e_a must be > 0");
  need(positive_finite(temperature), "temperature must be > 0");
  need(positive_finite(k_boltzmann), "k_boltzmann must be > 0");
  need(positive_finite(a0), "a0 must be > 0");
  need(positive_finite(oxide_thickness), "oxide_thickness must be > 0");
  need(positive_finite(q_charge), "q_charge must be > 0");
  need(positive_finite(gamma0), "gamma0 must be > 0");
  need(std::isfinite(beta) && beta >= 0.0, "beta must be >= 0");
  need(positive_finite(g0), "g0 must be > 0");
  need(positive_finite(g_min) && g_min < g0, "g_min must lie in (0, g0)");
  need(positive_finite(feature_size), "feature_size must be > 0");
  need(horizon > 0.0, "horizon must be > 0");
}

double field_enhancement(double gap, const TechnologyParams& p) {
  const double ratio = gap / p.g0;
  return p.gamma0 - p.beta * ratio * ratio * ratio;
}

double gap_rate(double gap, double voltage, const TechnologyParams& p) {
  if (!(gap > 0.0) || !std::isfinite(gap))
    throw DomainError("filament gap must be > 0 m, got " + std::to_string(gap));
  if (!std::isfinite(voltage))
    throw DomainError("stress voltage must be finite");
  return rate_unchecked(gap, voltage, p);
}

HrsIntegration integrate_hrs(double voltage, const TechnologyParams& p,
                             double dt_max) {
  if (!std::isfinite(voltage) || voltage < 0.0)
    throw DomainError("HRS stress voltage must be >= 0 V, got " +
                      std::to_string(voltage));
  if (!(dt_max > 0.0)) throw DomainError("dt_max must be > 0 s");

  HrsIntegration out;
  if (voltage == 0.0) return out;

  double t = 0.0;
  double g = p.g0;
  const double r0 = std::fabs(rate_unchecked(g, voltage, p));
  if (!(r0 > 0.0)) return out;
  double h = std::min(dt_max, 1e-3 * (p.g0 - p.g_min) / r0);

  while (out.steps < kMaxSteps) {
    if (t >= p.horizon) return out;
    h = std::min({h, dt_max, p.horizon - t});
    const Step s = dopri_step(g, h, voltage, p);
    const double scale = std::max(std::fabs(g), p.g_min);
    const double ratio = s.err / (kStepTolerance * scale);
    if (ratio > 1.0 || !std::isfinite(s.y5)) {
      ++out.rejected;
      h *= std::isfinite(ratio) ? std::max(0.2, 0.9 * std::pow(ratio, -0.2))
                                : 0.2;
      continue;
    }
    ++out.steps;
    if (s.y5 <= p.g_min) {
      double lo = 0.0, hi = h;
      for (int it = 0; it < 200 && hi - lo > 1e-9 * (t + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dopri_step(g, mid, voltage, p).y5 <= p.g_min)
          hi = mid;
        else
          lo = mid;
      }
      out.time = t + hi;
      return out;
    }
    t += h;
    g = s.y5;
    const double grow =
        ratio > 0.0 ? std::min(5.0, 0.9 * std::pow(ratio, -0.2)) : 5.0;
    h *= grow;
  }
  throw SolverError("HRS integration exceeded step budget", 0.0);
}

double time_to_disturb_hrs(double voltage, const TechnologyParams& p,
                           double dt_max) {
  return integrate_hrs(voltage, p, dt_max).time;
}

double time_to_disturb_lrs(double voltage) {
  if (!std::isfinite(voltage) || voltage < 0.0)
    throw DomainError("LRS stress voltage must be >= 0 V, got " +
                      std::to_string(voltage));
  return std::pow(10.0, -14.7 * voltage + 6.7);
}

double time_to_disturb(ResistanceState state, double voltage,
                       const TechnologyParams& p) {
  return is_lrs(state) ? time_to_disturb_lrs(voltage)
                       : time_to_disturb_hrs(voltage, p);
}

std::uint64_t endurance_cycles(double t_disturb, double pulse_width) {
  if (!positive_finite(pulse_width))
    throw DomainError("pulse width must be > 0 s");
  if (std::isnan(t_disturb) || t_disturb < 0.0)
    throw DomainError("time to disturb must be >= 0 s");
  if (std::isinf(t_disturb)) return kUnlimited;
  double q = t_disturb / pulse_width;
  // Ratios such as 1.0 / 1e-3 land a few ulps off the integer.
  const double nearest = std::round(q);
  if (std::fabs(q - nearest) <= 8.0 * std::numeric_limits<double>::epsilon() *
                                    std::max(1.0, nearest))
    q = nearest;
  q = std::floor(q);
  if (q >= 1.8e19) return kUnlimited - 1;
  return static_cast<std::uint64_t>(q);
}

std::uint64_t inference_lifetime(std::uint64_t endurance,
                                 std::uint64_t spikes_per_image) {
  if (spikes_per_image == 0 || endurance == kUnlimited) return kUnlimited;
  return endurance / spikes_per_image;
}

EnduranceMap endurance_map(const SolveResult& solve,
                           const CellStateMatrix& cells,
                           const TechnologyParams& p, double pulse_width,
                           unsigned jobs) {
  const std::size_t n = cells.size();
  if (solve.cell_voltage.size() != n)
    throw ConfigError("solve result is " +
                      std::to_string(solve.cell_voltage.size()) +
                      "x but cell matrix is " + std::to_string(n) + "x");
  if (!positive_finite(pulse_width))
    throw DomainError("pulse width must be > 0 s");
  p.validate();

  // Residual-level noise around 0 V is not a reversed cell.
  const double noise = 1e-9 * std::max(1.0, solve.v_spike);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (solve.conducting(i, j) && solve.cell_voltage(i, j) < -noise)
        throw DomainError("negative stress voltage " +
                          std::to_string(solve.cell_voltage(i, j)) +
                          " V at cell (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");

  EnduranceMap map{SquareMatrix<std::uint64_t>(n, 0), pulse_width};
  const auto rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double v = solve.conducting(i, j)
                             ? std::max(0.0, solve.cell_voltage(i, j))
                             : 0.0;
        map.cycles(i, j) = endurance_cycles(
            time_to_disturb(cells.states(i, j), v, p), pulse_width);
      }
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, n);
  if (workers == 1) {
    rows(0, n);
    return map;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk, e = std::min(n, b + chunk);
      if (b < e)
        pool.emplace_back([&, w, b, e] {
          try {
            rows(b, e);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
    }
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  return map;
}

}  // namespace xbarlife
