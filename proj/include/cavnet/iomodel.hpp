// Copyright 2026 The cavnet Authors.
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

/**
 * @file    iomodel.hpp
 * @brief   Single-photon scattering off a Lambda atom in a one-sided cavity.
 *
 * A left-circular photon pulse f_in(t) drives the cavity. With c_L, c_R the
 * one-photon cavity amplitudes (atom in L, R) and c_e the excited-atom
 * amplitude, the amplitudes obey
 *
 *   dc_L/dt = -kappa/2 c_L - g_L c_e - sqrt(kappa) f_in(t)
 *   dc_R/dt = -kappa/2 c_R - g_R c_e
 *   dc_e/dt =  g_L c_L + g_R c_R
 *
 * and the fiber output is f_L,out = f_in + sqrt(kappa) c_L,
 * f_R,out = sqrt(kappa) c_R. The flip probability is the integrated power in
 * the right-circular output. Times are in units of 1/kappa when kappa = 1.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cavnet/errors.hpp"

namespace cavnet {

struct PulseParams {
  double g_L = 1.0;
  double g_R = 1.0;
  double kappa = 1.0;
  double tau = 10.0;

  void validate() const {
    if (!(kappa > 0.0)) throw ParameterError("kappa must be positive");
    if (!(tau > 0.0)) throw ParameterError("tau must be positive");
    if (!(g_L >= 0.0) || !(g_R >= 0.0)) throw ParameterError("couplings must be non-negative");
  }
};

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  double step = 0.0;
};

struct PulseResult {
  std::vector<double> time_grid;
  std::vector<std::complex<double>> c_L, c_R, c_e;
  std::vector<std::complex<double>> f_L_out, f_R_out;
  double P_flip = 0.0;
  double P_noflip = 0.0;
};

struct AdiabaticCoefficients {
  double r_LL = 0.0;  ///< f_L,out / f_in
  double t_LR = 0.0;  ///< f_R,out / f_in
};

/// Steady-state (adiabatic) output amplitudes for a left-circular input.
inline AdiabaticCoefficients adiabatic_output_coefficients(const PulseParams& p) {
  const double s = p.g_L * p.g_L + p.g_R * p.g_R;
  if (s == 0.0)
    throw DegenerateCouplingError(
        "g_L = g_R = 0: the cavity is empty, use empty_cavity_phase instead");
  return {1.0 - 2.0 * p.g_R * p.g_R / s, 2.0 * p.g_L * p.g_R / s};
}

/// Reflection amplitude of a resonant cavity whose atom does not couple to
/// the incoming polarization: steady state c = -2 f_in / sqrt(kappa), hence
/// f_out = -f_in independently of kappa.
inline double empty_cavity_phase(double kappa) {
  if (!(kappa > 0.0)) throw ParameterError("kappa must be positive");
  const double c_over_f = -2.0 / std::sqrt(kappa);
  return 1.0 + std::sqrt(kappa) * c_over_f;
}

/// Unit-norm Gaussian input, sqrt(1/(tau sqrt(pi))) exp(-t^2 / (2 tau^2)).
inline double gaussian_input(double t, double tau) {
  return std::sqrt(1.0 / (tau * std::sqrt(std::numbers::pi))) * std::exp(-t * t / (2.0 * tau * tau));
}

/// Slowest nonzero decay rate of the undriven amplitude equations. Sets the
/// ring-down tail of the default time window.
inline double slowest_decay_rate(const PulseParams& p) {
  Eigen::Matrix3d a;
  a << -p.kappa / 2, 0.0, -p.g_L,
       0.0, -p.kappa / 2, -p.g_R,
       p.g_L, p.g_R, 0.0;
  const Eigen::Vector3cd ev = a.eigenvalues();
  double rate = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double r = -ev(i).real();
    // A zero-rate mode is the bare excited state when both couplings vanish;
    // it is never populated.
    if (r > 1e-9 * p.kappa) rate = std::min(rate, r);
  }
  return rate;
}

/// Window [-6 tau, 6 tau + tail] with tail = max(10/kappa, 12/slowest rate),
/// leaving < 1e-9 of the population in the cavity, and step
/// min(tau, 1/kappa)/100.
inline TimeGrid default_grid(const PulseParams& p) {
  p.validate();
  const double tail = std::max(10.0 / p.kappa, 12.0 / slowest_decay_rate(p));
  return {-6.0 * p.tau, 6.0 * p.tau + tail, std::min(p.tau, 1.0 / p.kappa) / 100.0};
}

/// RK4 integration of the amplitude equations driven by an arbitrary real
/// input waveform `f_in(t)`. The grid step is shrunk, if needed, so that the
/// window is an integer number of steps.
template <typename Drive>
PulseResult integrate_driven(const PulseParams& p, const TimeGrid& grid, Drive&& f_in) {
  p.validate();
  if (!(grid.step > 0.0) || !(grid.t_end > grid.t_start))
    throw ParameterError("time grid needs step > 0 and t_end > t_start");
  if (grid.step > std::min(p.tau, 1.0 / p.kappa) / 50.0)
    throw AccuracyContractError("step exceeds min(tau, 1/kappa)/50");

  using C = std::complex<double>;
  const auto n = static_cast<std::size_t>(std::ceil((grid.t_end - grid.t_start) / grid.step));
  const double h = (grid.t_end - grid.t_start) / static_cast<double>(n);
  const double sk = std::sqrt(p.kappa);

  struct Amps {
    C l, r, e;
  };
  auto deriv = [&](double t, const Amps& c) {
    return Amps{-0.5 * p.kappa * c.l - p.g_L * c.e - sk * f_in(t),
                -0.5 * p.kappa * c.r - p.g_R * c.e,
                p.g_L * c.l + p.g_R * c.r};
  };
  auto axpy = [](const Amps& c, double s, const Amps& k) {
    return Amps{c.l + s * k.l, c.r + s * k.r, c.e + s * k.e};
  };

  PulseResult out;
  out.time_grid.reserve(n + 1);
  out.c_L.reserve(n + 1);
  out.c_R.reserve(n + 1);
  out.c_e.reserve(n + 1);
  out.f_L_out.reserve(n + 1);
  out.f_R_out.reserve(n + 1);

  Amps c{0.0, 0.0, 0.0};
  for (std::size_t i = 0;; ++i) {
    const double t = grid.t_start + static_cast<double>(i) * h;
    out.time_grid.push_back(t);
    out.c_L.push_back(c.l);
    out.c_R.push_back(c.r);
    out.c_e.push_back(c.e);
    out.f_L_out.push_back(f_in(t) + sk * c.l);
    out.f_R_out.push_back(sk * c.r);
    if (i == n) break;

    const Amps k1 = deriv(t, c);
    const Amps k2 = deriv(t + h / 2, axpy(c, h / 2, k1));
    const Amps k3 = deriv(t + h / 2, axpy(c, h / 2, k2));
    const Amps k4 = deriv(t + h, axpy(c, h, k3));
    c = Amps{c.l + h / 6 * (k1.l + 2.0 * k2.l + 2.0 * k3.l + k4.l),
             c.r + h / 6 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r),
             c.e + h / 6 * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e)};
    if (!std::isfinite(std::norm(c.l) + std::norm(c.r) + std::norm(c.e)))
      throw NumericalBlowupError("non-finite amplitude at t = " + std::to_string(t));
  }

  // Trapezoidal rule on the uniform grid.
  auto power = [h](const std::vector<C>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]) * ((i == 0 || i + 1 == f.size()) ? 0.5 : 1.0);
    return s * h;
  };
  out.P_flip = power(out.f_R_out);
  out.P_noflip = power(out.f_L_out);
  return out;
}

/// Gaussian-pulse scattering on an explicit grid.
inline PulseResult integrate_pulse(const PulseParams& p, const TimeGrid& grid) {
  if (grid.t_start > -5.0 * p.tau || grid.t_end < 5.0 * p.tau)
    throw AccuracyContractError("time window must cover [-5 tau, 5 tau]");
  return integrate_driven(p, grid, [tau = p.tau](double t) { return gaussian_input(t, tau); });
}

inline PulseResult integrate_pulse(const PulseParams& p) { return integrate_pulse(p, default_grid(p)); }

/*******************************************************************************
 *
 * Sweeps
 *
 ******************************************************************************/

struct SweepRow {
  double g_over_kappa = 0.0;
  double kappa_tau = 0.0;
  double P_flip = 0.0;
};

/// `count` logarithmically spaced points from `lo` to `hi` inclusive.
inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw ParameterError("log_spaced: need 0 < lo <= hi, count > 0");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = lo * std::pow(hi / lo, f);
  }
  out.back() = hi;
  return out;
}

/// Flip probability with g_L = g_R = g on every (g, tau) pair, kappa = 1.
/// Rows come out g-major in input order; points run on `threads` workers
/// (0 = hardware concurrency).
inline std::vector<SweepRow> flip_probability_sweep(std::span<const double> g_over_kappa,
                                                    std::span<const double> kappa_tau,
                                                    unsigned threads = 0) {
  for (double g : g_over_kappa)
    if (!(g > 0.0)) throw ParameterError("g/kappa values must be positive");
  for (double t : kappa_tau)
    if (!(t > 0.0)) throw ParameterError("kappa*tau values must be positive");

  std::vector<SweepRow> rows;
  for (double g : g_over_kappa)
    for (double t : kappa_tau) rows.push_back({g, t, 0.0});

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(rows.size(), 1)));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t i = next++; i < rows.size(); i = next++) {
        const PulseParams p{rows[i].g_over_kappa, rows[i].g_over_kappa, 1.0, rows[i].kappa_tau};
        rows[i].P_flip = integrate_pulse(p).P_flip;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

/// CSV with header `g_over_kappa,kappa_tau,P_flip`, LF line endings and
/// 17 significant digits.
inline void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "g_over_kappa,kappa_tau,P_flip\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.g_over_kappa, r.kappa_tau, r.P_flip);
    os << buf;
  }
}

inline std::vector<SweepRow> read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "g_over_kappa,kappa_tau,P_flip")
    throw ParameterError("sweep CSV: missing header");
  std::vector<SweepRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    SweepRow r;
    char c1 = 0, c2 = 0;
    std::istringstream ls(line);
    if (!(ls >> r.g_over_kappa >> c1 >> r.kappa_tau >> c2 >> r.P_flip) || c1 != ',' || c2 != ',')
      throw ParameterError("sweep CSV: malformed row '" + line + "'");
    rows.push_back(r);
  }
  return rows;
}

}  // namespace cavnet
