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
 * @file    verify.hpp
 * @brief   Target states, local corrections and state checks.
 *
 * Logical |0> is the first basis label of every two-level kind: atom |L>,
 * field |0>, atom |g>. Graph states, stabilizers and the Pauli corrections
 * below are all written in that identification.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cavnet/errors.hpp"
#include "cavnet/qstate.hpp"

namespace cavnet {

/*******************************************************************************
 *
 * Graph
 *
 ******************************************************************************/

class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  Graph() = default;

  Graph(std::size_t vertices, std::vector<Edge> edges) : vertices_(vertices), edges_(std::move(edges)) {
    if (vertices_ == 0) throw GraphError("graph needs at least one vertex");
    std::set<Edge> seen;
    for (auto& [u, v] : edges_) {
      if (u >= vertices_ || v >= vertices_)
        throw GraphError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") references a missing vertex");
      if (u == v) throw GraphError("self-loop on vertex " + std::to_string(u));
      if (!seen.insert(std::minmax(u, v)).second)
        throw GraphError("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
  }

  static Graph path(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return {n, e};
  }

  /// Vertex 0 is the center.
  static Graph star(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 1; i < n; ++i) e.emplace_back(0, i);
    return {n, e};
  }

  static Graph ring(std::size_t n) {
    if (n < 3) throw GraphError("a ring needs at least three vertices");
    Graph g = path(n);
    g.edges_.emplace_back(n - 1, 0);
    return g;
  }

  std::size_t vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::vector<std::size_t> neighbors(std::size_t v) const {
    std::vector<std::size_t> out;
    for (const auto& [a, b] : edges_) {
      if (a == v) out.push_back(b);
      if (b == v) out.push_back(a);
    }
    return out;
  }

 private:
  std::size_t vertices_ = 0;
  std::vector<Edge> edges_;
};

/*******************************************************************************
 *
 * Registers of stationary qubits
 *
 ******************************************************************************/

/// Atoms a1..an (L/R).
inline Register atom_register(std::size_t n) {
  std::vector<Subsystem> s;
  for (std::size_t i = 1; i <= n; ++i) s.push_back(Subsystem::atom_lr("a" + std::to_string(i)));
  return Register(std::move(s));
}

/// Cavity fields f1..fn (0/1).
inline Register field_register(std::size_t n) {
  std::vector<Subsystem> s;
  for (std::size_t i = 1; i <= n; ++i) s.push_back(Subsystem::field("f" + std::to_string(i)));
  return Register(std::move(s));
}

namespace detail {

inline void require_qubits(const Register& reg) {
  for (const auto& s : reg.subsystems())
    if (s.dim() != 2) throw ShapeError("subsystem '" + s.label() + "' is not a qubit");
}

/// Register for a label family: L/R -> atoms, 0/1 -> fields, g/e -> atom-ge.
inline Register register_for_label(std::size_t n, const std::string& label) {
  if (label == "L" || label == "R") return atom_register(n);
  if (label == "0" || label == "1") return field_register(n);
  if (label == "g" || label == "e") {
    std::vector<Subsystem> s;
    for (std::size_t i = 1; i <= n; ++i) s.push_back(Subsystem::atom_ge("a" + std::to_string(i)));
    return Register(std::move(s));
  }
  throw InvalidLabelError("'" + label + "' is not a two-level basis label");
}

}  // namespace detail

/*******************************************************************************
 *
 * Local corrections
 *
 ******************************************************************************/

inline Matrix pauli_x() {
  Matrix u(2, 2);
  u << 0.0, 1.0,
       1.0, 0.0;
  return u;
}

inline Matrix pauli_z() {
  Matrix u(2, 2);
  u << 1.0, 0.0,
       0.0, -1.0;
  return u;
}

inline Matrix phase_gate(double phi) {
  Matrix u = Matrix::Identity(2, 2);
  u(1, 1) = std::polar(1.0, phi);
  return u;
}

/// One 2x2 unitary per qubit of a register, in register order.
struct LocalCorrection {
  std::vector<Matrix> gates;

  static LocalCorrection identity(std::size_t n) {
    return {std::vector<Matrix>(n, Matrix::Identity(2, 2))};
  }

  bool is_identity(double tol = 1e-12) const {
    return std::all_of(gates.begin(), gates.end(), [&](const Matrix& g) {
      return (g - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= tol;
    });
  }
};

inline PureState apply_correction(const PureState& state, const LocalCorrection& c) {
  detail::require_qubits(state.reg());
  if (c.gates.size() != state.reg().size()) throw ShapeError("correction size does not match register");
  PureState out = state;
  for (std::size_t k = 0; k < c.gates.size(); ++k) {
    if ((c.gates[k] - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0) continue;
    out = apply_unitary(out, {state.reg()[k].label()}, c.gates[k]);
  }
  return out;
}

/*******************************************************************************
 *
 * Targets
 *
 ******************************************************************************/

/// (|z...z> + sign |z'...z'>)/sqrt2 on `reg`, z = zero_label, z' its partner.
inline PureState ghz_target(const Register& reg, int sign, const std::string& zero_label) {
  detail::require_qubits(reg);
  if (reg.size() < 2) throw ParameterError("GHZ target needs n >= 2");
  if (sign != 1 && sign != -1) throw ParameterError("GHZ sign must be +1 or -1");
  std::vector<std::string> a, b;
  for (const auto& s : reg.subsystems()) {
    const std::size_t i = s.basis_index(zero_label);
    a.push_back(s.basis_label(i));
    b.push_back(s.basis_label(1 - i));
  }
  Amplitudes amps = Amplitudes::Zero(static_cast<Eigen::Index>(reg.total_dim()));
  amps(static_cast<Eigen::Index>(reg.index_of(a))) = 1.0 / std::numbers::sqrt2;
  amps(static_cast<Eigen::Index>(reg.index_of(b))) += sign / std::numbers::sqrt2;
  return PureState(reg, std::move(amps));
}

inline PureState ghz_target(std::size_t n, int sign, const std::string& zero_label) {
  if (n < 2) throw ParameterError("GHZ target needs n >= 2");
  return ghz_target(detail::register_for_label(n, zero_label), sign, zero_label);
}

/// Uniform single-excitation state; the excitation is logical |1> (atom R).
inline PureState w_target(const Register& reg) {
  detail::require_qubits(reg);
  const std::size_t n = reg.size();
  if (n < 2) throw ParameterError("W target needs n >= 2");
  Amplitudes amps = Amplitudes::Zero(static_cast<Eigen::Index>(reg.total_dim()));
  for (std::size_t k = 0; k < n; ++k) amps(static_cast<Eigen::Index>(reg.stride(k))) = 1.0 / std::sqrt(double(n));
  return PureState(reg, std::move(amps));
}

inline PureState w_target(std::size_t n) {
  if (n < 2) throw ParameterError("W target needs n >= 2");
  return w_target(atom_register(n));
}

/// prod_{edges} CZ |+>^n on `reg`.
inline PureState graph_target(const Graph& g, const Register& reg) {
  detail::require_qubits(reg);
  if (reg.size() != g.vertices()) throw ShapeError("graph and register sizes differ");
  const std::size_t dim = reg.total_dim();
  Amplitudes amps(static_cast<Eigen::Index>(dim));
  const double a = 1.0 / std::sqrt(double(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    int parity = 0;
    for (const auto& [u, v] : g.edges()) parity ^= static_cast<int>(reg.digit(i, u) & reg.digit(i, v));
    amps(static_cast<Eigen::Index>(i)) = parity ? -a : a;
  }
  return PureState(reg, std::move(amps));
}

/// Graph state on cavity fields f1..fn.
inline PureState graph_target(const Graph& g) { return graph_target(g, field_register(g.vertices())); }

/*******************************************************************************
 *
 * Checks
 *
 ******************************************************************************/

/// <K_v> for K_v = X_v prod_{w in N(v)} Z_w, one value per vertex.
inline std::vector<double> stabilizer_expectations(const PureState& state, const Graph& g) {
  const auto& reg = state.reg();
  detail::require_qubits(reg);
  if (reg.size() != g.vertices()) throw ShapeError("state has " + std::to_string(reg.size()) +
                                                   " qubits, graph has " + std::to_string(g.vertices()));
  std::vector<double> out;
  for (std::size_t v = 0; v < g.vertices(); ++v) {
    PureState k = apply_unitary(state, {reg[v].label()}, pauli_x());
    for (const auto w : g.neighbors(v)) k = apply_unitary(k, {reg[w].label()}, pauli_z());
    out.push_back(overlap(state, k).real());
  }
  return out;
}

struct Canonicalized {
  PureState corrected;
  LocalCorrection correction;
};

/// Removes the relative phases of a single-excitation state with one
/// diag(1, e^{i phi}) per qubit, leaving every amplitude real and positive.
inline Canonicalized canonicalize_single_excitation(const PureState& state, double tol = 1e-12) {
  const auto& reg = state.reg();
  detail::require_qubits(reg);
  LocalCorrection corr = LocalCorrection::identity(reg.size());
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const Complex a = state.amplitude(i);
    if (std::abs(a) <= tol) continue;
    std::size_t excited = 0, which = 0;
    for (std::size_t k = 0; k < reg.size(); ++k)
      if (reg.digit(i, k) == 1) ++excited, which = k;
    if (excited != 1)
      throw NotSingleExcitationError("basis state " + reg.basis_string(i) + " is not single-excitation");
    corr.gates[which] = phase_gate(-std::arg(a));
  }
  return {apply_correction(state, corr), std::move(corr)};
}

/// |<target|state>|^2. With ignore_global_phase = false the overlap must also
/// be real and positive: the result is max(0, Re<target|state>)^2.
inline double fidelity(const PureState& state, const PureState& target, bool ignore_global_phase = true) {
  const Complex o = overlap(target, state);
  if (ignore_global_phase) return std::norm(o);
  const double re = std::max(0.0, o.real());
  return re * re;
}

/// Debug fallback: best per-qubit {I, X, Z, XZ} correction by exhaustive
/// search (4^n candidates).
inline std::pair<LocalCorrection, double> search_pauli_correction(const PureState& state,
                                                                  const PureState& target) {
  const auto& reg = state.reg();
  detail::require_qubits(reg);
  const std::size_t n = reg.size();
  if (n > 10) throw ParameterError("exhaustive Pauli search limited to 10 qubits");
  const std::vector<Matrix> paulis{Matrix::Identity(2, 2), pauli_x(), pauli_z(), pauli_x() * pauli_z()};
  LocalCorrection best;
  double best_f = -1.0;
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) total *= 4;
  for (std::size_t code = 0; code < total; ++code) {
    LocalCorrection c;
    for (std::size_t k = 0, r = code; k < n; ++k, r /= 4) c.gates.push_back(paulis[r % 4]);
    const double f = fidelity(apply_correction(state, c), target);
    if (f > best_f + 1e-12) best_f = f, best = std::move(c);
  }
  return {best, best_f};
}

}  // namespace cavnet
