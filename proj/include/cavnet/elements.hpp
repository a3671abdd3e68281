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
 * @file    elements.hpp
 * @brief   Network elements: their unitaries and how they act on a register.
 *
 * Conventions (used by every scheme):
 *  - A beam splitter acts on the amplitudes of two path modes (a, b) as
 *    [[sqrt(1-R), sqrt(R)], [sqrt(R), -sqrt(1-R)]]; the pi phase sits on
 *    the b -> b amplitude. Atomic beam splitters use the same matrix, R = 1/2.
 *  - A PBS transmits L (mode index unchanged) and reflects R (a <-> b).
 *    Neither PBS nor mirrors add phases.
 *  - The cavity-atom block is the adiabatic flip |L,L> <-> |R,R> (atom, pol).
 *    A polarization the atom cannot absorb sees an empty resonant cavity and
 *    picks up -1.
 *  - Two-level field blocks use a real Jaynes-Cummings rotation on
 *    {|g,1>, |e,0>}; the |e,1> sector is never entered by any scheme and is
 *    rejected at run time.
 */

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cavnet/errors.hpp"
#include "cavnet/qstate.hpp"

namespace cavnet {

/*******************************************************************************
 *
 * Matrices
 *
 ******************************************************************************/

inline Matrix bs_unitary(double reflectivity) {
  if (!(reflectivity > 0.0 && reflectivity < 1.0))
    throw ParameterError("beam splitter reflectivity must lie in (0, 1)");
  const double t = std::sqrt(1.0 - reflectivity);
  const double r = std::sqrt(reflectivity);
  Matrix u(2, 2);
  u << t, r,
       r, -t;
  return u;
}

/// Momentum-state splitter |p0> -> (|p0> + |p-2>)/sqrt2,
/// |p-2> -> (|p0> - |p-2>)/sqrt2, with p0 on mode a and p-2 on mode b.
inline Matrix atomic_bs_unitary() { return bs_unitary(0.5); }

/// Basis (atom, pol) = (LL, LR, RL, RR).
inline Matrix cavity_atom_block_unitary() {
  Matrix u = Matrix::Zero(4, 4);
  u(3, 0) = 1.0;   // |L,L> -> |R,R>
  u(0, 3) = 1.0;   // |R,R> -> |L,L>
  u(1, 1) = -1.0;  // |L,R> -> -|L,R>
  u(2, 2) = -1.0;  // |R,L> -> -|R,L>
  return u;
}

enum class PbsPort { Transmit, Reflect };

inline PbsPort pbs_route(std::string_view pol) {
  if (pol == "L") return PbsPort::Transmit;
  if (pol == "R") return PbsPort::Reflect;
  throw InvalidLabelError("'" + std::string(pol) + "' is not a polarization label");
}

inline Matrix pr_unitary() {
  Matrix u(2, 2);
  u << 0.0, 1.0,
       1.0, 0.0;
  return u;
}

/// Basis (atom, field) = (g0, g1, e0, e1). The e1 column is the identity;
/// it completes the matrix but is guarded against in apply_element.
inline Matrix field_pi_block_unitary() {
  Matrix u = Matrix::Identity(4, 4);
  u(1, 1) = 0.0;
  u(2, 2) = 0.0;
  u(2, 1) = 1.0;   // |g,1> -> |e,0>
  u(1, 2) = -1.0;  // |e,0> -> -|g,1>
  return u;
}

inline Matrix field_half_pi_block_unitary() {
  const double h = 1.0 / std::numbers::sqrt2;
  Matrix u = Matrix::Identity(4, 4);
  u(1, 1) = h;
  u(2, 1) = h;
  u(1, 2) = -h;
  u(2, 2) = h;
  return u;
}

inline Matrix dispersive_unitary() {
  Matrix u = Matrix::Identity(4, 4);
  u(3, 3) = -1.0;
  return u;
}

inline Matrix ramsey_unitary() {
  const double h = 1.0 / std::numbers::sqrt2;
  Matrix u(2, 2);
  u << h, h,
       h, -h;
  return u;
}

inline Matrix external_pi_unitary() { return pr_unitary(); }

inline Matrix phase_unitary(double phase) {
  Matrix u = Matrix::Identity(2, 2);
  u(1, 1) = std::polar(1.0, phase);
  return u;
}

/// 2x2 `u` on modes (a, b) of an n-mode path, identity on the others.
inline Matrix embed_modes(std::size_t modes, std::size_t a, std::size_t b, const Matrix& u) {
  if (a >= modes || b >= modes || a == b) throw ParameterError("invalid port pair for a mode unitary");
  Matrix m = Matrix::Identity(static_cast<Eigen::Index>(modes), static_cast<Eigen::Index>(modes));
  const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
  m(ia, ia) = u(0, 0);
  m(ia, ib) = u(0, 1);
  m(ib, ia) = u(1, 0);
  m(ib, ib) = u(1, 1);
  return m;
}

/// sum_p |p><p| (x) (p == port ? u : 1) over an n-mode path (path first).
inline Matrix controlled_on_port(std::size_t modes, std::size_t port, const Matrix& u) {
  if (port >= modes) throw ParameterError("port " + std::to_string(port) + " outside the path");
  const Eigen::Index d = u.rows();
  Matrix m = Matrix::Identity(static_cast<Eigen::Index>(modes) * d, static_cast<Eigen::Index>(modes) * d);
  m.block(static_cast<Eigen::Index>(port) * d, static_cast<Eigen::Index>(port) * d, d, d) = u;
  return m;
}

/*******************************************************************************
 *
 * Elements
 *
 ******************************************************************************/

struct BeamSplitter {
  double reflectivity = 0.5;
  std::size_t port_a = 0;
  std::size_t port_b = 1;
  bool atomic = false;
};

struct PolarizingBeamSplitter {
  std::size_t port_a = 0;
  std::size_t port_b = 1;
};

struct PolarizationRotator {
  std::size_t port = 0;
};

/// Fixed phase e^{i phase} on one path mode.
struct PhaseShifter {
  std::size_t port = 0;
  double phase = 0.0;
};

/// Three-level atom in a cavity on path mode `port`, hit by the photon.
struct CavityAtomBlock {
  std::string atom;
  std::size_t port = 0;
};

/// Two-level blocks. `atom` is the two-level atom passing the cavity of
/// `field`; when `port` is set the block sits on that mode of the atom's path.
struct FieldPiBlock {
  std::string field;
  std::string atom;
  std::optional<std::size_t> port;
};

struct FieldHalfPiBlock {
  std::string field;
  std::string atom;
  std::optional<std::size_t> port;
};

struct DispersiveBlock {
  std::string field;
  std::string atom;
  std::optional<std::size_t> port;
};

struct RamseyZone {
  std::string atom;
  std::optional<std::size_t> port;
};

struct ExternalPiPulse {
  std::string atom;
  std::optional<std::size_t> port;
};

using Element = std::variant<BeamSplitter, PolarizingBeamSplitter, PolarizationRotator, PhaseShifter,
                             CavityAtomBlock, FieldPiBlock, FieldHalfPiBlock, DispersiveBlock,
                             RamseyZone, ExternalPiPulse>;

/// Labels of the flying qubit's subsystems in a register.
struct Wiring {
  std::string path = "path";
  std::string polarization = "pol";
};

namespace detail {

inline PureState apply_local(const PureState& state, std::vector<std::string> targets, const Matrix& u,
                             const std::optional<std::size_t>& port, const Wiring& w) {
  if (!port) return apply_unitary(state, targets, u);
  const std::size_t modes = state.reg().at(w.path).dim();
  targets.insert(targets.begin(), w.path);
  return apply_unitary(state, targets, controlled_on_port(modes, *port, u));
}

/// Rejects states with weight on |e,1> where the field block acts.
inline void guard_two_excitations(const PureState& state, const std::string& atom, const std::string& field,
                                  const std::optional<std::size_t>& port, const Wiring& w) {
  std::vector<std::pair<std::string, std::string>> sector{{atom, "e"}, {field, "1"}};
  if (port) sector.emplace_back(w.path, std::to_string(*port));
  if (sector_probability(state, sector) > kZeroProbability)
    throw InvalidConfigurationError("field block on '" + field + "' entered by |e,1>");
}

}  // namespace detail

inline std::string element_name(const Element& e) {
  struct {
    std::string operator()(const BeamSplitter& b) const { return b.atomic ? "AtomicBS" : "BS"; }
    std::string operator()(const PolarizingBeamSplitter&) const { return "PBS"; }
    std::string operator()(const PolarizationRotator&) const { return "PR"; }
    std::string operator()(const PhaseShifter&) const { return "PhaseShifter"; }
    std::string operator()(const CavityAtomBlock&) const { return "CavityAtomBlock"; }
    std::string operator()(const FieldPiBlock&) const { return "FieldPiBlock"; }
    std::string operator()(const FieldHalfPiBlock&) const { return "FieldHalfPiBlock"; }
    std::string operator()(const DispersiveBlock&) const { return "DispersiveBlock"; }
    std::string operator()(const RamseyZone&) const { return "RamseyZone"; }
    std::string operator()(const ExternalPiPulse&) const { return "ExternalPiPulse"; }
  } visitor;
  return std::visit(visitor, e);
}

/// Propagates `state` through one element.
inline PureState apply_element(const PureState& state, const Element& element, const Wiring& w = {}) {
  const auto& reg = state.reg();
  return std::visit(
      [&](const auto& e) -> PureState {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          const Matrix u = e.atomic ? atomic_bs_unitary() : bs_unitary(e.reflectivity);
          return apply_unitary(state, {w.path}, embed_modes(reg.at(w.path).dim(), e.port_a, e.port_b, u));
        } else if constexpr (std::is_same_v<T, PolarizingBeamSplitter>) {
          const std::size_t modes = reg.at(w.path).dim();
          const Matrix swap = embed_modes(modes, e.port_a, e.port_b, pr_unitary());
          const auto m = static_cast<Eigen::Index>(modes);
          // targets (path, pol): pol L keeps the mode, pol R swaps a and b.
          Matrix u = Matrix::Zero(2 * m, 2 * m);
          for (Eigen::Index p = 0; p < m; ++p) {
            u(2 * p, 2 * p) = 1.0;
            for (Eigen::Index q = 0; q < m; ++q) u(2 * q + 1, 2 * p + 1) = swap(q, p);
          }
          return apply_unitary(state, {w.path, w.polarization}, u);
        } else if constexpr (std::is_same_v<T, PolarizationRotator>) {
          return detail::apply_local(state, {w.polarization}, pr_unitary(), e.port, w);
        } else if constexpr (std::is_same_v<T, PhaseShifter>) {
          const std::size_t modes = reg.at(w.path).dim();
          if (e.port >= modes) throw ParameterError("phase shifter port outside the path");
          Matrix u = Matrix::Identity(static_cast<Eigen::Index>(modes), static_cast<Eigen::Index>(modes));
          u(static_cast<Eigen::Index>(e.port), static_cast<Eigen::Index>(e.port)) = std::polar(1.0, e.phase);
          return apply_unitary(state, {w.path}, u);
        } else if constexpr (std::is_same_v<T, CavityAtomBlock>) {
          return detail::apply_local(state, {e.atom, w.polarization}, cavity_atom_block_unitary(), e.port, w);
        } else if constexpr (std::is_same_v<T, FieldPiBlock>) {
          detail::guard_two_excitations(state, e.atom, e.field, e.port, w);
          return detail::apply_local(state, {e.atom, e.field}, field_pi_block_unitary(), e.port, w);
        } else if constexpr (std::is_same_v<T, FieldHalfPiBlock>) {
          detail::guard_two_excitations(state, e.atom, e.field, e.port, w);
          return detail::apply_local(state, {e.atom, e.field}, field_half_pi_block_unitary(), e.port, w);
        } else if constexpr (std::is_same_v<T, DispersiveBlock>) {
          return detail::apply_local(state, {e.atom, e.field}, dispersive_unitary(), e.port, w);
        } else if constexpr (std::is_same_v<T, RamseyZone>) {
          return detail::apply_local(state, {e.atom}, ramsey_unitary(), e.port, w);
        } else {
          return detail::apply_local(state, {e.atom}, external_pi_unitary(), e.port, w);
        }
      },
      element);
}

}  // namespace cavnet
