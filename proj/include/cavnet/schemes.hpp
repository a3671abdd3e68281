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
 * @file    schemes.hpp
 * @brief   Entanglement-generation networks and their detector statistics.
 *
 * A Scheme is a register, an initial product state, an ordered list of
 * elements and a set of detectors. Running it propagates the initial state,
 * projects on every detector outcome, removes the flying qubit (which is in
 * a product with the stationary qubits after detection), applies the
 * outcome's local correction and scores the result against the outcome's
 * target state.
 *
 * Photonic layouts put the stationary atoms first, then the photon's path
 * mode and polarization. The photon always enters mode 0 of the first beam
 * splitter; detector Dk sits on output mode k-1.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cavnet/elements.hpp"
#include "cavnet/errors.hpp"
#include "cavnet/qstate.hpp"
#include "cavnet/verify.hpp"

namespace cavnet {

/// One detector click: every listed subsystem found in the listed state.
struct Detector {
  std::string id;
  std::vector<std::pair<std::string, std::string>> projections;
  bool heralds_success = true;
};

struct Scheme {
  std::string name;
  std::size_t n = 0;
  Register reg;
  std::vector<Amplitudes> initial;  ///< one normalized local state per subsystem
  std::vector<Element> elements;
  Wiring wiring;
  std::vector<Detector> detectors;
  std::vector<std::string> discarded;  ///< flying subsystems dropped after detection
  std::map<std::string, LocalCorrection> corrections;
  std::map<std::string, PureState> targets;
};

struct OutcomeReport {
  std::string detector_id;
  double probability = 0.0;
  bool heralds_success = true;
  std::optional<PureState> post_state;       ///< flying qubit removed, uncorrected
  std::optional<PureState> corrected_state;
  LocalCorrection correction;
  double fidelity_vs_target = 0.0;
};

inline PureState initial_state(const Scheme& s) { return product_state(s.reg, s.initial); }

/// State after the first `count` elements (all of them by default).
inline PureState propagate(const Scheme& s, std::size_t count = std::numeric_limits<std::size_t>::max()) {
  PureState state = initial_state(s);
  count = std::min(count, s.elements.size());
  for (std::size_t i = 0; i < count; ++i) state = apply_element(state, s.elements[i], s.wiring);
  return state;
}

inline std::vector<OutcomeReport> run(const Scheme& s) {
  if (s.detectors.empty()) return {};
  const PureState final_state = propagate(s);

  std::vector<OutcomeReport> reports;
  double total = 0.0;
  for (const auto& d : s.detectors) {
    OutcomeReport r;
    r.detector_id = d.id;
    r.heralds_success = d.heralds_success;

    std::optional<PureState> st = final_state;
    double p = 1.0;
    for (const auto& [label, value] : d.projections) {
      auto pr = project(*st, label, value);
      p *= pr.probability;
      st = std::move(pr.post_state);
      if (!st) break;
    }
    r.probability = st ? p : 0.0;
    total += r.probability;
    if (st) {
      PureState reduced = *st;
      for (const auto& label : s.discarded) reduced = remove_subsystem(reduced, label);
      const auto c = s.corrections.find(d.id);
      r.correction = c != s.corrections.end() ? c->second : LocalCorrection::identity(reduced.reg().size());
      PureState corrected = apply_correction(reduced, r.correction);
      if (const auto t = s.targets.find(d.id); t != s.targets.end())
        r.fidelity_vs_target = fidelity(corrected, t->second);
      r.post_state = std::move(reduced);
      r.corrected_state = std::move(corrected);
    }
    reports.push_back(std::move(r));
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw LossyWiringError("scheme '" + s.name + "': outcome probabilities sum to " + std::to_string(total));
  return reports;
}

/*******************************************************************************
 *
 * Builders
 *
 ******************************************************************************/

namespace detail {

inline std::string atom_label(std::size_t i) { return "a" + std::to_string(i); }
inline std::string field_label(std::size_t i) { return "f" + std::to_string(i); }

/// Mode-space matrix of the optical elements in `elements` (others ignored).
inline Matrix mode_matrix(const std::vector<Element>& elements, std::size_t modes) {
  const auto m = static_cast<Eigen::Index>(modes);
  Matrix u = Matrix::Identity(m, m);
  for (const auto& e : elements) {
    if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
      const Matrix b = bs->atomic ? atomic_bs_unitary() : bs_unitary(bs->reflectivity);
      u = embed_modes(modes, bs->port_a, bs->port_b, b) * u;
    } else if (const auto* ps = std::get_if<PhaseShifter>(&e)) {
      Matrix d = Matrix::Identity(m, m);
      d(static_cast<Eigen::Index>(ps->port), static_cast<Eigen::Index>(ps->port)) = std::polar(1.0, ps->phase);
      u = d * u;
    }
  }
  return u;
}

/// Per-atom phase that makes a complex amplitude real and positive; exact
/// Z for negative reals so that sign patterns read as Pauli corrections.
inline Matrix phase_correction(Complex amplitude) {
  const double phi = std::arg(amplitude);
  if (std::abs(phi) < 1e-12) return Matrix::Identity(2, 2);
  if (std::abs(std::abs(phi) - std::numbers::pi) < 1e-12) return pauli_z();
  return phase_gate(-phi);
}

/// Single-excitation corrections for photonic W layouts: the photon enters
/// mode 0, fans out through `fan_out`, flips atom k on mode `cavity_modes[k]`
/// and is recombined by `recombine`. The amplitude of "atom k flipped" at
/// output mode j is recombine(j, cavity_modes[k]) * fan_out(cavity_modes[k], 0).
inline LocalCorrection w_correction(const Matrix& fan_out, const Matrix& recombine,
                                    const std::vector<std::size_t>& cavity_modes, std::size_t output) {
  LocalCorrection c;
  for (const auto mode : cavity_modes) {
    const auto k = static_cast<Eigen::Index>(mode);
    c.gates.push_back(phase_correction(recombine(static_cast<Eigen::Index>(output), k) * fan_out(k, 0)));
  }
  return c;
}

inline std::vector<Subsystem> photon_subsystems(std::size_t modes) {
  return {Subsystem::path("path", modes), Subsystem::polarization("pol")};
}

inline bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

/// Balanced 50/50 tree from mode 0 over modes 0..n-1 (n - 1 splitters).
inline std::vector<Element> fan_out_tree(std::size_t n) {
  std::vector<Element> out;
  for (std::size_t span = n; span > 1; span /= 2)
    for (std::size_t start = 0; start < n; start += span) out.push_back(BeamSplitter{0.5, start, start + span / 2});
  return out;
}

/// Full 50/50 butterfly on modes 0..n-1: every mode pair differing in one
/// index bit meets once, so the network is the normalized Sylvester-Hadamard
/// matrix and every output sees every input with weight 1/n. A bare mirrored
/// tree (n - 1 splitters) would leave most outputs blind to half the modes.
inline std::vector<Element> butterfly(std::size_t n) {
  std::vector<Element> out;
  for (std::size_t half = 1; half < n; half *= 2)
    for (std::size_t start = 0; start < n; start += 2 * half)
      for (std::size_t i = 0; i < half; ++i) out.push_back(BeamSplitter{0.5, start + i, start + i + half});
  return out;
}

}  // namespace detail

/// 2N-atom GHZ. Atoms start in L L R R L L ...; after the first 50/50 BS
/// mode 0 visits the odd-numbered atoms and mode 1 the even-numbered ones,
/// then both modes meet on a second BS in front of D1 (mode 0) and D2.
inline Scheme build_ghz_atoms(std::size_t n_atoms) {
  if (n_atoms < 2 || n_atoms % 2 != 0) throw ParameterError("GHZ scheme needs an even number of atoms >= 2");
  Scheme s;
  s.name = "ghz-atoms";
  s.n = n_atoms;
  auto subs = atom_register(n_atoms).subsystems();
  for (auto& p : detail::photon_subsystems(2)) subs.push_back(p);
  s.reg = Register(std::move(subs));

  std::vector<std::string> pattern;
  for (std::size_t i = 1; i <= n_atoms; ++i) pattern.push_back(((i - 1) / 2) % 2 == 0 ? "L" : "R");
  for (std::size_t i = 0; i < n_atoms; ++i) s.initial.push_back(basis_vector(s.reg[i], pattern[i]));
  s.initial.push_back(basis_vector(s.reg.at("path"), "0"));
  s.initial.push_back(basis_vector(s.reg.at("pol"), "L"));

  s.elements.push_back(BeamSplitter{0.5, 0, 1});
  for (std::size_t i = 1; i <= n_atoms; i += 2) s.elements.push_back(CavityAtomBlock{detail::atom_label(i), 0});
  for (std::size_t i = 2; i <= n_atoms; i += 2) s.elements.push_back(CavityAtomBlock{detail::atom_label(i), 1});
  s.elements.push_back(BeamSplitter{0.5, 0, 1});

  s.detectors = {{"D1", {{"path", "0"}}}, {"D2", {{"path", "1"}}}};
  s.discarded = {"path", "pol"};

  // Branch through mode 0 has every odd atom flipped (R L L R R L ...). NOT
  // on the atoms where that branch shows L maps it to R...R and its
  // complement to L...L.
  const Register atoms = atom_register(n_atoms);
  LocalCorrection c = LocalCorrection::identity(n_atoms);
  for (std::size_t i = 1; i <= n_atoms; ++i) {
    const bool flipped = i % 2 == 1;
    const std::string branch = flipped ? (pattern[i - 1] == "L" ? "R" : "L") : pattern[i - 1];
    if (branch == "L") c.gates[i - 1] = pauli_x();
  }
  s.corrections = {{"D1", c}, {"D2", c}};
  s.targets.emplace("D1", ghz_target(atoms, +1, "R"));
  s.targets.emplace("D2", ghz_target(atoms, -1, "R"));
  return s;
}

/// W state on n = 2^k atoms: a balanced 50/50 tree spreads the photon over
/// n modes, mode k flips atom k+1, and a 50/50 butterfly recombines the
/// modes in front of n detectors so that no click reveals the flipped atom.
inline Scheme build_w_pow2(std::size_t n_atoms) {
  if (!detail::is_power_of_two(n_atoms)) throw ParameterError("W tree needs a power of two >= 2 atoms");
  Scheme s;
  s.name = "w";
  s.n = n_atoms;
  auto subs = atom_register(n_atoms).subsystems();
  for (auto& p : detail::photon_subsystems(n_atoms)) subs.push_back(p);
  s.reg = Register(std::move(subs));
  for (std::size_t i = 0; i < n_atoms; ++i) s.initial.push_back(basis_vector(s.reg[i], "L"));
  s.initial.push_back(basis_vector(s.reg.at("path"), "0"));
  s.initial.push_back(basis_vector(s.reg.at("pol"), "L"));

  const std::vector<Element> fan_out = detail::fan_out_tree(n_atoms);
  const std::vector<Element> recombine = detail::butterfly(n_atoms);

  s.elements = fan_out;
  std::vector<std::size_t> cavity_modes;
  for (std::size_t k = 0; k < n_atoms; ++k) {
    s.elements.push_back(CavityAtomBlock{detail::atom_label(k + 1), k});
    cavity_modes.push_back(k);
  }
  s.elements.insert(s.elements.end(), recombine.begin(), recombine.end());

  const Matrix f = detail::mode_matrix(fan_out, n_atoms);
  const Matrix r = detail::mode_matrix(recombine, n_atoms);
  const PureState target = w_target(n_atoms);
  for (std::size_t j = 0; j < n_atoms; ++j) {
    const std::string id = "D" + std::to_string(j + 1);
    s.detectors.push_back({id, {{"path", std::to_string(j)}}});
    s.corrections.emplace(id, detail::w_correction(f, r, cavity_modes, j));
    s.targets.emplace(id, target);
  }
  s.discarded = {"path", "pol"};
  return s;
}

/// Three-atom W from the four-mode tree with the fourth cavity replaced by
/// detector D5. The fourth fan-out mode is routed to mode 4 (D5), so the
/// four-mode butterfly in front of D1..D4 sees vacuum on its fourth input.
inline Scheme build_w3_probabilistic() {
  Scheme s;
  s.name = "w3-prob";
  s.n = 3;
  auto subs = atom_register(3).subsystems();
  for (auto& p : detail::photon_subsystems(5)) subs.push_back(p);
  s.reg = Register(std::move(subs));
  for (std::size_t i = 0; i < 3; ++i) s.initial.push_back(basis_vector(s.reg[i], "L"));
  s.initial.push_back(basis_vector(s.reg.at("path"), "0"));
  s.initial.push_back(basis_vector(s.reg.at("pol"), "L"));

  const std::vector<Element> fan_out{BeamSplitter{0.5, 0, 2}, BeamSplitter{0.5, 0, 1}, BeamSplitter{0.5, 2, 4}};
  const std::vector<Element> recombine = detail::butterfly(4);
  s.elements = fan_out;
  const std::vector<std::size_t> cavity_modes{0, 1, 2};
  for (std::size_t k = 0; k < 3; ++k) s.elements.push_back(CavityAtomBlock{detail::atom_label(k + 1), k});
  s.elements.insert(s.elements.end(), recombine.begin(), recombine.end());

  const Matrix f = detail::mode_matrix(fan_out, 5);
  const Matrix r = detail::mode_matrix(recombine, 5);
  const PureState target = w_target(3);
  for (std::size_t j = 0; j < 4; ++j) {
    const std::string id = "D" + std::to_string(j + 1);
    s.detectors.push_back({id, {{"path", std::to_string(j)}}});
    s.corrections.emplace(id, detail::w_correction(f, r, cavity_modes, j));
    s.targets.emplace(id, target);
  }
  s.detectors.push_back({"D5", {{"path", "4"}}, false});
  s.targets.emplace("D5", target);
  s.discarded = {"path", "pol"};
  return s;
}

/// Deterministic three-atom W. BS1 (R = 1/3) and a 50/50 BS give amplitude
/// 1/sqrt3 on each of three modes. The recombination is a tritter (every
/// entry of modulus 1/sqrt3): 50/50 on (0,2), a pi/2 phase on mode 2,
/// R = 1/3 on (1,2), 50/50 on (0,1). Each detector then sees the three flip
/// branches with equal weight and known phases.
inline Scheme build_w3_deterministic() {
  Scheme s;
  s.name = "w3-det";
  s.n = 3;
  auto subs = atom_register(3).subsystems();
  for (auto& p : detail::photon_subsystems(3)) subs.push_back(p);
  s.reg = Register(std::move(subs));
  for (std::size_t i = 0; i < 3; ++i) s.initial.push_back(basis_vector(s.reg[i], "L"));
  s.initial.push_back(basis_vector(s.reg.at("path"), "0"));
  s.initial.push_back(basis_vector(s.reg.at("pol"), "L"));

  const std::vector<Element> fan_out{BeamSplitter{1.0 / 3.0, 0, 1}, BeamSplitter{0.5, 0, 2}};
  const std::vector<Element> recombine{BeamSplitter{0.5, 0, 2}, PhaseShifter{2, std::numbers::pi / 2},
                                       BeamSplitter{1.0 / 3.0, 1, 2}, BeamSplitter{0.5, 0, 1}};
  s.elements = fan_out;
  const std::vector<std::size_t> cavity_modes{0, 1, 2};
  for (std::size_t k = 0; k < 3; ++k) s.elements.push_back(CavityAtomBlock{detail::atom_label(k + 1), k});
  s.elements.insert(s.elements.end(), recombine.begin(), recombine.end());

  const Matrix f = detail::mode_matrix(fan_out, 3);
  const Matrix r = detail::mode_matrix(recombine, 3);
  const PureState target = w_target(3);
  for (std::size_t j = 0; j < 3; ++j) {
    const std::string id = "D" + std::to_string(j + 1);
    s.detectors.push_back({id, {{"path", std::to_string(j)}}});
    s.corrections.emplace(id, detail::w_correction(f, r, cavity_modes, j));
    s.targets.emplace(id, target);
  }
  s.discarded = {"path", "pol"};
  return s;
}

/// Linear cluster on n atoms as a chain of Mach-Zehnder stages. At stage i
/// mode 1 passes cavity i and a polarization rotator (restoring L), mode 0
/// bypasses, and a 50/50 BS mixes the modes. D1 (mode 0) heralds the path
/// graph state directly, D2 (mode 1) needs Z on the last atom.
///
/// Derivation: write the state before stage k+1 as |0>A + |1>B. The cavity
/// on mode 1 turns it into |0>A|L> + |1>B|R>, and the BS sends
/// A|L> + B|R> to mode 0 and A|L> - B|R> to mode 1. With A = G_k (the
/// k-vertex path graph state) and B = Z_k G_k this is G_{k+1} on mode 0
/// and Z_{k+1} G_{k+1} on mode 1; stage 1 starts from A = B = 1.
inline Scheme build_cluster_atoms(std::size_t n_atoms) {
  if (n_atoms < 1) throw ParameterError("cluster scheme needs at least one atom");
  Scheme s;
  s.name = "cluster";
  s.n = n_atoms;
  auto subs = atom_register(n_atoms).subsystems();
  for (auto& p : detail::photon_subsystems(2)) subs.push_back(p);
  s.reg = Register(std::move(subs));
  for (std::size_t i = 0; i < n_atoms; ++i) s.initial.push_back(basis_vector(s.reg[i], "L"));
  s.initial.push_back(basis_vector(s.reg.at("path"), "0"));
  s.initial.push_back(basis_vector(s.reg.at("pol"), "L"));

  s.elements.push_back(BeamSplitter{0.5, 0, 1});
  for (std::size_t i = 1; i <= n_atoms; ++i) {
    s.elements.push_back(CavityAtomBlock{detail::atom_label(i), 1});
    s.elements.push_back(PolarizationRotator{1});
    s.elements.push_back(BeamSplitter{0.5, 0, 1});
  }
  s.detectors = {{"D1", {{"path", "0"}}}, {"D2", {{"path", "1"}}}};
  s.discarded = {"path", "pol"};

  LocalCorrection z_last = LocalCorrection::identity(n_atoms);
  z_last.gates.back() = pauli_z();
  s.corrections = {{"D1", LocalCorrection::identity(n_atoms)}, {"D2", z_last}};
  const PureState target = graph_target(Graph::path(n_atoms), atom_register(n_atoms));
  s.targets.emplace("D1", target);
  s.targets.emplace("D2", target);
  return s;
}

/// 2N-field GHZ with a two-level atom as the flying qubit. Fields start in
/// 1 1 0 0 1 1 ...; atomic BS1 sends mode 0 past the odd cavities and mode 1
/// past the even ones, each through a pi-pulse block.
inline Scheme build_ghz_fields(std::size_t n_fields) {
  if (n_fields < 2 || n_fields % 2 != 0) throw ParameterError("field GHZ scheme needs an even number of fields >= 2");
  Scheme s;
  s.name = "ghz-fields";
  s.n = n_fields;
  auto subs = field_register(n_fields).subsystems();
  subs.push_back(Subsystem::path("path", 2));
  subs.push_back(Subsystem::atom_ge("flyer"));
  s.reg = Register(std::move(subs));

  std::vector<std::string> pattern;
  for (std::size_t i = 1; i <= n_fields; ++i) pattern.push_back(((i - 1) / 2) % 2 == 0 ? "1" : "0");
  for (std::size_t i = 0; i < n_fields; ++i) s.initial.push_back(basis_vector(s.reg[i], pattern[i]));
  s.initial.push_back(basis_vector(s.reg.at("path"), "0"));
  s.initial.push_back(basis_vector(s.reg.at("flyer"), "g"));

  s.elements.push_back(BeamSplitter{0.5, 0, 1, true});
  for (std::size_t i = 1; i <= n_fields; i += 2)
    s.elements.push_back(FieldPiBlock{detail::field_label(i), "flyer", 0});
  for (std::size_t i = 2; i <= n_fields; i += 2)
    s.elements.push_back(FieldPiBlock{detail::field_label(i), "flyer", 1});
  s.elements.push_back(BeamSplitter{0.5, 0, 1, true});

  s.detectors = {{"D1", {{"path", "0"}}}, {"D2", {{"path", "1"}}}};
  s.discarded = {"path", "flyer"};

  const Register fields = field_register(n_fields);
  LocalCorrection c = LocalCorrection::identity(n_fields);
  for (std::size_t i = 1; i <= n_fields; ++i) {
    const bool flipped = i % 2 == 1;
    const std::string branch = flipped ? (pattern[i - 1] == "0" ? "1" : "0") : pattern[i - 1];
    if (branch == "1") c.gates[i - 1] = pauli_x();
  }
  s.corrections = {{"D1", c}, {"D2", c}};
  s.targets.emplace("D1", ghz_target(fields, +1, "0"));
  s.targets.emplace("D2", ghz_target(fields, -1, "0"));
  return s;
}

/// Controlled-Z between two cavity fields: an atom in g crosses cavity 1
/// (field |1>) with a pi/2 pulse, gets an external pi pulse, crosses cavity 2
/// (field (|0>+|1>)/sqrt2) dispersively and passes a Ramsey zone.
inline Scheme build_field_cz_pair() {
  Scheme s;
  s.name = "field-cz";
  s.n = 2;
  s.reg = Register({Subsystem::atom_ge("atom"), Subsystem::field("f1"), Subsystem::field("f2")});
  Amplitudes plus(2);
  plus << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
  s.initial = {basis_vector(s.reg[0], "g"), basis_vector(s.reg[1], "1"), plus};
  s.elements = {FieldHalfPiBlock{"f1", "atom", std::nullopt}, ExternalPiPulse{"atom", std::nullopt},
                DispersiveBlock{"f2", "atom", std::nullopt}, RamseyZone{"atom", std::nullopt}};
  s.detectors = {{"g", {{"atom", "g"}}}, {"e", {{"atom", "e"}}}};
  s.discarded = {"atom"};
  LocalCorrection z1 = LocalCorrection::identity(2);
  z1.gates[0] = pauli_z();
  s.corrections = {{"g", LocalCorrection::identity(2)}, {"e", z1}};
  const PureState target = graph_target(Graph::path(2));
  s.targets.emplace("g", target);
  s.targets.emplace("e", target);
  return s;
}

enum class GraphKind { Star, Linear, Ring };

/// A dispersive pass of the atom entangled with field `atom_vertex` through
/// the cavity of field `cavity_vertex` (0-indexed vertices).
struct DispersivePass {
  std::size_t atom_vertex = 0;
  std::size_t cavity_vertex = 0;
};

/// Field graph state. Every vertex that carries an atom starts as
/// (|0 g> + |1 e>)/sqrt2 (field |1>, atom g, pi/2 block, external pi);
/// the other fields start in (|0> + |1>)/sqrt2. Each atom makes its
/// dispersive passes, which act as CZ between its own field and the visited
/// field, then a Ramsey zone, and is measured. An atom found in e leaves a Z
/// on its field.
inline Scheme build_field_graph(const Graph& graph, const std::vector<DispersivePass>& passes,
                                std::string name = "graph") {
  const std::size_t n = graph.vertices();
  if (n < 2) throw ParameterError("graph scheme needs n >= 2");
  std::set<std::pair<std::size_t, std::size_t>> edges, covered;
  for (const auto& [u, v] : graph.edges()) edges.insert(std::minmax(u, v));
  std::vector<std::size_t> atoms;  // vertices that carry an atom, in order of first pass
  for (const auto& p : passes) {
    if (p.atom_vertex >= n || p.cavity_vertex >= n) throw GraphError("pass references a missing vertex");
    const auto e = std::minmax(p.atom_vertex, p.cavity_vertex);
    if (!edges.count(e)) throw GraphError("pass does not correspond to a graph edge");
    if (!covered.insert(e).second) throw GraphError("edge used twice");
    if (std::find(atoms.begin(), atoms.end(), p.atom_vertex) == atoms.end()) atoms.push_back(p.atom_vertex);
  }
  if (covered.size() != edges.size()) throw GraphError("every edge needs exactly one dispersive pass");
  std::vector<std::size_t> sorted_atoms = atoms;
  std::sort(sorted_atoms.begin(), sorted_atoms.end());

  Scheme s;
  s.name = std::move(name);
  s.n = n;
  auto subs = field_register(n).subsystems();
  for (const auto v : sorted_atoms) subs.push_back(Subsystem::atom_ge(detail::atom_label(v + 1)));
  s.reg = Register(std::move(subs));

  Amplitudes plus(2);
  plus << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
  for (std::size_t v = 0; v < n; ++v) {
    const bool has_atom = std::binary_search(sorted_atoms.begin(), sorted_atoms.end(), v);
    s.initial.push_back(has_atom ? basis_vector(s.reg[v], "1") : plus);
  }
  for (std::size_t k = 0; k < sorted_atoms.size(); ++k) s.initial.push_back(basis_vector(s.reg[n + k], "g"));

  for (const auto v : sorted_atoms) {
    s.elements.push_back(FieldHalfPiBlock{detail::field_label(v + 1), detail::atom_label(v + 1), std::nullopt});
    s.elements.push_back(ExternalPiPulse{detail::atom_label(v + 1), std::nullopt});
  }
  for (const auto v : atoms) {
    for (const auto& p : passes)
      if (p.atom_vertex == v)
        s.elements.push_back(
            DispersiveBlock{detail::field_label(p.cavity_vertex + 1), detail::atom_label(v + 1), std::nullopt});
    s.elements.push_back(RamseyZone{detail::atom_label(v + 1), std::nullopt});
  }

  const PureState target = graph_target(graph);
  const std::size_t m = sorted_atoms.size();
  for (std::size_t code = 0; code < (std::size_t{1} << m); ++code) {
    Detector d;
    if (m == 0) d.id = "no-atoms";  // edgeless graph: |+>^n, nothing to measure
    LocalCorrection c = LocalCorrection::identity(n);
    for (std::size_t k = 0; k < m; ++k) {
      const bool excited = (code >> (m - 1 - k)) & 1u;
      const std::string label = detail::atom_label(sorted_atoms[k] + 1);
      d.projections.emplace_back(label, excited ? "e" : "g");
      if (!d.id.empty()) d.id += ',';
      d.id += label + "=" + (excited ? "e" : "g");
      if (excited) c.gates[sorted_atoms[k]] = pauli_z();
    }
    s.corrections.emplace(d.id, std::move(c));
    s.targets.emplace(d.id, target);
    s.detectors.push_back(std::move(d));
  }
  for (const auto v : sorted_atoms) s.discarded.push_back(detail::atom_label(v + 1));
  return s;
}

/// Named topologies. Star: the leaves' atoms pass the center cavity (vertex
/// 0). Linear: atom j passes cavity j-1. Ring: linear, then atom 0 passes
/// cavity n-1.
inline Scheme build_field_graph(GraphKind kind, std::size_t n) {
  if (n < 2) throw ParameterError("graph scheme needs n >= 2");
  std::vector<DispersivePass> passes;
  switch (kind) {
    case GraphKind::Star: {
      for (std::size_t j = 1; j < n; ++j) passes.push_back({j, 0});
      return build_field_graph(Graph::star(n), passes, "graph-star");
    }
    case GraphKind::Linear: {
      for (std::size_t j = 1; j < n; ++j) passes.push_back({j, j - 1});
      return build_field_graph(Graph::path(n), passes, "graph-linear");
    }
    case GraphKind::Ring: {
      for (std::size_t j = 1; j < n; ++j) passes.push_back({j, j - 1});
      passes.push_back({0, n - 1});
      return build_field_graph(Graph::ring(n), passes, "graph-ring");
    }
  }
  throw ParameterError("unknown graph kind");
}

/// Arbitrary adjacency: the atom of the higher-numbered endpoint of each
/// edge passes the cavity of the lower one.
inline Scheme build_field_graph(const Graph& graph) {
  std::vector<DispersivePass> passes;
  for (const auto& [u, v] : graph.edges()) passes.push_back({std::max(u, v), std::min(u, v)});
  return build_field_graph(graph, passes, "graph");
}

/*******************************************************************************
 *
 * Retry walk
 *
 ******************************************************************************/

struct RetryWalkParams {
  double p_flip = 1.0;
  std::size_t n_cavities = 1;
  std::size_t max_steps = 10000;

  void validate() const {
    if (p_flip == 0.0) throw ParameterError("p_flip = 0: the photon never moves forward (degenerate walk)");
    if (!(p_flip > 0.0 && p_flip <= 1.0)) throw ParameterError("p_flip must lie in (0, 1]");
    if (n_cavities < 1) throw ParameterError("n_cavities must be >= 1");
    if (max_steps < 1) throw ParameterError("max_steps must be >= 1");
  }
};

struct RetryWalkResult {
  double success_prob = 0.0;
  double conditional_fidelity = 1.0;
  double expected_steps = 0.0;
};

/// Photon position on 0..n+1: 0 is the entrance (sends the photon back into
/// cavity 1), 1..n are cavities, n+1 the detector. At a cavity the photon
/// moves forward with p_flip and back otherwise; it starts at cavity 1.
/// success_prob is the probability of reaching the detector within
/// max_steps; expected_steps the unconditional mean absorption time. A
/// click always heralds the right state, so the conditional fidelity is 1.
inline RetryWalkResult retry_walk(const RetryWalkParams& params) {
  params.validate();
  const std::size_t n = params.n_cavities;
  const double p = params.p_flip;

  std::vector<double> dist(n + 2, 0.0), next(n + 2, 0.0);
  dist[1] = 1.0;
  for (std::size_t step = 0; step < params.max_steps; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    next[n + 1] = dist[n + 1];
    next[1] += dist[0];
    for (std::size_t j = 1; j <= n; ++j) {
      next[j + 1] += p * dist[j];
      next[j - 1] += (1.0 - p) * dist[j];
    }
    std::swap(dist, next);
  }

  // E_0 = 1 + E_1, E_j = 1 + p E_{j+1} + (1-p) E_{j-1}, E_{n+1} = 0.
  const auto m = static_cast<Eigen::Index>(n + 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(m);
  a(0, 0) = 1.0;
  if (m > 1) a(0, 1) = -1.0;
  for (Eigen::Index j = 1; j < m; ++j) {
    a(j, j) = 1.0;
    a(j, j - 1) = -(1.0 - p);
    if (j + 1 < m) a(j, j + 1) = -p;
  }
  const Eigen::VectorXd e = a.partialPivLu().solve(b);

  return {dist[n + 1], 1.0, e(1)};
}

struct RetryWalkSample {
  double success_prob = 0.0;
  double mean_steps = 0.0;  ///< over successful trajectories
  std::size_t trajectories = 0;
};

/// Monte-Carlo estimate of retry_walk. Trajectories are grouped in fixed
/// chunks; chunk c draws from mt19937_64 seeded with (seed, c), so results do
/// not depend on the number of worker threads.
inline RetryWalkSample retry_walk_monte_carlo(const RetryWalkParams& params, std::size_t trajectories,
                                              std::uint64_t seed, unsigned threads = 0) {
  params.validate();
  if (trajectories == 0) throw ParameterError("need at least one trajectory");
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (trajectories + kChunk - 1) / kChunk;
  std::vector<std::size_t> hits(chunks, 0);
  std::vector<double> steps(chunks, 0.0);

  auto run_chunk = [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(seq);
    std::bernoulli_distribution forward(params.p_flip);
    const std::size_t end = std::min(trajectories, (c + 1) * kChunk);
    for (std::size_t t = c * kChunk; t < end; ++t) {
      std::size_t pos = 1;
      std::size_t k = 0;
      while (k < params.max_steps && pos <= params.n_cavities) {
        pos = (pos == 0 || forward(rng)) ? pos + 1 : pos - 1;
        ++k;
      }
      if (pos == params.n_cavities + 1) {
        ++hits[c];
        steps[c] += static_cast<double>(k);
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) run_chunk(c);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }

  std::size_t total_hits = 0;
  double total_steps = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) total_hits += hits[c], total_steps += steps[c];
  return {static_cast<double>(total_hits) / static_cast<double>(trajectories),
          total_hits ? total_steps / static_cast<double>(total_hits) : 0.0, trajectories};
}

}  // namespace cavnet
