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
 * @file    qstate.hpp
 * @brief   Pure states over heterogeneous registers.
 *
 * A Register is an ordered list of labelled subsystems (atoms, cavity field
 * modes, and the path and internal state of a flying qubit). Amplitudes are
 * stored densely in mixed-radix order with the FIRST subsystem as the most
 * significant digit: for a register (a, b) with dims (2, 3) the basis index
 * of |a=i, b=j> is 3*i + j. Every other module relies on this ordering.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cavnet/errors.hpp"

namespace cavnet {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Amplitudes = Eigen::VectorXcd;

inline constexpr double kUnitaryTol = 1e-9;
inline constexpr double kNormTol = 1e-9;
inline constexpr double kZeroProbability = 1e-12;

/*******************************************************************************
 *
 * Subsystems
 *
 ******************************************************************************/

enum class SubsystemKind { AtomLR, AtomGE, Field01, Path, PolLR };

inline std::string_view kind_name(SubsystemKind kind) {
  switch (kind) {
    case SubsystemKind::AtomLR: return "atom-LR";
    case SubsystemKind::AtomGE: return "atom-ge";
    case SubsystemKind::Field01: return "field-01";
    case SubsystemKind::Path: return "path";
    case SubsystemKind::PolLR: return "pol-LR";
  }
  return "?";
}

/// One tensor factor of a register.
///
/// Basis labels by kind: atom-LR {L, R}, atom-ge {g, e}, field-01 {0, 1},
/// pol-LR {L, R} (left/right circular), path {0, ..., dim-1}.
class Subsystem {
 public:
  Subsystem(std::string label, SubsystemKind kind, std::size_t dim = 2)
      : label_(std::move(label)), kind_(kind), dim_(dim) {
    if (kind_ != SubsystemKind::Path) dim_ = 2;
    if (dim_ < 2) throw ParameterError("subsystem '" + label_ + "' needs dim >= 2");
  }

  static Subsystem atom_lr(std::string label) { return {std::move(label), SubsystemKind::AtomLR}; }
  static Subsystem atom_ge(std::string label) { return {std::move(label), SubsystemKind::AtomGE}; }
  static Subsystem field(std::string label) { return {std::move(label), SubsystemKind::Field01}; }
  static Subsystem polarization(std::string label) { return {std::move(label), SubsystemKind::PolLR}; }
  static Subsystem path(std::string label, std::size_t modes) {
    return {std::move(label), SubsystemKind::Path, modes};
  }

  const std::string& label() const { return label_; }
  SubsystemKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }

  std::string basis_label(std::size_t i) const {
    if (i >= dim_) throw InvalidLabelError("basis index out of range for '" + label_ + "'");
    switch (kind_) {
      case SubsystemKind::AtomLR:
      case SubsystemKind::PolLR: return i == 0 ? "L" : "R";
      case SubsystemKind::AtomGE: return i == 0 ? "g" : "e";
      case SubsystemKind::Field01:
      case SubsystemKind::Path: return std::to_string(i);
    }
    return {};
  }

  std::size_t basis_index(std::string_view name) const {
    for (std::size_t i = 0; i < dim_; ++i)
      if (basis_label(i) == name) return i;
    throw InvalidLabelError("'" + std::string(name) + "' is not a basis label of " +
                            std::string(kind_name(kind_)) + " subsystem '" + label_ + "'");
  }

  friend bool operator==(const Subsystem&, const Subsystem&) = default;

 private:
  std::string label_;
  SubsystemKind kind_;
  std::size_t dim_;
};

/*******************************************************************************
 *
 * Register
 *
 ******************************************************************************/

class Register {
 public:
  Register() = default;

  explicit Register(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
    strides_.assign(subsystems_.size(), 1);
    total_dim_ = 1;
    for (std::size_t k = subsystems_.size(); k-- > 0;) {
      strides_[k] = total_dim_;
      total_dim_ *= subsystems_[k].dim();
      for (std::size_t j = 0; j < k; ++j)
        if (subsystems_[j].label() == subsystems_[k].label())
          throw ParameterError("duplicate subsystem label '" + subsystems_[k].label() + "'");
    }
  }

  std::size_t size() const { return subsystems_.size(); }
  std::size_t total_dim() const { return total_dim_; }
  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  const Subsystem& operator[](std::size_t k) const { return subsystems_[k]; }
  std::size_t stride(std::size_t k) const { return strides_[k]; }

  bool contains(std::string_view label) const {
    return std::any_of(subsystems_.begin(), subsystems_.end(),
                       [&](const Subsystem& s) { return s.label() == label; });
  }

  std::size_t position(std::string_view label) const {
    for (std::size_t k = 0; k < subsystems_.size(); ++k)
      if (subsystems_[k].label() == label) return k;
    throw ShapeError("register has no subsystem '" + std::string(label) + "'");
  }

  const Subsystem& at(std::string_view label) const { return subsystems_[position(label)]; }

  std::size_t digit(std::size_t index, std::size_t k) const {
    return (index / strides_[k]) % subsystems_[k].dim();
  }

  /// Basis index of a full label string, one label per subsystem.
  std::size_t index_of(std::span<const std::string> labels) const {
    if (labels.size() != subsystems_.size())
      throw ShapeError("expected " + std::to_string(subsystems_.size()) + " labels, got " +
                       std::to_string(labels.size()));
    std::size_t index = 0;
    for (std::size_t k = 0; k < labels.size(); ++k)
      index += subsystems_[k].basis_index(labels[k]) * strides_[k];
    return index;
  }

  std::string basis_string(std::size_t index) const {
    std::string out;
    for (std::size_t k = 0; k < subsystems_.size(); ++k) {
      if (k > 0) out += ',';
      out += subsystems_[k].basis_label(digit(index, k));
    }
    return out;
  }

  /// Register with the named subsystem dropped.
  Register without(std::string_view label) const {
    std::vector<Subsystem> rest;
    for (const auto& s : subsystems_)
      if (s.label() != label) rest.push_back(s);
    if (rest.size() == subsystems_.size())
      throw ShapeError("register has no subsystem '" + std::string(label) + "'");
    return Register(std::move(rest));
  }

  friend bool operator==(const Register& a, const Register& b) {
    return a.subsystems_ == b.subsystems_;
  }

 private:
  std::vector<Subsystem> subsystems_;
  std::vector<std::size_t> strides_;
  std::size_t total_dim_ = 1;
};

/*******************************************************************************
 *
 * PureState
 *
 ******************************************************************************/

class PureState {
 public:
  PureState() = default;

  /// Throws ShapeError on a length mismatch and ContractViolation if the
  /// vector is not normalized to within kNormTol.
  PureState(Register reg, Amplitudes amplitudes)
      : register_(std::move(reg)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != register_.total_dim())
      throw ShapeError("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                       ", register needs " + std::to_string(register_.total_dim()));
    if (std::abs(amplitudes_.norm() - 1.0) > kNormTol)
      throw ContractViolation("state is not normalized (norm " +
                              std::to_string(amplitudes_.norm()) + ")");
  }

  const Register& reg() const { return register_; }
  const Amplitudes& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return register_.total_dim(); }
  double norm() const { return amplitudes_.norm(); }

  Complex amplitude(std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }
  Complex amplitude(std::span<const std::string> labels) const {
    return amplitude(register_.index_of(labels));
  }
  Complex amplitude(std::initializer_list<std::string> labels) const {
    return amplitude(std::span<const std::string>(labels.begin(), labels.size()));
  }

 private:
  Register register_;
  Amplitudes amplitudes_;
};

/*******************************************************************************
 *
 * Operations
 *
 ******************************************************************************/

inline PureState product_state(const Register& reg, std::span<const std::string> labels) {
  Amplitudes amps = Amplitudes::Zero(static_cast<Eigen::Index>(reg.total_dim()));
  amps(static_cast<Eigen::Index>(reg.index_of(labels))) = 1.0;
  return PureState(reg, std::move(amps));
}

inline PureState product_state(const Register& reg, std::initializer_list<std::string> labels) {
  return product_state(reg, std::span<const std::string>(labels.begin(), labels.size()));
}

/// Tensor product of one normalized local vector per subsystem.
inline PureState product_state(const Register& reg, std::span<const Amplitudes> locals) {
  if (locals.size() != reg.size()) throw ShapeError("one local state per subsystem is required");
  Amplitudes amps = Amplitudes::Ones(1);
  for (std::size_t k = 0; k < reg.size(); ++k) {
    const auto& local = locals[k];
    if (static_cast<std::size_t>(local.size()) != reg[k].dim())
      throw ShapeError("local state for '" + reg[k].label() + "' has wrong dimension");
    Amplitudes next(amps.size() * local.size());
    for (Eigen::Index i = 0; i < amps.size(); ++i)
      next.segment(i * local.size(), local.size()) = amps(i) * local;
    amps = std::move(next);
  }
  return PureState(reg, std::move(amps));
}

/// Unit vector of a single subsystem, for building local states.
inline Amplitudes basis_vector(const Subsystem& s, std::string_view label) {
  Amplitudes v = Amplitudes::Zero(static_cast<Eigen::Index>(s.dim()));
  v(static_cast<Eigen::Index>(s.basis_index(label))) = 1.0;
  return v;
}

inline bool is_unitary(const Matrix& u, double tol = kUnitaryTol) {
  if (u.rows() != u.cols()) return false;
  return ((u.adjoint() * u) - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

namespace detail {

/// Index layout of a target subset: offsets of every joint target
/// configuration (first target most significant) and the list of base
/// indices whose target digits are all zero.
struct TargetLayout {
  std::vector<std::size_t> positions;
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> bases;
};

inline TargetLayout layout(const Register& reg, std::span<const std::string> targets) {
  TargetLayout out;
  for (const auto& t : targets) {
    const std::size_t k = reg.position(t);
    if (std::find(out.positions.begin(), out.positions.end(), k) != out.positions.end())
      throw ShapeError("target '" + t + "' listed twice");
    out.positions.push_back(k);
  }
  out.offsets = {0};
  for (const auto k : out.positions) {
    std::vector<std::size_t> next;
    next.reserve(out.offsets.size() * reg[k].dim());
    for (const auto off : out.offsets)
      for (std::size_t d = 0; d < reg[k].dim(); ++d) next.push_back(off + d * reg.stride(k));
    out.offsets = std::move(next);
  }
  for (std::size_t i = 0; i < reg.total_dim(); ++i) {
    bool base = true;
    for (const auto k : out.positions) base = base && reg.digit(i, k) == 0;
    if (base) out.bases.push_back(i);
  }
  return out;
}

inline Amplitudes apply(const Register& reg, const Amplitudes& amps,
                        std::span<const std::string> targets, const Matrix& matrix) {
  const auto lay = layout(reg, targets);
  const auto d = static_cast<Eigen::Index>(lay.offsets.size());
  if (matrix.rows() != d || matrix.cols() != d)
    throw ShapeError("matrix is " + std::to_string(matrix.rows()) + "x" +
                     std::to_string(matrix.cols()) + ", targets span dimension " +
                     std::to_string(d));
  Amplitudes out = amps;
  Amplitudes local(d);
  for (const auto base : lay.bases) {
    for (Eigen::Index t = 0; t < d; ++t) local(t) = amps(static_cast<Eigen::Index>(base + lay.offsets[t]));
    const Amplitudes mapped = matrix * local;
    for (Eigen::Index t = 0; t < d; ++t) out(static_cast<Eigen::Index>(base + lay.offsets[t])) = mapped(t);
  }
  return out;
}

}  // namespace detail

/// U on `targets` (in the listed order, first most significant) times the
/// identity elsewhere.
inline PureState apply_unitary(const PureState& state, std::span<const std::string> targets,
                               const Matrix& matrix) {
  if (!is_unitary(matrix)) throw ContractViolation("apply_unitary: matrix is not unitary");
  return PureState(state.reg(), detail::apply(state.reg(), state.amplitudes(), targets, matrix));
}

inline PureState apply_unitary(const PureState& state, std::initializer_list<std::string> targets,
                               const Matrix& matrix) {
  return apply_unitary(state, std::span<const std::string>(targets.begin(), targets.size()), matrix);
}

struct Projection {
  double probability = 0.0;
  std::optional<PureState> post_state;
};

/// Projective measurement of one subsystem onto a basis label. The returned
/// state keeps the measured subsystem (now in a definite state).
inline Projection project(const PureState& state, std::string_view target, std::string_view outcome) {
  const auto& reg = state.reg();
  const std::size_t k = reg.position(target);
  const std::size_t want = reg[k].basis_index(outcome);
  Amplitudes amps = state.amplitudes();
  for (std::size_t i = 0; i < reg.total_dim(); ++i)
    if (reg.digit(i, k) != want) amps(static_cast<Eigen::Index>(i)) = 0.0;
  const double p = amps.squaredNorm();
  if (p <= kZeroProbability) return {p, std::nullopt};
  amps /= std::sqrt(p);
  return {p, PureState(reg, std::move(amps))};
}

/// Weight of the subspace where every listed subsystem shows the listed label.
inline double sector_probability(const PureState& state,
                                 std::span<const std::pair<std::string, std::string>> conditions) {
  const auto& reg = state.reg();
  std::vector<std::pair<std::size_t, std::size_t>> wanted;
  for (const auto& [label, value] : conditions) {
    const std::size_t k = reg.position(label);
    wanted.emplace_back(k, reg[k].basis_index(value));
  }
  double p = 0.0;
  for (std::size_t i = 0; i < reg.total_dim(); ++i) {
    bool hit = true;
    for (const auto& [k, v] : wanted) hit = hit && reg.digit(i, k) == v;
    if (hit) p += std::norm(state.amplitude(i));
  }
  return p;
}

/// Removes a subsystem that is in a product with the rest of the register.
/// Throws ContractViolation when it is still entangled (weight outside its
/// dominant basis label above `tol`).
inline PureState remove_subsystem(const PureState& state, std::string_view label, double tol = 1e-9) {
  const auto& reg = state.reg();
  const std::size_t k = reg.position(label);
  const std::size_t dk = reg[k].dim();
  const Register rest = reg.without(label);

  // The local factor is read off the column with the largest weight; a
  // product state has rank one across the cut, so every column is parallel.
  std::vector<double> weight(dk, 0.0);
  for (std::size_t i = 0; i < reg.total_dim(); ++i) weight[reg.digit(i, k)] += std::norm(state.amplitude(i));
  const auto dominant = static_cast<std::size_t>(
      std::distance(weight.begin(), std::max_element(weight.begin(), weight.end())));

  Amplitudes reduced = Amplitudes::Zero(static_cast<Eigen::Index>(rest.total_dim()));
  Amplitudes local = Amplitudes::Zero(static_cast<Eigen::Index>(dk));
  for (std::size_t i = 0, r = 0; i < reg.total_dim(); ++i) {
    if (reg.digit(i, k) == dominant) reduced(static_cast<Eigen::Index>(r++)) = state.amplitude(i);
  }
  reduced.normalize();
  // local_d = <reduced| column_d>
  for (std::size_t d = 0; d < dk; ++d) {
    Complex acc = 0.0;
    for (std::size_t i = 0, r = 0; i < reg.total_dim(); ++i) {
      if (reg.digit(i, k) != dominant) continue;
      const std::size_t j = i - dominant * reg.stride(k) + d * reg.stride(k);
      acc += std::conj(reduced(static_cast<Eigen::Index>(r++))) * state.amplitude(j);
    }
    local(static_cast<Eigen::Index>(d)) = acc;
  }
  if (std::abs(local.squaredNorm() - 1.0) > tol)
    throw ContractViolation("subsystem '" + std::string(label) +
                            "' is entangled with the rest of the register");
  // local(dominant) is real and positive, so the input equals local ⊗ reduced.
  return PureState(rest, std::move(reduced));
}

/// <a|b>
inline Complex overlap(const PureState& a, const PureState& b) {
  if (!(a.reg() == b.reg())) throw ShapeError("overlap: states live on different registers");
  return a.amplitudes().dot(b.amplitudes());
}

}  // namespace cavnet
