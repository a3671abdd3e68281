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


#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cavnet/elements.hpp"
#include "cavnet/iomodel.hpp"
#include "test_helpers.hpp"

namespace cavnet {
namespace {

constexpr double kS2 = std::numbers::sqrt2;

Matrix real2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

TEST(MatrixTest, BeamSplitterValues) {
  EXPECT_LT((bs_unitary(0.5) - real2(1, 1, 1, -1) / kS2).norm(), 1e-15);
  EXPECT_LT((bs_unitary(1.0 / 3.0) - real2(std::sqrt(2.0 / 3), std::sqrt(1.0 / 3), std::sqrt(1.0 / 3), -std::sqrt(2.0 / 3)))
                .norm(),
            1e-15);
  EXPECT_THROW(bs_unitary(0.0), ParameterError);
  EXPECT_THROW(bs_unitary(1.0), ParameterError);
  EXPECT_THROW(bs_unitary(std::nan("")), ParameterError);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 200; ++i) {
    const Matrix b = bs_unitary(u(rng));
    ASSERT_LT((b * b - Matrix::Identity(2, 2)).norm(), 1e-12);
    ASSERT_EQ((b - b.transpose()).norm(), 0.0);
  }
}

TEST(MatrixTest, AtomicSplitterMomentumStates) {
  const Matrix a = atomic_bs_unitary();
  // columns: p0, p-2
  EXPECT_NEAR(a(0, 0).real(), 1 / kS2, 1e-15);
  EXPECT_NEAR(a(1, 0).real(), 1 / kS2, 1e-15);
  EXPECT_NEAR(a(0, 1).real(), 1 / kS2, 1e-15);
  EXPECT_NEAR(a(1, 1).real(), -1 / kS2, 1e-15);
  EXPECT_LT((a * a - Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(MatrixTest, AllElementMatricesUnitary) {
  for (const Matrix& m : {bs_unitary(0.3), atomic_bs_unitary(), cavity_atom_block_unitary(), pr_unitary(),
                          field_pi_block_unitary(), field_half_pi_block_unitary(), dispersive_unitary(),
                          ramsey_unitary(), external_pi_unitary(), phase_unitary(0.7)})
    EXPECT_TRUE(is_unitary(m, 1e-12));
}

TEST(MatrixTest, CavityBlockTransitions) {
  const Register reg({Subsystem::atom_lr("a"), Subsystem::polarization("pol")});
  auto out = [&](std::initializer_list<std::string> in) {
    return apply_unitary(product_state(reg, in), {"a", "pol"}, cavity_atom_block_unitary());
  };
  EXPECT_EQ(out({"L", "L"}).amplitude({"R", "R"}), Complex(1.0));
  EXPECT_EQ(out({"R", "R"}).amplitude({"L", "L"}), Complex(1.0));
  EXPECT_EQ(out({"R", "L"}).amplitude({"R", "L"}), Complex(-1.0));
  EXPECT_EQ(out({"L", "R"}).amplitude({"L", "R"}), Complex(-1.0));
  const Matrix u = cavity_atom_block_unitary();
  EXPECT_LT((u * u - Matrix::Identity(4, 4)).norm(), 1e-15);
}

// The -1 on the mismatched polarization is the uncoupled-cavity reflection.
// Check it by scattering a long pulse off a cavity whose driven transition
// has zero coupling.
TEST(MatrixTest, MismatchedPhaseFromScattering) {
  const PulseParams p{0.0, 1.0, 1.0, 200.0};
  const auto r = integrate_pulse(p);
  const std::size_t mid = r.time_grid.size() / 2;
  double best = 1e9;
  std::size_t at = mid;
  for (std::size_t i = 0; i < r.time_grid.size(); ++i)
    if (std::abs(r.time_grid[i]) < best) best = std::abs(r.time_grid[i]), at = i;
  EXPECT_NEAR(r.f_L_out[at].real() / gaussian_input(r.time_grid[at], p.tau), empty_cavity_phase(1.0), 1e-3);
  EXPECT_NEAR(r.P_flip, 0.0, 1e-15);
  EXPECT_EQ(cavity_atom_block_unitary()(2, 2), Complex(empty_cavity_phase(1.0)));
}

TEST(MatrixTest, PbsRouting) {
  EXPECT_EQ(pbs_route("L"), PbsPort::Transmit);
  EXPECT_EQ(pbs_route("R"), PbsPort::Reflect);
  EXPECT_THROW(pbs_route("g"), InvalidLabelError);
}

TEST(MatrixTest, RotatorAndPiPulses) {
  const Matrix x = pr_unitary();
  EXPECT_LT((x * x - Matrix::Identity(2, 2)).norm(), 1e-15);
  Amplitudes plus(2);
  plus << 1 / kS2, 1 / kS2;
  EXPECT_LT((x * plus - plus).norm(), 1e-15);
  EXPECT_EQ(external_pi_unitary()(1, 0), Complex(1.0));
  const Matrix h = ramsey_unitary();
  EXPECT_LT((h * h - Matrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_NEAR(h(1, 0).real(), 1 / kS2, 1e-15);
}

TEST(MatrixTest, FieldBlocks) {
  // basis (g0, g1, e0, e1)
  const Matrix pi = field_pi_block_unitary();
  EXPECT_EQ(pi(2, 1), Complex(1.0));
  EXPECT_EQ(pi(1, 2), Complex(-1.0));
  EXPECT_EQ(pi(0, 0), Complex(1.0));
  const Matrix half = field_half_pi_block_unitary();
  EXPECT_NEAR(half(1, 1).real(), 1 / kS2, 1e-15);
  EXPECT_NEAR(half(2, 1).real(), 1 / kS2, 1e-15);
  EXPECT_NEAR(half(1, 2).real(), -1 / kS2, 1e-15);
  EXPECT_NEAR(half(2, 2).real(), 1 / kS2, 1e-15);
  // Two half-pi blocks make a pi block on |g,1>.
  Amplitudes g1 = Amplitudes::Zero(4);
  g1(1) = 1.0;
  EXPECT_NEAR(std::abs(((half * half) * g1).dot(pi * g1)), 1.0, 1e-15);
  // Dispersive: diag(1, 1, 1, -1), commutes with the pi block on |g,0>.
  const Matrix d = dispersive_unitary();
  EXPECT_LT((d.diagonal() - Amplitudes::Ones(4) + 2.0 * Amplitudes::Unit(4, 3)).norm(), 1e-15);
  Amplitudes g0 = Amplitudes::Unit(4, 0);
  EXPECT_LT(((d * pi) * g0 - (pi * d) * g0).norm(), 1e-15);
}

TEST(MatrixTest, HalfPiThenExternalPiGivesEntangledPair) {
  const Register reg({Subsystem::atom_ge("a"), Subsystem::field("f")});
  auto s = product_state(reg, {"g", "1"});
  s = apply_element(s, FieldHalfPiBlock{"f", "a", std::nullopt});
  s = apply_element(s, ExternalPiPulse{"a", std::nullopt});
  EXPECT_NEAR(s.amplitude({"g", "0"}).real(), 1 / kS2, 1e-15);
  EXPECT_NEAR(s.amplitude({"e", "1"}).real(), 1 / kS2, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitude({"g", "1"})) + std::abs(s.amplitude({"e", "0"})), 0.0, 1e-15);
}

TEST(ApplyElementTest, PbsSuperpositionRoutesByPolarization) {
  const Register reg({Subsystem::path("path", 2), Subsystem::polarization("pol")});
  const double a = 0.6, b = 0.8;
  Amplitudes v = Amplitudes::Zero(4);
  v(0) = a;  // mode 0, L
  v(1) = b;  // mode 0, R
  const auto out = apply_element(PureState(reg, v), PolarizingBeamSplitter{0, 1});
  EXPECT_NEAR(out.amplitude({"0", "L"}).real(), a, 1e-15);
  EXPECT_NEAR(out.amplitude({"1", "R"}).real(), b, 1e-15);
  EXPECT_NEAR(out.norm(), 1.0, 1e-15);
}

TEST(ApplyElementTest, BeamSplitterOnSinglePhoton) {
  const Register reg({Subsystem::path("path", 3)});
  const auto out = apply_element(product_state(reg, {"2"}), BeamSplitter{0.5, 0, 2, false});
  // input on the bottom port b: (|a> - |b>)/sqrt2
  EXPECT_NEAR(out.amplitude({"0"}).real(), 1 / kS2, 1e-15);
  EXPECT_NEAR(out.amplitude({"2"}).real(), -1 / kS2, 1e-15);
  EXPECT_THROW(apply_element(out, BeamSplitter{0.5, 0, 3, false}), ParameterError);
  EXPECT_THROW(apply_element(out, BeamSplitter{0.5, 1, 1, false}), ParameterError);
}

TEST(ApplyElementTest, PortControlledBlocksOnlyActOnTheirMode) {
  const Register reg({Subsystem::path("path", 2), Subsystem::polarization("pol"), Subsystem::atom_lr("a")});
  // Photon on mode 1 does not see the cavity on mode 0.
  const auto miss = apply_element(product_state(reg, {"1", "L", "L"}), CavityAtomBlock{"a", 0});
  EXPECT_EQ(miss.amplitude({"1", "L", "L"}), Complex(1.0));
  const auto hit = apply_element(product_state(reg, {"0", "L", "L"}), CavityAtomBlock{"a", 0});
  EXPECT_EQ(hit.amplitude({"0", "R", "R"}), Complex(1.0));
  const auto rot = apply_element(product_state(reg, {"1", "L", "L"}), PolarizationRotator{1});
  EXPECT_EQ(rot.amplitude({"1", "R", "L"}), Complex(1.0));
  const auto rot_miss = apply_element(product_state(reg, {"0", "L", "L"}), PolarizationRotator{1});
  EXPECT_EQ(rot_miss.amplitude({"0", "L", "L"}), Complex(1.0));
  const auto ph = apply_element(product_state(reg, {"1", "L", "L"}), PhaseShifter{1, std::numbers::pi / 2});
  EXPECT_NEAR(std::abs(ph.amplitude({"1", "L", "L"}) - Complex(0, 1)), 0.0, 1e-15);
  EXPECT_THROW(apply_element(ph, PhaseShifter{2, 0.1}), ParameterError);
}

TEST(ApplyElementTest, CustomWiringLabels) {
  const Register reg({Subsystem::path("rail", 2), Subsystem::polarization("p")});
  const Wiring w{"rail", "p"};
  const auto out = apply_element(product_state(reg, {"0", "R"}), PolarizingBeamSplitter{0, 1}, w);
  EXPECT_EQ(out.amplitude({"1", "R"}), Complex(1.0));
}

TEST(ApplyElementTest, TwoExcitationSectorIsRejected) {
  const Register reg({Subsystem::atom_ge("a"), Subsystem::field("f")});
  const auto e1 = product_state(reg, {"e", "1"});
  EXPECT_THROW(apply_element(e1, FieldPiBlock{"f", "a", std::nullopt}), InvalidConfigurationError);
  EXPECT_THROW(apply_element(e1, FieldHalfPiBlock{"f", "a", std::nullopt}), InvalidConfigurationError);
  EXPECT_NO_THROW(apply_element(e1, DispersiveBlock{"f", "a", std::nullopt}));
  EXPECT_EQ(apply_element(e1, DispersiveBlock{"f", "a", std::nullopt}).amplitude({"e", "1"}), Complex(-1.0));
}

TEST(ApplyElementTest, GuardIgnoresOtherPorts) {
  const Register reg({Subsystem::path("path", 2), Subsystem::atom_ge("a"), Subsystem::field("f")});
  // |e,1> sits on mode 1; the block on mode 0 never sees it.
  const auto s = product_state(reg, {"1", "e", "1"});
  EXPECT_NO_THROW(apply_element(s, FieldPiBlock{"f", "a", std::size_t{0}}));
  EXPECT_THROW(apply_element(s, FieldPiBlock{"f", "a", std::size_t{1}}), InvalidConfigurationError);
}

TEST(ApplyElementTest, Names) {
  EXPECT_EQ(element_name(BeamSplitter{0.5, 0, 1, true}), "AtomicBS");
  EXPECT_EQ(element_name(BeamSplitter{}), "BS");
  EXPECT_EQ(element_name(DispersiveBlock{}), "DispersiveBlock");
}

}  // namespace
}  // namespace cavnet
