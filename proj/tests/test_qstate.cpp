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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cavnet/elements.hpp"
#include "cavnet/qstate.hpp"
#include "test_helpers.hpp"

namespace cavnet {
namespace {

Register two_atoms() { return Register({Subsystem::atom_lr("a1"), Subsystem::atom_lr("a2")}); }

TEST(RegisterTest, MixedRadixFirstSubsystemMostSignificant) {
  const Register reg({Subsystem::atom_lr("a"), Subsystem::path("p", 3)});
  EXPECT_EQ(reg.total_dim(), 6u);
  EXPECT_EQ(reg.index_of(std::vector<std::string>{"R", "2"}), 5u);
  EXPECT_EQ(reg.index_of(std::vector<std::string>{"L", "1"}), 1u);
  for (std::size_t i = 0; i < reg.total_dim(); ++i) {
    const std::vector<std::string> labels{reg[0].basis_label(reg.digit(i, 0)), reg[1].basis_label(reg.digit(i, 1))};
    EXPECT_EQ(reg.index_of(labels), i);
  }
}

TEST(RegisterTest, RejectsDuplicateLabels) {
  EXPECT_THROW(Register({Subsystem::atom_lr("a"), Subsystem::field("a")}), ParameterError);
}

TEST(RegisterTest, KindsFixTheirLabels) {
  EXPECT_EQ(Subsystem::atom_ge("x").basis_label(1), "e");
  EXPECT_EQ(Subsystem::field("x").basis_label(0), "0");
  EXPECT_EQ(Subsystem::polarization("x").basis_label(1), "R");
  EXPECT_EQ(Subsystem::path("x", 4).dim(), 4u);
  EXPECT_THROW(Subsystem::path("x", 1), ParameterError);
}

TEST(ProductStateTest, TwoAtomsLLIsIndexZero) {
  const auto s = product_state(two_atoms(), {"L", "L"});
  EXPECT_EQ(s.amplitude(0), Complex(1.0));
  EXPECT_DOUBLE_EQ(s.norm(), 1.0);
}

TEST(ProductStateTest, AlternatingPreparationOfSixAtoms) {
  std::vector<Subsystem> subs;
  for (int i = 1; i <= 6; ++i) subs.push_back(Subsystem::atom_lr("a" + std::to_string(i)));
  const Register reg(subs);
  const auto s = product_state(reg, {"L", "L", "R", "R", "L", "L"});
  // LLRRLL = 001100b
  EXPECT_EQ(s.amplitude(0b001100), Complex(1.0));
  EXPECT_NEAR(s.amplitudes().cwiseAbs().sum(), 1.0, 1e-15);
}

TEST(ProductStateTest, FieldAndTwoLevelAtom) {
  const Register reg({Subsystem::field("f"), Subsystem::atom_ge("a")});
  const auto s = product_state(reg, {"1", "g"});
  EXPECT_EQ(s.amplitude({"1", "g"}), Complex(1.0));
}

TEST(ProductStateTest, UnknownLabelThrows) {
  EXPECT_THROW(product_state(two_atoms(), {"L", "g"}), InvalidLabelError);
  EXPECT_THROW(product_state(two_atoms(), {"L"}), ShapeError);
}

TEST(ApplyUnitaryTest, IdentityLeavesStateUnchanged) {
  std::mt19937_64 rng(1);
  const auto s = testing::random_state(two_atoms(), rng);
  const auto t = apply_unitary(s, {"a1", "a2"}, Matrix::Identity(4, 4));
  EXPECT_LT(testing::max_abs_diff(s.amplitudes(), t.amplitudes()), 1e-15);
}

TEST(ApplyUnitaryTest, BitFlipOnFirstAtom) {
  const auto s = apply_unitary(product_state(two_atoms(), {"L", "L"}), {"a1"}, pr_unitary());
  EXPECT_EQ(s.amplitude({"R", "L"}), Complex(1.0));
}

TEST(ApplyUnitaryTest, RamseyOnGround) {
  const Register reg({Subsystem::atom_ge("a")});
  const auto s = apply_unitary(product_state(reg, {"g"}), {"a"}, ramsey_unitary());
  EXPECT_NEAR(s.amplitude({"g"}).real(), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(s.amplitude({"e"}).real(), 1.0 / std::numbers::sqrt2, 1e-15);
}

TEST(ApplyUnitaryTest, TargetOrderIsRespected) {
  // CNOT with a2 as control: |L,R> -> |R,R>.
  Matrix cnot = Matrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(3, 2) = cnot(2, 3) = 1.0;
  const auto s = apply_unitary(product_state(two_atoms(), {"L", "R"}), {"a2", "a1"}, cnot);
  EXPECT_EQ(s.amplitude({"R", "R"}), Complex(1.0));
}

TEST(ApplyUnitaryTest, Errors) {
  const auto s = product_state(two_atoms(), {"L", "L"});
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = 2.0;
  EXPECT_THROW(apply_unitary(s, {"a1"}, bad), ContractViolation);
  EXPECT_THROW(apply_unitary(s, {"a1"}, Matrix::Identity(4, 4)), ShapeError);
  EXPECT_THROW(apply_unitary(s, {"a1", "a1"}, Matrix::Identity(4, 4)), ShapeError);
  EXPECT_THROW(apply_unitary(s, {"zz"}, Matrix::Identity(2, 2)), ShapeError);
}

TEST(ProjectTest, DefiniteAndBalancedOutcomes) {
  const Register reg({Subsystem::atom_lr("a")});
  const auto l = product_state(reg, {"L"});
  const auto p1 = project(l, "a", "L");
  EXPECT_DOUBLE_EQ(p1.probability, 1.0);
  ASSERT_TRUE(p1.post_state);
  EXPECT_EQ(p1.post_state->amplitude({"L"}), Complex(1.0));

  const auto plus = apply_unitary(l, {"a"}, ramsey_unitary());
  const auto p2 = project(plus, "a", "R");
  EXPECT_NEAR(p2.probability, 0.5, 1e-15);
  ASSERT_TRUE(p2.post_state);
  EXPECT_NEAR(std::abs(p2.post_state->amplitude({"R"})), 1.0, 1e-15);

  const auto p3 = project(l, "a", "R");
  EXPECT_EQ(p3.probability, 0.0);
  EXPECT_FALSE(p3.post_state);
  EXPECT_THROW(project(l, "a", "1"), InvalidLabelError);
}

TEST(OverlapTest, NormalizationOrthogonalityAndGhzSigns) {
  const auto l = product_state(Register({Subsystem::atom_lr("a")}), {"L"});
  const auto r = product_state(Register({Subsystem::atom_lr("a")}), {"R"});
  EXPECT_EQ(overlap(l, l), Complex(1.0));
  EXPECT_EQ(overlap(l, r), Complex(0.0));

  const Register reg = two_atoms();
  Amplitudes p = Amplitudes::Zero(4), m = Amplitudes::Zero(4);
  p(3) = m(3) = 1.0 / std::numbers::sqrt2;
  p(0) = 1.0 / std::numbers::sqrt2;
  m(0) = -1.0 / std::numbers::sqrt2;
  EXPECT_NEAR(std::abs(overlap(PureState(reg, p), PureState(reg, m))), 0.0, 1e-15);
  EXPECT_THROW(overlap(l, PureState(reg, p)), ShapeError);
}

TEST(RemoveSubsystemTest, DropsProductFactorAndRejectsEntangled) {
  const Register reg({Subsystem::atom_lr("a"), Subsystem::polarization("p")});
  // (|L> + i|R>)/sqrt2 (x) |R>
  Amplitudes v = Amplitudes::Zero(4);
  v(1) = 1.0 / std::numbers::sqrt2;
  v(3) = Complex(0.0, 1.0 / std::numbers::sqrt2);
  const auto reduced = remove_subsystem(PureState(reg, v), "p");
  EXPECT_EQ(reduced.reg().size(), 1u);
  EXPECT_NEAR(std::abs(reduced.amplitude({"R"}) / reduced.amplitude({"L"}) - Complex(0, 1)), 0.0, 1e-15);

  Amplitudes bell = Amplitudes::Zero(4);
  bell(0) = bell(3) = 1.0 / std::numbers::sqrt2;
  EXPECT_THROW(remove_subsystem(PureState(reg, bell), "p"), ContractViolation);
}

// Randomized properties over heterogeneous registers, 1000 cases each.
class QStateProperties : public ::testing::Test {
 protected:
  Register reg_{{Subsystem::atom_lr("a"), Subsystem::path("p", 3), Subsystem::field("f"), Subsystem::atom_ge("g")}};
  std::mt19937_64 rng_{20261018};

  std::vector<std::string> random_targets(std::size_t count) {
    std::vector<std::string> labels{"a", "p", "f", "g"};
    std::shuffle(labels.begin(), labels.end(), rng_);
    labels.resize(count);
    return labels;
  }

  Eigen::Index joint_dim(const std::vector<std::string>& t) const {
    Eigen::Index d = 1;
    for (const auto& l : t) d *= static_cast<Eigen::Index>(reg_.at(l).dim());
    return d;
  }
};

TEST_F(QStateProperties, NormPreservation) {
  std::uniform_int_distribution<std::size_t> k(1, 3);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = testing::random_state(reg_, rng_);
    const auto t = random_targets(k(rng_));
    const auto out = apply_unitary(s, t, testing::random_unitary(joint_dim(t), rng_));
    ASSERT_NEAR(out.norm(), 1.0, 1e-9);
  }
}

TEST_F(QStateProperties, CompositionWithAdjointIsIdentity) {
  std::uniform_int_distribution<std::size_t> k(1, 3);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = testing::random_state(reg_, rng_);
    const auto t = random_targets(k(rng_));
    const Matrix u = testing::random_unitary(joint_dim(t), rng_);
    const auto back = apply_unitary(apply_unitary(s, t, u), t, u.adjoint());
    ASSERT_LT(testing::max_abs_diff(back.amplitudes(), s.amplitudes()), 1e-9);
  }
}

TEST_F(QStateProperties, ProbabilityCompleteness) {
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = testing::random_state(reg_, rng_);
    for (const auto& sub : reg_.subsystems()) {
      double total = 0.0;
      for (std::size_t i = 0; i < sub.dim(); ++i) total += project(s, sub.label(), sub.basis_label(i)).probability;
      ASSERT_NEAR(total, 1.0, 1e-9);
    }
  }
}

TEST_F(QStateProperties, DisjointUnitariesCommute) {
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = testing::random_state(reg_, rng_);
    auto labels = random_targets(4);
    const std::vector<std::string> t1(labels.begin(), labels.begin() + 2), t2(labels.begin() + 2, labels.end());
    const Matrix u1 = testing::random_unitary(joint_dim(t1), rng_);
    const Matrix u2 = testing::random_unitary(joint_dim(t2), rng_);
    const auto a = apply_unitary(apply_unitary(s, t1, u1), t2, u2);
    const auto b = apply_unitary(apply_unitary(s, t2, u2), t1, u1);
    ASSERT_LT(testing::max_abs_diff(a.amplitudes(), b.amplitudes()), 1e-9);
  }
}

}  // namespace
}  // namespace cavnet
