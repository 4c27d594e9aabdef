// Copyright 2026 The qmask Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmask/qstate.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "qmask/error.hpp"
#include "support/oracles.hpp"
#include "support/random_objects.hpp"

namespace qmask {
namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

TEST(DensityOperator, RejectsNonUnitTrace) {
  EXPECT_THROW(DensityOperator(diag2(0.5, 0.4)), Error);
  const ValidationReport r = validate_density(diag2(0.5, 0.4));
  EXPECT_TRUE(r.has("unit-trace"));
  EXPECT_NEAR(r.residual("unit-trace"), 0.1, 1e-12);
}

TEST(DensityOperator, RejectsNegativeEigenvalue) {
  const ValidationReport r = validate_density(diag2(1.1, -0.1));
  EXPECT_TRUE(r.has("psd"));
  EXPECT_FALSE(r.has("unit-trace"));
}

TEST(DensityOperator, RejectsNonHermitian) {
  Matrix m = diag2(0.5, 0.5);
  m(0, 1) = 0.1;
  EXPECT_TRUE(validate_density(m).has("hermitian"));
}

TEST(DensityOperator, AcceptsTinyNegativeEigenvalue) {
  EXPECT_NO_THROW(DensityOperator(diag2(1.0 + 5e-10, -5e-10)));
}

TEST(Entropy, MaximallyMixedQubitIsOneBit) {
  EXPECT_NEAR(von_neumann_entropy(DensityOperator::maximally_mixed(2)), 1.0, 1e-12);
}

TEST(Entropy, PureStateIsZero) {
  CounterRng rng(5, 0, 0);
  EXPECT_NEAR(von_neumann_entropy(DensityOperator::pure(testing::random_pure(rng, 4))), 0.0, 1e-10);
}

TEST(Entropy, DiagonalStateMatchesShannon) {
  EXPECT_NEAR(von_neumann_entropy(DensityOperator(diag2(0.75, 0.25))),
              testing::shannon_bits({0.75, 0.25}), 1e-12);
}

TEST(Entropy, BinaryEntropyValues) {
  EXPECT_DOUBLE_EQ(binary_entropy(0.0), 0.0);
  EXPECT_DOUBLE_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.5), 1.0, 1e-15);
  EXPECT_NEAR(binary_entropy(0.25) - 0.5, 0.3112781245, 1e-10);
  EXPECT_THROW(binary_entropy(1.5), Error);
}

TEST(Entropy, RejectsInvalidInput) {
  EXPECT_THROW(von_neumann_entropy(Matrix(diag2(0.6, 0.6))), Error);
  EXPECT_THROW(von_neumann_entropy(Matrix(diag2(1.2, -0.2))), Error);
}

TEST(Povm, CompletenessResidualIsNamed) {
  try {
    Povm({"a", "b"}, {diag2(1.0, 0.0), diag2(0.0, 0.9)});
    FAIL() << "expected a completeness error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("completeness"), std::string::npos);
  }
}

TEST(Povm, LabelsMustBeDistinct) {
  EXPECT_THROW(Povm({"a", "a"}, {diag2(1.0, 0.0), diag2(0.0, 1.0)}), Error);
}

TEST(Povm, BuiltinsAreValid) {
  EXPECT_TRUE(validate(Povm::computational_basis(3)).ok());
  EXPECT_TRUE(validate(Povm::trivial(3)).ok());
  CounterRng rng(6, 0, 0);
  EXPECT_TRUE(validate(Povm::from_basis(testing::random_unitary(rng, 3))).ok());
}

TEST(HybridState, BellPairMutualInformationIsTwoBits) {
  const HybridState bell = maximally_entangled("A", "B", 2);
  EXPECT_NEAR(mutual_information(bell, {"A"}, {"B"}), 2.0, 1e-10);
  EXPECT_NEAR(entropy_of(bell, {"A"}), 1.0, 1e-10);
  EXPECT_NEAR(entropy_of(bell, {"A", "B"}), 0.0, 1e-10);
  EXPECT_NEAR(conditional_entropy(bell, {"A"}, {"B"}), -1.0, 1e-10);
}

TEST(HybridState, ClassicalCopyHasOneBitOfInformation) {
  // X uniform bit, B = |x><x|.
  std::vector<Branch> branches;
  for (int x = 0; x < 2; ++x) branches.push_back({{x}, 0.5, x == 0 ? diag2(1, 0) : diag2(0, 1)});
  const HybridState st({Register::classical("X", 2), Register::quantum("B", 2)}, branches);
  EXPECT_NEAR(mutual_information(st, {"X"}, {"B"}), 1.0, 1e-12);
  EXPECT_NEAR(entropy_of(st, {"X"}), 1.0, 1e-12);
}

TEST(HybridState, WeightsMustSumToOne) {
  std::vector<Branch> branches{{{0}, 0.5, diag2(1, 0)}, {{1}, 0.6, diag2(0, 1)}};
  EXPECT_THROW(HybridState({Register::classical("X", 2), Register::quantum("B", 2)}, branches), Error);
}

TEST(HybridState, ZeroWeightBranchesDropAndOrderIsCanonical) {
  std::vector<Branch> branches{{{1}, 0.5, diag2(0, 1)}, {{2}, 0.0, diag2(1, 0)}, {{0}, 0.5, diag2(1, 0)}};
  const HybridState st({Register::classical("X", 3), Register::quantum("B", 2)}, branches);
  ASSERT_EQ(st.branches().size(), 2u);
  EXPECT_EQ(st.branches()[0].labels[0], 0);
  EXPECT_EQ(st.branches()[1].labels[0], 1);
}

TEST(HybridState, UnknownRegisterIsReported) {
  const HybridState bell = maximally_entangled("A", "B", 2);
  EXPECT_THROW(entropy_of(bell, {"Z"}), Error);
  EXPECT_THROW(mutual_information(bell, {"A"}, {"A"}), Error);
}

TEST(HybridState, PartialTraceOverClassicalMergesBranches) {
  std::vector<Branch> branches;
  for (int x = 0; x < 2; ++x) branches.push_back({{x}, 0.5, x == 0 ? diag2(1, 0) : diag2(0, 1)});
  const HybridState st({Register::classical("X", 2), Register::quantum("B", 2)}, branches);
  const HybridState b = partial_trace(st, {"B"});
  ASSERT_EQ(b.branches().size(), 1u);
  EXPECT_LT(linalg::max_abs(b.branches()[0].state - diag2(0.5, 0.5)), 1e-15);
}

TEST(Purify, ReducedStateRecoversInput) {
  CounterRng rng(7, 0, 0);
  const DensityOperator rho(testing::random_density(rng, 3));
  const Vector psi = purify(rho);
  const Matrix joint = psi * psi.adjoint();
  const std::vector<int> dims{3, 3};
  EXPECT_LT(linalg::max_abs(linalg::partial_trace(joint, dims, {true, false}) - rho.matrix()), 1e-12);
}

TEST(Tensor, EntropyIsAdditive) {
  CounterRng rng(8, 0, 0);
  const HybridState a = HybridState::quantum({Register::quantum("A", 2)}, testing::random_density(rng, 2));
  const HybridState b = HybridState::quantum({Register::quantum("B", 3)}, testing::random_density(rng, 3));
  const HybridState ab = tensor(a, b);
  EXPECT_NEAR(entropy_of(ab, {"A", "B"}), entropy_of(a, {"A"}) + entropy_of(b, {"B"}), 1e-10);
  EXPECT_NEAR(mutual_information(ab, {"A"}, {"B"}), 0.0, 1e-10);
}

}  // namespace
}  // namespace qmask
