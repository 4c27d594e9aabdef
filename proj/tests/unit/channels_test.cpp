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

#include "qmask/channels.hpp"

#include <gtest/gtest.h>

#include "qmask/error.hpp"
#include "qmask/examples.hpp"
#include "support/random_objects.hpp"

namespace qmask {
namespace {

Matrix diag(std::initializer_list<double> values) {
  Matrix m = Matrix::Zero(values.size(), values.size());
  int i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

TEST(Apply, IdentityChannelLeavesInputUnchanged) {
  CounterRng rng(10, 0, 0);
  const Matrix rho = testing::random_density(rng, 2);
  const HybridState in = HybridState::quantum({Register::quantum("A", 2)}, rho);
  const HybridState out = apply(StateDependentChannel::identity(2), in);
  ASSERT_TRUE(out.has_register("B"));
  EXPECT_LT(linalg::max_abs(out.branches()[0].state - rho), 1e-15);
}

TEST(Apply, KeepsOtherRegistersAndReordersOutput) {
  CounterRng rng(11, 0, 0);
  const auto channel = testing::random_channel(rng, 2, 2, 3, 3);
  const Matrix rho_c = testing::random_density(rng, 2);
  const Matrix rho_ea = testing::random_density(rng, 4);
  // Registers C, E, A: output B takes E's slot, after C.
  const Matrix joint = linalg::kron(rho_c, rho_ea);
  const HybridState in = HybridState::quantum(
      {Register::quantum("C", 2), Register::quantum("E", 2), Register::quantum("A", 2)}, joint);
  const HybridState out = apply(channel, in);
  ASSERT_EQ(out.quantum_names(), (std::vector<std::string>{"C", "B"}));
  const Matrix expect = linalg::kron(rho_c, channel.apply(rho_ea));
  EXPECT_LT(linalg::max_abs(out.branches()[0].state - expect), 1e-12);
}

TEST(Apply, DimensionMismatchIsAnError) {
  const HybridState in = HybridState::quantum({Register::quantum("A", 3)}, Matrix(Matrix::Identity(3, 3) / 3.0));
  EXPECT_THROW(apply(StateDependentChannel::identity(2), in), Error);
}

TEST(Apply, PauliBranchOneConjugatesByX) {
  CounterRng rng(12, 0, 0);
  const auto rpc = examples::build_depolarizing(0.5);
  const Matrix rho = testing::random_density(rng, 2);
  const Matrix x = examples::pauli_matrices()[1];
  EXPECT_LT(linalg::max_abs(rpc.apply_branch(1, rho) - x * rho * x), 1e-15);
}

TEST(Apply, DepolarizingAverage) {
  CounterRng rng(13, 0, 0);
  for (double eps : {0.1, 0.5, 1.0}) {
    const auto rpc = examples::build_depolarizing(eps);
    const Matrix rho = testing::random_density(rng, 2);
    const Matrix expect = (1.0 - eps) * rho + eps * Matrix::Identity(2, 2) / 2.0;
    EXPECT_LT(linalg::max_abs(rpc.apply_average(rho) - expect), 1e-12);
  }
}

TEST(Channel, NonTracePreservingKrausRejected) {
  EXPECT_THROW(StateDependentChannel(1, 2, 2, {Matrix(0.9 * Matrix::Identity(2, 2))}), Error);
}

TEST(ApplyMeasurement, TrivialPovmKeepsWeight) {
  const MeasurementChannel m(1, 2, Povm::trivial(2));
  const HybridState in = HybridState::quantum({Register::quantum("A", 2)}, diag({0.3, 0.7}));
  const HybridState out = apply_measurement(m, in);
  ASSERT_EQ(out.branches().size(), 1u);
  EXPECT_NEAR(out.branches()[0].weight, 1.0, 1e-15);
}

TEST(ApplyMeasurement, MaximallyMixedGivesUniformBit) {
  const MeasurementChannel m(1, 2, Povm::computational_basis(2));
  const HybridState in = HybridState::quantum({Register::quantum("A", 2)}, diag({0.5, 0.5}));
  const HybridState out = apply_measurement(m, in);
  ASSERT_EQ(out.branches().size(), 2u);
  EXPECT_NEAR(entropy_of(out, {"Y"}), 1.0, 1e-12);
}

TEST(ApplyMeasurement, BornProbabilities) {
  const MeasurementChannel m(1, 2, Povm::computational_basis(2));
  const HybridState in = HybridState::quantum({Register::quantum("A", 2)}, diag({0.75, 0.25}));
  const HybridState out = apply_measurement(m, in);
  ASSERT_EQ(out.branches().size(), 2u);
  EXPECT_NEAR(out.branches()[0].weight, 0.75, 1e-15);
  EXPECT_NEAR(out.branches()[1].weight, 0.25, 1e-15);
}

TEST(ApplyMeasurement, ConditionalStateMatchesSquareRootUpdate) {
  // Tr_EA(sqrt(L) rho sqrt(L)) and Tr_EA(L rho) coincide for every POVM.
  CounterRng rng(14, 0, 0);
  const Povm povm = testing::random_povm(rng, 4, 3);
  const MeasurementChannel m(2, 2, povm);
  const Matrix rho = testing::random_density(rng, 8);
  const HybridState in = HybridState::quantum(
      {Register::quantum("E", 2), Register::quantum("A", 2), Register::quantum("C", 2)}, rho);
  const HybridState out = apply_measurement(m, in);
  const std::vector<int> dims{4, 2};
  for (const auto& b : out.branches()) {
    const Matrix root = linalg::kron(linalg::psd_sqrt(povm.element(b.labels[0])), Matrix::Identity(2, 2));
    const Matrix sandwich = linalg::partial_trace(root * rho * root, dims, {false, true});
    EXPECT_LT(linalg::max_abs(b.weight * b.state - sandwich), 1e-12);
  }
}

TEST(ApplyMeasurement, OperatorSumFormGivesSameDistribution) {
  CounterRng rng(15, 0, 0);
  const MeasurementChannel m(2, 2, testing::random_povm(rng, 4, 3));
  const Matrix rho = testing::random_density(rng, 4);
  const auto probs = m.probabilities(rho);
  const Matrix out = m.as_kraus().apply(rho);
  for (int y = 0; y < 3; ++y) EXPECT_NEAR(out(y, y).real(), probs[y], 1e-12);
  EXPECT_LT(linalg::max_abs(out - Matrix(out.diagonal().asDiagonal())), 1e-12);
}

TEST(Lift, SingleStateChannelIgnoresSource) {
  CounterRng rng(16, 0, 0);
  const auto kraus = testing::random_kraus(rng, 2, 2, 2);
  const RandomParameterChannel rpc({"only"}, {1.0}, {kraus});
  const auto [channel, source] = lift_random_parameter(rpc);
  EXPECT_EQ(source.dim_e0(), 1);
  const Matrix rho = testing::random_density(rng, 2);
  EXPECT_LT(linalg::max_abs(channel.apply(rho) - rpc.apply_branch(0, rho)), 1e-12);
}

TEST(Lift, DepolarizingAtFullStrengthIsUniform) {
  const auto rpc = examples::build_depolarizing(1.0);
  for (double q : rpc.q()) EXPECT_DOUBLE_EQ(q, 0.25);
}

TEST(Lift, ProjectionBranches) {
  const auto rpc = examples::build_projection(0.3);
  EXPECT_DOUBLE_EQ(rpc.q()[0], 0.7);
  EXPECT_DOUBLE_EQ(rpc.q()[1], 0.3);
  CounterRng rng(17, 0, 0);
  const Matrix rho = testing::random_density(rng, 2);
  EXPECT_LT(linalg::max_abs(rpc.apply_branch(0, rho) - rho), 1e-15);
  EXPECT_LT(linalg::max_abs(rpc.apply_branch(1, rho) - diag({1.0, 0.0})), 1e-12);
}

TEST(Lift, MatchesBranchAverage) {
  CounterRng rng(18, 0, 0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<Matrix>> branches;
    for (int s = 0; s < 3; ++s) branches.push_back(testing::random_kraus(rng, 2, 3, 2));
    const RandomParameterChannel rpc({"a", "b", "c"}, {0.2, 0.5, 0.3}, branches);
    const auto [channel, source] = lift_random_parameter(rpc);
    const Matrix rho = testing::random_density(rng, 2);
    const std::vector<int> dims{source.dim_e0(), source.dim_e(), source.dim_c()};
    const Matrix sigma_e = linalg::partial_trace(source.density(), dims, {false, true, false});
    EXPECT_LT(linalg::max_abs(channel.apply(linalg::kron(sigma_e, rho)) - rpc.apply_average(rho)), 1e-9);
  }
}

TEST(Product, OneLetterIsTheSameChannel) {
  CounterRng rng(19, 0, 0);
  const auto ch = testing::random_channel(rng, 2, 2, 2, 2);
  const auto p = product_channel(ch, 1);
  ASSERT_EQ(p.kraus().size(), ch.kraus().size());
  for (std::size_t k = 0; k < ch.kraus().size(); ++k) {
    EXPECT_EQ(linalg::max_abs(p.kraus()[k] - ch.kraus()[k]), 0.0);
  }
}

TEST(Product, TwoLetterIdentity) {
  const auto p = product_channel(StateDependentChannel::identity(2), 2);
  EXPECT_EQ(p.dim_a(), 4);
  EXPECT_LT(linalg::max_abs(p.kraus()[0] - Matrix::Identity(4, 4)), 1e-15);
}

TEST(Product, TwoLetterActsAsTensorProduct) {
  CounterRng rng(20, 0, 0);
  const auto ch = testing::random_channel(rng, 2, 2, 2, 2);
  const auto p = product_channel(ch, 2);
  const Matrix a = testing::random_density(rng, 4);  // E1 A1
  const Matrix b = testing::random_density(rng, 4);  // E2 A2
  // Product inputs are ordered E1 E2 A1 A2.
  const std::vector<int> dims{2, 2, 2, 2};
  const std::vector<int> perm{0, 2, 1, 3};
  const Matrix joint = linalg::permute_subsystems(linalg::kron(a, b), dims, perm);
  EXPECT_LT(linalg::max_abs(p.apply(joint) - linalg::kron(ch.apply(a), ch.apply(b))), 1e-12);
}

TEST(Product, MeasurementAnalogHasProductWeights) {
  const auto ex = examples::projection_measurement(0.5);
  const auto p = product_channel(ex.channel, 2);
  EXPECT_EQ(p.num_outcomes(), 4);
  CounterRng rng(21, 0, 0);
  const Matrix a = testing::random_density(rng, 4);
  const Matrix b = testing::random_density(rng, 4);
  const auto pa = ex.channel.probabilities(a);
  const auto pb = ex.channel.probabilities(b);
  const std::vector<int> dims{2, 2, 2, 2};
  const std::vector<int> perm{0, 2, 1, 3};
  const auto pab = p.probabilities(linalg::permute_subsystems(linalg::kron(a, b), dims, perm));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(pab[i * 2 + j], pa[i] * pb[j], 1e-12);
  }
}

TEST(Product, CapsNameTheLimit) {
  try {
    product_channel(StateDependentChannel::identity(2), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSizeLimit);
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
  const auto ex = examples::projection_measurement(0.5);
  EXPECT_THROW(product_channel(ex.channel, 11), Error);
  EXPECT_THROW(product_channel(ex.channel, 4), Error);  // 4^4 exceeds the materialized cap
}

TEST(Source, RejectsNonUnitVector) {
  EXPECT_THROW(StateSource(1, 1, 2, Vector::Ones(2)), Error);
}

}  // namespace
}  // namespace qmask
