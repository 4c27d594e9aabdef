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

#include "qmask/linalg.hpp"

#include <gtest/gtest.h>

#include "support/random_objects.hpp"

namespace qmask {
namespace {

TEST(Linalg, KronOfBasisVectorsPlacesOneEntry) {
  Vector a = Vector::Zero(2);
  Vector b = Vector::Zero(3);
  a(1) = 1.0;
  b(2) = 1.0;
  const Vector k = linalg::kron(a, b);
  ASSERT_EQ(k.size(), 6);
  EXPECT_EQ(k(5), cplx(1.0, 0.0));
  EXPECT_DOUBLE_EQ(k.norm(), 1.0);
}

TEST(Linalg, PartialTraceOfProductKeepsFactor) {
  CounterRng rng(1, 0, 0);
  const Matrix a = testing::random_density(rng, 2);
  const Matrix b = testing::random_density(rng, 3);
  const std::vector<int> dims{2, 3};
  EXPECT_LT(linalg::max_abs(linalg::partial_trace(linalg::kron(a, b), dims, {true, false}) - a), 1e-14);
  EXPECT_LT(linalg::max_abs(linalg::partial_trace(linalg::kron(a, b), dims, {false, true}) - b), 1e-14);
}

TEST(Linalg, PermuteSwapsFactors) {
  CounterRng rng(2, 0, 0);
  const Matrix a = testing::random_density(rng, 2);
  const Matrix b = testing::random_density(rng, 3);
  const std::vector<int> dims{2, 3};
  const std::vector<int> swap{1, 0};
  EXPECT_LT(linalg::max_abs(linalg::permute_subsystems(linalg::kron(a, b), dims, swap) -
                            linalg::kron(b, a)),
            1e-14);
  const Vector u = testing::random_pure(rng, 2);
  const Vector v = testing::random_pure(rng, 3);
  EXPECT_LT((linalg::permute_subsystems(linalg::kron(u, v), dims, swap) - linalg::kron(v, u)).norm(),
            1e-14);
}

TEST(Linalg, EigenvaluesMatchSolverOnRandomHermitian) {
  CounterRng rng(3, 0, 0);
  for (int d = 1; d <= 5; ++d) {
    const Matrix g = testing::random_ginibre(rng, d, d);
    const Matrix h = g + g.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    const RealVector ours = linalg::hermitian_eigenvalues(h);
    RealVector ref = solver.eigenvalues();
    RealVector sorted = ours;
    std::sort(sorted.data(), sorted.data() + sorted.size());
    EXPECT_LT((sorted - ref).cwiseAbs().maxCoeff(), 1e-10) << "dim " << d;
  }
}

TEST(Linalg, SqrtAndLogOfDiagonal) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.25;
  m(1, 1) = 4.0;
  const Matrix s = linalg::psd_sqrt(m);
  EXPECT_NEAR(s(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(s(1, 1).real(), 2.0, 1e-15);
  const Matrix l = linalg::psd_log2(m, 1e-300);
  EXPECT_NEAR(l(0, 0).real(), -2.0, 1e-15);
  EXPECT_NEAR(l(1, 1).real(), 2.0, 1e-15);
}

TEST(Linalg, SqrtSquaresBack) {
  CounterRng rng(4, 0, 0);
  const Matrix rho = testing::random_density(rng, 4);
  const Matrix s = linalg::psd_sqrt(rho);
  EXPECT_LT(linalg::max_abs(s * s - rho), 1e-12);
}

}  // namespace
}  // namespace qmask
