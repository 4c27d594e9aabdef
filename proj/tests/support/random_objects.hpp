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

#pragma once

// Seeded generators for random states, channels and POVMs used across the
// unit and property tests.

#include <Eigen/QR>

#include "qmask/channels.hpp"
#include "qmask/rng.hpp"

namespace qmask::testing {

inline Matrix random_ginibre(CounterRng& rng, int rows, int cols) {
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  }
  return g;
}

inline Matrix random_unitary(CounterRng& rng, int dim) {
  Eigen::HouseholderQR<Matrix> qr(random_ginibre(rng, dim, dim));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

inline Vector random_pure(CounterRng& rng, int dim) {
  Vector v = random_ginibre(rng, dim, 1).col(0);
  return v / v.norm();
}

/// Random density matrix of the given rank (full rank when rank <= 0).
inline Matrix random_density(CounterRng& rng, int dim, int rank = 0) {
  const int r = rank <= 0 ? dim : rank;
  const Matrix g = random_ginibre(rng, dim, r);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

/// Kraus operators from the blocks of a random isometry.
inline std::vector<Matrix> random_kraus(CounterRng& rng, int dim_in, int dim_out, int count) {
  // Needs dim_out * count >= dim_in for the isometry to exist.
  const Matrix u = random_unitary(rng, dim_out * count);
  const Matrix iso = u.leftCols(dim_in);
  std::vector<Matrix> out;
  for (int k = 0; k < count; ++k) out.push_back(iso.middleRows(k * dim_out, dim_out));
  return out;
}

inline StateDependentChannel random_channel(CounterRng& rng, int de, int da, int db, int count) {
  return StateDependentChannel(de, da, db, random_kraus(rng, de * da, db, count));
}

inline Povm random_povm(CounterRng& rng, int dim, int outcomes) {
  const auto kraus = random_kraus(rng, dim, dim, outcomes);
  std::vector<Matrix> elements;
  std::vector<std::string> labels;
  for (int k = 0; k < outcomes; ++k) {
    elements.push_back(kraus[k].adjoint() * kraus[k]);
    labels.push_back(std::to_string(k));
  }
  return Povm(labels, elements);
}

/// Two-outcome measurement channel with Lambda_0 = U diag(u) U^dagger.
inline MeasurementChannel random_binary_measurement(CounterRng& rng, int de, int da) {
  const int d = de * da;
  const Matrix u = random_unitary(rng, d);
  RealVector diag(d);
  for (int i = 0; i < d; ++i) diag(i) = rng.uniform();
  Matrix l0 = u * diag.cast<cplx>().asDiagonal() * u.adjoint();
  l0 = 0.5 * (l0 + l0.adjoint()).eval();
  const Matrix l1 = Matrix::Identity(d, d) - l0;
  return MeasurementChannel(de, da, Povm({"0", "1"}, {l0, l1}));
}

inline StateSource random_source(CounterRng& rng, int de0, int de, int dc) {
  return StateSource(de0, de, dc, random_pure(rng, de0 * de * dc));
}

}  // namespace qmask::testing
