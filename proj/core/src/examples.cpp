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

#include "qmask/examples.hpp"

#include <cmath>

#include "qmask/error.hpp"

namespace qmask::examples {

namespace {

Vector basis(int dim, int i) {
  Vector v = Vector::Zero(dim);
  v(i) = 1.0;
  return v;
}

Vector default_psi(const Vector& psi) { return psi.size() == 0 ? basis(2, 0) : psi; }

Vector orthogonal(const Vector& psi) {
  Vector perp(2);
  perp << -std::conj(psi(1)), std::conj(psi(0));
  return perp;
}

void check_psi(const Vector& psi) {
  if (psi.size() != 2 || std::abs(psi.norm() - 1.0) > kSourceNormTol) {
    throw Error(ErrorKind::kInvalidArgument, "psi must be a unit vector on a qubit");
  }
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 0.5)) {
    throw Error(ErrorKind::kInvalidArgument, "alpha must lie in [0, 1/2]");
  }
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "epsilon must lie in (0, 1]");
  }
}

}  // namespace

std::vector<Matrix> pauli_matrices() {
  const cplx i(0.0, 1.0);
  Matrix id = Matrix::Identity(2, 2);
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  y << 0.0, -i, i, 0.0;
  z << 1.0, 0.0, 0.0, -1.0;
  return {id, x, y, z};
}

RandomParameterChannel build_depolarizing(double epsilon) {
  check_epsilon(epsilon);
  const auto paulis = pauli_matrices();
  std::vector<std::vector<Matrix>> branches;
  for (const auto& p : paulis) branches.push_back({p});
  const double e4 = epsilon / 4.0;
  return RandomParameterChannel({"I", "X", "Y", "Z"}, {1.0 - 3.0 * e4, e4, e4, e4},
                                std::move(branches));
}

RandomParameterChannel build_projection(double epsilon, const Vector& psi_in) {
  check_epsilon(epsilon);
  const Vector psi = default_psi(psi_in);
  check_psi(psi);
  std::vector<Matrix> replace;
  for (int i = 0; i < 2; ++i) replace.push_back(psi * basis(2, i).adjoint());
  return RandomParameterChannel({"0", "1"}, {1.0 - epsilon, epsilon},
                                {{Matrix::Identity(2, 2)}, replace});
}

Strategy projection_strategy(double alpha, const Vector& psi_in) {
  check_alpha(alpha);
  const Vector psi = default_psi(psi_in);
  check_psi(psi);
  RealMatrix pmf(2, 2);
  pmf << 1.0 - alpha, alpha, 1.0, 0.0;
  return Strategy(Povm::computational_basis(2), pmf,
                  {DensityOperator::pure(psi), DensityOperator::pure(orthogonal(psi))});
}

RateLeakagePoint projection_analytic(double epsilon, double alpha) {
  check_epsilon(epsilon);
  check_alpha(alpha);
  const double keep = 1.0 - epsilon;
  RateLeakagePoint point;
  point.rate_unclamped = keep * binary_entropy(alpha);
  point.rate = point.rate_unclamped;
  point.leakage = binary_entropy(keep * alpha) - keep * binary_entropy(alpha);
  point.provenance = "analytic";
  return point;
}

AnalyticCurve projection_curve(double epsilon, int points) {
  if (points < 2) throw Error(ErrorKind::kInvalidArgument, "curve needs at least two points");
  AnalyticCurve curve;
  curve.epsilon = epsilon;
  for (int k = 0; k < points; ++k) {
    const double alpha = 0.5 * k / (points - 1);
    const auto p = projection_analytic(epsilon, alpha);
    curve.alpha.push_back(alpha);
    curve.rate.push_back(p.rate);
    curve.leakage.push_back(p.leakage);
  }
  return curve;
}

MeasurementExample projection_measurement(double epsilon) {
  check_epsilon(epsilon);
  const Matrix e0 = basis(2, 0) * basis(2, 0).adjoint();
  const Matrix e1 = basis(2, 1) * basis(2, 1).adjoint();
  Matrix l0 = linalg::kron(e0, e0) + linalg::kron(e1, Matrix::Identity(2, 2));
  Matrix l1 = linalg::kron(e0, e1);
  Vector ghz = Vector::Zero(8);
  ghz(0) = std::sqrt(1.0 - epsilon);
  ghz(7) = std::sqrt(epsilon);
  return MeasurementExample{MeasurementChannel(2, 2, Povm({"0", "1"}, {l0, l1})),
                            StateSource(2, 2, 2, ghz)};
}

Strategy depolarizing_correction_strategy() {
  const auto paulis = pauli_matrices();
  RealMatrix pmf = RealMatrix::Zero(4, 8);
  std::vector<DensityOperator> states;
  for (int b = 0; b < 2; ++b) {
    for (int s = 0; s < 4; ++s) {
      pmf(s, b * 4 + s) = 0.5;
      states.push_back(DensityOperator::pure(paulis[s] * basis(2, b)));
    }
  }
  return Strategy(Povm::computational_basis(4), pmf, std::move(states));
}

CorrectionEncoder depolarizing_correction_encoder(int n, std::uint64_t messages) {
  return CorrectionEncoder(n, messages);
}

}  // namespace qmask::examples
