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

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qmask {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

namespace linalg {

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

/// Partial trace of an operator on a tensor product of subsystems with the
/// given dimensions (subsystem 0 is the most significant index). Subsystems
/// with keep[i] == false are traced out; kept ones retain their order.
Matrix partial_trace(const Matrix& m, std::span<const int> dims,
                     const std::vector<bool>& keep);

/// Reorders tensor factors: output factor i is input factor perm[i].
Matrix permute_subsystems(const Matrix& m, std::span<const int> dims,
                          std::span<const int> perm);
Vector permute_subsystems(const Vector& v, std::span<const int> dims,
                          std::span<const int> perm);

/// Largest elementwise modulus.
double max_abs(const Matrix& m);

/// Max elementwise |M - M^dagger|.
double hermiticity_residual(const Matrix& m);

/// Eigenvalues of the Hermitian part of m, ascending. Dimension 1 and 2 and
/// exactly diagonal inputs take closed-form paths.
RealVector hermitian_eigenvalues(const Matrix& m);

struct EigenSystem {
  RealVector values;  // ascending
  Matrix vectors;     // columns
};
EigenSystem hermitian_eigensystem(const Matrix& m);

/// Principal square root of a PSD operator (negative eigenvalues clipped).
Matrix psd_sqrt(const Matrix& m);

/// Matrix log2 of a PSD operator restricted to eigenvalues above `floor`;
/// smaller eigenvalues are mapped to log2(floor).
Matrix psd_log2(const Matrix& m, double floor);

bool is_diagonal(const Matrix& m);

int product(std::span<const int> dims);

}  // namespace linalg
}  // namespace qmask
