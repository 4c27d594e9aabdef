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

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "qmask/error.hpp"

namespace qmask {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidState: return "invalid-state";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kUnknownRegister: return "unknown-register";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kSizeLimit: return "size-limit";
    case ErrorKind::kInfeasible: return "infeasible";
  }
  return "unknown";
}

namespace linalg {

int product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

namespace {

// Splits every flat index into (kept multi-index, traced multi-index), both
// flattened in the original significance order.
struct IndexSplit {
  std::vector<int> kept;
  std::vector<int> traced;
  int kept_dim = 1;
  int traced_dim = 1;
};

IndexSplit split_indices(std::span<const int> dims, const std::vector<bool>& keep) {
  IndexSplit split;
  const int total = product(dims);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    (keep[i] ? split.kept_dim : split.traced_dim) *= dims[i];
  }
  split.kept.resize(total);
  split.traced.resize(total);
  std::vector<int> digits(dims.size());
  for (int flat = 0; flat < total; ++flat) {
    int rem = flat;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
      digits[k] = rem % dims[k];
      rem /= dims[k];
    }
    int kept = 0;
    int traced = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (keep[k]) {
        kept = kept * dims[k] + digits[k];
      } else {
        traced = traced * dims[k] + digits[k];
      }
    }
    split.kept[flat] = kept;
    split.traced[flat] = traced;
  }
  return split;
}

std::vector<int> permutation_map(std::span<const int> dims,
                                 std::span<const int> perm) {
  const int total = product(dims);
  const std::size_t n = dims.size();
  std::vector<int> out_dims(n);
  for (std::size_t i = 0; i < n; ++i) out_dims[i] = dims[perm[i]];
  std::vector<int> map(total);
  std::vector<int> digits(n);
  for (int flat = 0; flat < total; ++flat) {
    int rem = flat;
    for (int k = static_cast<int>(n) - 1; k >= 0; --k) {
      digits[k] = rem % dims[k];
      rem /= dims[k];
    }
    int out = 0;
    for (std::size_t i = 0; i < n; ++i) out = out * out_dims[i] + digits[perm[i]];
    map[flat] = out;
  }
  return map;
}

}  // namespace

Matrix partial_trace(const Matrix& m, std::span<const int> dims,
                     const std::vector<bool>& keep) {
  const int total = product(dims);
  if (m.rows() != total || m.cols() != total || keep.size() != dims.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "partial_trace: operator dimension does not match subsystem dims");
  }
  const IndexSplit split = split_indices(dims, keep);
  // rows[t][k] = flat index with traced part t and kept part k
  std::vector<std::vector<int>> rows(split.traced_dim,
                                     std::vector<int>(split.kept_dim));
  for (int flat = 0; flat < total; ++flat) {
    rows[split.traced[flat]][split.kept[flat]] = flat;
  }
  Matrix out = Matrix::Zero(split.kept_dim, split.kept_dim);
  for (int t = 0; t < split.traced_dim; ++t) {
    const auto& idx = rows[t];
    for (int a = 0; a < split.kept_dim; ++a) {
      for (int b = 0; b < split.kept_dim; ++b) {
        out(a, b) += m(idx[a], idx[b]);
      }
    }
  }
  return out;
}

Matrix permute_subsystems(const Matrix& m, std::span<const int> dims,
                          std::span<const int> perm) {
  const auto map = permutation_map(dims, perm);
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out(map[i], map[j]) = m(i, j);
    }
  }
  return out;
}

Vector permute_subsystems(const Vector& v, std::span<const int> dims,
                          std::span<const int> perm) {
  const auto map = permutation_map(dims, perm);
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(map[i]) = v(i);
  return out;
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m - m.adjoint());
}

bool is_diagonal(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j && m(i, j) != cplx(0.0, 0.0)) return false;
    }
  }
  return true;
}

RealVector hermitian_eigenvalues(const Matrix& m) {
  const Eigen::Index n = m.rows();
  RealVector values(n);
  if (n == 1) {
    values(0) = m(0, 0).real();
    return values;
  }
  if (is_diagonal(m)) {
    for (Eigen::Index i = 0; i < n; ++i) values(i) = m(i, i).real();
    std::sort(values.begin(), values.end());
    return values;
  }
  if (n == 2) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const cplx b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(b));
    values(0) = mean - radius;
    values(1) = mean + radius;
    return values;
  }
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

EigenSystem hermitian_eigensystem(const Matrix& m) {
  const Eigen::Index n = m.rows();
  if (is_diagonal(m)) {
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
      return m(i, i).real() < m(j, j).real();
    });
    EigenSystem sys{RealVector(n), Matrix::Zero(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
      sys.values(k) = m(order[k], order[k]).real();
      sys.vectors(order[k], k) = 1.0;
    }
    return sys;
  }
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix psd_sqrt(const Matrix& m) {
  const EigenSystem sys = hermitian_eigensystem(m);
  RealVector roots = sys.values.cwiseMax(0.0).cwiseSqrt();
  return sys.vectors * roots.asDiagonal() * sys.vectors.adjoint();
}

Matrix psd_log2(const Matrix& m, double floor) {
  const EigenSystem sys = hermitian_eigensystem(m);
  RealVector logs(sys.values.size());
  for (Eigen::Index i = 0; i < logs.size(); ++i) {
    logs(i) = std::log2(std::max(sys.values(i), floor));
  }
  return sys.vectors * logs.asDiagonal() * sys.vectors.adjoint();
}

}  // namespace linalg
}  // namespace qmask
