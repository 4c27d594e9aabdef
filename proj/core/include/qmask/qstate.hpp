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

// Classical-quantum state algebra. Every entropy is reported in bits.

#include <span>
#include <string>
#include <vector>

#include "qmask/linalg.hpp"

namespace qmask {

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kCompletenessTol = 1e-9;
inline constexpr double kWeightTol = 1e-10;

struct Violation {
  std::string invariant;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& invariant) const;
  double residual(const std::string& invariant) const;
  std::string to_string() const;
};

class DensityOperator {
 public:
  /// Throws Error(kInvalidState) naming the violated invariants.
  explicit DensityOperator(Matrix matrix);

  static DensityOperator pure(const Vector& psi);
  static DensityOperator maximally_mixed(int dim);
  static DensityOperator diagonal(std::span<const double> probs);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }

 private:
  Matrix matrix_;
};

class Povm {
 public:
  Povm(std::vector<std::string> labels, std::vector<Matrix> elements);

  static Povm computational_basis(int dim);
  static Povm trivial(int dim);
  static Povm from_basis(const Matrix& unitary);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Matrix>& elements() const { return elements_; }
  const Matrix& element(int i) const { return elements_[i]; }

 private:
  std::vector<std::string> labels_;
  std::vector<Matrix> elements_;
  int dim_ = 0;
};

struct Register {
  enum class Kind { kClassical, kQuantum };

  std::string name;
  Kind kind = Kind::kQuantum;
  std::vector<std::string> alphabet;  // classical only
  int dim = 1;                        // quantum only

  static Register classical(std::string name, std::vector<std::string> alphabet);
  static Register classical(std::string name, int size);
  static Register quantum(std::string name, int dim);

  bool is_classical() const { return kind == Kind::kClassical; }
  bool operator==(const Register&) const = default;
};

struct Branch {
  std::vector<int> labels;  // one alphabet index per classical register
  double weight = 0.0;
  Matrix state;             // over the quantum registers, in register order
};

/// sum_b w_b |labels_b><labels_b| (x) rho_b. Branches are kept sorted by
/// label tuple; zero-weight branches are dropped.
class HybridState {
 public:
  HybridState(std::vector<Register> registers, std::vector<Branch> branches);

  /// Skips PSD checks of branch states; used on outputs of maps that are
  /// valid by construction.
  static HybridState trusted(std::vector<Register> registers,
                             std::vector<Branch> branches);

  /// One-branch state with no classical registers.
  static HybridState quantum(std::vector<Register> registers, Matrix state);
  static HybridState quantum(std::vector<Register> registers,
                             const DensityOperator& state);

  const std::vector<Register>& registers() const { return registers_; }
  const std::vector<Branch>& branches() const { return branches_; }

  int register_index(const std::string& name) const;  // -1 if absent
  bool has_register(const std::string& name) const {
    return register_index(name) >= 0;
  }
  const Register& reg(const std::string& name) const;

  std::vector<int> quantum_dims() const;
  std::vector<std::string> quantum_names() const;
  std::vector<std::string> classical_names() const;
  int quantum_dim() const;

  /// Position of a quantum register within the tensor product.
  int quantum_position(const std::string& name) const;

  bool operator==(const HybridState& other) const;

 private:
  HybridState() = default;
  void canonicalize();

  std::vector<Register> registers_;
  std::vector<Branch> branches_;
};

ValidationReport validate_density(const Matrix& m);
ValidationReport validate(const DensityOperator& rho);
ValidationReport validate_povm(std::span<const Matrix> elements);
ValidationReport validate(const Povm& povm);
ValidationReport validate(const HybridState& state);

double binary_entropy(double x);
double shannon_entropy(std::span<const double> pmf);

/// Entropy of a density matrix after clipping eigenvalues in [-1e-9, 0).
/// Throws on eigenvalues below -1e-9 or non-unit trace.
double von_neumann_entropy(const DensityOperator& rho);
double von_neumann_entropy(const Matrix& rho);

/// -sum lambda log2 lambda over eigenvalues of a PSD matrix of any trace.
double entropy_unnormalized(const Matrix& m);

HybridState partial_trace(const HybridState& state,
                          const std::vector<std::string>& keep);

double entropy_of(const HybridState& state, const std::vector<std::string>& group);

double mutual_information(const HybridState& state,
                          const std::vector<std::string>& group_a,
                          const std::vector<std::string>& group_b);

double conditional_entropy(const HybridState& state,
                           const std::vector<std::string>& group,
                           const std::vector<std::string>& given);

/// Purification on system (x) ancilla, dim^2 amplitudes. The ancilla index
/// follows the eigenvalues in descending order.
Vector purify(const DensityOperator& rho);

/// Registers of b are appended to those of a; names must be disjoint.
HybridState tensor(const HybridState& a, const HybridState& b);

/// Maximally entangled pair on registers a, b with local dimension d.
HybridState maximally_entangled(const std::string& a, const std::string& b, int d);

}  // namespace qmask
