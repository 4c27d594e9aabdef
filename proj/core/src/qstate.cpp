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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "qmask/error.hpp"

namespace qmask {

bool ValidationReport::has(const std::string& invariant) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.invariant == invariant; });
}

double ValidationReport::residual(const std::string& invariant) const {
  for (const auto& v : violations) {
    if (v.invariant == invariant) return v.residual;
  }
  return 0.0;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "all invariants satisfied";
  std::ostringstream out;
  out.precision(10);
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i].invariant << " residual " << violations[i].residual;
  }
  return out.str();
}

namespace {

void append(ValidationReport& report, const ValidationReport& inner,
            const std::string& prefix) {
  for (const auto& v : inner.violations) {
    report.violations.push_back({prefix + v.invariant, v.residual});
  }
}

double min_eigenvalue(const Matrix& m) {
  return linalg::hermitian_eigenvalues(m).minCoeff();
}

[[noreturn]] void throw_invalid(const std::string& what, const ValidationReport& r) {
  throw Error(ErrorKind::kInvalidState, what + ": " + r.to_string());
}

}  // namespace

ValidationReport validate_density(const Matrix& m) {
  ValidationReport report;
  if (m.rows() != m.cols() || m.rows() == 0) {
    report.violations.push_back({"square", static_cast<double>(m.rows() - m.cols())});
    return report;
  }
  const double herm = linalg::hermiticity_residual(m);
  if (herm > kHermitianTol) report.violations.push_back({"hermitian", herm});
  const double trace = std::abs(m.trace() - cplx(1.0, 0.0));
  if (trace > kTraceTol) report.violations.push_back({"unit-trace", trace});
  const double lowest = min_eigenvalue(m);
  if (lowest < -kPsdTol) report.violations.push_back({"psd", -lowest});
  return report;
}

ValidationReport validate(const DensityOperator& rho) {
  return validate_density(rho.matrix());
}

ValidationReport validate_povm(std::span<const Matrix> elements) {
  ValidationReport report;
  if (elements.empty()) {
    report.violations.push_back({"nonempty", 1.0});
    return report;
  }
  const Eigen::Index dim = elements.front().rows();
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::size_t j = 0; j < elements.size(); ++j) {
    const Matrix& e = elements[j];
    if (e.rows() != dim || e.cols() != dim) {
      report.violations.push_back({"element-dim", static_cast<double>(j)});
      return report;
    }
    const double herm = linalg::hermiticity_residual(e);
    if (herm > kHermitianTol) report.violations.push_back({"element-hermitian", herm});
    const double lowest = min_eigenvalue(e);
    if (lowest < -kPsdTol) report.violations.push_back({"element-psd", -lowest});
    sum += e;
  }
  const double completeness = linalg::max_abs(sum - Matrix::Identity(dim, dim));
  if (completeness > kCompletenessTol) {
    report.violations.push_back({"completeness", completeness});
  }
  return report;
}

ValidationReport validate(const Povm& povm) {
  return validate_povm(povm.elements());
}

// ---------------------------------------------------------------------------

DensityOperator::DensityOperator(Matrix matrix) : matrix_(std::move(matrix)) {
  const auto report = validate_density(matrix_);
  if (!report.ok()) throw_invalid("density operator", report);
}

DensityOperator DensityOperator::pure(const Vector& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw Error(ErrorKind::kInvalidState, "pure state vector is not unit norm");
  }
  return DensityOperator(psi * psi.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityOperator DensityOperator::diagonal(std::span<const double> probs) {
  Matrix m = Matrix::Zero(probs.size(), probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) m(i, i) = probs[i];
  return DensityOperator(std::move(m));
}

Povm::Povm(std::vector<std::string> labels, std::vector<Matrix> elements)
    : labels_(std::move(labels)), elements_(std::move(elements)) {
  if (labels_.size() != elements_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "POVM label count differs from element count");
  }
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "POVM labels must be distinct");
  }
  const auto report = validate_povm(elements_);
  if (!report.ok()) throw_invalid("POVM", report);
  dim_ = static_cast<int>(elements_.front().rows());
}

Povm Povm::computational_basis(int dim) {
  return from_basis(Matrix::Identity(dim, dim));
}

Povm Povm::trivial(int dim) {
  return Povm({"0"}, {Matrix::Identity(dim, dim)});
}

Povm Povm::from_basis(const Matrix& unitary) {
  std::vector<std::string> labels;
  std::vector<Matrix> elements;
  for (Eigen::Index k = 0; k < unitary.cols(); ++k) {
    labels.push_back(std::to_string(k));
    elements.push_back(unitary.col(k) * unitary.col(k).adjoint());
  }
  return Povm(std::move(labels), std::move(elements));
}

// ---------------------------------------------------------------------------

Register Register::classical(std::string name, std::vector<std::string> alphabet) {
  Register r;
  r.name = std::move(name);
  r.kind = Kind::kClassical;
  r.alphabet = std::move(alphabet);
  r.dim = 1;
  return r;
}

Register Register::classical(std::string name, int size) {
  std::vector<std::string> alphabet;
  for (int i = 0; i < size; ++i) alphabet.push_back(std::to_string(i));
  return classical(std::move(name), std::move(alphabet));
}

Register Register::quantum(std::string name, int dim) {
  Register r;
  r.name = std::move(name);
  r.kind = Kind::kQuantum;
  r.dim = dim;
  return r;
}

namespace {

ValidationReport validate_structure(const std::vector<Register>& registers,
                                    const std::vector<Branch>& branches,
                                    bool check_states) {
  ValidationReport report;
  std::set<std::string> names;
  int qdim = 1;
  int nclassical = 0;
  for (const auto& r : registers) {
    if (!names.insert(r.name).second) report.violations.push_back({"register-unique", 1.0});
    if (r.is_classical()) {
      ++nclassical;
      if (r.alphabet.empty()) report.violations.push_back({"alphabet-nonempty", 1.0});
    } else {
      if (r.dim < 1) report.violations.push_back({"quantum-dim", static_cast<double>(r.dim)});
      qdim *= std::max(r.dim, 1);
    }
  }
  if (branches.empty()) {
    report.violations.push_back({"weight-sum", 1.0});
    return report;
  }
  double total = 0.0;
  std::set<std::vector<int>> seen;
  for (const auto& b : branches) {
    if (b.weight < 0.0) report.violations.push_back({"weight-nonnegative", -b.weight});
    total += b.weight;
    if (static_cast<int>(b.labels.size()) != nclassical) {
      report.violations.push_back({"label-arity", 1.0});
      continue;
    }
    int c = 0;
    for (const auto& r : registers) {
      if (!r.is_classical()) continue;
      const int label = b.labels[c++];
      if (label < 0 || label >= static_cast<int>(r.alphabet.size())) {
        report.violations.push_back({"label-range", static_cast<double>(label)});
      }
    }
    if (!seen.insert(b.labels).second) report.violations.push_back({"label-distinct", 1.0});
    if (b.state.rows() != qdim || b.state.cols() != qdim) {
      report.violations.push_back({"branch-dim", static_cast<double>(b.state.rows())});
      continue;
    }
    if (check_states) append(report, validate_density(b.state), "branch-");
  }
  const double sum_residual = std::abs(total - 1.0);
  if (sum_residual > kWeightTol) report.violations.push_back({"weight-sum", sum_residual});
  return report;
}

}  // namespace

HybridState::HybridState(std::vector<Register> registers, std::vector<Branch> branches)
    : registers_(std::move(registers)), branches_(std::move(branches)) {
  const auto report = validate_structure(registers_, branches_, true);
  if (!report.ok()) throw_invalid("hybrid state", report);
  canonicalize();
}

HybridState HybridState::trusted(std::vector<Register> registers,
                                 std::vector<Branch> branches) {
  HybridState s;
  s.registers_ = std::move(registers);
  s.branches_ = std::move(branches);
  s.canonicalize();
  return s;
}

HybridState HybridState::quantum(std::vector<Register> registers, Matrix state) {
  std::vector<Branch> branches{{{}, 1.0, std::move(state)}};
  return HybridState(std::move(registers), std::move(branches));
}

HybridState HybridState::quantum(std::vector<Register> registers,
                                 const DensityOperator& state) {
  return quantum(std::move(registers), state.matrix());
}

void HybridState::canonicalize() {
  std::erase_if(branches_, [](const Branch& b) { return b.weight == 0.0; });
  std::sort(branches_.begin(), branches_.end(),
            [](const Branch& a, const Branch& b) { return a.labels < b.labels; });
}

int HybridState::register_index(const std::string& name) const {
  for (std::size_t i = 0; i < registers_.size(); ++i) {
    if (registers_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const Register& HybridState::reg(const std::string& name) const {
  const int i = register_index(name);
  if (i < 0) throw Error(ErrorKind::kUnknownRegister, "unknown register '" + name + "'");
  return registers_[i];
}

std::vector<int> HybridState::quantum_dims() const {
  std::vector<int> dims;
  for (const auto& r : registers_) {
    if (!r.is_classical()) dims.push_back(r.dim);
  }
  return dims;
}

std::vector<std::string> HybridState::quantum_names() const {
  std::vector<std::string> names;
  for (const auto& r : registers_) {
    if (!r.is_classical()) names.push_back(r.name);
  }
  return names;
}

std::vector<std::string> HybridState::classical_names() const {
  std::vector<std::string> names;
  for (const auto& r : registers_) {
    if (r.is_classical()) names.push_back(r.name);
  }
  return names;
}

int HybridState::quantum_dim() const {
  const auto dims = quantum_dims();
  return linalg::product(dims);
}

int HybridState::quantum_position(const std::string& name) const {
  int pos = 0;
  for (const auto& r : registers_) {
    if (r.is_classical()) continue;
    if (r.name == name) return pos;
    ++pos;
  }
  throw Error(ErrorKind::kUnknownRegister, "unknown quantum register '" + name + "'");
}

bool HybridState::operator==(const HybridState& other) const {
  if (registers_ != other.registers_ || branches_.size() != other.branches_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const auto& a = branches_[i];
    const auto& b = other.branches_[i];
    if (a.labels != b.labels || a.weight != b.weight || a.state != b.state) return false;
  }
  return true;
}

ValidationReport validate(const HybridState& state) {
  return validate_structure(state.registers(), state.branches(), true);
}

// ---------------------------------------------------------------------------

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "binary_entropy: argument outside [0, 1]");
  }
  if (x == 0.0 || x == 1.0) return 0.0;
  return -(1.0 - x) * std::log2(1.0 - x) - x * std::log2(x);
}

double shannon_entropy(std::span<const double> pmf) {
  double h = 0.0;
  for (double p : pmf) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double entropy_unnormalized(const Matrix& m) {
  const RealVector values = linalg::hermitian_eigenvalues(m);
  double h = 0.0;
  for (double v : values) {
    if (v < -kPsdTol) {
      throw Error(ErrorKind::kInvalidState,
                  "entropy: eigenvalue " + std::to_string(v) + " below PSD tolerance");
    }
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

double von_neumann_entropy(const Matrix& rho) {
  const double trace = std::abs(rho.trace() - cplx(1.0, 0.0));
  if (rho.rows() != rho.cols() || trace > kTraceTol) {
    throw Error(ErrorKind::kInvalidState, "entropy: input is not unit trace");
  }
  return entropy_unnormalized(rho);
}

double von_neumann_entropy(const DensityOperator& rho) {
  return von_neumann_entropy(rho.matrix());
}

HybridState partial_trace(const HybridState& state, const std::vector<std::string>& keep) {
  std::set<std::string> keep_set(keep.begin(), keep.end());
  for (const auto& name : keep_set) {
    if (!state.has_register(name)) {
      throw Error(ErrorKind::kUnknownRegister, "unknown register '" + name + "'");
    }
  }
  std::vector<Register> kept_registers;
  std::vector<int> classical_keep;  // indices into the branch label tuple
  std::vector<int> qdims;
  std::vector<bool> qkeep;
  int classical_pos = 0;
  for (const auto& r : state.registers()) {
    const bool kept = keep_set.contains(r.name);
    if (kept) kept_registers.push_back(r);
    if (r.is_classical()) {
      if (kept) classical_keep.push_back(classical_pos);
      ++classical_pos;
    } else {
      qdims.push_back(r.dim);
      qkeep.push_back(kept);
    }
  }
  const bool trace_quantum = std::find(qkeep.begin(), qkeep.end(), false) != qkeep.end();

  std::map<std::vector<int>, std::pair<double, Matrix>> groups;
  for (const auto& b : state.branches()) {
    std::vector<int> key;
    key.reserve(classical_keep.size());
    for (int c : classical_keep) key.push_back(b.labels[c]);
    Matrix reduced = trace_quantum ? linalg::partial_trace(b.state, qdims, qkeep) : b.state;
    auto it = groups.find(key);
    if (it == groups.end()) {
      groups.emplace(std::move(key), std::make_pair(b.weight, Matrix(b.weight * reduced)));
    } else {
      it->second.first += b.weight;
      it->second.second += b.weight * reduced;
    }
  }
  std::vector<Branch> branches;
  branches.reserve(groups.size());
  for (auto& [key, acc] : groups) {
    if (acc.first <= 0.0) continue;
    branches.push_back({key, acc.first, acc.second / acc.first});
  }
  return HybridState::trusted(std::move(kept_registers), std::move(branches));
}

double entropy_of(const HybridState& state, const std::vector<std::string>& group) {
  if (group.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "entropy_of: empty register group");
  }
  const HybridState marginal = partial_trace(state, group);
  double h = 0.0;
  for (const auto& b : marginal.branches()) {
    h -= b.weight * std::log2(b.weight);
    if (b.state.rows() > 1) h += b.weight * von_neumann_entropy(b.state);
  }
  return h;
}

double mutual_information(const HybridState& state,
                          const std::vector<std::string>& group_a,
                          const std::vector<std::string>& group_b) {
  for (const auto& a : group_a) {
    if (std::find(group_b.begin(), group_b.end(), a) != group_b.end()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "mutual_information: register '" + a + "' appears in both groups");
    }
  }
  std::vector<std::string> joint = group_a;
  joint.insert(joint.end(), group_b.begin(), group_b.end());
  return entropy_of(state, group_a) + entropy_of(state, group_b) - entropy_of(state, joint);
}

double conditional_entropy(const HybridState& state,
                           const std::vector<std::string>& group,
                           const std::vector<std::string>& given) {
  if (given.empty()) return entropy_of(state, group);
  std::vector<std::string> joint = group;
  joint.insert(joint.end(), given.begin(), given.end());
  return entropy_of(state, joint) - entropy_of(state, given);
}

Vector purify(const DensityOperator& rho) {
  const int d = rho.dim();
  const auto sys = linalg::hermitian_eigensystem(rho.matrix());
  Vector out = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int rank = 0; rank < d; ++rank) {
    const int k = d - 1 - rank;  // descending eigenvalue order
    const double weight = std::sqrt(std::max(sys.values(k), 0.0));
    if (weight == 0.0) continue;
    Vector ancilla = Vector::Zero(d);
    ancilla(rank) = 1.0;
    out += weight * linalg::kron(Vector(sys.vectors.col(k)), ancilla);
  }
  return out / out.norm();
}

HybridState tensor(const HybridState& a, const HybridState& b) {
  std::vector<Register> registers = a.registers();
  for (const auto& r : b.registers()) {
    if (a.has_register(r.name)) {
      throw Error(ErrorKind::kInvalidArgument, "tensor: duplicate register '" + r.name + "'");
    }
  }
  // Quantum tensor order must follow register order, so b's registers are
  // appended after all of a's.
  registers.insert(registers.end(), b.registers().begin(), b.registers().end());
  std::vector<Branch> branches;
  for (const auto& x : a.branches()) {
    for (const auto& y : b.branches()) {
      Branch z;
      z.labels = x.labels;
      z.labels.insert(z.labels.end(), y.labels.begin(), y.labels.end());
      z.weight = x.weight * y.weight;
      z.state = linalg::kron(x.state, y.state);
      branches.push_back(std::move(z));
    }
  }
  return HybridState::trusted(std::move(registers), std::move(branches));
}

HybridState maximally_entangled(const std::string& a, const std::string& b, int d) {
  Vector phi = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int j = 0; j < d; ++j) phi(j * d + j) = 1.0 / std::sqrt(static_cast<double>(d));
  return HybridState::quantum({Register::quantum(a, d), Register::quantum(b, d)},
                              Matrix(phi * phi.adjoint()));
}

}  // namespace qmask
