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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmask/error.hpp"

namespace qmask {

namespace {

double tp_residual(const std::vector<Matrix>& kraus, int dim_in) {
  Matrix sum = Matrix::Zero(dim_in, dim_in);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  return linalg::max_abs(sum - Matrix::Identity(dim_in, dim_in));
}

ValidationReport validate_kraus(const std::vector<Matrix>& kraus, int dim_in, int dim_out) {
  ValidationReport report;
  if (kraus.empty()) {
    report.violations.push_back({"kraus-nonempty", 1.0});
    return report;
  }
  for (const auto& k : kraus) {
    if (k.rows() != dim_out || k.cols() != dim_in) {
      report.violations.push_back({"kraus-shape", static_cast<double>(k.rows() * 1000 + k.cols())});
      return report;
    }
  }
  const double tp = tp_residual(kraus, dim_in);
  if (tp > kTracePreservingTol) report.violations.push_back({"trace-preserving", tp});
  return report;
}

[[noreturn]] void throw_invalid(const std::string& what, const ValidationReport& r) {
  throw Error(ErrorKind::kInvalidState, what + ": " + r.to_string());
}

// Reorders the input factors of an operator: column j of the result is the
// column of m whose multi-index lands on j under `perm` (output factor i is
// input factor perm[i]).
Matrix permute_columns(const Matrix& m, std::span<const int> dims, std::span<const int> perm) {
  Vector tags(m.cols());
  for (Eigen::Index i = 0; i < m.cols(); ++i) tags(i) = static_cast<double>(i);
  const Vector moved = linalg::permute_subsystems(tags, dims, perm);
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    out.col(j) = m.col(static_cast<Eigen::Index>(moved(j).real()));
  }
  return out;
}

// Interleaved (E1 A1 E2 A2 ...) -> grouped (E1 E2 ... A1 A2 ...).
std::pair<std::vector<int>, std::vector<int>> grouping_perm(int dim_e, int dim_a, int n) {
  std::vector<int> dims;
  for (int i = 0; i < n; ++i) {
    dims.push_back(dim_e);
    dims.push_back(dim_a);
  }
  std::vector<int> perm;
  for (int i = 0; i < n; ++i) perm.push_back(2 * i);
  for (int i = 0; i < n; ++i) perm.push_back(2 * i + 1);
  return {dims, perm};
}

std::vector<std::vector<int>> index_tuples(int base, int n) {
  std::vector<std::vector<int>> tuples;
  std::vector<int> t(n, 0);
  const int total = static_cast<int>(std::pow(base, n));
  for (int flat = 0; flat < total; ++flat) {
    int rem = flat;
    for (int k = n - 1; k >= 0; --k) {
      t[k] = rem % base;
      rem /= base;
    }
    tuples.push_back(t);
  }
  return tuples;
}

struct PortLayout {
  std::vector<int> qdims;
  std::vector<std::string> qnames;
  int pos_e = -1;  // -1 when E is absent (dimE == 1)
  int pos_a = -1;
  std::vector<int> rest;  // quantum positions other than E, A
  int dim_rest = 1;
};

PortLayout locate_ports(const HybridState& input, const ChannelPorts& ports, int dim_e,
                        int dim_a) {
  PortLayout layout;
  layout.qdims = input.quantum_dims();
  layout.qnames = input.quantum_names();
  const auto find = [&](const std::string& name) {
    auto it = std::find(layout.qnames.begin(), layout.qnames.end(), name);
    return it == layout.qnames.end() ? -1 : static_cast<int>(it - layout.qnames.begin());
  };
  layout.pos_a = find(ports.a);
  layout.pos_e = find(ports.e);
  if (layout.pos_a < 0) {
    throw Error(ErrorKind::kUnknownRegister, "channel input register '" + ports.a + "' missing");
  }
  if (layout.pos_e < 0 && dim_e != 1) {
    throw Error(ErrorKind::kUnknownRegister, "channel input register '" + ports.e + "' missing");
  }
  if (layout.qdims[layout.pos_a] != dim_a ||
      (layout.pos_e >= 0 && layout.qdims[layout.pos_e] != dim_e)) {
    throw Error(ErrorKind::kDimensionMismatch,
                "channel dimensions do not match registers " + ports.e + "," + ports.a);
  }
  for (int i = 0; i < static_cast<int>(layout.qdims.size()); ++i) {
    if (i != layout.pos_a && i != layout.pos_e) {
      layout.rest.push_back(i);
      layout.dim_rest *= layout.qdims[i];
    }
  }
  return layout;
}

// Brings E, A to the front: result ordering is [E, A, rest...].
Matrix front_load(const Matrix& state, const PortLayout& layout) {
  std::vector<int> perm;
  if (layout.pos_e >= 0) perm.push_back(layout.pos_e);
  perm.push_back(layout.pos_a);
  perm.insert(perm.end(), layout.rest.begin(), layout.rest.end());
  return linalg::permute_subsystems(state, layout.qdims, perm);
}

}  // namespace

// ---------------------------------------------------------------------------

Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& rho) {
  Matrix out = Matrix::Zero(kraus.front().rows(), kraus.front().rows());
  for (const auto& k : kraus) out.noalias() += k * rho * k.adjoint();
  return out;
}

StateDependentChannel::StateDependentChannel(int dim_e, int dim_a, int dim_b,
                                             std::vector<Matrix> kraus)
    : dim_e_(dim_e), dim_a_(dim_a), dim_b_(dim_b), kraus_(std::move(kraus)) {
  if (dim_e < 1 || dim_a < 1 || dim_b < 1) {
    throw Error(ErrorKind::kInvalidArgument, "channel dimensions must be positive");
  }
  const auto report = validate(*this);
  if (!report.ok()) throw_invalid("channel", report);
}

StateDependentChannel StateDependentChannel::identity(int dim) {
  return StateDependentChannel(1, dim, dim, {Matrix::Identity(dim, dim)});
}

Matrix StateDependentChannel::apply(const Matrix& rho_ea) const {
  if (rho_ea.rows() != dim_e_ * dim_a_) {
    throw Error(ErrorKind::kDimensionMismatch, "channel input has wrong dimension");
  }
  return apply_kraus(kraus_, rho_ea);
}

ValidationReport validate(const StateDependentChannel& channel) {
  return validate_kraus(channel.kraus(), channel.dim_e() * channel.dim_a(), channel.dim_b());
}

MeasurementChannel::MeasurementChannel(int dim_e, int dim_a, Povm povm)
    : dim_e_(dim_e), dim_a_(dim_a), povm_(std::move(povm)) {
  if (povm_.dim() != dim_e * dim_a) {
    throw Error(ErrorKind::kDimensionMismatch,
                "measurement POVM dimension differs from dimE * dimA");
  }
}

std::vector<double> MeasurementChannel::probabilities(const Matrix& rho_ea) const {
  if (rho_ea.rows() != dim_e_ * dim_a_) {
    throw Error(ErrorKind::kDimensionMismatch, "measurement input has wrong dimension");
  }
  std::vector<double> probs;
  probs.reserve(povm_.size());
  for (const auto& e : povm_.elements()) {
    probs.push_back((e * rho_ea).trace().real());
  }
  return probs;
}

StateDependentChannel MeasurementChannel::as_kraus() const {
  const int dim_in = dim_e_ * dim_a_;
  const int ny = num_outcomes();
  std::vector<Matrix> kraus;
  for (int y = 0; y < ny; ++y) {
    const Matrix root = linalg::psd_sqrt(povm_.element(y));
    for (int j = 0; j < dim_in; ++j) {
      Matrix k = Matrix::Zero(ny, dim_in);
      k.row(y) = root.row(j);
      if (k.cwiseAbs().maxCoeff() > 0.0) kraus.push_back(std::move(k));
    }
  }
  return StateDependentChannel(dim_e_, dim_a_, ny, std::move(kraus));
}

ValidationReport validate(const MeasurementChannel& channel) {
  return validate(channel.povm());
}

StateSource::StateSource(int dim_e0, int dim_e, int dim_c, Vector vector)
    : dim_e0_(dim_e0), dim_e_(dim_e), dim_c_(dim_c), vector_(std::move(vector)) {
  if (dim_e0 < 1 || dim_e < 1 || dim_c < 1) {
    throw Error(ErrorKind::kInvalidArgument, "source dimensions must be positive");
  }
  const auto report = validate(*this);
  if (!report.ok()) throw_invalid("state source", report);
}

StateSource StateSource::trivial() {
  Vector v(1);
  v(0) = 1.0;
  return StateSource(1, 1, 1, v);
}

Matrix StateSource::density() const { return vector_ * vector_.adjoint(); }

ValidationReport validate(const StateSource& source) {
  ValidationReport report;
  const Eigen::Index expected =
      static_cast<Eigen::Index>(source.dim_e0()) * source.dim_e() * source.dim_c();
  if (source.vector().size() != expected) {
    report.violations.push_back({"source-dim", static_cast<double>(source.vector().size())});
    return report;
  }
  const double norm = std::abs(source.vector().norm() - 1.0);
  if (norm > kSourceNormTol) report.violations.push_back({"unit-norm", norm});
  return report;
}

RandomParameterChannel::RandomParameterChannel(std::vector<std::string> labels,
                                               std::vector<double> q,
                                               std::vector<std::vector<Matrix>> branch_kraus)
    : labels_(std::move(labels)), q_(std::move(q)), branch_kraus_(std::move(branch_kraus)) {
  if (q_.empty() || labels_.size() != q_.size() || branch_kraus_.size() != q_.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "random-parameter channel needs one label, weight and branch per state");
  }
  if (branch_kraus_.front().empty()) {
    throw Error(ErrorKind::kInvalidArgument, "random-parameter branch without Kraus operators");
  }
  dim_b_ = static_cast<int>(branch_kraus_.front().front().rows());
  dim_a_ = static_cast<int>(branch_kraus_.front().front().cols());
  const auto report = validate(*this);
  if (!report.ok()) throw_invalid("random-parameter channel", report);
}

Matrix RandomParameterChannel::apply_branch(int s, const Matrix& rho) const {
  return apply_kraus(branch_kraus_.at(s), rho);
}

Matrix RandomParameterChannel::apply_average(const Matrix& rho) const {
  Matrix out = Matrix::Zero(dim_b_, dim_b_);
  for (int s = 0; s < num_states(); ++s) out += q_[s] * apply_branch(s, rho);
  return out;
}

ValidationReport validate(const RandomParameterChannel& channel) {
  ValidationReport report;
  double total = 0.0;
  for (double p : channel.q()) {
    if (p < 0.0) report.violations.push_back({"q-nonnegative", -p});
    total += p;
  }
  if (std::abs(total - 1.0) > kWeightTol) {
    report.violations.push_back({"q-sum", std::abs(total - 1.0)});
  }
  for (int s = 0; s < channel.num_states(); ++s) {
    const auto inner =
        validate_kraus(channel.branch_kraus()[s], channel.dim_a(), channel.dim_b());
    for (const auto& v : inner.violations) {
      report.violations.push_back({"branch[" + channel.labels()[s] + "]-" + v.invariant,
                                   v.residual});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

HybridState apply(const StateDependentChannel& channel, const HybridState& input,
                  const ChannelPorts& ports) {
  const PortLayout layout = locate_ports(input, ports, channel.dim_e(), channel.dim_a());
  const Matrix id_rest = Matrix::Identity(layout.dim_rest, layout.dim_rest);
  std::vector<Matrix> lifted;
  lifted.reserve(channel.kraus().size());
  for (const auto& k : channel.kraus()) lifted.push_back(linalg::kron(k, id_rest));

  // Output registers: the channel output takes E's slot (or A's when E is
  // absent); A is removed.
  const std::string& anchor = layout.pos_e >= 0 ? ports.e : ports.a;
  std::vector<Register> registers;
  for (const auto& r : input.registers()) {
    if (r.name == anchor) {
      registers.push_back(Register::quantum(ports.out, channel.dim_b()));
    } else if (r.name != ports.a && r.name != ports.e) {
      registers.push_back(r);
    }
  }
  for (const auto& r : input.registers()) {
    if (r.name == ports.out && r.name != ports.a && r.name != ports.e) {
      throw Error(ErrorKind::kInvalidArgument,
                  "output register '" + ports.out + "' already exists");
    }
  }
  // After applying, the tensor order is [out, rest...]. Map it to the order
  // implied by the new register list.
  std::vector<int> staged_dims{channel.dim_b()};
  std::vector<std::string> staged_names{ports.out};
  for (int p : layout.rest) {
    staged_dims.push_back(layout.qdims[p]);
    staged_names.push_back(layout.qnames[p]);
  }
  std::vector<int> perm;
  for (const auto& r : registers) {
    if (r.is_classical()) continue;
    perm.push_back(static_cast<int>(
        std::find(staged_names.begin(), staged_names.end(), r.name) - staged_names.begin()));
  }
  std::vector<Branch> branches;
  branches.reserve(input.branches().size());
  for (const auto& b : input.branches()) {
    const Matrix staged = apply_kraus(lifted, front_load(b.state, layout));
    branches.push_back({b.labels, b.weight, linalg::permute_subsystems(staged, staged_dims, perm)});
  }
  return HybridState::trusted(std::move(registers), std::move(branches));
}

HybridState apply_measurement(const MeasurementChannel& channel, const HybridState& input,
                              const ChannelPorts& ports) {
  const PortLayout layout = locate_ports(input, ports, channel.dim_e(), channel.dim_a());
  if (input.has_register(ports.out)) {
    throw Error(ErrorKind::kInvalidArgument, "output register '" + ports.out + "' already exists");
  }
  const std::string& anchor = layout.pos_e >= 0 ? ports.e : ports.a;
  std::vector<Register> registers;
  int insert_at = 0;  // position of the outcome within the label tuple
  int classical_seen = 0;
  for (const auto& r : input.registers()) {
    if (r.name == anchor) {
      insert_at = classical_seen;
      registers.push_back(Register::classical(ports.out, channel.output_labels()));
    } else if (r.name != ports.a && r.name != ports.e) {
      registers.push_back(r);
    }
    if (r.is_classical()) ++classical_seen;
  }
  const int dim_ea = channel.dim_e() * channel.dim_a();
  const Matrix id_rest = Matrix::Identity(layout.dim_rest, layout.dim_rest);
  std::vector<int> rest_dims;
  for (int p : layout.rest) rest_dims.push_back(layout.qdims[p]);
  const std::vector<int> staged_dims{dim_ea, layout.dim_rest};
  const std::vector<bool> keep_rest{false, true};

  std::vector<Branch> branches;
  for (const auto& b : input.branches()) {
    const Matrix staged = front_load(b.state, layout);
    for (int y = 0; y < channel.num_outcomes(); ++y) {
      const Matrix lifted = linalg::kron(channel.povm().element(y), id_rest);
      Matrix conditional = linalg::partial_trace(lifted * staged, staged_dims, keep_rest);
      const double prob = conditional.trace().real();
      if (prob <= 0.0) continue;
      Branch out;
      out.labels = b.labels;
      out.labels.insert(out.labels.begin() + insert_at, y);
      out.weight = b.weight * prob;
      out.state = conditional / prob;
      out.state = 0.5 * (out.state + out.state.adjoint()).eval();
      branches.push_back(std::move(out));
    }
  }
  // Outcome probabilities below machine precision can make the weights sum
  // drift by ~1e-16; renormalize.
  double total = 0.0;
  for (const auto& b : branches) total += b.weight;
  for (auto& b : branches) b.weight /= total;
  return HybridState::trusted(std::move(registers), std::move(branches));
}

std::pair<StateDependentChannel, StateSource> lift_random_parameter(
    const RandomParameterChannel& rpc) {
  const int ns = rpc.num_states();
  const int da = rpc.dim_a();
  std::vector<Matrix> kraus;
  for (int s = 0; s < ns; ++s) {
    for (const auto& k : rpc.branch_kraus()[s]) {
      Matrix lifted = Matrix::Zero(rpc.dim_b(), ns * da);
      lifted.block(0, s * da, rpc.dim_b(), da) = k;
      kraus.push_back(std::move(lifted));
    }
  }
  Vector ghz = Vector::Zero(static_cast<Eigen::Index>(ns) * ns * ns);
  for (int s = 0; s < ns; ++s) ghz((s * ns + s) * ns + s) = std::sqrt(rpc.q()[s]);
  return {StateDependentChannel(ns, da, rpc.dim_b(), std::move(kraus)),
          StateSource(ns, ns, ns, ghz)};
}

StateDependentChannel product_channel(const StateDependentChannel& channel, int n) {
  if (n < 1 || n > kMaxQuantumProductLetters) {
    throw Error(ErrorKind::kSizeLimit,
                "product_channel: n must be in [1, " +
                    std::to_string(kMaxQuantumProductLetters) + "] for quantum outputs");
  }
  if (n == 1) return channel;
  auto [dims, perm] = grouping_perm(channel.dim_e(), channel.dim_a(), n);
  std::vector<Matrix> kraus;
  const int nk = static_cast<int>(channel.kraus().size());
  for (const auto& tuple : index_tuples(nk, n)) {
    Matrix k = channel.kraus()[tuple[0]];
    for (int i = 1; i < n; ++i) k = linalg::kron(k, channel.kraus()[tuple[i]]);
    kraus.push_back(permute_columns(k, dims, perm));
  }
  const auto power = [n](int d) { return static_cast<int>(std::pow(d, n)); };
  return StateDependentChannel(power(channel.dim_e()), power(channel.dim_a()),
                               power(channel.dim_b()), std::move(kraus));
}

MeasurementChannel product_channel(const MeasurementChannel& channel, int n) {
  if (n < 1 || n > kMaxMeasurementProductLetters) {
    throw Error(ErrorKind::kSizeLimit,
                "product_channel: n must be in [1, " +
                    std::to_string(kMaxMeasurementProductLetters) +
                    "] for measurement channels");
  }
  if (n == 1) return channel;
  const double dim = std::pow(channel.dim_e() * channel.dim_a(), n);
  if (dim > kMaxMaterializedDim) {
    throw Error(ErrorKind::kSizeLimit,
                "product_channel: materialized input dimension " +
                    std::to_string(static_cast<long long>(dim)) + " exceeds limit " +
                    std::to_string(kMaxMaterializedDim));
  }
  auto [dims, perm] = grouping_perm(channel.dim_e(), channel.dim_a(), n);
  std::vector<std::string> labels;
  std::vector<Matrix> elements;
  for (const auto& tuple : index_tuples(channel.num_outcomes(), n)) {
    Matrix e = channel.povm().element(tuple[0]);
    std::string label = channel.output_labels()[tuple[0]];
    for (int i = 1; i < n; ++i) {
      e = linalg::kron(e, channel.povm().element(tuple[i]));
      label += "," + channel.output_labels()[tuple[i]];
    }
    elements.push_back(linalg::permute_subsystems(e, dims, perm));
    labels.push_back(std::move(label));
  }
  const auto power = [n](int d) { return static_cast<int>(std::pow(d, n)); };
  return MeasurementChannel(power(channel.dim_e()), power(channel.dim_a()),
                            Povm(std::move(labels), std::move(elements)));
}

StateSource product_source(const StateSource& source, int n) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "product_source: n must be positive");
  if (n == 1) return source;
  Vector v = source.vector();
  std::vector<int> dims;
  for (int i = 0; i < n; ++i) {
    if (i > 0) v = linalg::kron(v, source.vector());
    dims.insert(dims.end(), {source.dim_e0(), source.dim_e(), source.dim_c()});
  }
  std::vector<int> perm;
  for (int which = 0; which < 3; ++which) {
    for (int i = 0; i < n; ++i) perm.push_back(3 * i + which);
  }
  const auto power = [n](int d) { return static_cast<int>(std::pow(d, n)); };
  return StateSource(power(source.dim_e0()), power(source.dim_e()), power(source.dim_c()),
                     linalg::permute_subsystems(v, dims, perm));
}

}  // namespace qmask
