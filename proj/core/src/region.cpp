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

#include "qmask/region.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "qmask/error.hpp"

namespace qmask {

namespace {

constexpr double kRowSumTol = 1e-10;
constexpr double kDroppedOutcomeMass = 1e-14;

std::vector<std::string> index_labels(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

}  // namespace

Strategy::Strategy(Povm csi_povm, RealMatrix cond_pmf,
                   std::vector<DensityOperator> input_states, bool allow_oversize)
    : csi_povm_(std::move(csi_povm)),
      cond_pmf_(std::move(cond_pmf)),
      input_states_(std::move(input_states)) {
  if (cond_pmf_.rows() != csi_povm_.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "strategy: conditional pmf needs one row per CSI outcome");
  }
  if (cond_pmf_.cols() < 1 || static_cast<Eigen::Index>(input_states_.size()) != cond_pmf_.cols()) {
    throw Error(ErrorKind::kInvalidArgument,
                "strategy: every input symbol needs exactly one input state");
  }
  for (Eigen::Index s = 0; s < cond_pmf_.rows(); ++s) {
    if (cond_pmf_.row(s).minCoeff() < 0.0) {
      throw Error(ErrorKind::kInvalidArgument, "strategy: negative conditional probability");
    }
    const double residual = std::abs(cond_pmf_.row(s).sum() - 1.0);
    if (residual > kRowSumTol) {
      throw Error(ErrorKind::kInvalidArgument,
                  "strategy: pmf row " + std::to_string(s) + " sums to 1 with residual " +
                      std::to_string(residual));
    }
  }
  const int dim_a = input_states_.front().dim();
  for (const auto& rho : input_states_) {
    if (rho.dim() != dim_a) {
      throw Error(ErrorKind::kDimensionMismatch, "strategy: input states differ in dimension");
    }
  }
  const int cap = cardinality_cap(dim_a, csi_povm_.dim());
  if (!allow_oversize && alphabet_size() > cap) {
    throw Error(ErrorKind::kSizeLimit, "strategy: |X| = " + std::to_string(alphabet_size()) +
                                           " exceeds cardinality cap " + std::to_string(cap));
  }
}

int Strategy::cardinality_cap(int dim_a, int dim_e0) { return (dim_a * dim_a + 1) * dim_e0; }

std::uint64_t Strategy::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto feed = [&h](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v + 0.0);  // -0 hashes as +0
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& e : csi_povm_.elements()) {
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      feed(e(i).real());
      feed(e(i).imag());
    }
  }
  for (Eigen::Index i = 0; i < cond_pmf_.size(); ++i) feed(cond_pmf_(i));
  for (const auto& rho : input_states_) {
    for (Eigen::Index i = 0; i < rho.matrix().size(); ++i) {
      feed(rho.matrix()(i).real());
      feed(rho.matrix()(i).imag());
    }
  }
  return h;
}

Strategy tensor_strategy(const Strategy& a, const Strategy& b) {
  std::vector<std::string> labels;
  std::vector<Matrix> elements;
  for (int i = 0; i < a.csi_povm().size(); ++i) {
    for (int j = 0; j < b.csi_povm().size(); ++j) {
      labels.push_back(a.csi_povm().labels()[i] + "," + b.csi_povm().labels()[j]);
      elements.push_back(linalg::kron(a.csi_povm().element(i), b.csi_povm().element(j)));
    }
  }
  const int xa = a.alphabet_size();
  const int xb = b.alphabet_size();
  RealMatrix pmf(a.num_outcomes() * b.num_outcomes(), xa * xb);
  for (int s1 = 0; s1 < a.num_outcomes(); ++s1) {
    for (int s2 = 0; s2 < b.num_outcomes(); ++s2) {
      for (int x1 = 0; x1 < xa; ++x1) {
        for (int x2 = 0; x2 < xb; ++x2) {
          pmf(s1 * b.num_outcomes() + s2, x1 * xb + x2) =
              a.cond_pmf()(s1, x1) * b.cond_pmf()(s2, x2);
        }
      }
    }
  }
  std::vector<DensityOperator> states;
  for (int x1 = 0; x1 < xa; ++x1) {
    for (int x2 = 0; x2 < xb; ++x2) {
      states.emplace_back(
          linalg::kron(a.input_states()[x1].matrix(), b.input_states()[x2].matrix()));
    }
  }
  return Strategy(Povm(std::move(labels), std::move(elements)), std::move(pmf),
                  std::move(states), true);
}

StateDependentChannel to_operator_sum(const AnyChannel& channel) {
  if (const auto* m = std::get_if<MeasurementChannel>(&channel)) return m->as_kraus();
  return std::get<StateDependentChannel>(channel);
}

int output_dim(const AnyChannel& channel) {
  if (const auto* m = std::get_if<MeasurementChannel>(&channel)) return m->num_outcomes();
  return std::get<StateDependentChannel>(channel).dim_b();
}

JointStates induced_joint_state(const StateSource& source, const Strategy& strategy,
                                const AnyChannel& any_channel) {
  const StateDependentChannel channel = to_operator_sum(any_channel);
  if (source.dim_e() != channel.dim_e() || strategy.dim_a() != channel.dim_a() ||
      strategy.csi_povm().dim() != source.dim_e0()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "induced_joint_state: source, strategy and channel dimensions disagree");
  }
  const int de0 = source.dim_e0();
  const int dec = source.dim_e() * source.dim_c();
  const Matrix phi = source.density();
  const std::vector<int> dims{de0, dec};
  const std::vector<bool> keep{false, true};

  std::vector<Register> registers{
      Register::classical("S", strategy.csi_povm().labels()),
      Register::classical("X", index_labels(strategy.alphabet_size())),
      Register::quantum("E", source.dim_e()),
      Register::quantum("C", source.dim_c()),
      Register::quantum("A", strategy.dim_a()),
  };
  std::vector<Branch> branches;
  double total = 0.0;
  for (int s = 0; s < strategy.num_outcomes(); ++s) {
    const Matrix lifted =
        linalg::kron(strategy.csi_povm().element(s), Matrix::Identity(dec, dec));
    const Matrix sigma = linalg::partial_trace(lifted * phi, dims, keep);
    const double ps = sigma.trace().real();
    if (ps <= kDroppedOutcomeMass) continue;
    Matrix sigma_n = sigma / ps;
    sigma_n = 0.5 * (sigma_n + sigma_n.adjoint()).eval();
    for (int x = 0; x < strategy.alphabet_size(); ++x) {
      const double pxs = strategy.cond_pmf()(s, x);
      if (pxs <= 0.0) continue;
      branches.push_back(
          {{s, x}, ps * pxs, linalg::kron(sigma_n, strategy.input_states()[x].matrix())});
      total += ps * pxs;
    }
  }
  for (auto& b : branches) b.weight /= total;
  HybridState pre = HybridState::trusted(std::move(registers), std::move(branches));
  HybridState post = apply(channel, pre, {"E", "A", "B"});
  return {std::move(pre), std::move(post)};
}

RateLeakagePoint evaluate_strategy(const StateSource& source, const Strategy& strategy,
                                   const AnyChannel& channel) {
  const JointStates states = induced_joint_state(source, strategy, channel);
  const HybridState& post = states.post;
  const double i_xb = mutual_information(post, {"X"}, {"B"});
  const double i_xs = mutual_information(post, {"X"}, {"S"});
  const double leak = mutual_information(post, {"C", "S"}, {"X", "B"});
  RateLeakagePoint point;
  point.rate_unclamped = i_xb - i_xs;
  point.rate = std::max(0.0, point.rate_unclamped);
  point.leakage = std::max(0.0, leak);
  point.n = 1;
  point.provenance = "strategy";
  return point;
}

RateLeakagePoint multiletter_point(const StateSource& source, const AnyChannel& channel,
                                   int n, const Strategy& strategy_n) {
  if (n == 1) return evaluate_strategy(source, strategy_n, channel);
  const StateDependentChannel product = product_channel(to_operator_sum(channel), n);
  const StateSource source_n = product_source(source, n);
  if (strategy_n.dim_a() != product.dim_a() || strategy_n.csi_povm().dim() != source_n.dim_e0()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "multiletter_point: strategy does not act on the n-letter spaces");
  }
  RateLeakagePoint point = evaluate_strategy(source_n, strategy_n, AnyChannel(product));
  point.rate /= n;
  point.leakage /= n;
  point.rate_unclamped /= n;
  point.n = n;
  point.provenance = "multiletter";
  return point;
}

double trivial_leakage_threshold(const AnyChannel& channel) {
  return 2.0 * std::log2(static_cast<double>(output_dim(channel)));
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.10g", value);
  return buf;
}

std::string region_csv(const std::vector<BoundaryPoint>& points, std::uint64_t seed) {
  std::ostringstream out;
  out << "budget_bits,R_bits,L_bits,n,seed\n";
  for (const auto& p : points) {
    out << format_number(p.budget) << ',' << format_number(p.point.rate) << ','
        << format_number(p.point.leakage) << ',' << p.point.n << ',' << seed << '\n';
  }
  return out.str();
}

}  // namespace qmask
