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

// Single-letter rate-leakage evaluation
//
//   R <= I(X;B) - I(X;S),   L >= I(CS;XB)
//
// over the induced states rho_{ECSXA} and rho_{BCSX}, plus the optimizer for
// the capacity-leakage function and the boundary sweep.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmask/channels.hpp"

namespace qmask {

class Strategy {
 public:
  /// cond_pmf has one row per CSI outcome and one column per input symbol.
  Strategy(Povm csi_povm, RealMatrix cond_pmf, std::vector<DensityOperator> input_states,
           bool allow_oversize = false);

  /// (dimA^2 + 1) * dimE0.
  static int cardinality_cap(int dim_a, int dim_e0);

  const Povm& csi_povm() const { return csi_povm_; }
  const RealMatrix& cond_pmf() const { return cond_pmf_; }
  const std::vector<DensityOperator>& input_states() const { return input_states_; }
  int num_outcomes() const { return static_cast<int>(cond_pmf_.rows()); }
  int alphabet_size() const { return static_cast<int>(cond_pmf_.cols()); }
  int dim_a() const { return input_states_.front().dim(); }

  /// FNV-1a over the bit patterns of every number in the strategy, with -0 read as +0.
  std::uint64_t hash() const;

 private:
  Povm csi_povm_;
  RealMatrix cond_pmf_;
  std::vector<DensityOperator> input_states_;
};

/// Tensor product of two strategies (outcome and symbol alphabets are
/// row-major pairs).
Strategy tensor_strategy(const Strategy& a, const Strategy& b);

struct RateLeakagePoint {
  double rate = 0.0;            // bits per channel use, clamped at 0
  double leakage = 0.0;         // bits per channel use
  double rate_unclamped = 0.0;  // I(X;B) - I(X;S), divided by n
  int n = 1;
  std::string provenance;
};

struct JointStates {
  HybridState pre;   // S, X classical; E, C, A quantum
  HybridState post;  // S, X classical; B, C quantum
};

/// Operator-sum form used for evaluation; measurement channels produce a
/// diagonal |Y|-dimensional output.
StateDependentChannel to_operator_sum(const AnyChannel& channel);

/// Output dimension (|Y| for measurement channels).
int output_dim(const AnyChannel& channel);

JointStates induced_joint_state(const StateSource& source, const Strategy& strategy,
                                const AnyChannel& channel);

RateLeakagePoint evaluate_strategy(const StateSource& source, const Strategy& strategy,
                                   const AnyChannel& channel);

/// (R, L)/n for an n-letter strategy over the product channel and source.
RateLeakagePoint multiletter_point(const StateSource& source, const AnyChannel& channel,
                                   int n, const Strategy& strategy_n);

/// 2 log2 dimB, above which the masking constraint is inactive.
double trivial_leakage_threshold(const AnyChannel& channel);

enum class CsiSearch {
  kCanonical,            // computational basis on E0 only
  kCanonicalAndTrivial,  // plus the no-measurement POVM
  kRandomBases,          // plus projective measurements in random bases
};

struct OptimizerOptions {
  int restarts = 8;
  int iterations = 150;
  std::uint64_t seed = 0;
  int alphabet_size = 0;  // 0 selects the cardinality cap
  bool allow_oversize = false;
  int threads = 1;
  CsiSearch csi_search = CsiSearch::kCanonicalAndTrivial;
  std::optional<Strategy> warm_start;
};

struct OptimizeResult {
  RateLeakagePoint point;
  Strategy strategy;
  double leakage_budget = 0.0;
  int feasible_restarts = 0;
};

/// Best strategy found with L <= budget (+1e-6). The returned point is
/// evaluate_strategy on the returned strategy. Deterministic for a seed.
OptimizeResult optimize_rate(const StateSource& source, const AnyChannel& channel,
                             double leakage_budget, const OptimizerOptions& options);

struct BoundaryPoint {
  double budget = 0.0;
  RateLeakagePoint point;
  Strategy strategy;
};

/// One optimized point per budget. Budgets must be ascending; each budget
/// is warm-started from the previous optimum so R is nondecreasing.
std::vector<BoundaryPoint> region_boundary(const StateSource& source,
                                           const AnyChannel& channel,
                                           const std::vector<double>& budgets,
                                           const OptimizerOptions& options);

/// "budget_bits,R_bits,L_bits,n,seed" rows with 10 significant digits.
std::string region_csv(const std::vector<BoundaryPoint>& points, std::uint64_t seed);

/// printf("%#.10g") without locale dependence.
std::string format_number(double value);

}  // namespace qmask
