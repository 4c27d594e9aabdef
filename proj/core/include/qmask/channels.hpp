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

// State-dependent channels N_{EA->B}, measurement channels M_{EA->Y},
// random-parameter channels and the channel-state source |phi_{E0 E C}>.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qmask/qstate.hpp"

namespace qmask {

inline constexpr double kTracePreservingTol = 1e-9;
inline constexpr double kSourceNormTol = 1e-10;

/// Operator-sum map on H_E (x) H_A -> H_B. Kraus operators are dimB x
/// (dimE * dimA) with E the more significant input factor.
class StateDependentChannel {
 public:
  StateDependentChannel(int dim_e, int dim_a, int dim_b, std::vector<Matrix> kraus);

  static StateDependentChannel identity(int dim);

  int dim_e() const { return dim_e_; }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  /// Applies the map to an operator on E (x) A.
  Matrix apply(const Matrix& rho_ea) const;

 private:
  int dim_e_;
  int dim_a_;
  int dim_b_;
  std::vector<Matrix> kraus_;
};

/// q-c channel: rho_EA -> sum_y Tr(Lambda_y rho_EA) |y><y|.
class MeasurementChannel {
 public:
  MeasurementChannel(int dim_e, int dim_a, Povm povm);

  int dim_e() const { return dim_e_; }
  int dim_a() const { return dim_a_; }
  int num_outcomes() const { return povm_.size(); }
  const Povm& povm() const { return povm_; }
  const std::vector<std::string>& output_labels() const { return povm_.labels(); }

  /// Born probabilities for an operator on E (x) A.
  std::vector<double> probabilities(const Matrix& rho_ea) const;

  /// Equivalent operator-sum channel with a |Y|-dimensional diagonal output.
  StateDependentChannel as_kraus() const;

 private:
  int dim_e_;
  int dim_a_;
  Povm povm_;
};

class StateSource {
 public:
  StateSource(int dim_e0, int dim_e, int dim_c, Vector vector);

  /// Source with all three systems one-dimensional.
  static StateSource trivial();

  int dim_e0() const { return dim_e0_; }
  int dim_e() const { return dim_e_; }
  int dim_c() const { return dim_c_; }
  const Vector& vector() const { return vector_; }

  /// |phi><phi| on E0 (x) E (x) C.
  Matrix density() const;

 private:
  int dim_e0_;
  int dim_e_;
  int dim_c_;
  Vector vector_;
};

class RandomParameterChannel {
 public:
  RandomParameterChannel(std::vector<std::string> labels, std::vector<double> q,
                         std::vector<std::vector<Matrix>> branch_kraus);

  int num_states() const { return static_cast<int>(q_.size()); }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& q() const { return q_; }
  const std::vector<std::vector<Matrix>>& branch_kraus() const { return branch_kraus_; }

  Matrix apply_branch(int s, const Matrix& rho) const;
  /// sum_s q(s) N^(s)(rho).
  Matrix apply_average(const Matrix& rho) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> q_;
  std::vector<std::vector<Matrix>> branch_kraus_;
  int dim_a_ = 0;
  int dim_b_ = 0;
};

using AnyChannel = std::variant<StateDependentChannel, MeasurementChannel>;

/// Names of the registers a channel consumes and produces.
struct ChannelPorts {
  std::string e = "E";
  std::string a = "A";
  std::string out = "B";
};

Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& rho);

ValidationReport validate(const StateDependentChannel& channel);
ValidationReport validate(const MeasurementChannel& channel);
ValidationReport validate(const StateSource& source);
ValidationReport validate(const RandomParameterChannel& channel);

/// Replaces registers E, A by the output register. When dimE == 1 the state
/// may omit the E register.
HybridState apply(const StateDependentChannel& channel, const HybridState& input,
                  const ChannelPorts& ports = {});

/// Replaces registers E, A by a classical outcome register. Conditional
/// states of the remaining quantum registers are Tr_EA(Lambda_y rho)/p(y).
HybridState apply_measurement(const MeasurementChannel& channel,
                              const HybridState& input,
                              const ChannelPorts& ports = {"E", "A", "Y"});

/// E == E0 == C == S: the source is sum_s sqrt(q(s)) |s>_E0 |s>_E |s>_C and
/// the channel applies branch s controlled on E, then discards E.
std::pair<StateDependentChannel, StateSource> lift_random_parameter(
    const RandomParameterChannel& rpc);

/// n-fold tensor power. Inputs are ordered E_1..E_n A_1..A_n, outputs
/// B_1..B_n. Capped at n <= 2.
StateDependentChannel product_channel(const StateDependentChannel& channel, int n);

/// n-fold tensor power of a measurement channel, outcome labels joined with
/// ','. Capped at n <= 10 and materialized input dimension <= 64.
MeasurementChannel product_channel(const MeasurementChannel& channel, int n);

/// |phi>^{(x)n} regrouped as E0^n, E^n, C^n.
StateSource product_source(const StateSource& source, int n);

inline constexpr int kMaxQuantumProductLetters = 2;
inline constexpr int kMaxMeasurementProductLetters = 10;
inline constexpr int kMaxMaterializedDim = 64;

}  // namespace qmask
