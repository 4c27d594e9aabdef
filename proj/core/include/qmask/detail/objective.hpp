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

// Closed-form evaluation of (I(X;B) - I(X;S), I(CS;XB)) for pure input
// states, with the gradient in p(x|s). Used by the optimizer; the generic
// HybridState route in region.cpp is the reference.

#include <vector>

#include "qmask/channels.hpp"

namespace qmask::detail {

class StrategyObjective {
 public:
  StrategyObjective(const StateSource& source, const Povm& csi_povm,
                    const StateDependentChannel& channel);

  struct Value {
    double rate = 0.0;  // unclamped I(X;B) - I(X;S)
    double leakage = 0.0;
  };
  struct Gradient {
    RealMatrix rate;  // d rate / d p(x|s), rows over kept outcomes
    RealMatrix leakage;
  };

  /// CSI outcomes with positive probability, as POVM indices.
  const std::vector<int>& kept_outcomes() const { return kept_; }
  int num_kept() const { return static_cast<int>(kept_.size()); }
  int num_povm_outcomes() const { return num_povm_outcomes_; }
  const std::vector<double>& outcome_probs() const { return ps_; }
  int dim_a() const { return dim_a_; }
  int alphabet_size() const { return static_cast<int>(cache_.size()); }

  void resize(int alphabet_size);
  /// Unit vector on H_A for symbol x.
  void set_state(int x, const Vector& v);

  Value evaluate(const RealMatrix& pmf, Gradient* grad = nullptr) const;

 private:
  struct Output {
    Matrix bc;  // rho_BC^{s,x}
    Matrix b;   // rho_B^{s,x}
    double entropy_bc = 0.0;
  };

  int dim_a_ = 0;
  int dim_b_ = 0;
  int dim_c_ = 0;
  int num_povm_outcomes_ = 0;
  std::vector<int> kept_;
  std::vector<double> ps_;
  double entropy_s_ = 0.0;
  double entropy_cs_ = 0.0;
  // transfer_[s][i * dimA + j] = (N (x) id_C)(sigma_EC^s (x) |i><j|)
  std::vector<std::vector<Matrix>> transfer_;
  std::vector<std::vector<Output>> cache_;  // [x][s]
};

}  // namespace qmask::detail
