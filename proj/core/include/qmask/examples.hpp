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

// Built-in channels and strategies: the Pauli (depolarizing) channel with
// encoder-side correction, and the random projection channel with its
// closed-form rate-leakage curve.

#include <vector>

#include "qmask/codesim.hpp"
#include "qmask/region.hpp"

namespace qmask::examples {

/// I, X, Y, Z in that order.
std::vector<Matrix> pauli_matrices();

/// Branches I, X, Y, Z with q = (1 - 3 eps/4, eps/4, eps/4, eps/4).
RandomParameterChannel build_depolarizing(double epsilon);

/// Branch 0 is the identity, branch 1 replaces the input with |psi>;
/// q = (1 - eps, eps).
RandomParameterChannel build_projection(double epsilon, const Vector& psi = Vector());

/// X = V ~ Bernoulli(alpha) when S = 0, X = 0 when S = 1; inputs |psi>,
/// |psi_perp>. Canonical CSI basis on E0.
Strategy projection_strategy(double alpha, const Vector& psi = Vector());

/// R = (1 - eps) h(alpha), L = h((1 - eps) alpha) - (1 - eps) h(alpha).
RateLeakagePoint projection_analytic(double epsilon, double alpha);

struct AnalyticCurve {
  double epsilon = 0.0;
  std::vector<double> alpha;
  std::vector<double> rate;
  std::vector<double> leakage;
};

/// Closed-form curve on `points` equally spaced alpha values in [0, 1/2].
AnalyticCurve projection_curve(double epsilon, int points);

/// Measurement analog of the projection channel with psi = |0>: the output
/// is the computational-basis outcome of A when S = 0 and always 0 when
/// S = 1. Source sqrt(1-eps)|000> + sqrt(eps)|111> on E0, E, C.
struct MeasurementExample {
  MeasurementChannel channel;
  StateSource source;
};
MeasurementExample projection_measurement(double epsilon);

/// X = (b, s) with input sigma_s |b><b| sigma_s, b uniform; CSI reads s
/// in the canonical basis.
Strategy depolarizing_correction_strategy();

/// Classical additive analog of the correction: x_i = b_i xor s_i.
CorrectionEncoder depolarizing_correction_encoder(int n, std::uint64_t messages);

}  // namespace qmask::examples
