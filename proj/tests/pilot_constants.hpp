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

// Generated by: build/tools/qmask_pilot > tests/pilot_constants.hpp
// Exact enumeration over the codebook each test seeds; thresholds add
// three binomial standard deviations (500 trials) plus one count.

namespace qmask::pilot {

inline constexpr double kModAddStateProb = 0.1;
inline constexpr double kDelta = 0.10000000000000001;
inline constexpr int kBlockLength = 8;
inline constexpr int kTrials = 500;
inline constexpr unsigned long long kSeed = 1;

// Rtilde - R = I(X;S) + 0.1, bin size 2
inline constexpr double kCoveringExact0 = 0.10186470999999962;
// Rtilde - R = I(X;S) + 0.3, bin size 5
inline constexpr double kCoveringExact1 = 0.083264274999999471;
// Rtilde - R = I(X;S) + 0.5, bin size 16
inline constexpr double kCoveringExact2 = 0.042077597499999134;
inline constexpr double kCoveringThreshold = 0.071013211827414977;
// Rtilde - R = H(S) + 0.2, bin size 41
inline constexpr double kCoveringHsExact = 0.039420392499999152;
inline constexpr double kCoveringHsThreshold = 0.067527779439189625;

inline constexpr double kLowRate = 0.125;
inline constexpr double kLowRateErrorExact = 0.029599519999999973;
inline constexpr double kLowRateErrorThreshold = 0.054337615599320779;
inline constexpr double kHighRate = 0.75;
inline constexpr double kHighRateErrorExact = 0.59525389140628815;

inline constexpr double kProjectionRate = 0.33333333333333331;
inline constexpr double kProjectionLeakage = 0.32135449437679947;
inline constexpr double kProjectionLeakageBound = 0.31127812445913294;
inline constexpr double kProjectionLeakageGap = 0.010076370917666527;

}  // namespace qmask::pilot
