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

// Exact (enumeration) values behind the simulation thresholds used in the
// tests. The output is the body of tests/pilot_constants.hpp.

#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "qmask/codesim.hpp"
#include "qmask/examples.hpp"

using namespace qmask;

namespace {

constexpr int kTrials = 500;

std::vector<int> letters(std::uint64_t index, int base, int n) {
  std::vector<int> out(n);
  for (int i = n - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % base);
    index /= base;
  }
  return out;
}

double prob_s(const ClassicalModel& model, const std::vector<int>& s) {
  double p = 1.0;
  for (int v : s) p *= model.q[v];
  return p;
}

std::uint64_t pow_int(int base, int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

// Exact covering-failure probability of a fixed codebook under a uniform
// message and i.i.d. states.
double exact_covering_failure(const ClassicalModel& model, const Codebook& book, double delta) {
  const RealMatrix joint = model.joint_sx();
  double fail = 0.0;
  for (std::uint64_t si = 0; si < pow_int(model.num_s(), book.n); ++si) {
    const auto s = letters(si, model.num_s(), book.n);
    const double ps = prob_s(model, s);
    if (ps == 0.0) continue;
    for (std::uint64_t m = 0; m < book.messages; ++m) {
      if (encode_binning(m, s, book, joint, delta).covering_failed) fail += ps;
    }
  }
  return fail / static_cast<double>(book.messages);
}

// Exact decoding-error probability of a fixed codebook.
double exact_error(const ClassicalModel& model, const Codebook& book, double delta) {
  const RealMatrix joint = model.joint_sx();
  const RealMatrix pyx = model.p_y_given_x();
  const int n = book.n;
  double err = 0.0;
  for (std::uint64_t si = 0; si < pow_int(model.num_s(), n); ++si) {
    const auto s = letters(si, model.num_s(), n);
    const double ps = prob_s(model, s);
    if (ps == 0.0) continue;
    for (std::uint64_t m = 0; m < book.messages; ++m) {
      const auto x = book.codeword(encode_binning(m, s, book, joint, delta).index);
      for (std::uint64_t yi = 0; yi < pow_int(model.num_y(), n); ++yi) {
        const auto y = letters(yi, model.num_y(), n);
        double py = 1.0;
        for (int i = 0; i < n && py > 0.0; ++i) py *= model.w[s[i]](x[i], y[i]);
        if (py == 0.0) continue;
        if (decode(y, book, pyx) != m) err += ps * py;
      }
    }
  }
  return err / static_cast<double>(book.messages);
}

// I(S^n; Y^n) / n from the full joint table.
double naive_leakage(const ClassicalModel& model, const Encoder& enc) {
  const int n = enc.block_length();
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> joint;
  std::map<std::uint64_t, double> ps_marg;
  std::map<std::uint64_t, double> py_marg;
  for (std::uint64_t si = 0; si < pow_int(model.num_s(), n); ++si) {
    const auto s = letters(si, model.num_s(), n);
    const double ps = prob_s(model, s);
    for (std::uint64_t m = 0; m < enc.messages(); ++m) {
      const auto x = enc.encode(m, s);
      for (std::uint64_t yi = 0; yi < pow_int(model.num_y(), n); ++yi) {
        const auto y = letters(yi, model.num_y(), n);
        double p = ps / static_cast<double>(enc.messages());
        for (int i = 0; i < n; ++i) p *= model.w[s[i]](x[i], y[i]);
        if (p == 0.0) continue;
        joint[{si, yi}] += p;
        ps_marg[si] += p;
        py_marg[yi] += p;
      }
    }
  }
  double info = 0.0;
  for (const auto& [key, p] : joint) info += p * std::log2(p / (ps_marg[key.first] * py_marg[key.second]));
  return info / n;
}

double three_sigma(double p) { return p + 3.0 * std::sqrt(p * (1.0 - p) / kTrials) + 1.0 / kTrials; }

}  // namespace

int main() {
  const ClassicalModel mod_add = mod_add_model(0.1);
  const double delta = 0.1;
  const int n = 8;
  const std::uint64_t seed = 1;

  std::printf("// Copyright 2026 The qmask Authors\n");
  std::printf("//\n");
  std::printf("// Licensed under the Apache License, Version 2.0 (the \"License\");\n");
  std::printf("// you may not use this file except in compliance with the License.\n");
  std::printf("// You may obtain a copy of the License at\n");
  std::printf("//\n");
  std::printf("//      http://www.apache.org/licenses/LICENSE-2.0\n");
  std::printf("//\n");
  std::printf("// Unless required by applicable law or agreed to in writing, software\n");
  std::printf("// distributed under the License is distributed on an \"AS IS\" BASIS,\n");
  std::printf("// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.\n");
  std::printf("// See the License for the specific language governing permissions and\n");
  std::printf("// limitations under the License.\n");
  std::printf("\n");
  std::printf("#pragma once\n\n");
  std::printf("// Generated by: build/tools/qmask_pilot > tests/pilot_constants.hpp\n");
  std::printf("// Exact enumeration over the codebook each test seeds; thresholds add\n");
  std::printf("// three binomial standard deviations (500 trials) plus one count.\n\n");
  std::printf("namespace qmask::pilot {\n\n");
  std::printf("inline constexpr double kModAddStateProb = 0.1;\n");
  std::printf("inline constexpr double kDelta = %.17g;\n", delta);
  std::printf("inline constexpr int kBlockLength = %d;\n", n);
  std::printf("inline constexpr int kTrials = %d;\n", kTrials);
  std::printf("inline constexpr unsigned long long kSeed = %llu;\n\n", static_cast<unsigned long long>(seed));

  // Covering decay: R = 1/4, X independent of S so I(X;S) = 0.
  const double rate = 0.25;
  const double gaps[3] = {0.1, 0.3, 0.5};
  for (int k = 0; k < 3; ++k) {
    const Codebook book = generate_codebook(mod_add.p_x(), n, rate, rate + gaps[k], seed);
    const double exact = exact_covering_failure(mod_add, book, delta);
    std::printf("// Rtilde - R = I(X;S) + %.1f, bin size %llu\n", gaps[k],
                static_cast<unsigned long long>(book.bin_size));
    std::printf("inline constexpr double kCoveringExact%d = %.17g;\n", k, exact);
  }
  {
    const Codebook book = generate_codebook(mod_add.p_x(), n, rate, rate + 0.5, seed);
    const double exact = exact_covering_failure(mod_add, book, delta);
    std::printf("inline constexpr double kCoveringThreshold = %.17g;\n", three_sigma(exact));
  }
  {
    const double gap = binary_entropy(0.1) + 0.2;
    const Codebook book = generate_codebook(mod_add.p_x(), n, rate, rate + gap, seed);
    const double exact = exact_covering_failure(mod_add, book, delta);
    std::printf("// Rtilde - R = H(S) + 0.2, bin size %llu\n",
                static_cast<unsigned long long>(book.bin_size));
    std::printf("inline constexpr double kCoveringHsExact = %.17g;\n", exact);
    std::printf("inline constexpr double kCoveringHsThreshold = %.17g;\n\n", three_sigma(exact));
  }

  // Low rate: R = 1/8 against I(X;Y) - I(X;S) = 1 - h(0.1).
  {
    const double r = 0.125;
    const Codebook book = generate_codebook(mod_add.p_x(), n, r, r + 2 * kDefaultCoveringSlack, seed);
    const double exact = exact_error(mod_add, book, delta);
    std::printf("inline constexpr double kLowRate = %.17g;\n", r);
    std::printf("inline constexpr double kLowRateErrorExact = %.17g;\n", exact);
    std::printf("inline constexpr double kLowRateErrorThreshold = %.17g;\n", three_sigma(exact));
  }
  // High rate: R = 3/4 above I(X;Y).
  {
    const double r = 0.75;
    const Codebook book = generate_codebook(mod_add.p_x(), n, r, r + 2 * kDefaultCoveringSlack, seed);
    const double exact = exact_error(mod_add, book, delta);
    std::printf("inline constexpr double kHighRate = %.17g;\n", r);
    std::printf("inline constexpr double kHighRateErrorExact = %.17g;\n\n", exact);
  }

  // Binning leakage on the projection-channel analog, eps = alpha = 1/2.
  {
    const auto ex = examples::projection_measurement(0.5);
    const ClassicalModel model =
        classical_model(ex.channel, ex.source, examples::projection_strategy(0.5));
    const int n6 = 6;
    const double r = 1.0 / 3.0;
    const RealMatrix joint = model.joint_sx();
    double ixs = 0.0;
    const auto px = model.p_x();
    for (int s = 0; s < model.num_s(); ++s) {
      for (int x = 0; x < model.num_x(); ++x) {
        if (joint(s, x) > 0.0) ixs += joint(s, x) * std::log2(joint(s, x) / (model.q[s] * px[x]));
      }
    }
    const double rtilde = r + ixs + 2 * kDefaultCoveringSlack;
    BinningEncoder enc(generate_codebook(model.p_x(), n6, r, rtilde, seed), joint, delta);
    const double leak = naive_leakage(model, enc);
    const double bound = single_letter_prediction(model).leakage;
    std::printf("inline constexpr double kProjectionRate = %.17g;\n", r);
    std::printf("inline constexpr double kProjectionLeakage = %.17g;\n", leak);
    std::printf("inline constexpr double kProjectionLeakageBound = %.17g;\n", bound);
    std::printf("inline constexpr double kProjectionLeakageGap = %.17g;\n", std::max(0.0, leak - bound) + 1e-9);
  }
  std::printf("\n}  // namespace qmask::pilot\n");
  return 0;
}
