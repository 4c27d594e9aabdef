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

// Desk-scale simulation of the binning scheme for measurement channels with
// classical CSI: random codebooks split into bins, covering by joint
// typicality, ML decoding, and exact leakage by enumeration at small n.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmask/region.hpp"
#include "qmask/rng.hpp"

namespace qmask {

inline constexpr int kMaxBlockLength = 10;
inline constexpr int kMaxClassicalAlphabet = 4;
inline constexpr std::uint64_t kMaxCodewords = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kMaxLeakageCells = std::uint64_t{1} << 26;
inline constexpr double kDefaultCoveringSlack = 0.05;

/// Classical analog of a measurement channel with classical CSI:
/// q(s), p(x|s) and W(y|x,s).
struct ClassicalModel {
  std::vector<double> q;
  RealMatrix cond_pmf;            // rows s, columns x
  std::vector<RealMatrix> w;      // w[s](x, y)

  int num_s() const { return static_cast<int>(q.size()); }
  int num_x() const { return static_cast<int>(cond_pmf.cols()); }
  int num_y() const { return static_cast<int>(w.front().cols()); }

  RealMatrix joint_sx() const;        // p(s) p(x|s)
  std::vector<double> p_x() const;
  RealMatrix p_y_given_x() const;     // sum_s p(s|x) W(y|x,s)
};

ValidationReport validate(const ClassicalModel& model);

/// W(y|x,s) = Tr(Lambda_y (sigma_E^s (x) phi_A^x)). Requires the CSI
/// outcome to determine C (sigma_C^s pure).
ClassicalModel classical_model(const MeasurementChannel& channel, const StateSource& source,
                               const Strategy& strategy);

/// Binary S, X, Y with y = x xor s, S ~ Bernoulli(p_s) and X independent of
/// S with P(X=1) = p_x1.
ClassicalModel mod_add_model(double p_s, double p_x1 = 0.5);

/// Measurement channel, GHZ source and basis-state strategy whose induced
/// classical model is `model`.
struct MeasurementSetting {
  MeasurementChannel channel;
  StateSource source;
  Strategy strategy;
};
MeasurementSetting to_measurement_setting(const ClassicalModel& model);

/// Single-letter (R, L) for the model, evaluated through evaluate_strategy.
RateLeakagePoint single_letter_prediction(const ClassicalModel& model);

bool typical_check(std::span<const int> seq, std::span<const double> pmf, double delta);
bool jointly_typical_check(std::span<const int> s, std::span<const int> x,
                           const RealMatrix& joint, double delta);

struct Codebook {
  int n = 0;
  std::uint64_t messages = 0;
  std::uint64_t bin_size = 0;
  std::vector<int> symbols;  // codeword k occupies [k n, (k + 1) n)
  std::vector<double> p_x;
  std::uint64_t seed = 0;

  std::uint64_t size() const { return messages * bin_size; }
  std::span<const int> codeword(std::uint64_t k) const {
    return {symbols.data() + k * n, static_cast<std::size_t>(n)};
  }
  std::uint64_t bin_of(std::uint64_t k) const { return k / bin_size; }
};

std::uint64_t message_count(int n, double rate);

Codebook generate_codebook(std::span<const double> p_x, int n, double rate, double rtilde,
                           std::uint64_t seed);

struct BinningChoice {
  std::uint64_t index = 0;
  bool covering_failed = false;
};

BinningChoice encode_binning(std::uint64_t m, std::span<const int> s, const Codebook& codebook,
                             const RealMatrix& joint_sx, double delta);

/// Encoder that maps (message, state sequence) to an input sequence.
class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual int block_length() const = 0;
  virtual std::uint64_t messages() const = 0;
  virtual std::vector<int> encode(std::uint64_t m, std::span<const int> s) const = 0;
};

class BinningEncoder final : public Encoder {
 public:
  BinningEncoder(Codebook codebook, RealMatrix joint_sx, double delta);
  int block_length() const override { return codebook_.n; }
  std::uint64_t messages() const override { return codebook_.messages; }
  std::vector<int> encode(std::uint64_t m, std::span<const int> s) const override;
  const Codebook& codebook() const { return codebook_; }

 private:
  Codebook codebook_;
  RealMatrix joint_sx_;
  double delta_;
};

/// Message bits b_1..b_k (k = log2 messages, padded with zeros to n) sent as
/// x_i = b_i xor s_i on binary additive channels.
class CorrectionEncoder final : public Encoder {
 public:
  CorrectionEncoder(int n, std::uint64_t messages);
  int block_length() const override { return n_; }
  std::uint64_t messages() const override { return messages_; }
  std::vector<int> encode(std::uint64_t m, std::span<const int> s) const override;

 private:
  int n_;
  std::uint64_t messages_;
};

std::vector<int> sample_channel(std::span<const int> x, std::span<const int> s,
                                const ClassicalModel& model, CounterRng& rng);

/// argmax_k prod_i p(y_i | x_i(k)) with ties to the lowest k; returns the bin.
std::uint64_t decode(std::span<const int> y, const Codebook& codebook,
                     const RealMatrix& p_y_given_x);

/// (1/n) I(S^n; Y^n) under a uniform message, by full enumeration.
double exact_leakage(const Encoder& encoder, const ClassicalModel& model, int threads = 1);

enum class EncoderMode { kBinning, kCorrection };

struct SimConfig {
  int n = 8;
  double rate = 0.0;
  std::optional<double> rtilde;
  double delta = 0.1;
  int trials = 500;
  std::uint64_t seed = 0;
  EncoderMode mode = EncoderMode::kBinning;
  int threads = 1;
};

struct SimResult {
  SimConfig config;
  double rtilde = 0.0;
  std::uint64_t messages = 0;
  std::uint64_t bin_size = 0;
  double error_rate = 0.0;
  double ci_halfwidth = 0.0;
  double covering_failure_rate = 0.0;
  std::optional<double> leakage_bits_per_letter;
  std::string leakage_notice;
  RateLeakagePoint prediction;
};

SimResult simulate(const SimConfig& config, const ClassicalModel& model);

/// JSON document with sorted keys and 10 significant digits.
std::string to_json(const SimResult& result);

}  // namespace qmask
