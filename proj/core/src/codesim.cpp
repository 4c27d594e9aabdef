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

#include "qmask/codesim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <memory>

#include "json.hpp"

#include "qmask/error.hpp"
#include "qmask/parallel.hpp"

namespace qmask {

namespace {

constexpr double kProbTol = 1e-10;
constexpr double kNegativeProbTol = 1e-12;
constexpr double kTypicalSlack = 1e-12;
constexpr double kPurityTol = 1e-9;
constexpr std::uint64_t kStageMessage = 1;
constexpr std::uint64_t kStageState = 2;
constexpr std::uint64_t kStageChannel = 3;
constexpr std::uint64_t kStageCodebook = 4;
constexpr std::uint64_t kMaxChunkCells = std::uint64_t{1} << 22;
constexpr std::uint64_t kMaxChunks = 64;

double xlog2x(double v) { return v > 0.0 ? v * std::log2(v) : 0.0; }

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Letter i of the base-`base` expansion of `index`, first letter most
// significant.
void digits(std::uint64_t index, int base, std::span<int> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<int>(index % base);
    index /= base;
  }
}

// p(y^n | x^n, s^n) for every y^n, as a vector indexed like `digits`.
void output_distribution(std::span<const int> x, std::span<const int> s,
                         const ClassicalModel& model, std::vector<double>& out) {
  const int ny = model.num_y();
  out.assign(1, 1.0);
  std::vector<double> next;
  for (std::size_t i = 0; i < x.size(); ++i) {
    next.assign(out.size() * ny, 0.0);
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (out[j] == 0.0) continue;
      for (int y = 0; y < ny; ++y) next[j * ny + y] = out[j] * model.w[s[i]](x[i], y);
    }
    out.swap(next);
  }
}

double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) h -= xlog2x(v);
  return h;
}

double round10(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 10);
  double out = 0.0;
  std::from_chars(buf, res.ptr, out);
  return out == 0.0 ? 0.0 : out;
}

void check_cells(std::uint64_t s_count, std::uint64_t y_count, std::uint64_t messages,
                 const char* what) {
  const long double cells = static_cast<long double>(s_count) * y_count * messages;
  if (cells > static_cast<long double>(kMaxLeakageCells)) {
    throw Error(ErrorKind::kSizeLimit, std::string(what) + ": |S|^n |Y|^n M = " +
                                           std::to_string(static_cast<double>(cells)) +
                                           " exceeds the 2^26 joint-cell cap");
  }
}

// ML decoding over messages for an arbitrary encoder, from the exact
// p(y^n | m) table.
class TableDecoder {
 public:
  TableDecoder(const Encoder& encoder, const ClassicalModel& model) {
    const int n = encoder.block_length();
    messages_ = encoder.messages();
    y_count_ = ipow(model.num_y(), n);
    const std::uint64_t s_count = ipow(model.num_s(), n);
    check_cells(s_count, y_count_, messages_, "decoder table");
    table_.assign(messages_ * y_count_, 0.0);
    std::vector<int> s(n);
    std::vector<double> dist;
    for (std::uint64_t si = 0; si < s_count; ++si) {
      digits(si, model.num_s(), s);
      double ps = 1.0;
      for (int v : s) ps *= model.q[v];
      if (ps == 0.0) continue;
      for (std::uint64_t m = 0; m < messages_; ++m) {
        const std::vector<int> x = encoder.encode(m, s);
        output_distribution(x, s, model, dist);
        double* row = table_.data() + m * y_count_;
        for (std::uint64_t y = 0; y < y_count_; ++y) row[y] += ps * dist[y];
      }
    }
  }

  std::uint64_t decode(std::uint64_t y_index) const {
    std::uint64_t best = 0;
    for (std::uint64_t m = 1; m < messages_; ++m) {
      if (table_[m * y_count_ + y_index] > table_[best * y_count_ + y_index]) best = m;
    }
    return best;
  }

 private:
  std::uint64_t messages_ = 0;
  std::uint64_t y_count_ = 0;
  std::vector<double> table_;
};

std::uint64_t sequence_index(std::span<const int> seq, int base) {
  std::uint64_t index = 0;
  for (int v : seq) index = index * base + v;
  return index;
}

}  // namespace

RealMatrix ClassicalModel::joint_sx() const {
  RealMatrix joint = cond_pmf;
  for (int s = 0; s < num_s(); ++s) joint.row(s) *= q[s];
  return joint;
}

std::vector<double> ClassicalModel::p_x() const {
  const RealMatrix joint = joint_sx();
  std::vector<double> px(num_x());
  for (int x = 0; x < num_x(); ++x) px[x] = joint.col(x).sum();
  return px;
}

RealMatrix ClassicalModel::p_y_given_x() const {
  const RealMatrix joint = joint_sx();
  RealMatrix out = RealMatrix::Zero(num_x(), num_y());
  for (int x = 0; x < num_x(); ++x) {
    const double px = joint.col(x).sum();
    for (int s = 0; s < num_s(); ++s) {
      if (px > 0.0) out.row(x) += (joint(s, x) / px) * w[s].row(x);
    }
    if (px <= 0.0) out.row(x).setConstant(1.0 / num_y());
  }
  return out;
}

ValidationReport validate(const ClassicalModel& model) {
  ValidationReport report;
  if (model.q.empty() || model.w.size() != model.q.size() ||
      model.cond_pmf.rows() != static_cast<Eigen::Index>(model.q.size())) {
    report.violations.push_back({"shape", 1.0});
    return report;
  }
  double qsum = 0.0;
  for (double v : model.q) {
    if (v < 0.0) report.violations.push_back({"q-nonnegative", -v});
    qsum += v;
  }
  if (std::abs(qsum - 1.0) > kProbTol) report.violations.push_back({"q-sum", std::abs(qsum - 1.0)});
  for (Eigen::Index s = 0; s < model.cond_pmf.rows(); ++s) {
    const double r = std::abs(model.cond_pmf.row(s).sum() - 1.0);
    if (r > kProbTol) report.violations.push_back({"pmf-row-sum", r});
    if (model.cond_pmf.row(s).minCoeff() < 0.0) {
      report.violations.push_back({"pmf-nonnegative", -model.cond_pmf.row(s).minCoeff()});
    }
  }
  for (const auto& ws : model.w) {
    if (ws.rows() != model.cond_pmf.cols() || ws.cols() != model.w.front().cols()) {
      report.violations.push_back({"shape", 1.0});
      continue;
    }
    for (Eigen::Index x = 0; x < ws.rows(); ++x) {
      const double r = std::abs(ws.row(x).sum() - 1.0);
      if (r > kTracePreservingTol) report.violations.push_back({"w-row-sum", r});
      if (ws.row(x).minCoeff() < 0.0) report.violations.push_back({"w-nonnegative", -ws.row(x).minCoeff()});
    }
  }
  return report;
}

ClassicalModel classical_model(const MeasurementChannel& channel, const StateSource& source,
                               const Strategy& strategy) {
  if (channel.dim_e() != source.dim_e() || channel.dim_a() != strategy.dim_a() ||
      strategy.csi_povm().dim() != source.dim_e0()) {
    throw Error(ErrorKind::kDimensionMismatch, "classical_model: dimensions disagree");
  }
  const int de = source.dim_e();
  const int dc = source.dim_c();
  const int dec = de * dc;
  const Matrix phi = source.density();
  const Povm& povm = strategy.csi_povm();
  ClassicalModel model;
  model.cond_pmf = strategy.cond_pmf();
  for (int s = 0; s < povm.size(); ++s) {
    const Matrix sigma = linalg::partial_trace(
        linalg::kron(povm.element(s), Matrix::Identity(dec, dec)) * phi,
        std::vector<int>{source.dim_e0(), dec}, std::vector<bool>{false, true});
    const double ps = std::max(0.0, sigma.trace().real());
    model.q.push_back(ps);
    Matrix sigma_e = Matrix::Identity(de, de) / static_cast<double>(de);
    if (ps > 1e-14) {
      const std::vector<int> ec{de, dc};
      const Matrix sigma_c = linalg::partial_trace(sigma, ec, std::vector<bool>{false, true}) / ps;
      const double purity = (sigma_c * sigma_c).trace().real();
      if (purity < 1.0 - kPurityTol) {
        throw Error(ErrorKind::kInvalidArgument,
                    "classical_model: CSI outcome " + povm.labels()[s] +
                        " does not determine C (purity " + std::to_string(purity) + ")");
      }
      sigma_e = linalg::partial_trace(sigma, ec, std::vector<bool>{true, false}) / ps;
    }
    RealMatrix ws(strategy.alphabet_size(), channel.num_outcomes());
    for (int x = 0; x < strategy.alphabet_size(); ++x) {
      const auto probs =
          channel.probabilities(linalg::kron(sigma_e, strategy.input_states()[x].matrix()));
      for (int y = 0; y < channel.num_outcomes(); ++y) {
        if (probs[y] < -kNegativeProbTol) {
          throw Error(ErrorKind::kSchema, "classical_model: negative outcome probability " +
                                              std::to_string(probs[y]));
        }
        ws(x, y) = std::max(0.0, probs[y]);
      }
      ws.row(x) /= ws.row(x).sum();
    }
    model.w.push_back(std::move(ws));
  }
  double total = 0.0;
  for (double v : model.q) total += v;
  for (double& v : model.q) v /= total;
  return model;
}

ClassicalModel mod_add_model(double p_s, double p_x1) {
  if (!(p_s >= 0.0 && p_s <= 1.0) || !(p_x1 >= 0.0 && p_x1 <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "mod_add_model: probabilities outside [0, 1]");
  }
  ClassicalModel model;
  model.q = {1.0 - p_s, p_s};
  model.cond_pmf.resize(2, 2);
  model.cond_pmf << 1.0 - p_x1, p_x1, 1.0 - p_x1, p_x1;
  for (int s = 0; s < 2; ++s) {
    RealMatrix ws = RealMatrix::Zero(2, 2);
    for (int x = 0; x < 2; ++x) ws(x, x ^ s) = 1.0;
    model.w.push_back(ws);
  }
  return model;
}

MeasurementSetting to_measurement_setting(const ClassicalModel& model) {
  const ValidationReport report = validate(model);
  if (!report.ok()) throw Error(ErrorKind::kInvalidArgument, "classical model: " + report.to_string());
  const int ns = model.num_s();
  const int nx = model.num_x();
  const int ny = model.num_y();
  std::vector<std::string> labels;
  std::vector<Matrix> elements;
  for (int y = 0; y < ny; ++y) {
    Matrix lambda = Matrix::Zero(ns * nx, ns * nx);
    for (int s = 0; s < ns; ++s) {
      for (int x = 0; x < nx; ++x) lambda(s * nx + x, s * nx + x) = model.w[s](x, y);
    }
    labels.push_back(std::to_string(y));
    elements.push_back(std::move(lambda));
  }
  Vector ghz = Vector::Zero(ns * ns * ns);
  for (int s = 0; s < ns; ++s) ghz((s * ns + s) * ns + s) = std::sqrt(model.q[s]);
  std::vector<DensityOperator> states;
  for (int x = 0; x < nx; ++x) {
    Vector e = Vector::Zero(nx);
    e(x) = 1.0;
    states.push_back(DensityOperator::pure(e));
  }
  return MeasurementSetting{
      MeasurementChannel(ns, nx, Povm(std::move(labels), std::move(elements))),
      StateSource(ns, ns, ns, std::move(ghz)),
      Strategy(Povm::computational_basis(ns), model.cond_pmf, std::move(states), true)};
}

RateLeakagePoint single_letter_prediction(const ClassicalModel& model) {
  const MeasurementSetting setting = to_measurement_setting(model);
  return evaluate_strategy(setting.source, setting.strategy, AnyChannel(setting.channel));
}

bool typical_check(std::span<const int> seq, std::span<const double> pmf, double delta) {
  std::vector<int> counts(pmf.size(), 0);
  for (int v : seq) {
    if (v < 0 || static_cast<std::size_t>(v) >= pmf.size()) {
      throw Error(ErrorKind::kInvalidArgument, "typical_check: symbol outside the alphabet");
    }
    ++counts[v];
  }
  const double n = static_cast<double>(seq.size());
  for (std::size_t a = 0; a < pmf.size(); ++a) {
    if (pmf[a] == 0.0 && counts[a] > 0) return false;
    if (std::abs(counts[a] / n - pmf[a]) > delta + kTypicalSlack) return false;
  }
  return true;
}

bool jointly_typical_check(std::span<const int> s, std::span<const int> x,
                           const RealMatrix& joint, double delta) {
  if (s.size() != x.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "jointly_typical_check: length mismatch");
  }
  const Eigen::Index nx = joint.cols();
  std::vector<int> pairs(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= joint.rows() || x[i] < 0 || x[i] >= nx) {
      throw Error(ErrorKind::kInvalidArgument, "jointly_typical_check: symbol outside the alphabet");
    }
    pairs[i] = static_cast<int>(s[i] * nx + x[i]);
  }
  std::vector<double> flat(joint.size());
  for (Eigen::Index a = 0; a < joint.rows(); ++a) {
    for (Eigen::Index b = 0; b < nx; ++b) flat[a * nx + b] = joint(a, b);
  }
  return typical_check(pairs, flat, delta);
}

std::uint64_t message_count(int n, double rate) {
  if (!(rate >= 0.0) || n < 1) {
    throw Error(ErrorKind::kInvalidArgument, "rate must be >= 0 and n >= 1");
  }
  const double count = std::round(std::exp2(n * rate));
  if (count > static_cast<double>(kMaxCodewords)) {
    throw Error(ErrorKind::kSizeLimit, "2^(nR) exceeds the 2^20 codeword cap");
  }
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(count));
}

Codebook generate_codebook(std::span<const double> p_x, int n, double rate, double rtilde,
                           std::uint64_t seed) {
  if (n < 1 || n > kMaxBlockLength) {
    throw Error(ErrorKind::kSizeLimit, "block length must be in [1, 10]");
  }
  if (!(rtilde >= rate)) throw Error(ErrorKind::kInvalidArgument, "Rtilde must be >= R");
  Codebook book;
  book.n = n;
  book.messages = message_count(n, rate);
  book.bin_size = message_count(n, rtilde - rate);
  if (static_cast<long double>(book.messages) * book.bin_size > kMaxCodewords) {
    throw Error(ErrorKind::kSizeLimit, "codebook size 2^(n Rtilde) exceeds the 2^20 codeword cap");
  }
  book.p_x.assign(p_x.begin(), p_x.end());
  book.seed = seed;
  // Codeword j of bin m has its own stream, so a larger bin extends a smaller
  // one drawn with the same seed.
  book.symbols.resize(book.size() * n);
  for (std::uint64_t k = 0; k < book.size(); ++k) {
    const std::uint64_t m = k / book.bin_size;
    const std::uint64_t j = k % book.bin_size;
    CounterRng rng(seed, (m << 32) | j, kStageCodebook);
    for (int i = 0; i < n; ++i) book.symbols[k * n + i] = rng.categorical(p_x);
  }
  return book;
}

BinningChoice encode_binning(std::uint64_t m, std::span<const int> s, const Codebook& codebook,
                             const RealMatrix& joint_sx, double delta) {
  if (m >= codebook.messages) throw Error(ErrorKind::kInvalidArgument, "message out of range");
  const std::uint64_t first = m * codebook.bin_size;
  for (std::uint64_t k = first; k < first + codebook.bin_size; ++k) {
    if (jointly_typical_check(s, codebook.codeword(k), joint_sx, delta)) return {k, false};
  }
  return {first, true};
}

BinningEncoder::BinningEncoder(Codebook codebook, RealMatrix joint_sx, double delta)
    : codebook_(std::move(codebook)), joint_sx_(std::move(joint_sx)), delta_(delta) {}

std::vector<int> BinningEncoder::encode(std::uint64_t m, std::span<const int> s) const {
  const auto choice = encode_binning(m, s, codebook_, joint_sx_, delta_);
  const auto word = codebook_.codeword(choice.index);
  return {word.begin(), word.end()};
}

CorrectionEncoder::CorrectionEncoder(int n, std::uint64_t messages) : n_(n), messages_(messages) {
  if (n < 1 || n > kMaxBlockLength) throw Error(ErrorKind::kSizeLimit, "block length must be in [1, 10]");
  if (messages < 1 || messages > (std::uint64_t{1} << n)) {
    throw Error(ErrorKind::kInvalidArgument, "correction encoder: needs 1 <= M <= 2^n");
  }
}

std::vector<int> CorrectionEncoder::encode(std::uint64_t m, std::span<const int> s) const {
  std::vector<int> x(n_);
  for (int i = 0; i < n_; ++i) {
    const int bit = static_cast<int>((m >> (n_ - 1 - i)) & 1U);
    x[i] = bit ^ s[i];
  }
  return x;
}

std::vector<int> sample_channel(std::span<const int> x, std::span<const int> s,
                                const ClassicalModel& model, CounterRng& rng) {
  std::vector<int> y(x.size());
  std::vector<double> row(model.num_y());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (int v = 0; v < model.num_y(); ++v) row[v] = model.w[s[i]](x[i], v);
    y[i] = rng.categorical(row);
  }
  return y;
}

std::uint64_t decode(std::span<const int> y, const Codebook& codebook,
                     const RealMatrix& p_y_given_x) {
  const RealMatrix logs = p_y_given_x.unaryExpr([](double v) {
    return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
  });
  std::uint64_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < codebook.size(); ++k) {
    const auto word = codebook.codeword(k);
    double score = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) score += logs(word[i], y[i]);
    if (k == 0 || score > best_score) {
      best = k;
      best_score = score;
    }
  }
  return codebook.bin_of(best);
}

double exact_leakage(const Encoder& encoder, const ClassicalModel& model, int threads) {
  const int n = encoder.block_length();
  const std::uint64_t s_count = ipow(model.num_s(), n);
  const std::uint64_t y_count = ipow(model.num_y(), n);
  const std::uint64_t messages = encoder.messages();
  check_cells(s_count, y_count, messages, "exact_leakage");

  // Fixed partition of the s^n range; the reduction below runs in chunk
  // order, so the result does not depend on the thread count.
  const std::uint64_t chunks =
      std::clamp<std::uint64_t>(kMaxChunkCells / y_count, 1, std::min(kMaxChunks, s_count));
  std::vector<std::vector<double>> p_y(chunks);
  std::vector<double> h_cond(chunks, 0.0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t lo = s_count * c / chunks;
    const std::uint64_t hi = s_count * (c + 1) / chunks;
    std::vector<double>& acc = p_y[c];
    acc.assign(y_count, 0.0);
    std::vector<int> s(n);
    std::vector<double> given_s;
    std::vector<double> dist;
    for (std::uint64_t si = lo; si < hi; ++si) {
      digits(si, model.num_s(), s);
      double ps = 1.0;
      for (int v : s) ps *= model.q[v];
      if (ps == 0.0) continue;
      given_s.assign(y_count, 0.0);
      for (std::uint64_t m = 0; m < messages; ++m) {
        output_distribution(encoder.encode(m, s), s, model, dist);
        for (std::uint64_t y = 0; y < y_count; ++y) given_s[y] += dist[y];
      }
      for (auto& v : given_s) v /= static_cast<double>(messages);
      h_cond[c] += ps * entropy_of(given_s);
      for (std::uint64_t y = 0; y < y_count; ++y) acc[y] += ps * given_s[y];
    }
  });
  std::vector<double> total(y_count, 0.0);
  double h_y_given_s = 0.0;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    for (std::uint64_t y = 0; y < y_count; ++y) total[y] += p_y[c][y];
    h_y_given_s += h_cond[c];
  }
  return std::max(0.0, (entropy_of(total) - h_y_given_s) / n);
}

SimResult simulate(const SimConfig& config, const ClassicalModel& model) {
  const ValidationReport report = validate(model);
  if (!report.ok()) throw Error(ErrorKind::kInvalidArgument, "classical model: " + report.to_string());
  if (config.n < 1 || config.n > kMaxBlockLength) {
    throw Error(ErrorKind::kSizeLimit, "simulate: n must be in [1, 10]");
  }
  if (model.num_s() > kMaxClassicalAlphabet || model.num_x() > kMaxClassicalAlphabet ||
      model.num_y() > kMaxClassicalAlphabet) {
    throw Error(ErrorKind::kSizeLimit, "simulate: |S|, |X|, |Y| must be <= 4");
  }
  if (config.trials < 1) throw Error(ErrorKind::kInvalidArgument, "simulate: trials must be >= 1");
  if (!(config.delta > 0.0)) throw Error(ErrorKind::kInvalidArgument, "simulate: delta must be > 0");
  if (config.threads < 1) throw Error(ErrorKind::kInvalidArgument, "simulate: threads must be >= 1");

  SimResult result;
  result.config = config;
  result.prediction = single_letter_prediction(model);
  const int n = config.n;
  const RealMatrix joint = model.joint_sx();

  std::unique_ptr<Encoder> encoder;
  std::optional<TableDecoder> table;
  const BinningEncoder* binning = nullptr;
  if (config.mode == EncoderMode::kBinning) {
    double i_xs = 0.0;
    {
      const std::vector<double> px = model.p_x();
      for (int s = 0; s < model.num_s(); ++s) {
        for (int x = 0; x < model.num_x(); ++x) {
          const double w = joint(s, x);
          if (w > 0.0) i_xs += w * std::log2(w / (model.q[s] * px[x]));
        }
      }
    }
    result.rtilde = config.rtilde.value_or(config.rate + i_xs + 2.0 * kDefaultCoveringSlack);
    auto owned = std::make_unique<BinningEncoder>(
        generate_codebook(model.p_x(), n, config.rate, result.rtilde, config.seed), joint,
        config.delta);
    binning = owned.get();
    result.bin_size = owned->codebook().bin_size;
    encoder = std::move(owned);
  } else {
    if (model.num_x() != 2 || model.num_y() != 2) {
      throw Error(ErrorKind::kInvalidArgument, "simulate: the correction encoder needs binary X and Y");
    }
    result.rtilde = config.rate;
    result.bin_size = 1;
    encoder = std::make_unique<CorrectionEncoder>(n, message_count(n, config.rate));
    table.emplace(*encoder, model);
  }
  result.messages = encoder->messages();

  const RealMatrix p_y_x = model.p_y_given_x();
  std::vector<char> errors(config.trials, 0);
  std::vector<char> failures(config.trials, 0);
  parallel_for(config.trials, config.threads, [&](std::size_t t) {
    CounterRng msg_rng(config.seed, t + 1, kStageMessage);
    CounterRng state_rng(config.seed, t + 1, kStageState);
    CounterRng channel_rng(config.seed, t + 1, kStageChannel);
    const std::uint64_t m = msg_rng.below(encoder->messages());
    std::vector<int> s(n);
    for (auto& v : s) v = state_rng.categorical(model.q);
    std::vector<int> x;
    if (binning != nullptr) {
      const auto choice = encode_binning(m, s, binning->codebook(), joint, config.delta);
      failures[t] = choice.covering_failed;
      const auto word = binning->codebook().codeword(choice.index);
      x.assign(word.begin(), word.end());
    } else {
      x = encoder->encode(m, s);
    }
    const std::vector<int> y = sample_channel(x, s, model, channel_rng);
    const std::uint64_t m_hat = binning != nullptr
                                    ? decode(y, binning->codebook(), p_y_x)
                                    : table->decode(sequence_index(y, model.num_y()));
    errors[t] = m_hat != m;
  });
  std::uint64_t error_count = 0;
  std::uint64_t failure_count = 0;
  for (int t = 0; t < config.trials; ++t) {
    error_count += errors[t];
    failure_count += failures[t];
  }
  const double trials = config.trials;
  result.error_rate = error_count / trials;
  result.ci_halfwidth = 1.96 * std::sqrt(result.error_rate * (1.0 - result.error_rate) / trials);
  result.covering_failure_rate = failure_count / trials;

  const long double cells = static_cast<long double>(ipow(model.num_s(), n)) *
                            ipow(model.num_y(), n) * result.messages;
  if (cells <= static_cast<long double>(kMaxLeakageCells)) {
    result.leakage_bits_per_letter = exact_leakage(*encoder, model, config.threads);
  } else {
    result.leakage_notice = "leakage omitted: |S|^n |Y|^n M exceeds the 2^26 joint-cell cap";
  }
  return result;
}

std::string to_json(const SimResult& result) {
  nlohmann::json doc;
  const SimConfig& c = result.config;
  doc["config"] = {
      {"n", c.n},
      {"rate_bits", round10(c.rate)},
      {"rtilde_bits", round10(result.rtilde)},
      {"delta", round10(c.delta)},
      {"trials", c.trials},
      {"encoder", c.mode == EncoderMode::kBinning ? "binning" : "correction"},
      {"messages", result.messages},
      {"bin_size", result.bin_size},
  };
  doc["error_rate"] = round10(result.error_rate);
  doc["ci_halfwidth"] = round10(result.ci_halfwidth);
  doc["covering_failure_rate"] = round10(result.covering_failure_rate);
  if (result.leakage_bits_per_letter) {
    doc["leakage_bits_per_letter"] = round10(*result.leakage_bits_per_letter);
  } else {
    doc["leakage_bits_per_letter"] = nullptr;
    doc["leakage_notice"] = result.leakage_notice;
  }
  doc["prediction"] = {{"R_bound", round10(result.prediction.rate)},
                       {"L_bound", round10(result.prediction.leakage)}};
  doc["seed"] = c.seed;
  return doc.dump(2) + "\n";
}

}  // namespace qmask
