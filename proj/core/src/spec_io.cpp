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

#include "qmask/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qmask/error.hpp"

namespace qmask {

namespace {

using nlohmann::json;

constexpr double kRankCutoff = 1e-12;

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorKind::kSchema, "channel spec: " + what);
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return obj.at(key);
}

int positive_int(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    schema_error(std::string("field '") + key + "' must be a positive integer");
  }
  return v.get<int>();
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where + " must be a number");
  return v.get<double>();
}

cplx complex_number(const json& v) {
  if (!v.is_array() || v.size() != 2) schema_error("complex numbers are [re, im] pairs");
  return {number(v[0], "real part"), number(v[1], "imaginary part")};
}

Matrix matrix(const json& v, int rows, int cols, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != rows) {
    schema_error(where + " must have " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!v[i].is_array() || static_cast<int>(v[i].size()) != cols) {
      schema_error(where + " must have " + std::to_string(cols) + " columns");
    }
    for (int j = 0; j < cols; ++j) m(i, j) = complex_number(v[i][j]);
  }
  return m;
}

std::vector<Matrix> matrix_list(const json& v, int rows, int cols, const std::string& where) {
  if (!v.is_array() || v.empty()) schema_error(where + " must be a non-empty list of matrices");
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(matrix(v[k], rows, cols, where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

std::vector<std::string> labels(const json& v) {
  if (!v.is_array()) schema_error("labels must be a list of strings");
  std::vector<std::string> out;
  for (const auto& l : v) {
    if (!l.is_string()) schema_error("labels must be strings");
    out.push_back(l.get<std::string>());
  }
  return out;
}

json emit_complex(cplx z) { return json::array({z.real(), z.imag()}); }

json emit_matrix(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(emit_complex(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json emit_matrices(const std::vector<Matrix>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(emit_matrix(m));
  return out;
}

// Purifies a mixed source on E0 E C into E0 (G E) C and returns the
// dimension of G.
std::pair<StateSource, int> purify_source(int de0, int de, int dc, const Matrix& density) {
  const DensityOperator rho(density);
  const int d = rho.dim();
  const auto sys = linalg::hermitian_eigensystem(rho.matrix());
  int rank = 0;
  for (Eigen::Index k = 0; k < sys.values.size(); ++k) rank += sys.values(k) > kRankCutoff;
  rank = std::max(rank, 1);
  const Vector full = purify(rho);  // system (x) ancilla, ancilla dim d
  Vector trimmed(static_cast<Eigen::Index>(d) * rank);
  for (int i = 0; i < d; ++i) {
    for (int g = 0; g < rank; ++g) trimmed(i * rank + g) = full(i * d + g);
  }
  trimmed /= trimmed.norm();
  const std::vector<int> dims{de0, de, dc, rank};
  const std::vector<int> to_e0_g_e_c{0, 3, 1, 2};
  const Vector regrouped = linalg::permute_subsystems(trimmed, dims, to_e0_g_e_c);
  return {StateSource(de0, rank * de, dc, regrouped), rank};
}

StateSource parse_source(const json& v, std::optional<Matrix>* density_out, int* dims_out) {
  const json& dims = field(v, "dims");
  const int de0 = positive_int(dims, "E0");
  const int de = positive_int(dims, "E");
  const int dc = positive_int(dims, "C");
  dims_out[0] = de0;
  dims_out[1] = de;
  dims_out[2] = dc;
  const int total = de0 * de * dc;
  if (v.contains("vector")) {
    const json& amps = v.at("vector");
    if (!amps.is_array() || static_cast<int>(amps.size()) != total) {
      schema_error("source vector must have dimE0*dimE*dimC entries");
    }
    Vector psi(total);
    for (int i = 0; i < total; ++i) psi(i) = complex_number(amps[i]);
    return StateSource(de0, de, dc, psi);
  }
  if (v.contains("density")) {
    *density_out = matrix(v.at("density"), total, total, "source density");
    return StateSource::trivial();
  }
  schema_error("source needs 'vector' or 'density'");
}

}  // namespace

ChannelSpec parse_channel_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("document must be an object");
  const json& type_field = field(doc, "type");
  if (!type_field.is_string()) schema_error("'type' must be a string");
  const std::string type = type_field.get<std::string>();

  std::optional<StateSource> source;
  std::optional<Matrix> density;
  int source_dims[3] = {0, 0, 0};
  if (doc.contains("source")) {
    if (type == "random_parameter") schema_error("random_parameter channels carry their own source");
    source = parse_source(doc.at("source"), &density, source_dims);
  }
  auto check_source_e = [&](int de) {
    if (source && source_dims[1] != de) schema_error("source dims.E must equal channel dims.E");
  };

  if (type == "kraus") {
    const json& dims = field(doc, "dims");
    const int de = positive_int(dims, "E");
    const int da = positive_int(dims, "A");
    const int db = positive_int(dims, "B");
    check_source_e(de);
    std::vector<Matrix> kraus = matrix_list(field(doc, "kraus"), db, de * da, "kraus");
    if (density) {
      auto [pure, g] = purify_source(source_dims[0], de, source_dims[2], *density);
      std::vector<Matrix> extended;
      for (const auto& k : kraus) {
        for (int i = 0; i < g; ++i) {
          Matrix bra = Matrix::Zero(1, g);
          bra(0, i) = 1.0;
          extended.push_back(k * linalg::kron(bra, Matrix::Identity(de * da, de * da)));
        }
      }
      return {StateDependentChannel(g * de, da, db, std::move(extended)), std::move(pure)};
    }
    return {StateDependentChannel(de, da, db, std::move(kraus)), source};
  }
  if (type == "measurement") {
    const json& dims = field(doc, "dims");
    const int de = positive_int(dims, "E");
    const int da = positive_int(dims, "A");
    check_source_e(de);
    const json& povm = field(doc, "povm");
    std::vector<Matrix> elements = matrix_list(field(povm, "elements"), de * da, de * da, "povm.elements");
    std::vector<std::string> names = labels(field(povm, "labels"));
    if (density) {
      auto [pure, g] = purify_source(source_dims[0], de, source_dims[2], *density);
      for (auto& e : elements) e = linalg::kron(Matrix::Identity(g, g), e);
      return {MeasurementChannel(g * de, da, Povm(std::move(names), std::move(elements))),
              std::move(pure)};
    }
    return {MeasurementChannel(de, da, Povm(std::move(names), std::move(elements))), source};
  }
  if (type == "random_parameter") {
    const json& dims = field(doc, "dims");
    const int da = positive_int(dims, "A");
    const int db = positive_int(dims, "B");
    const json& branches = field(doc, "branches");
    std::vector<std::string> names = labels(field(branches, "labels"));
    const json& kraus = field(branches, "kraus");
    if (!kraus.is_array() || kraus.size() != names.size()) {
      schema_error("branches.kraus needs one operator list per label");
    }
    std::vector<std::vector<Matrix>> branch_kraus;
    for (std::size_t s = 0; s < kraus.size(); ++s) {
      branch_kraus.push_back(matrix_list(kraus[s], db, da, "branches.kraus[" + std::to_string(s) + "]"));
    }
    const json& q = field(doc, "q");
    if (!q.is_array() || q.size() != names.size()) schema_error("q needs one entry per branch");
    std::vector<double> probs;
    for (const auto& v : q) probs.push_back(number(v, "q entry"));
    return {RandomParameterChannel(std::move(names), std::move(probs), std::move(branch_kraus)),
            std::nullopt};
  }
  schema_error("unknown type '" + type + "'");
}

std::string emit_channel_spec(const ChannelSpec& spec) {
  json doc;
  std::visit(
      [&](const auto& ch) {
        using T = std::decay_t<decltype(ch)>;
        if constexpr (std::is_same_v<T, StateDependentChannel>) {
          doc["type"] = "kraus";
          doc["dims"] = {{"E", ch.dim_e()}, {"A", ch.dim_a()}, {"B", ch.dim_b()}};
          doc["kraus"] = emit_matrices(ch.kraus());
        } else if constexpr (std::is_same_v<T, MeasurementChannel>) {
          doc["type"] = "measurement";
          doc["dims"] = {{"E", ch.dim_e()}, {"A", ch.dim_a()}};
          doc["povm"] = {{"labels", ch.povm().labels()}, {"elements", emit_matrices(ch.povm().elements())}};
        } else {
          doc["type"] = "random_parameter";
          doc["dims"] = {{"A", ch.dim_a()}, {"B", ch.dim_b()}};
          json kraus = json::array();
          for (const auto& b : ch.branch_kraus()) kraus.push_back(emit_matrices(b));
          doc["branches"] = {{"labels", ch.labels()}, {"kraus", kraus}};
          doc["q"] = ch.q();
        }
      },
      spec.channel);
  if (spec.source) {
    const StateSource& s = *spec.source;
    json amps = json::array();
    for (Eigen::Index i = 0; i < s.vector().size(); ++i) amps.push_back(emit_complex(s.vector()(i)));
    doc["source"] = {{"dims", {{"E0", s.dim_e0()}, {"E", s.dim_e()}, {"C", s.dim_c()}}},
                     {"vector", amps}};
  }
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kSchema, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ChannelSpec load_channel_spec(const std::string& path) { return parse_channel_spec(read_file(path)); }

ResolvedChannel resolve(const ChannelSpec& spec) {
  if (const auto* rpc = std::get_if<RandomParameterChannel>(&spec.channel)) {
    auto [channel, source] = lift_random_parameter(*rpc);
    return {AnyChannel(std::move(channel)), std::move(source)};
  }
  AnyChannel channel = std::holds_alternative<StateDependentChannel>(spec.channel)
                           ? AnyChannel(std::get<StateDependentChannel>(spec.channel))
                           : AnyChannel(std::get<MeasurementChannel>(spec.channel));
  const int de = std::visit([](const auto& c) { return c.dim_e(); }, channel);
  if (spec.source) return {std::move(channel), *spec.source};
  if (de != 1) schema_error("a source is required when dims.E > 1");
  return {std::move(channel), StateSource::trivial()};
}

ValidationReport validate(const ChannelSpec& spec) {
  ValidationReport report = std::visit([](const auto& c) { return validate(c); }, spec.channel);
  if (spec.source) {
    const ValidationReport s = validate(*spec.source);
    report.violations.insert(report.violations.end(), s.violations.begin(), s.violations.end());
  }
  return report;
}

Strategy parse_strategy(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kSchema, std::string("strategy: malformed JSON: ") + e.what());
  }
  const json& povm = field(doc, "povm");
  std::vector<std::string> names = labels(field(povm, "labels"));
  const json& elements = field(povm, "elements");
  if (!elements.is_array() || elements.empty() || !elements[0].is_array()) {
    schema_error("strategy povm.elements must be a list of matrices");
  }
  const int de0 = static_cast<int>(elements[0].size());
  std::vector<Matrix> povm_elements = matrix_list(elements, de0, de0, "povm.elements");
  const json& pmf = field(doc, "pmf");
  if (!pmf.is_array() || pmf.size() != names.size() || pmf.empty() || !pmf[0].is_array()) {
    schema_error("strategy pmf needs one row per POVM outcome");
  }
  const int nx = static_cast<int>(pmf[0].size());
  RealMatrix cond(static_cast<Eigen::Index>(pmf.size()), nx);
  for (std::size_t s = 0; s < pmf.size(); ++s) {
    if (!pmf[s].is_array() || static_cast<int>(pmf[s].size()) != nx) schema_error("pmf rows differ in length");
    for (int x = 0; x < nx; ++x) cond(static_cast<Eigen::Index>(s), x) = number(pmf[s][x], "pmf entry");
  }
  const json& states = field(doc, "input_states");
  if (!states.is_array() || static_cast<int>(states.size()) != nx || !states[0].is_array()) {
    schema_error("strategy needs one input state per symbol");
  }
  const int da = static_cast<int>(states[0].size());
  std::vector<DensityOperator> inputs;
  for (const auto& m : matrix_list(states, da, da, "input_states")) inputs.emplace_back(m);
  const bool oversize = doc.contains("allow_oversize") && doc.at("allow_oversize").is_boolean() &&
                        doc.at("allow_oversize").get<bool>();
  return Strategy(Povm(std::move(names), std::move(povm_elements)), std::move(cond),
                  std::move(inputs), oversize);
}

std::string emit_strategy(const Strategy& strategy) {
  json doc;
  doc["povm"] = {{"labels", strategy.csi_povm().labels()},
                 {"elements", emit_matrices(strategy.csi_povm().elements())}};
  json pmf = json::array();
  for (Eigen::Index s = 0; s < strategy.cond_pmf().rows(); ++s) {
    json row = json::array();
    for (Eigen::Index x = 0; x < strategy.cond_pmf().cols(); ++x) row.push_back(strategy.cond_pmf()(s, x));
    pmf.push_back(std::move(row));
  }
  doc["pmf"] = std::move(pmf);
  json states = json::array();
  for (const auto& rho : strategy.input_states()) states.push_back(emit_matrix(rho.matrix()));
  doc["input_states"] = std::move(states);
  const int cap = Strategy::cardinality_cap(strategy.dim_a(), strategy.csi_povm().dim());
  if (strategy.alphabet_size() > cap) doc["allow_oversize"] = true;
  return doc.dump(2) + "\n";
}

Strategy load_strategy(const std::string& path) { return parse_strategy(read_file(path)); }

}  // namespace qmask
