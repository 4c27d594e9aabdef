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

#include "qmask_tools/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <unistd.h>

#include "CLI11.hpp"
#include "qmask/codesim.hpp"
#include "qmask/error.hpp"
#include "qmask/examples.hpp"
#include "qmask/parallel.hpp"
#include "qmask/spec_io.hpp"

namespace qmask::cli {

namespace {

struct RegionArgs {
  std::string channel;
  std::string budgets;
  int restarts = 16;
  int iterations = 150;
  std::uint64_t seed = 0;
  int threads = 1;
  int alphabet_size = 0;
  std::string out;
};

struct CapacityArgs {
  std::string channel;
  double budget = 0.0;
  int restarts = 16;
  int iterations = 150;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string strategy_out;
};

struct SimulateArgs {
  std::string channel;
  std::string strategy;
  int n = 8;
  double rate = 0.0;
  std::optional<double> rtilde;
  double delta = 0.1;
  int trials = 500;
  std::uint64_t seed = 0;
  std::string encoder = "binning";
  int threads = 1;
  std::string out;
};

struct ExampleArgs {
  double epsilon = 0.5;
  double alpha = 0.5;
  std::string channel;
};

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

int run_validate(const std::string& file, std::ostream& out) {
  const ChannelSpec spec = load_channel_spec(file);
  const ValidationReport report = validate(spec);
  out << report.to_string() << '\n';
  return report.ok() ? kExitOk : kExitDomainError;
}

int run_region(const RegionArgs& a, std::vector<double> budgets, std::ostream& out) {
  const ResolvedChannel rc = resolve(load_channel_spec(a.channel));
  if (budgets.empty()) {
    const double top = trivial_leakage_threshold(rc.channel);
    budgets = parse_budget_grid("0:" + format_number(top) + ":" + format_number(top / 20.0));
  }
  OptimizerOptions opts;
  opts.restarts = a.restarts;
  opts.iterations = a.iterations;
  opts.seed = a.seed;
  opts.threads = a.threads;
  opts.alphabet_size = a.alphabet_size;
  const auto points = region_boundary(rc.source, rc.channel, budgets, opts);
  emit(a.out, region_csv(points, a.seed), out);
  return kExitOk;
}

int run_capacity(const CapacityArgs& a, std::ostream& out) {
  const ResolvedChannel rc = resolve(load_channel_spec(a.channel));
  OptimizerOptions opts;
  opts.restarts = a.restarts;
  opts.iterations = a.iterations;
  opts.seed = a.seed;
  opts.threads = a.threads;
  const OptimizeResult result = optimize_rate(rc.source, rc.channel, a.budget, opts);
  out << "budget=" << format_number(a.budget) << " R=" << format_number(result.point.rate)
      << " L=" << format_number(result.point.leakage) << '\n';
  if (!a.strategy_out.empty()) write_file_atomic(a.strategy_out, emit_strategy(result.strategy));
  return kExitOk;
}

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  const ResolvedChannel rc = resolve(load_channel_spec(a.channel));
  const auto* meas = std::get_if<MeasurementChannel>(&rc.channel);
  if (meas == nullptr) {
    throw Error(ErrorKind::kInvalidArgument, "simulate: needs a measurement channel");
  }
  const Strategy strategy = load_strategy(a.strategy);
  const ClassicalModel model = classical_model(*meas, rc.source, strategy);
  SimConfig config;
  config.n = a.n;
  config.rate = a.rate;
  config.rtilde = a.rtilde;
  config.delta = a.delta;
  config.trials = a.trials;
  config.seed = a.seed;
  config.mode = a.encoder == "correction" ? EncoderMode::kCorrection : EncoderMode::kBinning;
  config.threads = a.threads;
  emit(a.out, to_json(simulate(config, model)), out);
  return kExitOk;
}

int run_projection(const ExampleArgs& a, std::ostream& out) {
  const RateLeakagePoint p = examples::projection_analytic(a.epsilon, a.alpha);
  out << "R=" << format_number(p.rate) << " L=" << format_number(p.leakage) << '\n';
  if (!a.channel.empty()) {
    const ResolvedChannel rc = resolve(load_channel_spec(a.channel));
    const RateLeakagePoint e =
        evaluate_strategy(rc.source, examples::projection_strategy(a.alpha), rc.channel);
    out << "evaluated R=" << format_number(e.rate) << " L=" << format_number(e.leakage) << '\n';
  }
  return kExitOk;
}

int run_depolarizing(const ExampleArgs& a, std::ostream& out) {
  const RandomParameterChannel rpc = examples::build_depolarizing(a.epsilon);
  const auto paulis = examples::pauli_matrices();
  double cancel = 0.0;
  for (int s = 0; s < 4; ++s) {
    for (int b = 0; b < 2; ++b) {
      Matrix proj = Matrix::Zero(2, 2);
      proj(b, b) = 1.0;
      const Matrix in = paulis[s] * proj * paulis[s].adjoint();
      cancel = std::max(cancel, linalg::max_abs(rpc.apply_branch(s, in) - proj));
    }
  }
  double average = 0.0;
  const Matrix pi = Matrix::Identity(2, 2) / 2.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Matrix unit = Matrix::Zero(2, 2);
      unit(i, j) = 1.0;
      const Matrix expect = (1.0 - a.epsilon) * unit + a.epsilon * unit.trace() * pi;
      average = std::max(average, linalg::max_abs(rpc.apply_average(unit) - expect));
    }
  }
  const auto [channel, source] = lift_random_parameter(rpc);
  const RateLeakagePoint p =
      evaluate_strategy(source, examples::depolarizing_correction_strategy(), AnyChannel(channel));
  out << "cancellation_max_deviation=" << format_number(cancel) << '\n';
  out << "average_channel_max_deviation=" << format_number(average) << '\n';
  out << "correction_strategy R=" << format_number(p.rate) << " L=" << format_number(p.leakage)
      << " R_unclamped=" << format_number(p.rate_unclamped) << '\n';
  return kExitOk;
}

}  // namespace

std::vector<double> parse_budget_grid(const std::string& text) {
  double v[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t next = i < 2 ? text.find(':', pos) : text.size();
    if (next == std::string::npos) {
      throw Error(ErrorKind::kInvalidArgument, "budgets must look like start:end:step");
    }
    const std::string part = text.substr(pos, next - pos);
    std::size_t used = 0;
    try {
      v[i] = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) {
      throw Error(ErrorKind::kInvalidArgument, "budgets: '" + part + "' is not a number");
    }
    pos = next + 1;
  }
  const double start = v[0];
  const double end = v[1];
  const double step = v[2];
  if (!(start >= 0.0) || !(end >= start) || !(step > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "budgets need 0 <= start <= end and step > 0");
  }
  const auto count = static_cast<long long>(std::floor((end - start) / step + 0.5));
  if (count > 100000) throw Error(ErrorKind::kSizeLimit, "budgets: more than 100000 grid points");
  std::vector<double> grid;
  for (long long k = 0; k <= count; ++k) grid.push_back(start + static_cast<double>(k) * step);
  if (std::abs(grid.back() - end) <= 0.5 * step) grid.back() = end;
  return grid;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::kInvalidArgument, "cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) throw Error(ErrorKind::kInvalidArgument, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::kInvalidArgument, "cannot replace '" + path + "'");
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qmask: rate-leakage regions of state-dependent quantum channels"};
  app.name("qmask");
  app.require_subcommand(1, 1);
  const int default_threads = default_thread_count();

  std::string validate_file;
  auto* validate_cmd = app.add_subcommand("validate", "Check a channel-spec JSON file");
  validate_cmd->add_option("file", validate_file, "Channel-spec JSON path")->required();

  RegionArgs region;
  region.threads = default_threads;
  auto* region_cmd = app.add_subcommand("region", "Sweep leakage budgets and optimize the rate");
  region_cmd->add_option("--channel", region.channel, "Channel-spec JSON path")->required();
  region_cmd->add_option("--budgets", region.budgets,
                         "Leakage budgets start:end:step in bits per channel use "
                         "(default 0:2log2(dimB):step of 1/20)");
  region_cmd->add_option("--restarts", region.restarts, "Random restarts per budget (count)")
      ->capture_default_str();
  region_cmd->add_option("--iterations", region.iterations,
                         "Alternation iterations per local solve (count)")
      ->capture_default_str();
  region_cmd->add_option("--seed", region.seed, "Random seed (64-bit integer)")->required();
  region_cmd->add_option("--threads", region.threads,
                         "Worker threads (count; default QMASK_THREADS or 1)")
      ->capture_default_str();
  region_cmd->add_option("--alphabet-size", region.alphabet_size,
                         "Input alphabet size |X| (count; 0 = cardinality cap)")
      ->capture_default_str();
  region_cmd->add_option("--out", region.out, "Output CSV path (default stdout)");

  CapacityArgs capacity;
  capacity.threads = default_threads;
  auto* capacity_cmd = app.add_subcommand("capacity", "Best rate under one leakage budget");
  capacity_cmd->add_option("--channel", capacity.channel, "Channel-spec JSON path")->required();
  capacity_cmd->add_option("--budget", capacity.budget, "Leakage budget (bits per channel use)")
      ->required();
  capacity_cmd->add_option("--restarts", capacity.restarts, "Random restarts (count)")
      ->capture_default_str();
  capacity_cmd->add_option("--iterations", capacity.iterations,
                           "Alternation iterations per local solve (count)")
      ->capture_default_str();
  capacity_cmd->add_option("--seed", capacity.seed, "Random seed (64-bit integer)")->required();
  capacity_cmd->add_option("--threads", capacity.threads,
                           "Worker threads (count; default QMASK_THREADS or 1)")
      ->capture_default_str();
  capacity_cmd->add_option("--strategy-out", capacity.strategy_out,
                           "Write the optimal strategy JSON to this path");

  SimulateArgs sim;
  sim.threads = default_threads;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo run of the binning code");
  simulate_cmd->add_option("--channel", sim.channel, "Measurement-channel spec JSON path")
      ->required();
  simulate_cmd->add_option("--strategy", sim.strategy, "Strategy JSON path (CSI POVM, p(x|s), inputs)")
      ->required();
  simulate_cmd->add_option("--n", sim.n, "Block length (channel uses, <= 10)")->capture_default_str();
  simulate_cmd->add_option("--rate", sim.rate, "Message rate R (bits per channel use)")->required();
  simulate_cmd->add_option("--rtilde", sim.rtilde,
                           "Codebook rate Rtilde (bits per channel use; default R + I(X;S) + 0.1)");
  simulate_cmd->add_option("--delta", sim.delta, "Typicality slack (probability units)")
      ->capture_default_str();
  simulate_cmd->add_option("--trials", sim.trials, "Monte Carlo trials (count)")->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed, "Random seed (64-bit integer)")->required();
  simulate_cmd->add_option("--encoder", sim.encoder, "Encoder: binning or correction")
      ->check(CLI::IsMember({"binning", "correction"}))
      ->capture_default_str();
  simulate_cmd->add_option("--threads", sim.threads,
                           "Worker threads (count; default QMASK_THREADS or 1)")
      ->capture_default_str();
  simulate_cmd->add_option("--out", sim.out, "Output JSON path (default stdout)");

  ExampleArgs example;
  auto* example_cmd = app.add_subcommand("example", "Built-in examples with closed forms");
  example_cmd->require_subcommand(1, 1);
  auto* projection_cmd =
      example_cmd->add_subcommand("projection", "Random projection channel, closed-form (R, L)");
  projection_cmd->add_option("--epsilon", example.epsilon, "Projection probability (in (0, 1])")
      ->capture_default_str();
  projection_cmd->add_option("--alpha", example.alpha, "Bernoulli input parameter (in [0, 1/2])")
      ->capture_default_str();
  projection_cmd->add_option("--channel", example.channel,
                             "Also evaluate the strategy on this channel-spec JSON path");
  auto* depolarizing_cmd = example_cmd->add_subcommand(
      "depolarizing", "Pauli channel: correction checks and the (R, L) of the correction strategy");
  depolarizing_cmd->add_option("--epsilon", example.epsilon, "Depolarizing parameter (in (0, 1])")
      ->capture_default_str();

  std::vector<std::string> argv_storage{"qmask"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  std::vector<double> budgets;
  if (*region_cmd && !region.budgets.empty()) {
    try {
      budgets = parse_budget_grid(region.budgets);
    } catch (const Error& e) {
      err << "--budgets: " << e.what() << '\n';
      return kExitUsage;
    }
  }

  try {
    if (*validate_cmd) return run_validate(validate_file, out);
    if (*region_cmd) return run_region(region, std::move(budgets), out);
    if (*capacity_cmd) return run_capacity(capacity, out);
    if (*simulate_cmd) return run_simulate(sim, out);
    if (*projection_cmd) return run_projection(example, out);
    if (*depolarizing_cmd) return run_depolarizing(example, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace qmask::cli
