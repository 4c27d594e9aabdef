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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "qmask/detail/objective.hpp"
#include "qmask/error.hpp"
#include "qmask/parallel.hpp"
#include "qmask/region.hpp"
#include "qmask/rng.hpp"

namespace qmask {

namespace {

using detail::StrategyObjective;

constexpr double kSearchTol = 1e-7;      // feasibility margin used while searching
constexpr double kContractTol = 1e-6;    // feasibility of returned strategies
constexpr int kMaxMultiplierSteps = 16;
constexpr int kMultiplierBisections = 14;
constexpr int kBisectionSteps = 30;
constexpr double kInitialStep = 0.3;
constexpr double kContinuationStep = 0.05;
constexpr double kMinStep = 1e-9;
constexpr double kMinEta = 1e-12;
constexpr double kMaxEta = 64.0;
constexpr double kPmfFloor = 1e-13;
constexpr double kActiveSymbol = 1e-9;

// Pure input states live on the unit sphere of R^{2 dimA}.
using Coords = RealVector;

struct Params {
  RealMatrix pmf;  // rows over kept CSI outcomes
  std::vector<Coords> coords;
};

Vector to_vector(const Coords& c) {
  const Eigen::Index d = c.size() / 2;
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = cplx(c(i), c(d + i));
  return v;
}

Coords to_coords(const Vector& v) {
  Coords c(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    c(i) = v(i).real();
    c(v.size() + i) = v(i).imag();
  }
  return c;
}

Coords random_coords(CounterRng& rng, int dim_a) {
  Coords c(2 * dim_a);
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.normal();
  return c / c.norm();
}

RealMatrix random_pmf(CounterRng& rng, int rows, int cols) {
  RealMatrix pmf(rows, cols);
  for (int s = 0; s < rows; ++s) {
    for (int x = 0; x < cols; ++x) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      pmf(s, x) = -std::log(u);
    }
    pmf.row(s) /= pmf.row(s).sum();
  }
  return pmf;
}

Matrix haar_unitary(CounterRng& rng, int dim) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

Vector principal_vector(const DensityOperator& rho) {
  const auto sys = linalg::hermitian_eigensystem(rho.matrix());
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < sys.values.size(); ++i) {
    if (sys.values(i) > sys.values(best)) best = i;
  }
  return sys.vectors.col(best);
}

bool feasible(const StrategyObjective::Value& v, double budget) {
  return v.leakage <= budget + kSearchTol;
}

void load(StrategyObjective& obj, const Params& p) {
  obj.resize(static_cast<int>(p.coords.size()));
  for (std::size_t x = 0; x < p.coords.size(); ++x) {
    obj.set_state(static_cast<int>(x), to_vector(p.coords[x]));
  }
}

// Local maximization of R - mu L by alternating exponentiated-gradient steps
// on p(x|s) and pattern search on the input states. Every accepted iterate
// is checked against the budget so the best feasible one is kept.
class LocalSearch {
 public:
  LocalSearch(StrategyObjective& obj, double budget, int iterations)
      : obj_(obj), budget_(budget), iterations_(iterations) {}

  struct Solution {
    Params params;
    StrategyObjective::Value value;
  };

  Solution maximize(Params start, double mu, double initial_step) {
    mu_ = mu;
    params_ = std::move(start);
    load(obj_, params_);
    value_ = obj_.evaluate(params_.pmf);
    note();
    steps_.assign(params_.coords.size(), initial_step);
    eta_ = 0.5;
    int quiet = 0;
    for (int it = 0; it < iterations_; ++it) {
      const double before = objective(value_);
      pmf_step();
      state_sweep();
      const double gain = objective(value_) - before;
      const double max_step = *std::max_element(steps_.begin(), steps_.end());
      quiet = gain < 1e-12 ? quiet + 1 : 0;
      if (quiet >= 3 && max_step < 1e-6) break;
    }
    return {params_, value_};
  }

  const std::optional<Solution>& best_feasible() const { return best_; }

 private:
  double objective(const StrategyObjective::Value& v) const { return v.rate - mu_ * v.leakage; }

  void note() {
    if (!feasible(value_, budget_)) return;
    if (!best_ || value_.rate > best_->value.rate ||
        (value_.rate == best_->value.rate && value_.leakage < best_->value.leakage)) {
      best_ = Solution{params_, value_};
    }
  }

  void accept(const StrategyObjective::Value& v) {
    value_ = v;
    note();
  }

  void pmf_step() {
    StrategyObjective::Gradient grad;
    obj_.evaluate(params_.pmf, &grad);
    const RealMatrix g = grad.rate - mu_ * grad.leakage;
    const double current = objective(value_);
    while (eta_ > kMinEta) {
      RealMatrix cand = params_.pmf;
      for (Eigen::Index s = 0; s < cand.rows(); ++s) {
        const double top = (eta_ * g.row(s)).maxCoeff();
        for (Eigen::Index x = 0; x < cand.cols(); ++x) {
          cand(s, x) *= std::exp(eta_ * g(s, x) - top);
        }
        cand.row(s) /= cand.row(s).sum();
      }
      const auto v = obj_.evaluate(cand);
      if (objective(v) > current) {
        params_.pmf = std::move(cand);
        accept(v);
        eta_ = std::min(eta_ * 1.5, kMaxEta);
        return;
      }
      eta_ *= 0.5;
    }
    eta_ = std::max(eta_, 1e-3);
  }

  void state_sweep() {
    const int nx = static_cast<int>(params_.coords.size());
    const RealVector px = params_.pmf.transpose() * RealVector::Ones(params_.pmf.rows());
    for (int x = 0; x < nx; ++x) {
      if (px(x) < kActiveSymbol || steps_[x] < kMinStep) continue;
      bool improved = false;
      Coords& c = params_.coords[x];
      for (Eigen::Index k = 0; k < c.size(); ++k) {
        for (const double sign : {1.0, -1.0}) {
          Coords trial = c;
          trial(k) += sign * steps_[x];
          trial /= trial.norm();
          obj_.set_state(x, to_vector(trial));
          const auto v = obj_.evaluate(params_.pmf);
          if (objective(v) > objective(value_)) {
            c = trial;
            accept(v);
            improved = true;
            break;
          }
          obj_.set_state(x, to_vector(c));
        }
      }
      if (!improved) steps_[x] *= 0.5;
    }
  }

  StrategyObjective& obj_;
  double budget_;
  int iterations_;
  double mu_ = 0.0;
  Params params_;
  StrategyObjective::Value value_;
  std::optional<Solution> best_;
  std::vector<double> steps_;
  double eta_ = 0.5;
};

// Constant-input strategy with the least leakage; any budget that admits a
// zero-rate strategy is met by it (up to the local search).
Coords least_leaky_constant(StrategyObjective& obj, CounterRng& rng) {
  const int da = obj.dim_a();
  const RealMatrix pmf = RealMatrix::Ones(obj.num_kept(), 1);
  std::vector<Coords> starts;
  for (int i = 0; i < da; ++i) {
    Coords c = Coords::Zero(2 * da);
    c(i) = 1.0;
    starts.push_back(c);
  }
  for (int i = 0; i < 3; ++i) starts.push_back(random_coords(rng, da));
  obj.resize(1);
  Coords best;
  double best_leak = std::numeric_limits<double>::infinity();
  for (Coords c : starts) {
    obj.set_state(0, to_vector(c));
    double leak = obj.evaluate(pmf).leakage;
    for (double step = kInitialStep; step > kMinStep;) {
      bool improved = false;
      for (Eigen::Index k = 0; k < c.size() && !improved; ++k) {
        for (const double sign : {1.0, -1.0}) {
          Coords trial = c;
          trial(k) += sign * step;
          trial /= trial.norm();
          obj.set_state(0, to_vector(trial));
          const double l = obj.evaluate(pmf).leakage;
          if (l < leak) {
            c = trial;
            leak = l;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (leak < best_leak) {
      best_leak = leak;
      best = c;
    }
  }
  return best;
}

Params interpolate(const Params& a, const Params& b, double t) {
  Params p;
  p.pmf = (1.0 - t) * a.pmf + t * b.pmf;
  for (std::size_t x = 0; x < a.coords.size(); ++x) {
    Coords c = (1.0 - t) * a.coords[x] + t * b.coords[x];
    const double n = c.norm();
    p.coords.push_back(n > 1e-12 ? Coords(c / n) : a.coords[x]);
  }
  return p;
}

// Largest step from a feasible anchor toward an infeasible end point that
// keeps the constraint.
Params bisect(StrategyObjective& obj, const Params& anchor, const Params& target,
              double budget) {
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < kBisectionSteps; ++i) {
    const double mid = 0.5 * (lo + hi);
    const Params p = interpolate(anchor, target, mid);
    load(obj, p);
    if (feasible(obj.evaluate(p.pmf), budget)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return interpolate(anchor, target, lo);
}

Strategy to_strategy(const StrategyObjective& obj, const Povm& povm, const Params& p,
                     bool allow_oversize) {
  const int nx = static_cast<int>(p.coords.size());
  RealMatrix full = RealMatrix::Constant(obj.num_povm_outcomes(), nx, 1.0 / nx);
  for (int k = 0; k < obj.num_kept(); ++k) {
    RealVector row = p.pmf.row(k).transpose();
    for (auto& v : row) {
      if (v < kPmfFloor) v = 0.0;
    }
    full.row(obj.kept_outcomes()[k]) = (row / row.sum()).transpose();
  }
  std::vector<DensityOperator> states;
  for (const auto& c : p.coords) states.push_back(DensityOperator::pure(to_vector(c)));
  return Strategy(povm, std::move(full), std::move(states), allow_oversize);
}

struct Candidate {
  Strategy strategy;
  RateLeakagePoint point;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.point.rate != b.point.rate) return a.point.rate > b.point.rate;
  if (a.point.leakage != b.point.leakage) return a.point.leakage < b.point.leakage;
  return a.strategy.hash() < b.strategy.hash();
}

std::optional<Candidate> run_restart(const StateSource& source,
                                     const StateDependentChannel& channel,
                                     const AnyChannel& original, double budget,
                                     const OptimizerOptions& options, int restart) {
  CounterRng rng(options.seed, static_cast<std::uint64_t>(restart), 0);
  const int dim_e0 = source.dim_e0();
  const int dim_a = channel.dim_a();
  const bool warm = restart == 0 && options.warm_start.has_value();

  Povm povm = Povm::computational_basis(dim_e0);
  if (warm) {
    povm = options.warm_start->csi_povm();
  } else if (options.csi_search == CsiSearch::kRandomBases && restart % 4 == 1) {
    povm = Povm::from_basis(haar_unitary(rng, dim_e0));
  } else if (options.csi_search != CsiSearch::kCanonical && restart % 4 == 3 && dim_e0 > 1) {
    povm = Povm::trivial(dim_e0);
  }

  StrategyObjective obj(source, povm, channel);
  const int cap = Strategy::cardinality_cap(dim_a, dim_e0);
  int nx = options.alphabet_size > 0 ? options.alphabet_size : cap;
  if (warm) nx = options.warm_start->alphabet_size();

  Params start;
  if (warm) {
    const Strategy& w = *options.warm_start;
    start.pmf.resize(obj.num_kept(), nx);
    for (int k = 0; k < obj.num_kept(); ++k) {
      start.pmf.row(k) = w.cond_pmf().row(obj.kept_outcomes()[k]);
    }
    for (const auto& rho : w.input_states()) start.coords.push_back(to_coords(principal_vector(rho)));
  } else {
    start.pmf = random_pmf(rng, obj.num_kept(), nx);
    for (int x = 0; x < nx; ++x) start.coords.push_back(random_coords(rng, dim_a));
  }

  LocalSearch search(obj, budget, options.iterations);
  const auto free = search.maximize(start, 0.0, kInitialStep);

  // Multiplier continuation: grow mu until the maximizer of R - mu L meets
  // the budget, then bisect mu between the last infeasible and the first
  // feasible value.
  std::optional<LocalSearch::Solution> outside;  // infeasible maximizer
  if (!feasible(free.value, budget)) {
    outside = free;
    double mu_lo = 0.0;
    double mu_hi = 0.0;
    std::optional<LocalSearch::Solution> inside;
    double mu = 0.25;
    for (int k = 0; k < kMaxMultiplierSteps && !inside; ++k, mu *= 4.0) {
      auto sol = search.maximize(outside->params, mu, kContinuationStep);
      if (feasible(sol.value, budget)) {
        inside = std::move(sol);
        mu_hi = mu;
      } else {
        outside = std::move(sol);
        mu_lo = mu;
      }
    }
    if (inside) {
      for (int k = 0; k < kMultiplierBisections; ++k) {
        const double mid = mu_lo > 0.0 ? std::sqrt(mu_lo * mu_hi) : 0.5 * mu_hi;
        auto sol = search.maximize(inside->params, mid, kContinuationStep);
        if (feasible(sol.value, budget)) {
          inside = std::move(sol);
          mu_hi = mid;
        } else {
          outside = std::move(sol);
          mu_lo = mid;
        }
      }
    }
  }

  std::optional<Params> chosen;
  if (search.best_feasible()) {
    chosen = search.best_feasible()->params;
  } else {
    Params anchor;
    anchor.pmf = RealMatrix::Zero(obj.num_kept(), nx);
    anchor.pmf.col(0).setOnes();
    anchor.coords = free.params.coords;
    anchor.coords[0] = least_leaky_constant(obj, rng);
    load(obj, anchor);
    if (!feasible(obj.evaluate(anchor.pmf), budget)) return std::nullopt;
    chosen = anchor;
  }
  if (outside) {
    // Spend the remaining budget along the segment toward the infeasible
    // maximizer; keep whichever end has the higher rate.
    const Params polished = bisect(obj, *chosen, outside->params, budget);
    load(obj, polished);
    const auto pv = obj.evaluate(polished.pmf);
    load(obj, *chosen);
    if (feasible(pv, budget) && pv.rate > obj.evaluate(chosen->pmf).rate) chosen = polished;
  }

  Strategy strategy = to_strategy(obj, povm, *chosen, options.allow_oversize || nx > cap);
  RateLeakagePoint point = evaluate_strategy(source, strategy, original);
  if (point.leakage > budget + kContractTol) return std::nullopt;
  point.provenance = "optimizer";
  return Candidate{std::move(strategy), point};
}

void check_options(const OptimizerOptions& options) {
  if (options.restarts < 1) throw Error(ErrorKind::kInvalidArgument, "optimizer: restarts must be >= 1");
  if (options.iterations < 1) {
    throw Error(ErrorKind::kInvalidArgument, "optimizer: iterations must be >= 1");
  }
  if (options.alphabet_size < 0) {
    throw Error(ErrorKind::kInvalidArgument, "optimizer: alphabet_size must be >= 0");
  }
  if (options.threads < 1) throw Error(ErrorKind::kInvalidArgument, "optimizer: threads must be >= 1");
}

}  // namespace

OptimizeResult optimize_rate(const StateSource& source, const AnyChannel& channel,
                             double leakage_budget, const OptimizerOptions& options) {
  if (!(leakage_budget >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "optimize_rate: leakage budget must be >= 0 bits");
  }
  check_options(options);
  const StateDependentChannel op = to_operator_sum(channel);
  if (op.dim_e() != source.dim_e()) {
    throw Error(ErrorKind::kDimensionMismatch, "optimize_rate: source and channel disagree on E");
  }
  const int cap = Strategy::cardinality_cap(op.dim_a(), source.dim_e0());
  if (options.alphabet_size > cap && !options.allow_oversize) {
    throw Error(ErrorKind::kSizeLimit, "optimize_rate: alphabet size " +
                                           std::to_string(options.alphabet_size) +
                                           " exceeds cardinality cap " + std::to_string(cap));
  }
  if (options.warm_start) {
    const Strategy& w = *options.warm_start;
    if (w.dim_a() != op.dim_a() || w.csi_povm().dim() != source.dim_e0()) {
      throw Error(ErrorKind::kDimensionMismatch, "optimize_rate: warm start has wrong dimensions");
    }
  }

  std::vector<std::optional<Candidate>> slots(options.restarts);
  parallel_for(slots.size(), options.threads, [&](std::size_t r) {
    slots[r] = run_restart(source, op, channel, leakage_budget, options, static_cast<int>(r));
  });

  std::optional<Candidate> best;
  int feasible_restarts = 0;
  for (auto& slot : slots) {
    if (!slot) continue;
    ++feasible_restarts;
    if (!best || better(*slot, *best)) best = std::move(slot);
  }
  if (options.warm_start) {
    RateLeakagePoint point = evaluate_strategy(source, *options.warm_start, channel);
    if (point.leakage <= leakage_budget + kContractTol) {
      point.provenance = "optimizer";
      Candidate warm{*options.warm_start, point};
      if (!best || better(warm, *best)) best = std::move(warm);
    }
  }
  if (!best) {
    throw Error(ErrorKind::kInfeasible,
                "optimize_rate: no strategy meets leakage budget " + format_number(leakage_budget) +
                    " bits; even constant inputs leak more");
  }
  return OptimizeResult{best->point, std::move(best->strategy), leakage_budget, feasible_restarts};
}

std::vector<BoundaryPoint> region_boundary(const StateSource& source, const AnyChannel& channel,
                                           const std::vector<double>& budgets,
                                           const OptimizerOptions& options) {
  if (!std::is_sorted(budgets.begin(), budgets.end())) {
    throw Error(ErrorKind::kInvalidArgument, "region_boundary: budgets must be ascending");
  }
  std::vector<BoundaryPoint> points;
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (i > 0 && budgets[i] == budgets[i - 1]) {
      BoundaryPoint copy = points.back();
      points.push_back(std::move(copy));
      continue;
    }
    OptimizerOptions opts = options;
    if (i > 0) opts.warm_start = points.back().strategy;
    OptimizeResult result = optimize_rate(source, channel, budgets[i], opts);
    points.push_back(BoundaryPoint{budgets[i], result.point, std::move(result.strategy)});
  }
  return points;
}

}  // namespace qmask
