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

#include "qmask/detail/objective.hpp"

#include <cmath>

#include "qmask/error.hpp"

namespace qmask::detail {

namespace {

constexpr double kLogFloor = 1e-300;
constexpr double kDroppedOutcomeMass = 1e-14;

double xlog2x(double v) { return v > 0.0 ? v * std::log2(v) : 0.0; }

double safe_log2(double v) { return std::log2(std::max(v, kLogFloor)); }

double trace_product(const Matrix& a, const Matrix& b) {
  // Re Tr(a b) for Hermitian a, b.
  return (a.transpose().cwiseProduct(b)).sum().real();
}

}  // namespace

StrategyObjective::StrategyObjective(const StateSource& source, const Povm& csi_povm,
                                     const StateDependentChannel& channel)
    : dim_a_(channel.dim_a()),
      dim_b_(channel.dim_b()),
      dim_c_(source.dim_c()),
      num_povm_outcomes_(csi_povm.size()) {
  if (source.dim_e() != channel.dim_e() || csi_povm.dim() != source.dim_e0()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "objective: source, CSI POVM and channel dimensions disagree");
  }
  const int de = source.dim_e();
  const int dc = dim_c_;
  const int da = dim_a_;
  const int dec = de * dc;
  const Matrix phi = source.density();
  const std::vector<int> e0_split{source.dim_e0(), dec};
  const std::vector<bool> drop_e0{false, true};
  const std::vector<int> eca_dims{de, dc, da};
  const std::vector<int> to_eac{0, 2, 1};
  const std::vector<int> bc_dims{dim_b_, dc};
  const std::vector<bool> keep_c{false, true};
  std::vector<Matrix> lifted;
  for (const auto& k : channel.kraus()) {
    lifted.push_back(linalg::kron(k, Matrix::Identity(dc, dc)));
  }

  double total = 0.0;
  std::vector<Matrix> sigmas;
  for (int s = 0; s < csi_povm.size(); ++s) {
    const Matrix sigma = linalg::partial_trace(
        linalg::kron(csi_povm.element(s), Matrix::Identity(dec, dec)) * phi, e0_split, drop_e0);
    const double ps = sigma.trace().real();
    if (ps <= kDroppedOutcomeMass) continue;
    kept_.push_back(s);
    ps_.push_back(ps);
    sigmas.push_back(sigma / ps);
    total += ps;
  }
  for (auto& p : ps_) p /= total;

  for (std::size_t k = 0; k < kept_.size(); ++k) {
    const Matrix& sigma = sigmas[k];
    const Matrix sigma_c = linalg::partial_trace(sigma, std::vector<int>{de, dc},
                                                 std::vector<bool>{false, true});
    entropy_s_ -= xlog2x(ps_[k]);
    entropy_cs_ += -xlog2x(ps_[k]) + ps_[k] * entropy_unnormalized(sigma_c);
    std::vector<Matrix> transfer;
    for (int i = 0; i < da; ++i) {
      for (int j = 0; j < da; ++j) {
        Matrix unit = Matrix::Zero(da, da);
        unit(i, j) = 1.0;
        const Matrix eac = linalg::permute_subsystems(linalg::kron(sigma, unit), eca_dims, to_eac);
        transfer.push_back(apply_kraus(lifted, eac));
      }
    }
    transfer_.push_back(std::move(transfer));
  }
}

void StrategyObjective::resize(int alphabet_size) {
  cache_.assign(alphabet_size, std::vector<Output>(kept_.size()));
}

void StrategyObjective::set_state(int x, const Vector& v) {
  const int da = dim_a_;
  const std::vector<int> bc_dims{dim_b_, dim_c_};
  const std::vector<bool> keep_b{true, false};
  for (std::size_t s = 0; s < kept_.size(); ++s) {
    Matrix bc = Matrix::Zero(dim_b_ * dim_c_, dim_b_ * dim_c_);
    for (int i = 0; i < da; ++i) {
      for (int j = 0; j < da; ++j) {
        const cplx coeff = v(i) * std::conj(v(j));
        if (coeff != cplx(0.0, 0.0)) bc += coeff * transfer_[s][i * da + j];
      }
    }
    bc = 0.5 * (bc + bc.adjoint()).eval();
    Output& out = cache_[x][s];
    out.b = dim_c_ == 1 ? bc : linalg::partial_trace(bc, bc_dims, keep_b);
    out.entropy_bc = entropy_unnormalized(bc);
    out.bc = std::move(bc);
  }
}

StrategyObjective::Value StrategyObjective::evaluate(const RealMatrix& pmf,
                                                     Gradient* grad) const {
  const int ns = num_kept();
  const int nx = alphabet_size();
  std::vector<double> px(nx, 0.0);
  std::vector<Matrix> mixture(nx, Matrix::Zero(dim_b_, dim_b_));
  Matrix rho_b = Matrix::Zero(dim_b_, dim_b_);
  double h_sx = 0.0;
  double weighted_bc = 0.0;
  for (int x = 0; x < nx; ++x) {
    for (int s = 0; s < ns; ++s) {
      const double w = ps_[s] * pmf(s, x);
      if (w <= 0.0) continue;
      px[x] += w;
      mixture[x] += w * cache_[x][s].b;
      h_sx -= xlog2x(w);
      weighted_bc += w * cache_[x][s].entropy_bc;
    }
    rho_b += mixture[x];
  }
  double h_x = 0.0;
  double conditional_b = 0.0;  // sum_x p(x) H(rho_B^x)
  for (int x = 0; x < nx; ++x) {
    if (px[x] <= 0.0) continue;
    h_x -= xlog2x(px[x]);
    conditional_b += entropy_unnormalized(mixture[x]) + xlog2x(px[x]);
  }
  const double h_b = entropy_unnormalized(rho_b);
  Value value;
  value.rate = h_b - conditional_b - h_x - entropy_s_ + h_sx;
  value.leakage = entropy_cs_ + h_x + conditional_b - h_sx - weighted_bc;

  if (grad != nullptr) {
    grad->rate.setZero(ns, nx);
    grad->leakage.setZero(ns, nx);
    const Matrix log_b = linalg::psd_log2(rho_b, kLogFloor);
    for (int x = 0; x < nx; ++x) {
      Matrix log_cond;
      if (px[x] > 0.0) log_cond = linalg::psd_log2(mixture[x] / px[x], kLogFloor);
      for (int s = 0; s < ns; ++s) {
        const Output& out = cache_[x][s];
        const double cross_b = trace_product(out.b, log_b);
        const double w = ps_[s] * pmf(s, x);
        double d_rate;
        double d_leak;
        if (px[x] > 0.0) {
          const double cross_cond = trace_product(out.b, log_cond);
          d_rate = -cross_b + cross_cond + safe_log2(px[x]) - safe_log2(w);
          d_leak = -safe_log2(px[x]) + safe_log2(w) - cross_cond - out.entropy_bc;
        } else {
          // Only w_sx grows from zero, so rho_B^x -> rho_B^{s,x}.
          const double h_self = entropy_unnormalized(out.b);
          d_rate = -cross_b - h_self;
          d_leak = h_self - out.entropy_bc;
        }
        grad->rate(s, x) = ps_[s] * d_rate;
        grad->leakage(s, x) = ps_[s] * d_leak;
      }
    }
  }
  return value;
}

}  // namespace qmask::detail
