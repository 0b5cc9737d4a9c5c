// Copyright 2026 The heavyvar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "heavyvar/subgaussian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "heavyvar/errors.hpp"
#include "heavyvar/numerics.hpp"
#include "heavyvar/unidist.hpp"

namespace heavyvar {

namespace {

using Nodes = std::vector<std::pair<double, double>>;

constexpr double kSMin = -12.0;
constexpr double kSMax = 125.0;
constexpr double kLogZMin = -8.0 * 2.302585092994046;
constexpr double kLogZMax = 24.0 * 2.302585092994046;
constexpr int kPerDecade = 30;

// Composite Kronrod nodes in s = log a resolving q(s) = p_A(e^s) e^s.
void refine(double a, double lo, double hi, int depth, Nodes& out) {
  using K = boost::math::quadrature::gauss_kronrod<double, 21>;
  using G = boost::math::quadrature::gauss<double, 10>;
  const auto& xk = K::abscissa();
  const auto& wk = K::weights();
  const auto& wg = G::weights();
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  auto q = [a](double s) { return positive_stable_pdf(std::exp(s), a) * std::exp(s); };
  std::vector<std::pair<double, double>> pts;
  const double fc = q(c);
  double k = wk[0] * fc, g = 0.0;
  pts.emplace_back(c, wk[0] * h * fc);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double s1 = c - h * xk[i], s2 = c + h * xk[i];
    const double f1 = q(s1), f2 = q(s2);
    k += wk[i] * (f1 + f2);
    if (i % 2 == 1) g += wg[i / 2] * (f1 + f2);
    pts.emplace_back(s1, wk[i] * h * f1);
    pts.emplace_back(s2, wk[i] * h * f2);
  }
  if (std::abs(k - g) * h > 1e-13 && depth < 14) {
    refine(a, lo, c, depth + 1, out);
    refine(a, c, hi, depth + 1, out);
    return;
  }
  for (auto& p : pts)
    if (p.second > 0.0) out.emplace_back(p.first, std::log(p.second));
}

std::shared_ptr<const Nodes> positive_stable_nodes(double alpha0) {
  static std::mutex mu;
  static std::map<double, std::shared_ptr<const Nodes>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(alpha0);
    if (it != cache.end()) return it->second;
  }
  const double a = alpha0 / 2;
  const int panels = static_cast<int>((kSMax - kSMin) / 0.25);
  std::vector<Nodes> parts(panels);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < panels; ++i) refine(a, kSMin + 0.25 * i, kSMin + 0.25 * (i + 1), 0, parts[i]);
  auto nodes = std::make_shared<Nodes>();
  for (auto& p : parts) nodes->insert(nodes->end(), p.begin(), p.end());
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() > 64) cache.clear();
  cache[alpha0] = nodes;
  return nodes;
}

double log_radial_sum(const Nodes& nodes, int d, double z) {
  double mx = -std::numeric_limits<double>::infinity();
  std::vector<double> e(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double s = nodes[i].first;
    e[i] = nodes[i].second - 0.5 * d * s - 0.5 * z * std::exp(-s);
    mx = std::max(mx, e[i]);
  }
  double acc = 0.0;
  for (double v : e) acc += std::exp(v - mx);
  return mx + std::log(acc) - 0.5 * d * std::log(2.0 * kPi);
}

inline void lagrange4(double t, double w[4]) {
  w[0] = -(t - 1) * (t - 2) * (t - 3) / 6;
  w[1] = t * (t - 2) * (t - 3) / 2;
  w[2] = -t * (t - 1) * (t - 3) / 2;
  w[3] = t * (t - 1) * (t - 2) / 6;
}

void check_u(const VectorXd& u) {
  for (Eigen::Index k = 0; k < u.size(); ++k)
    if (!(u[k] > 0.0 && u[k] < 1.0)) fail(ErrorKind::invalid_parameter, "copula arguments must lie in (0,1)");
}

}  // namespace

SubGaussianRadial::SubGaussianRadial(double alpha0, int d) : alpha0_(alpha0), d_(d) {
  if (!(alpha0 > 1.0 && alpha0 < 2.0)) fail(ErrorKind::invalid_parameter, "sub-Gaussian index must lie in (1,2)");
  if (d < 1) fail(ErrorKind::invalid_parameter, "dimension must be positive");
  nodes_ = positive_stable_nodes(alpha0);
  r0_ = std::exp(std::lgamma(1.0 + d / alpha0) - std::lgamma(1.0 + d / 2.0) - 0.5 * d * std::log(2.0 * kPi));
  lz0_ = kLogZMin;
  dlz_ = 2.302585092994046 / kPerDecade;
  const int n = static_cast<int>(std::lround((kLogZMax - kLogZMin) / dlz_)) + 1;
  table_.resize(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) table_[i] = log_radial_sum(*nodes_, d_, std::exp(lz0_ + i * dlz_));
  tail_log_k_ = table_.back() + 0.5 * (d_ + alpha0_) * (lz0_ + (n - 1) * dlz_);
}

double SubGaussianRadial::direct(double z) const { return std::exp(log_radial_sum(*nodes_, d_, z)); }

double SubGaussianRadial::log_value(double z) const {
  if (!(z >= 0.0)) fail(ErrorKind::invalid_parameter, "quadratic form must be nonnegative");
  const int n = static_cast<int>(table_.size());
  if (z <= 0.0) return std::log(r0_);
  const double lz = std::log(z);
  if (lz < lz0_) {
    // R is smooth at 0: linear blend between R(0) and the first node.
    const double r1 = std::exp(table_[0]);
    return std::log(r0_ + (r1 - r0_) * z / std::exp(lz0_));
  }
  const double p = (lz - lz0_) / dlz_;
  if (p >= n - 1) return tail_log_k_ - 0.5 * (d_ + alpha0_) * lz;
  const int i0 = std::clamp(static_cast<int>(std::floor(p)) - 1, 0, n - 4);
  double w[4];
  lagrange4(p - i0, w);
  return w[0] * table_[i0] + w[1] * table_[i0 + 1] + w[2] * table_[i0 + 2] + w[3] * table_[i0 + 3];
}

std::shared_ptr<const SubGaussianRadial> subgaussian_radial(double alpha0, int d) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, std::shared_ptr<const SubGaussianRadial>> cache;
  const auto key = std::make_pair(alpha0, d);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto r = std::make_shared<const SubGaussianRadial>(alpha0, d);
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() > 256) cache.clear();
  cache[key] = r;
  return r;
}

double subgaussian_stable_density(const VectorXd& x, double alpha0, const CorrelationMatrix& s) {
  if (x.size() != s.dim()) fail(ErrorKind::dimension_mismatch, "point and matrix dimensions differ");
  const double z = x.dot(s.inverse() * x);
  auto r = subgaussian_radial(alpha0, static_cast<int>(s.dim()));
  return std::exp(-0.5 * s.log_det() + r->log_value(z));
}

double gaussian_copula_density(const VectorXd& u, const CorrelationMatrix& q) {
  return std::exp(gaussian_copula_loglik(SampleMatrix(u.transpose()), q));
}

double meta_t_copula_density(const VectorXd& u, double nu0, const CorrelationMatrix& q) {
  return std::exp(meta_t_copula_loglik(SampleMatrix(u.transpose()), nu0, q));
}

double meta_stable_copula_density(const VectorXd& u, double alpha0, const CorrelationMatrix& q,
                                  const StableGrid& grid) {
  return std::exp(meta_stable_copula_loglik(SampleMatrix(u.transpose()), alpha0, q, grid));
}

double gaussian_copula_loglik(const SampleMatrix& u, const CorrelationMatrix& q) {
  if (u.cols() != q.dim()) fail(ErrorKind::dimension_mismatch, "copula sample and matrix dimensions differ");
  const Eigen::Index n = u.rows(), d = u.cols();
  if (d == 1) {
    for (Eigen::Index t = 0; t < n; ++t) check_u(u.row(t).transpose());
    return 0.0;
  }
  const MatrixXd m = q.inverse() - MatrixXd::Identity(d, d);
  const double ld = q.log_det();
  std::vector<double> rows(n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index t = 0; t < n; ++t) {
    VectorXd z(d);
    for (Eigen::Index k = 0; k < d; ++k) z[k] = norm_quantile(u(t, k));
    rows[t] = -0.5 * ld - 0.5 * z.dot(m * z);
  }
  for (Eigen::Index t = 0; t < n; ++t) check_u(u.row(t).transpose());
  double s = 0.0;
  for (double v : rows) s += v;
  return s;
}

double meta_t_copula_loglik(const SampleMatrix& u, double nu0, const CorrelationMatrix& q) {
  if (std::isinf(nu0) && nu0 > 0) return gaussian_copula_loglik(u, q);
  if (!(nu0 > 0.0)) fail(ErrorKind::invalid_parameter, "copula dof must be positive");
  if (u.cols() != q.dim()) fail(ErrorKind::dimension_mismatch, "copula sample and matrix dimensions differ");
  const Eigen::Index n = u.rows(), d = u.cols();
  for (Eigen::Index t = 0; t < n; ++t) check_u(u.row(t).transpose());
  if (d == 1) return 0.0;
  const MatrixXd& qi = q.inverse();
  const double c = std::lgamma((nu0 + d) / 2) + (d - 1) * std::lgamma(nu0 / 2) - d * std::lgamma((nu0 + 1) / 2) -
                   0.5 * q.log_det();
  std::vector<double> rows(n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index t = 0; t < n; ++t) {
    VectorXd x(d);
    double marg = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      x[k] = t_quantile(u(t, k), nu0);
      marg += std::log1p(x[k] * x[k] / nu0);
    }
    rows[t] = c - 0.5 * (nu0 + d) * std::log1p(x.dot(qi * x) / nu0) + 0.5 * (nu0 + 1) * marg;
  }
  double s = 0.0;
  for (double v : rows) s += v;
  return s;
}

double meta_stable_copula_loglik(const SampleMatrix& u, double alpha0, const CorrelationMatrix& q,
                                 const StableGrid& grid) {
  if (alpha0 == 2.0) return gaussian_copula_loglik(u, q);
  if (!(alpha0 > 1.0 && alpha0 < 2.0)) fail(ErrorKind::invalid_parameter, "copula index must lie in (1,2]");
  if (u.cols() != q.dim()) fail(ErrorKind::dimension_mismatch, "copula sample and matrix dimensions differ");
  const Eigen::Index n = u.rows(), d = u.cols();
  for (Eigen::Index t = 0; t < n; ++t) check_u(u.row(t).transpose());
  if (!grid.covers(alpha0)) fail(ErrorKind::grid_coverage, "copula index outside stable grid range");
  if (d == 1) return 0.0;
  // The Gaussian component has covariance 2Q so that each coordinate is S_alpha0(1,0,0).
  const MatrixXd si = 0.5 * q.inverse();
  const double ld = d * std::log(2.0) + q.log_det();
  auto radial = subgaussian_radial(alpha0, static_cast<int>(d));
  std::vector<double> rows(n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index t = 0; t < n; ++t) {
    VectorXd x(d);
    double marg = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      x[k] = grid.quantile(u(t, k), alpha0);
      marg += std::log(grid.pdf(x[k], alpha0));
    }
    rows[t] = -0.5 * ld + radial->log_value(x.dot(si * x)) - marg;
  }
  double s = 0.0;
  for (double v : rows) s += v;
  return s;
}

}  // namespace heavyvar
