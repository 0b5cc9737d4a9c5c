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

#include "heavyvar/fracmoment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "heavyvar/errors.hpp"
#include "heavyvar/numerics.hpp"

namespace heavyvar {

namespace {

boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  return rule;
}

void check_q(double q) {
  if (!(q >= -1.0 && q <= 1.0)) fail(ErrorKind::invalid_parameter, "correlation must lie in [-1,1]");
}

// With Z1 Z2 = E (q + cos psi), E ~ Exp(1) and psi ~ U(0, pi) independent,
// E h(Z1 Z2) reduces to one angular integral. q + cos psi is written as
// cos psi - cos psi0 = -2 sin((psi + psi0)/2) sin((psi - psi0)/2) to keep
// relative accuracy near the zero at psi0 = arccos(-q).
template <class G>
double angular(double q, G g) {
  const double psi0 = std::acos(-q);
  // xc is the signed distance to the nearer endpoint, so psi - psi0 = -xc on
  // the half touching psi0.
  auto v = [psi0](double psi, double dpsi) { return -2.0 * std::sin(0.5 * (psi + psi0)) * std::sin(0.5 * dpsi); };
  auto& ts = tanh_sinh_rule();
  double s = 0.0;
  if (psi0 > 0.0)
    s += ts.integrate(
        [&](double x, double xc) { return g(v(x, x > 0.5 * psi0 ? -xc : x - psi0)); }, 0.0, psi0);
  if (psi0 < kPi)
    s += ts.integrate(
        [&](double x, double xc) { return g(v(x, x < 0.5 * (psi0 + kPi) ? -xc : x - psi0)); }, psi0, kPi);
  return s / kPi;
}

}  // namespace

double c_alpha_p(double alpha, double p) {
  if (!(alpha > 1.0 && alpha <= 2.0)) fail(ErrorKind::invalid_parameter, "alpha must lie in (1,2]");
  if (!(p > 0.0 && p < alpha / 2)) fail(ErrorKind::invalid_parameter, "need 0 < p < alpha/2 for a finite moment");
  return std::exp(std::lgamma(1.0 - p / alpha) - std::lgamma(1.0 - p / 2));
}

double abs_product_moment(double q, double r) {
  check_q(q);
  if (!(r > -1.0)) fail(ErrorKind::invalid_parameter, "moment order must exceed -1");
  if (r == 0.0) return 1.0;
  return std::tgamma(1.0 + r) * angular(q, [r](double v) { return v == 0.0 ? 0.0 : std::pow(std::abs(v), r); });
}

double f_p(double q, double p) {
  check_q(q);
  if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::invalid_parameter, "p must lie in (0,1]");
  if (q == 0.0) return 0.0;
  // Odd in q; evaluate on the positive side.
  const double aq = std::abs(q);
  const double v = std::tgamma(1.0 + p) * angular(aq, [p](double x) { return std::copysign(std::pow(std::abs(x), p), x); });
  return std::copysign(v, q);
}

double f_p_derivative(double q, double p) {
  if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::invalid_parameter, "p must lie in (0,1]");
  return p * p * abs_product_moment(std::abs(q), p - 1.0);
}

double f_p_sup(double p) { return std::pow(2.0, p) * std::tgamma(p + 0.5) / std::sqrt(kPi); }

double f_p_inverse(double y, double p, double tol) {
  if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::invalid_parameter, "p must lie in (0,1]");
  if (!std::isfinite(y) || std::abs(y) >= f_p_sup(p)) fail(ErrorKind::out_of_range, "moment ratio outside the range of f_p");
  if (y == 0.0) return 0.0;
  const double hi = 1.0 - 1e-9;
  const double ay = std::abs(y);
  const double fhi = f_p(hi, p);
  if (ay >= fhi) fail(ErrorKind::out_of_range, "moment ratio outside the range of f_p");
  std::uintmax_t iters = 200;
  auto res = boost::math::tools::toms748_solve([&](double q) { return f_p(q, p) - ay; }, 0.0, hi, -ay, fhi - ay,
                                               [tol](double a, double b) { return std::abs(b - a) <= tol; }, iters);
  return std::copysign(0.5 * (res.first + res.second), y);
}

double gamma_p(double q, double p, double alpha1, double alpha2) {
  if (!(p > 0.0 && p < std::min(alpha1, alpha2) / 4))
    fail(ErrorKind::invalid_parameter, "asymptotic variance needs p < min(alpha)/4");
  const double c1 = c_alpha_p(alpha1, p), c2 = c_alpha_p(alpha2, p);
  const double ratio = c_alpha_p(alpha1, 2 * p) * c_alpha_p(alpha2, 2 * p) / (c1 * c1 * c2 * c2);
  const double f = f_p(q, p);
  return ratio * abs_product_moment(q, 2 * p) - f * f;
}

double stable_like_asymptotic_variance(double q, double p, double alpha1, double alpha2) {
  const double d = f_p_derivative(q, p);
  return gamma_p(q, p, alpha1, alpha2) / (d * d);
}

double variance_stabilizing_phi(double q, double p, double alpha1, double alpha2) {
  if (!(q > -1.0 && q < 1.0)) fail(ErrorKind::invalid_parameter, "correlation must lie in (-1,1)");
  if (q == 0.0) return 0.0;
  auto f = [&](double y) { return f_p_derivative(y, p) / std::sqrt(gamma_p(y, p, alpha1, alpha2)); };
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, 0.0, std::abs(q), 12, 1e-11);
  return std::copysign(v, q);
}

VarianceStabilizer::VarianceStabilizer(double p, double alpha1, double alpha2, int panels, double q_max)
    : p_(p), a1_(alpha1), a2_(alpha2), q_max_(q_max) {
  if (panels < 8 || !(q_max > 0.0 && q_max < 1.0)) fail(ErrorKind::invalid_parameter, "bad stabilizer table size");
  gamma_p(0.0, p, alpha1, alpha2);  // parameter check
  // Nodes cluster toward 1 where f_p' varies fastest: q = q_max (1 - (1 - t)^2).
  q_.resize(panels + 1);
  for (int i = 0; i <= panels; ++i) {
    const double t = static_cast<double>(i) / panels;
    q_[i] = q_max * (1.0 - (1.0 - t) * (1.0 - t));
  }
  dphi_.resize(panels + 1);
  auto f = [&](double y) { return f_p_derivative(y, p) / std::sqrt(gamma_p(y, p, alpha1, alpha2)); };
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i <= panels; ++i) dphi_[i] = f(q_[i]);
  std::vector<double> seg(panels);
  using G = boost::math::quadrature::gauss<double, 10>;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < panels; ++i) seg[i] = G::integrate(f, q_[i], q_[i + 1]);
  phi_.assign(panels + 1, 0.0);
  for (int i = 0; i < panels; ++i) phi_[i + 1] = phi_[i] + seg[i];
}

double VarianceStabilizer::phi(double q) const {
  if (!(q > -1.0 && q < 1.0)) fail(ErrorKind::invalid_parameter, "correlation must lie in (-1,1)");
  const double aq = std::abs(q);
  if (aq > q_max_) {
    const double v = phi_.back() + variance_stabilizing_phi(aq, p_, a1_, a2_) -
                     variance_stabilizing_phi(q_max_, p_, a1_, a2_);
    return std::copysign(v, q);
  }
  const auto it = std::upper_bound(q_.begin(), q_.end(), aq);
  const std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - q_.begin() - 1, 0), q_.size() - 2);
  const double h = q_[i + 1] - q_[i], t = (aq - q_[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  const double v = h00 * phi_[i] + h10 * h * dphi_[i] + h01 * phi_[i + 1] + h11 * h * dphi_[i + 1];
  return std::copysign(v, q);
}

double VarianceStabilizer::phi_inverse(double y) const {
  if (y == 0.0) return 0.0;
  const double ay = std::abs(y);
  if (ay >= phi_.back()) return std::copysign(q_max_, y);
  double lo = 0.0, hi = q_max_;
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < ay ? lo : hi) = mid;
  }
  return std::copysign(0.5 * (lo + hi), y);
}

std::pair<double, double> VarianceStabilizer::interval(double q_hat, long n, double level) const {
  if (n < 1 || !(level > 0.0 && level < 1.0)) fail(ErrorKind::invalid_parameter, "bad interval request");
  const double z = norm_quantile(0.5 + 0.5 * level);
  const double c = phi(q_hat), h = z / std::sqrt(static_cast<double>(n));
  return {phi_inverse(c - h), phi_inverse(c + h)};
}

double tlike_fractional_moment(double nu, double p) {
  if (!(nu > 0.0)) fail(ErrorKind::invalid_parameter, "degrees of freedom must be positive");
  if (!(p >= 0.0 && p < nu)) fail(ErrorKind::invalid_parameter, "need 0 <= p < nu");
  return std::exp(std::lgamma(nu / 2 - p / 2) - std::lgamma(nu / 2) - 0.5 * p * std::log(2.0));
}

double tlike_moment_factor(double nu) {
  if (!(nu > 1.0)) fail(ErrorKind::dof_too_small, "degrees of freedom must exceed 1");
  return std::sqrt(2.0 / nu) * std::exp(std::lgamma(nu / 2) - std::lgamma((nu - 1) / 2));
}

double tlike_asymptotic_variance(double q, double nu1, double nu2) {
  if (!(nu1 > 2.0 && nu2 > 2.0)) fail(ErrorKind::dof_too_small, "degrees of freedom must exceed 2");
  auto a = [](double nu) {
    const double c = tlike_moment_factor(nu);
    return nu * c * c / (nu - 2);
  };
  return a(nu1) * a(nu2) * (2 * q * q + 1) - q * q;
}

}  // namespace heavyvar
