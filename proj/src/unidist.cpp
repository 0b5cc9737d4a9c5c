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

#include "heavyvar/unidist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/roots.hpp>

#include "heavyvar/errors.hpp"
#include "heavyvar/numerics.hpp"

namespace heavyvar {

namespace {

constexpr double kSeriesX = 0.5;
constexpr double kAsymptoticX = 1e3;

// Zolotarev integrand for the S1-standard law at x > 0, alpha != 1.
// Integration variable u = theta + theta0 on (0, pi/2 + theta0).
struct Zolotarev {
  double alpha;
  double theta0;
  double delta;  // pi/2 - theta0, kept exact for |beta| = 1
  double upper;
  double log_c0;
  double log_xp;  // alpha/(alpha-1) * log x

  Zolotarev(double a, double beta, double x) : alpha(a) {
    if (beta == 0.0) {
      theta0 = 0.0;
      delta = kPi / 2;
    } else if (a < 1.0 && std::abs(beta) == 1.0) {
      theta0 = beta * kPi / 2;
      delta = beta > 0 ? 0.0 : kPi;
    } else {
      theta0 = std::atan(beta * std::tan(kPi * a / 2)) / a;
      delta = kPi / 2 - theta0;
    }
    upper = kPi / 2 + theta0;
    log_c0 = std::log(std::cos(a * theta0)) / (a - 1.0);
    log_xp = a / (a - 1.0) * std::log(x);
  }

  double log_g(double u) const {
    const double ct = std::sin(upper - u);  // cos(theta)
    const double s = std::sin(alpha * u);
    const double c2 = std::sin(delta + (1.0 - alpha) * u);
    const double lct = std::log(ct);
    return log_xp + log_c0 + alpha / (alpha - 1.0) * (lct - std::log(s)) + std::log(c2) - lct;
  }

  // Break points: the root of log g = 0 and a geometric ladder away from it.
  std::vector<double> breaks() const {
    std::vector<double> pts{0.0};
    const double lo = upper * 1e-12, hi = upper * (1.0 - 1e-12);
    const double flo = log_g(lo), fhi = log_g(hi);
    if (std::isfinite(flo) && std::isfinite(fhi) && (flo > 0) != (fhi > 0)) {
      boost::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(50);
      auto r = boost::math::tools::toms748_solve([&](double u) { return log_g(u); }, lo, hi, flo,
                                                 fhi, tol, iters);
      const double root = 0.5 * (r.first + r.second);
      if (root < upper / 8) {
        for (double b = root / 64; b < root; b *= 4) pts.push_back(b);
        for (double b = root; b < upper / 2; b *= 4) pts.push_back(b);
      } else if (root > upper * 7 / 8) {
        pts.push_back(upper / 2);
        double gap = upper - root;
        for (double g = gap * 64; g > gap; g /= 4)
          if (g < upper / 2) pts.push_back(upper - g);
        for (double g = gap; g > gap / 64; g /= 4) pts.push_back(upper - g);
      } else {
        pts.push_back(root);
      }
    }
    pts.push_back(upper);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }

  template <class F>
  double integrate_pieces(F&& f) const {
    return heavyvar::integrate_pieces(f, breaks());
  }

  double density_integral() const {
    return integrate_pieces([&](double u) {
      double lg = log_g(u);
      if (!std::isfinite(lg) || lg > 700.0) return 0.0;
      double g = std::exp(lg);
      return g * std::exp(-g);
    });
  }

  double tail_integral() const {
    return integrate_pieces([&](double u) {
      double lg = log_g(u);
      if (std::isnan(lg)) return 0.0;
      if (lg > 700.0) return 0.0;
      return std::exp(-std::exp(lg));
    });
  }
};

double series_at_zero_pdf(double x, double alpha) {
  double sum = 0.0;
  const double lx = std::log(std::abs(x));
  for (int k = 0; k < 200; ++k) {
    double term = std::exp(std::lgamma((2.0 * k + 1) / alpha) - std::lgamma(2.0 * k + 1) +
                           (k == 0 ? 0.0 : 2.0 * k * lx));
    sum += (k % 2 == 0) ? term : -term;
    if (k > 2 && term < 1e-18 * std::abs(sum)) break;
  }
  return sum / (kPi * alpha);
}

// F(x) - 1/2 for small |x|.
double series_at_zero_cdf(double x, double alpha) {
  double sum = 0.0;
  const double ax = std::abs(x), lx = std::log(ax);
  for (int k = 0; k < 200; ++k) {
    double term = std::exp(std::lgamma((2.0 * k + 1) / alpha) - std::lgamma(2.0 * k + 2) +
                           (2.0 * k + 1) * lx);
    sum += (k % 2 == 0) ? term : -term;
    if (k > 2 && term < 1e-18 * std::abs(sum)) break;
  }
  return std::copysign(sum / (kPi * alpha), x);
}

void check_alpha_cdf(double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0))
    fail(ErrorKind::invalid_parameter, "stable CDF requires alpha in (1,2]");
}

// Standard S1 density, alpha != 1.
double standard_pdf(double x, double alpha, double beta) {
  if (x < 0) return standard_pdf(-x, alpha, -beta);
  if (beta == 0.0) {
    if (alpha > 1.0 && x <= kSeriesX) return series_at_zero_pdf(x, alpha);
    if (alpha > 1.0 && x >= kAsymptoticX) return detail::stable_pdf_asymptotic(x, alpha);
  }
  Zolotarev z(alpha, beta, std::max(x, 1e-300));
  if (x < 1e-10) {
    return std::tgamma(1.0 + 1.0 / alpha) * std::cos(z.theta0) *
           std::pow(std::cos(alpha * z.theta0), 1.0 / alpha) / kPi;
  }
  if (alpha < 1.0 && std::abs(beta) == 1.0 && ((beta > 0) != (x > 0))) return 0.0;
  return alpha / (kPi * std::abs(alpha - 1.0) * x) * z.density_integral();
}

}  // namespace

void StableParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) fail(ErrorKind::invalid_parameter, "alpha must lie in (0,2]");
  if (!(std::abs(beta) <= 1.0)) fail(ErrorKind::invalid_parameter, "beta must lie in [-1,1]");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(ErrorKind::invalid_parameter, "sigma must be positive");
  if (!std::isfinite(mu)) fail(ErrorKind::invalid_parameter, "mu must be finite");
}

namespace detail {

double stable_sf_asymptotic(double x, double alpha) {
  double sum = 0.0, prev = std::numeric_limits<double>::infinity();
  const double lx = std::log(x);
  for (int k = 1; k <= 40; ++k) {
    double mag = std::exp(std::lgamma(alpha * k) - std::lgamma(k + 1.0) - alpha * k * lx);
    if (mag > prev) break;
    double term = mag * std::sin(k * kPi * alpha / 2);
    sum += (k % 2 == 1) ? term : -term;
    prev = mag;
    if (mag < 1e-18 * std::abs(sum)) break;
  }
  return sum / kPi;
}

double stable_pdf_asymptotic(double x, double alpha) {
  double sum = 0.0, prev = std::numeric_limits<double>::infinity();
  const double lx = std::log(x);
  for (int k = 1; k <= 40; ++k) {
    double mag = std::exp(std::lgamma(alpha * k + 1.0) - std::lgamma(k + 1.0) - (alpha * k + 1.0) * lx);
    if (mag > prev) break;
    double term = mag * std::sin(k * kPi * alpha / 2);
    sum += (k % 2 == 1) ? term : -term;
    prev = mag;
    if (mag < 1e-18 * std::abs(sum)) break;
  }
  return sum / kPi;
}

}  // namespace detail

double stable_pdf(double x, const StableParams& p) {
  p.validate();
  const double z = (x - p.mu) / p.sigma;
  if (p.alpha == 2.0) return std::exp(-0.25 * z * z) / (2.0 * std::sqrt(kPi)) / p.sigma;
  if (p.alpha == 1.0) {
    if (p.beta != 0.0) fail(ErrorKind::invalid_parameter, "alpha = 1 density supported only for beta = 0");
    return 1.0 / (kPi * (1.0 + z * z)) / p.sigma;
  }
  return standard_pdf(z, p.alpha, p.beta) / p.sigma;
}

double stable_sf(double x, double alpha) {
  check_alpha_cdf(alpha);
  if (std::isnan(x)) return x;
  if (alpha == 2.0) return 0.5 * std::erfc(x / 2.0);
  if (x < 0) return 1.0 - stable_sf(-x, alpha);
  if (x <= kSeriesX) return 0.5 - series_at_zero_cdf(x, alpha);
  if (x >= kAsymptoticX) return detail::stable_sf_asymptotic(x, alpha);
  Zolotarev z(alpha, 0.0, x);
  return z.tail_integral() / kPi;
}

double stable_cdf(double x, double alpha) {
  check_alpha_cdf(alpha);
  if (std::isnan(x)) return x;
  if (x < 0) return stable_sf(-x, alpha);
  if (x <= kSeriesX) return 0.5 + series_at_zero_cdf(x, alpha);
  return 1.0 - stable_sf(x, alpha);
}

double stable_quantile(double u, double alpha) {
  check_alpha_cdf(alpha);
  if (!(u > 0.0 && u < 1.0)) fail(ErrorKind::invalid_parameter, "quantile level must lie in (0,1)");
  if (u == 0.5) return 0.0;
  if (alpha == 2.0) return std::sqrt(2.0) * norm_quantile(u);
  // Solve sf(x) = tail for x > 0, then reflect.
  const double tail = u < 0.5 ? u : 1.0 - u;
  double lo = 0.0;
  double hi = 2.0 * std::sqrt(2.0) * std::abs(norm_quantile(tail));
  int grow = 0;
  while (stable_sf(hi, alpha) > tail) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 200 || !std::isfinite(hi)) fail(ErrorKind::non_convergence, "quantile bracket expansion failed");
  }
  for (int it = 0; it < 400 && hi - lo > 1e-10 * std::max(1.0, lo); ++it) {
    double mid = 0.5 * (lo + hi);
    if (stable_sf(mid, alpha) > tail) lo = mid;
    else hi = mid;
  }
  const double x = 0.5 * (lo + hi);
  return u < 0.5 ? -x : x;
}

double stable_sample(RngState& rng, const StableParams& p) {
  p.validate();
  const double a = p.alpha;
  const double v = kPi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  if (a == 2.0) return p.mu + p.sigma * std::sqrt(2.0) * rng.normal();
  if (a == 1.0) {
    const double b = p.beta;
    const double h = kPi / 2 + b * v;
    double x = (2.0 / kPi) * (h * std::tan(v) - b * std::log((kPi / 2) * w * std::cos(v) / h));
    return p.sigma * x + (2.0 / kPi) * b * p.sigma * std::log(p.sigma) + p.mu;
  }
  // Chambers-Mallows-Stuck
  const double t = p.beta * std::tan(kPi * a / 2);
  const double b = std::atan(t) / a;
  const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * a));
  const double x = s * std::sin(a * (v + b)) / std::pow(std::cos(v), 1.0 / a) *
                   std::pow(std::cos(v - a * (v + b)) / w, (1.0 - a) / a);
  return p.sigma * x + p.mu;
}

double subordinator_sample(RngState& rng, double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0)) fail(ErrorKind::invalid_parameter, "subordinator needs alpha in (1,2]");
  const double a = alpha / 2;
  const double u = kPi * rng.uniform();
  const double w = rng.exponential();
  if (a == 1.0) return 1.0;
  // Totally skewed CMS with the Laplace-normalising scale; the scale factors cancel.
  return std::sin(a * u) / std::pow(std::sin(u), 1.0 / a) *
         std::pow(std::sin((1.0 - a) * u) / w, (1.0 - a) / a);
}

namespace {

// Kanter representation: A^{a/(1-a)} = Z(phi)/W.
struct Kanter {
  double a, r, log_xr;
  Kanter(double a_, double x) : a(a_), r(a_ / (1.0 - a_)), log_xr(r * std::log(x)) {}

  double log_y(double phi) const {
    const double sp = phi < kPi / 2 ? std::sin(phi) : std::sin(kPi - phi);
    return r * std::log(std::sin(a * phi)) + std::log(std::sin((1.0 - a) * phi)) -
           std::log(sp) / (1.0 - a) - log_xr;
  }

  template <class F>
  double integrate_pieces(F&& f) const {
    std::vector<double> pts{0.0, kPi};
    const double lo = 1e-9, hi = kPi - 1e-9;
    const double flo = log_y(lo), fhi = log_y(hi);
    if ((flo > 0) != (fhi > 0)) {
      boost::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(50);
      auto root = boost::math::tools::toms748_solve([&](double t) { return log_y(t); }, lo, hi, flo,
                                                    fhi, tol, iters);
      const double c = 0.5 * (root.first + root.second);
      pts.push_back(c);
      // The integrand narrows sharply as a -> 1; add a ladder around the peak.
      for (double d : {1e-4, 1e-3, 1e-2, 1e-1}) {
        if (c - d > 0) pts.push_back(c - d);
        if (c + d < kPi) pts.push_back(c + d);
      }
    }
    std::sort(pts.begin(), pts.end());
    return heavyvar::integrate_pieces(f, pts);
  }
};

double positive_stable_series_pdf(double x, double a) {
  double sum = 0.0;
  const double lx = std::log(x);
  for (int k = 1; k <= 400; ++k) {
    double mag = std::exp(std::lgamma(a * k + 1.0) - std::lgamma(k + 1.0) - (a * k + 1.0) * lx);
    double term = mag * std::sin(kPi * a * k);
    sum += (k % 2 == 1) ? term : -term;
    if (mag < 1e-18 * std::abs(sum)) break;
  }
  return sum / kPi;
}

double positive_stable_series_sf(double x, double a) {
  double sum = 0.0;
  const double lx = std::log(x);
  for (int k = 1; k <= 400; ++k) {
    double mag = std::exp(std::lgamma(a * k) - std::lgamma(k + 1.0) - a * k * lx);
    double term = mag * std::sin(kPi * a * k);
    sum += (k % 2 == 1) ? term : -term;
    if (mag < 1e-18 * std::abs(sum)) break;
  }
  return sum / kPi;
}

double positive_stable_series_cut(double a) { return std::pow(4.0, 1.0 / a); }

}  // namespace

double positive_stable_pdf(double x, double a) {
  if (!(a > 0.0 && a < 1.0)) fail(ErrorKind::invalid_parameter, "positive stable index must lie in (0,1)");
  if (!(x > 0.0)) return 0.0;
  if (x >= positive_stable_series_cut(a)) return positive_stable_series_pdf(x, a);
  Kanter k(a, x);
  double s = k.integrate_pieces([&](double phi) {
    double ly = k.log_y(phi);
    if (!std::isfinite(ly) || ly > 700.0) return 0.0;
    double y = std::exp(ly);
    return y * std::exp(-y);
  });
  return k.r / (kPi * x) * s;
}

double positive_stable_cdf(double x, double a) {
  if (!(a > 0.0 && a < 1.0)) fail(ErrorKind::invalid_parameter, "positive stable index must lie in (0,1)");
  if (!(x > 0.0)) return 0.0;
  if (x >= positive_stable_series_cut(a)) return 1.0 - positive_stable_series_sf(x, a);
  Kanter k(a, x);
  return k.integrate_pieces([&](double phi) {
           double ly = k.log_y(phi);
           if (std::isnan(ly) || ly > 700.0) return 0.0;
           return std::exp(-std::exp(ly));
         }) / kPi;
}

double t_pdf(double x, double nu) {
  if (!(nu > 0.0)) fail(ErrorKind::invalid_parameter, "t dof must be positive");
  return std::exp(std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2) - 0.5 * std::log(nu * kPi) -
                  (nu + 1) / 2 * std::log1p(x * x / nu));
}

double t_cdf(double x, double nu) {
  if (!(nu > 0.0)) fail(ErrorKind::invalid_parameter, "t dof must be positive");
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  boost::math::students_t_distribution<double> d(nu);
  return boost::math::cdf(d, x);
}

double t_quantile(double u, double nu) {
  if (!(nu > 0.0)) fail(ErrorKind::invalid_parameter, "t dof must be positive");
  if (!(u > 0.0 && u < 1.0)) fail(ErrorKind::invalid_parameter, "quantile level must lie in (0,1)");
  boost::math::students_t_distribution<double> d(nu);
  return boost::math::quantile(d, u);
}

double chi2_sample(RngState& rng, double nu) {
  if (!(nu > 0.0)) fail(ErrorKind::invalid_parameter, "chi-square dof must be positive");
  double v;
  do v = rng.gamma(nu / 2, 2.0);
  while (!(v > 0.0));
  return v;
}

VectorXd mvnormal_sample(RngState& rng, const CorrelationMatrix& q) {
  VectorXd z(q.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return q.sqrt() * z;
}

}  // namespace heavyvar
