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

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace heavyvar {

inline constexpr double kPi = 3.14159265358979323846;

double norm_pdf(double x);
double norm_cdf(double x);
double norm_quantile(double u);

// Adaptive Gauss-Kronrod (21 points) on a finite interval.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12, unsigned depth = 15) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, depth, tol);
}

// One Gauss-Kronrod 21/10 panel: (integral, |K - G|, integral of |f|).
template <class F>
std::array<double, 3> gk21_panel(F& f, double a, double b) {
  using K = boost::math::quadrature::gauss_kronrod<double, 21>;
  using G = boost::math::quadrature::gauss<double, 10>;
  static const auto& xk = K::abscissa();
  static const auto& wk = K::weights();
  static const auto& wg = G::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = wk[0] * fc, g = 0.0, l1 = wk[0] * std::abs(fc);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double f1 = f(c - h * xk[i]), f2 = f(c + h * xk[i]);
    k += wk[i] * (f1 + f2);
    l1 += wk[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) g += wg[i / 2] * (f1 + f2);
  }
  return {k * h, std::abs(k - g) * h, l1 * h};
}

namespace detail {
template <class F>
double integrate_abs_rec(F& f, double a, double b, double abs_tol, unsigned depth, long& budget) {
  auto [v, err, l1] = gk21_panel(f, a, b);
  budget -= 21;
  // 1e-12 * |f| is the noise floor of integrands built from exp(-exp(.)).
  if (!std::isfinite(v) || err <= abs_tol || err <= 1e-12 * l1 || depth == 0 || budget <= 0 ||
      !(b - a > 1e-15 * (std::abs(a) + std::abs(b))))
    return v;
  const double m = 0.5 * (a + b);
  return integrate_abs_rec(f, a, m, 0.5 * abs_tol, depth - 1, budget) +
         integrate_abs_rec(f, m, b, 0.5 * abs_tol, depth - 1, budget);
}
}  // namespace detail

// Adaptive bisection with an absolute error target, for integrands that
// vanish on part of the range (a relative target never terminates there).
template <class F>
double integrate_abs(F&& f, double a, double b, double abs_tol, unsigned depth = 40, long budget = 400000) {
  if (!(b > a)) return 0.0;
  return detail::integrate_abs_rec(f, a, b, abs_tol, depth, budget);
}

// Sum over consecutive break points with a tolerance relative to a first-pass total.
template <class F>
double integrate_pieces(F&& f, const std::vector<double>& pts, double rel_tol = 1e-13) {
  double rough = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) rough += gk21_panel(f, pts[i], pts[i + 1])[2];
  if (rough == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) s += integrate_abs(f, pts[i], pts[i + 1], rel_tol * rough);
  return s;
}

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Nelder-Mead on an unconstrained objective. Non-finite values count as +inf.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, std::vector<double> step,
                          int max_iter = 2000, double ftol = 1e-10, double xtol = 1e-9);

inline double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace heavyvar
