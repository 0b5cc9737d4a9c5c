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


#include <doctest.h>

#include <cmath>

#include "heavyvar/numerics.hpp"
#include "heavyvar/subgaussian.hpp"
#include "heavyvar/unidist.hpp"

using namespace heavyvar;

namespace {

CorrelationMatrix corr2(double q) {
  MatrixXd m(2, 2);
  m << 1.0, q, q, 1.0;
  return CorrelationMatrix(m);
}

VectorXd v2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_SUITE("densities") {

TEST_CASE("sub-Gaussian stable density, one dimension") {
  const CorrelationMatrix two(MatrixXd::Constant(1, 1, 2.0));
  for (double a : {1.2, 1.5, 1.9})
    for (double x : {0.0, 0.4, 1.5, 6.0, 80.0}) {
      VectorXd v(1);
      v << x;
      const double ref = stable_pdf(x, {a, 0.0, 1.0, 0.0});
      CAPTURE(a);
      CAPTURE(x);
      const double got = subgaussian_stable_density(v, a, two);
      CHECK(std::abs(got - ref) < 1e-6);
      CHECK(std::abs(got - ref) < 1e-5 * ref);
    }
}

TEST_CASE("sub-Gaussian stable density is elliptical and symmetric") {
  MatrixXd m(2, 2);
  m << 2.0, 0.6, 0.6, 1.0;
  const CorrelationMatrix s(m);
  const VectorXd x = v2(0.7, -1.1);
  CHECK(subgaussian_stable_density(x, 1.6, s) == subgaussian_stable_density(-x, 1.6, s));
  // Same quadratic form: rotate x within the ellipse via S^{1/2} R S^{-1/2}.
  const double th = 0.9;
  MatrixXd r(2, 2);
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const VectorXd y = s.sqrt() * r * s.sqrt().inverse() * x;
  CHECK(std::abs(y.dot(s.inverse() * y) - x.dot(s.inverse() * x)) < 1e-12);
  const double dx = subgaussian_stable_density(x, 1.6, s), dy = subgaussian_stable_density(y, 1.6, s);
  CHECK(std::abs(dx - dy) < 1e-12 * dx);
  CHECK(dx > 0.0);
  CHECK(subgaussian_stable_density(v2(1e4, -3e3), 1.3, s) > 0.0);
}

TEST_CASE("radial profile table against direct quadrature") {
  const auto r = subgaussian_radial(1.5, 3);
  for (double z : {0.0, 1e-6, 0.3, 4.0, 250.0, 1e7}) {
    const double d = r->direct(z);
    CHECK(std::abs((*r)(z) - d) < 1e-5 * d);
  }
}

TEST_CASE("meta-t copula density") {
  for (double nu : {2.5, 6.0, 40.0}) {
    VectorXd u(1);
    u << 0.23;
    CHECK(meta_t_copula_density(u, nu, CorrelationMatrix::identity(1)) == 1.0);
  }
  const double ref = std::tgamma(3.0) * std::tgamma(2.0) / std::pow(std::tgamma(2.5), 2);
  CHECK(meta_t_copula_density(v2(0.5, 0.5), 4.0, CorrelationMatrix::identity(2)) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(ref == doctest::Approx(1.13177).epsilon(1e-4));

  // Integral over the unit square, computed in x-space as the bivariate t
  // mass with a trapezoid rule in s = asinh(x).
  const double nu0 = 6.0;
  const CorrelationMatrix q = corr2(0.5);
  const double h = 0.05;
  double total = 0.0;
  for (double s1 = -7.0; s1 <= 7.0 + 1e-9; s1 += h)
    for (double s2 = -7.0; s2 <= 7.0 + 1e-9; s2 += h) {
      const double x1 = std::sinh(s1), x2 = std::sinh(s2);
      const double c = meta_t_copula_density(v2(t_cdf(x1, nu0), t_cdf(x2, nu0)), nu0, q);
      total += c * t_pdf(x1, nu0) * t_pdf(x2, nu0) * std::cosh(s1) * std::cosh(s2) * h * h;
    }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("meta-stable copula density") {
  VectorXd u(1);
  u << 0.9;
  CHECK(meta_stable_copula_density(u, 1.5, CorrelationMatrix::identity(1)) == 1.0);
  const CorrelationMatrix q = corr2(0.4);
  const VectorXd a = v2(0.2, 0.93);
  const VectorXd b = VectorXd::Ones(2) - a;
  const double da = meta_stable_copula_density(a, 1.6, q);
  CHECK(std::abs(da - meta_stable_copula_density(b, 1.6, q)) < 1e-9 * da);
  CHECK(da > 0.0);
  CHECK(meta_stable_copula_density(v2(0.5, 0.5), 2.0, CorrelationMatrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(meta_stable_copula_density(v2(0.5, 0.5), 1.99, CorrelationMatrix::identity(2)) - 1.0) < 0.02);
  // alpha0 = 2 coincides with the Gaussian copula for any Q.
  CHECK(meta_stable_copula_density(a, 2.0, q) == doctest::Approx(gaussian_copula_density(a, q)).epsilon(1e-10));
}

TEST_CASE("gaussian copula density closed form") {
  const double rho = 0.4;
  const VectorXd u = v2(0.3, 0.8);
  const double x = norm_quantile(0.3), y = norm_quantile(0.8);
  const double ref =
      std::exp(-(rho * rho * (x * x + y * y) - 2 * rho * x * y) / (2 * (1 - rho * rho))) / std::sqrt(1 - rho * rho);
  CHECK(gaussian_copula_density(u, corr2(rho)) == doctest::Approx(ref).epsilon(1e-12));
}

}  // TEST_SUITE
