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
#include <limits>

#include "heavyvar/copula_fit.hpp"
#include "heavyvar/estimation.hpp"
#include "heavyvar/marginal_fit.hpp"
#include "heavyvar/models.hpp"
#include "heavyvar/unidist.hpp"

using namespace heavyvar;

namespace {

CorrelationMatrix corr2(double q) {
  MatrixXd m(2, 2);
  m << 1.0, q, q, 1.0;
  return CorrelationMatrix(m);
}

std::vector<double> scaled(std::vector<double> x, double c) {
  for (double& v : x) v *= c;
  return x;
}

}  // namespace

TEST_SUITE("marginal_fit") {

TEST_CASE("stable maximum likelihood") {
  RngState rng(201);
  std::vector<double> x(5000);
  for (double& v : x) v = stable_sample(rng, {1.6, 0.0, 1.0, 0.0});
  const StableFit f = fit_marginal_stable_ml(x);
  CHECK(std::abs(f.alpha - 1.6) < 0.1);
  CHECK(f.sigma == doctest::Approx(1.0).epsilon(0.05));
  CHECK(f.report.loglik == doctest::Approx(stable_loglik(x, f.alpha, f.sigma)));

  const StableFit g = fit_marginal_stable_ml(scaled(x, 3.0));
  CHECK(g.alpha == doctest::Approx(f.alpha).epsilon(1e-4));
  CHECK(g.sigma == doctest::Approx(3.0 * f.sigma).epsilon(1e-4));

  std::vector<double> z(5000);
  for (double& v : z) v = rng.normal() / std::sqrt(2.0);
  CHECK(fit_marginal_stable_ml(z).alpha >= 1.95);
}

TEST_CASE("t maximum likelihood") {
  RngState rng(202);
  std::vector<double> x(5000);
  for (double& v : x) v = 2.0 * rng.normal() / std::sqrt(chi2_sample(rng, 6.0) / 6.0);
  const TFit f = fit_marginal_t_ml(x);
  CHECK(std::abs(f.nu - 6.0) < 1.5);
  CHECK(std::abs(f.delta - 2.0) < 0.1);
  CHECK_FALSE(f.at_cap);

  const TFit g = fit_marginal_t_ml(scaled(x, 0.01));
  CHECK(g.nu == doctest::Approx(f.nu).epsilon(1e-3));
  CHECK(g.delta == doctest::Approx(0.01 * f.delta).epsilon(1e-3));

  std::vector<double> z(5000);
  for (double& v : z) v = rng.normal();
  const TFit h = fit_marginal_t_ml(z);
  CHECK(h.at_cap);
  CHECK(h.nu >= 0.99 * 500);
}

TEST_CASE("copula degrees of freedom") {
  RngState rng(203);
  const MetaTModel m{5.0, {5.0, 5.0}, {1.0, 1.0}, corr2(0.5)};
  const SampleMatrix x = sample(m, 10000, rng);
  const QEstimate q = estimate_Q_meta(x);
  const SampleMatrix u = t_probability_transform(x, m.nus, m.deltas);
  const CopulaFit f = fit_copula_dof(u, q.q, CopulaFamily::meta_t);
  CHECK(f.value >= 3.5);
  CHECK(f.value <= 7.0);
  CHECK_FALSE(f.degenerate);

  // Gaussian copula data.
  const MetaTModel g{std::numeric_limits<double>::infinity(), {5.0, 5.0}, {1.0, 1.0}, corr2(0.5)};
  const SampleMatrix y = sample(g, 5000, rng);
  const SampleMatrix ut = t_probability_transform(y, g.nus, g.deltas);
  const CopulaFit ft = fit_copula_dof(ut, estimate_Q_meta(y).q, CopulaFamily::meta_t);
  CHECK((ft.degenerate || ft.value > 100));
  // The endpoint is kept whenever the likelihood-ratio gain is below the critical value.
  const double lr = ft.report.estimates.at("endpoint_lr");
  CHECK(ft.degenerate == (lr <= CopulaFitOptions{}.endpoint_lr_critical));
  CopulaFitOptions pure;
  pure.endpoint_lr_critical = 0.0;
  const CopulaFit fp = fit_copula_dof(ut, estimate_Q_meta(y).q, CopulaFamily::meta_t, pure);
  CHECK(fp.degenerate == (lr <= 0.0));
  CHECK(fp.report.estimates.at("interior_nu0") == ft.report.estimates.at("interior_nu0"));

  const SampleMatrix one = u.leftCols(1);
  const CopulaFit f1 = fit_copula_dof(one, CorrelationMatrix::identity(1), CopulaFamily::meta_t);
  CHECK_FALSE(f1.identifiable);
}

TEST_CASE("meta-stable copula index on Gaussian-copula data") {
  RngState rng(204);
  const MetaStableModel g{2.0, {1.7, 1.7}, {1.0, 1.0}, corr2(0.5)};
  const SampleMatrix y = sample(g, 3000, rng);
  const SampleMatrix u = stable_probability_transform(y, g.alphas, g.sigmas);
  const CopulaFit f = fit_copula_dof(u, estimate_Q_meta(y).q, CopulaFamily::meta_stable);
  CHECK((f.degenerate || f.value > 1.95));
}

}  // TEST_SUITE
