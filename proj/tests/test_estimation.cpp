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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "heavyvar/errors.hpp"
#include "heavyvar/estimation.hpp"
#include "heavyvar/fracmoment.hpp"
#include "heavyvar/models.hpp"
#include "heavyvar/numerics.hpp"
#include "heavyvar/unidist.hpp"
#include "oracles.hpp"

using namespace heavyvar;

namespace {

CorrelationMatrix corr2(double q, double s1 = 1.0, double s2 = 1.0) {
  MatrixXd m(2, 2);
  m << s1 * s1, q * s1 * s2, q * s1 * s2, s2 * s2;
  return CorrelationMatrix(m);
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("stable-like dispersion round trip") {
  const double s = 1 / std::sqrt(2.0);
  const StableLikeModel m{{1.5, 1.7}, corr2(0.5)};
  RngState rng(101);
  const SampleMatrix x = sample(m, 100000, rng);
  FracMomentConfig cfg;
  cfg.p = 0.25;
  const QEstimate e = estimate_Q_stable_like(x, m.alphas, {s, s}, cfg);
  const double q = e.q(0, 1) / std::sqrt(e.q(0, 0) * e.q(1, 1));
  const double se = std::sqrt(stable_like_asymptotic_variance(0.5, 0.25, 1.5, 1.7) / 100000);
  CHECK(e.report.std_errors.at("q_0_1") == doctest::Approx(se).epsilon(0.05));
  CHECK(std::abs(e.report.estimates.at("q_0_1") - 0.5) < 3 * se);
  CHECK(std::abs(q - 0.5) < 3 * se + 1e-9);
  CHECK(e.q(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("stable-like dispersion edge cases") {
  RngState rng(102);
  const SampleMatrix a = sample(StableLikeModel{{1.6}, CorrelationMatrix::identity(1)}, 5000, rng);
  SampleMatrix x(5000, 2);
  x.col(0) = a.col(0);
  x.col(1) = a.col(0);
  // Understated scales push the normalised moment beyond f_p(1).
  const QEstimate e = estimate_Q_stable_like(x, {1.6, 1.6}, {0.2, 0.2});
  CHECK(e.report.estimates.at("q_0_1") == doctest::Approx(1 - 1e-9).epsilon(1e-12));
  CHECK_FALSE(e.report.warnings.empty());

  const SampleMatrix b = sample(StableLikeModel{{1.6}, CorrelationMatrix::identity(1)}, 5000, rng);
  x.col(1) = b.col(0);
  FracMomentConfig cfg;
  cfg.p = 0.25;
  const QEstimate f = estimate_Q_stable_like(x, {1.6, 1.6}, {1.0, 1.0}, cfg);
  const double se = std::sqrt(stable_like_asymptotic_variance(0.0, 0.25, 1.6, 1.6) / 5000);
  CHECK(std::abs(f.report.estimates.at("q_0_1")) < 3 * se);
}

TEST_CASE("stable-like estimator variance scales like the asymptotic formula") {
  const StableLikeModel m{{1.5, 1.7}, corr2(0.4)};
  const double s = 1 / std::sqrt(2.0);
  FracMomentConfig cfg;
  cfg.p = 0.25;
  const int reps = 200;
  const long n = 2000;
  RngState rng(103);
  std::vector<double> qs;
  for (int r = 0; r < reps; ++r)
    qs.push_back(estimate_Q_stable_like(sample(m, n, rng), m.alphas, {s, s}, cfg).report.estimates.at("q_0_1"));
  const double mean = std::accumulate(qs.begin(), qs.end(), 0.0) / reps;
  double var = 0;
  for (double q : qs) var += (q - mean) * (q - mean);
  var /= reps - 1;
  CHECK(var * n == doctest::Approx(stable_like_asymptotic_variance(0.4, 0.25, 1.5, 1.7)).epsilon(0.2));
}

TEST_CASE("t-like dispersion round trip") {
  const TLikeModel m{{5.0, 8.0}, corr2(0.5)};
  RngState rng(104);
  const long n = 100000;
  const QEstimate e = estimate_Q_t_like(sample(m, n, rng), m.nus);
  const double tol = 3 * std::sqrt(tlike_asymptotic_variance(0.5, 5.0, 8.0) / n);
  CHECK(std::abs(e.report.estimates.at("q_0_1") - 0.5) < tol);
  CHECK(e.q(0, 0) == doctest::Approx(1.0).epsilon(0.02));
  CHECK_THROWS_AS(estimate_Q_t_like(sample(m, 100, rng), {2.0, 5.0}), Error);
}

TEST_CASE("kendall tau") {
  CHECK(kendall_tau({1, 2, 3}, {1, 3, 2}) == doctest::Approx(1.0 / 3.0));
  std::vector<double> x(200), y(200);
  RngState rng(105);
  for (int i = 0; i < 200; ++i) {
    x[i] = rng.normal();
    y[i] = x[i] + rng.normal();
  }
  std::vector<double> ex(200), neg(200);
  for (int i = 0; i < 200; ++i) {
    ex[i] = std::exp(3 * x[i]);
    neg[i] = -x[i];
  }
  CHECK(kendall_tau(x, ex) == 1.0);
  CHECK(kendall_tau(x, neg) == -1.0);
  CHECK(kendall_tau(x, y) == doctest::Approx(oracle::kendall_brute(x, y)).epsilon(1e-14));
  std::vector<double> ey(200);
  for (int i = 0; i < 200; ++i) ey[i] = std::atan(y[i]) + 5;
  CHECK(kendall_tau(ex, ey) == kendall_tau(x, y));
  CHECK(kendall_tau_bruteforce(x, y) == doctest::Approx(oracle::kendall_brute(x, y)).epsilon(1e-14));
  CHECK_THROWS_AS(kendall_tau({1, 2}, {1}), Error);
}

TEST_CASE("Kendall-based copula matrix") {
  // Permutations of 40 with a prescribed number of inversions: each swap of an
  // ascending adjacent pair adds exactly one discordant pair out of 780.
  auto with_inversions = [](int n, int inversions) {
    SampleMatrix m(n, 2);
    std::vector<double> y(n);
    std::iota(y.begin(), y.end(), 0.0);
    int done = 0;
    while (done < inversions)
      for (int i = 0; i + 1 < n && done < inversions; ++i)
        if (y[i] < y[i + 1]) {
          std::swap(y[i], y[i + 1]);
          ++done;
        }
    for (int i = 0; i < n; ++i) {
      m(i, 0) = i;
      m(i, 1) = y[i];
    }
    return m;
  };
  const SampleMatrix half = with_inversions(40, 195);
  CHECK(oracle::kendall_brute(column(half, 0), column(half, 1)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(estimate_Q_meta(half).q(0, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(std::abs(estimate_Q_meta(with_inversions(40, 390)).q(0, 1)) < 1e-15);

  RngState rng(106);
  const SampleMatrix x = sample(MetaTModel{5.0, {3.0, 7.0}, {1.0, 2.0}, corr2(0.6)}, 20000, rng);
  const QEstimate e = estimate_Q_meta(x);
  CHECK(std::abs(e.q(0, 1) - 0.6) < 0.03);
  CHECK(e.q.has_unit_diagonal());

  // An inconsistent 3x3 pattern forces a repair.
  SampleMatrix y(3000, 3);
  for (int i = 0; i < 3000; ++i) {
    const double a = rng.normal(), b = rng.normal();
    y(i, 0) = a;
    y(i, 1) = a + 0.05 * b;
    y(i, 2) = i % 2 ? a : -a + 0.3 * b;
  }
  const QEstimate r = estimate_Q_meta(y);
  CHECK(r.q.has_unit_diagonal());
  CHECK(r.q.min_eigenvalue() > -1e-10);
  const QEstimate w = estimate_Q_meta(x);
  CHECK(w.report.estimates.at("repair_change") < 0.05);
}

TEST_CASE("descriptive statistics") {
  RngState rng(107);
  std::vector<double> g(100000);
  for (double& v : g) v = rng.normal();
  const DescriptiveStats s = descriptive_stats(g);
  CHECK(std::abs(s.kurtosis - 3.0) < 0.1);
  CHECK(s.jb_pvalue > 0.001);

  std::vector<double> t(1000000);
  // t(10): kurtosis 3 + 6/(nu - 4) = 4, with a finite eighth moment.
  for (double& v : t) v = rng.normal() / std::sqrt(chi2_sample(rng, 10.0) / 10.0);
  CHECK(std::abs(descriptive_stats(t).kurtosis - 4.0) < 0.15);

  std::vector<double> h(24);
  for (int i = 0; i < 24; ++i) h[i] = (i % 6) + (i == 7 ? 30.0 : 0.0);
  const DescriptiveStats d = descriptive_stats(h);
  const double m = std::accumulate(h.begin(), h.end(), 0.0) / 24;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : h) {
    m2 += std::pow(v - m, 2) / 24;
    m3 += std::pow(v - m, 3) / 24;
    m4 += std::pow(v - m, 4) / 24;
  }
  const double sk = m3 / std::pow(m2, 1.5), ku = m4 / (m2 * m2);
  CHECK(d.mean == doctest::Approx(m));
  CHECK(d.skewness == doctest::Approx(sk));
  CHECK(d.kurtosis == doctest::Approx(ku));
  CHECK(d.jarque_bera == doctest::Approx(24.0 / 6.0 * (sk * sk + (ku - 3) * (ku - 3) / 4)));
  CHECK(d.jb_pvalue == doctest::Approx(std::exp(-d.jarque_bera / 2)));
  CHECK_THROWS_AS(descriptive_stats(std::vector<double>(30, 2.0)), Error);
}

}  // TEST_SUITE
