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


// Acceptance suite: one PASS/FAIL line per criterion, each with its own
// tolerance and runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "heavyvar/backtest.hpp"
#include "heavyvar/copula_fit.hpp"
#include "heavyvar/estimation.hpp"
#include "heavyvar/fracmoment.hpp"
#include "heavyvar/models.hpp"
#include "heavyvar/portfolio.hpp"
#include "heavyvar/pricing.hpp"
#include "heavyvar/unidist.hpp"
#include "heavyvar/var.hpp"
#include "oracles.hpp"

using namespace heavyvar;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

CorrelationMatrix mat2(double a, double b, double c) {
  MatrixXd m(2, 2);
  m << a, b, b, c;
  return CorrelationMatrix(m);
}

std::vector<double> col(const SampleMatrix& x, Eigen::Index k) { return column(x, k); }

// 1. Kupiec statistic against reference likelihood ratios.
void kupiec(Outcome& o) {
  const double a = kupiec_pof(204, 4286, 0.95).zeta;
  const double b = kupiec_pof(64, 4286, 0.99).zeta;
  o.detail << "LR95=" << a << " LR99=" << b;
  o.require(a >= 0.52 && a <= 0.56, "LR95 in [0.52, 0.56]");
  o.require(b >= 8.9 && b <= 9.4, "LR99 in [8.9, 9.4]");
}

// 2. Shape and value of f_1/2.
void fp_suite(Outcome& o) {
  const double p = 0.5;
  o.require(f_p(0.0, p) == 0.0, "f(0) == 0");
  const double top = f_p(0.99, p);
  o.detail << "f(0.99)=" << top;
  o.require(top >= 0.78 && top <= 0.7979, "f(0.99) in [0.78, 0.7979]");

  double odd = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double q = 0.0199 * i;
    odd = std::max(odd, std::abs(f_p(q, p) + f_p(-q, p)));
  }
  o.detail << " odd=" << odd;
  o.require(odd < 1e-10, "oddness < 1e-10");

  const double h = 0.01;
  bool increasing = true;
  int sign_changes = 0, last_sign = 0;
  for (double q = -0.98; q <= 0.98 + 1e-12; q += h) {
    const double f0 = f_p(q - h, p), f1 = f_p(q, p), f2 = f_p(q + h, p);
    increasing = increasing && f2 > f1 && f1 > f0;
    if (std::abs(q) < 0.5 * h) continue;
    const double second = f2 - 2 * f1 + f0;
    const int sign = second > 0 ? 1 : -1;
    if ((q < 0 && sign > 0) || (q > 0 && sign < 0)) sign_changes += 100;
    if (last_sign != 0 && sign != last_sign) ++sign_changes;
    last_sign = sign;
  }
  o.require(increasing, "strictly increasing");
  o.require(sign_changes == 1, "concave on (-1,0), convex on (0,1)");

  for (double q : {0.3, -0.7}) {
    const auto mc = oracle::fp_monte_carlo(q, p, 10000000, 77);
    const double z = std::abs(f_p(q, p) - mc.mean) / mc.se;
    o.detail << " mc_z(" << q << ")=" << z;
    o.require(z < 3.0, "Monte Carlo within 3 s.e.");
  }
}

// 3. Dispersion estimators recover the true correlation.
void estimator_roundtrips(Outcome& o) {
  const long n = 100000;
  {
    // Q12 = 2 sigma1 sigma2 q with unit sigmas.
    RngState rng(301);
    const SampleMatrix x = sample(StableLikeModel{{1.5, 1.7}, mat2(2.0, 1.0, 2.0)}, n, rng);
    FracMomentConfig cfg;
    cfg.p = 0.25;
    const double q = estimate_Q_stable_like(x, {1.5, 1.7}, {1.0, 1.0}, cfg).report.estimates.at("q_0_1");
    const double se = std::sqrt(stable_like_asymptotic_variance(0.5, 0.25, 1.5, 1.7) / n);
    o.detail << "stable q=" << q << " (" << (q - 0.5) / se << " se)";
    o.require(std::abs(q - 0.5) < 3 * se, "stable-like within 3 s.e.");
  }
  {
    RngState rng(302);
    const SampleMatrix x = sample(TLikeModel{{5.0, 8.0}, mat2(1.0, 0.5, 1.0)}, n, rng);
    const double q = estimate_Q_t_like(x, {5.0, 8.0}).report.estimates.at("q_0_1");
    const double se = std::sqrt(tlike_asymptotic_variance(0.5, 5.0, 8.0) / n);
    o.detail << " t q=" << q << " (" << (q - 0.5) / se << " se)";
    o.require(std::abs(q - 0.5) < 3 * se, "t-like within 3 s.e.");
  }
  {
    RngState rng(303);
    const SampleMatrix x = sample(MetaTModel{5.0, {3.0, 7.0}, {1.0, 2.0}, mat2(1.0, 0.6, 1.0)}, 20000, rng);
    const double q = estimate_Q_meta(x).q(0, 1);
    o.detail << " kendall Q12=" << q;
    o.require(std::abs(q - 0.6) < 0.03, "Kendall Q12 within 0.03");
  }
}

// 4. Coverage of the variance-stabilised interval.
void coverage(Outcome& o) {
  const double p = 0.25, a1 = 1.5, a2 = 1.7, q = 0.4;
  const long n = 5000;
  const int reps = 500;
  const VarianceStabilizer vs(p, a1, a2);
  const StableLikeModel m{{a1, a2}, mat2(2.0, 2.0 * q, 2.0)};
  FracMomentConfig cfg;
  cfg.p = p;
  const RngState root(404);
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    RngState rng = root.substream(r);
    const SampleMatrix x = sample(m, n, rng);
    const double qh = estimate_Q_stable_like(x, {a1, a2}, {1.0, 1.0}, cfg).report.estimates.at("q_0_1");
    const auto [lo, hi] = vs.interval(qh, n, 0.95);
    hits += (lo <= q && q <= hi);
  }
  const double cov = double(hits) / reps;
  o.detail << "coverage=" << cov;
  o.require(cov >= 0.92 && cov <= 0.98, "coverage in [0.92, 0.98]");
}

// 5. Simulated marginals against their analytic laws.
void marginal_ks(Outcome& o) {
  const long n = 10000;
  const double crit = oracle::ks_critical_5pct(n);
  const CorrelationMatrix unit = mat2(1.0, 0.5, 1.0);
  auto check = [&](const std::string& name, const SampleMatrix& x, Eigen::Index k,
                   const std::function<double(double)>& cdf) {
    const double d = oracle::ks_distance(col(x, k), cdf);
    o.detail << " " << name << k << "=" << d;
    o.require(d < crit, name + " KS");
  };
  {
    RngState rng(501);
    const SampleMatrix x = sample(GaussianModel{mat2(4.0, 1.0, 0.25)}, n, rng);
    check("gauss", x, 0, [](double v) { return oracle::norm_cdf(v / 2.0); });
    check("gauss", x, 1, [](double v) { return oracle::norm_cdf(v / 0.5); });
  }
  {
    // Q_ii = 2 sigma_i^2 with sigma = (1, 0.5).
    RngState rng(502);
    const SampleMatrix x = sample(StableLikeModel{{1.4, 1.8}, mat2(2.0, 0.5, 0.5)}, n, rng);
    check("stable", x, 0, [](double v) { return stable_cdf(v, 1.4); });
    check("stable", x, 1, [](double v) { return stable_cdf(v / 0.5, 1.8); });
  }
  {
    RngState rng(503);
    const SampleMatrix x = sample(TLikeModel{{3.0, 9.0}, mat2(1.0, 0.3, 4.0)}, n, rng);
    check("t", x, 0, [](double v) { return oracle::t_cdf_ibeta(v, 3.0); });
    check("t", x, 1, [](double v) { return oracle::t_cdf_ibeta(v / 2.0, 9.0); });
  }
  {
    RngState rng(504);
    const SampleMatrix x = sample(MetaStableModel{1.6, {1.3, 1.9}, {2.0, 1.0}, unit}, n, rng);
    check("metastable", x, 0, [](double v) { return stable_cdf(v / 2.0, 1.3); });
    check("metastable", x, 1, [](double v) { return stable_cdf(v, 1.9); });
  }
  {
    RngState rng(505);
    const SampleMatrix x = sample(MetaTModel{4.0, {2.5, 12.0}, {1.0, 3.0}, unit}, n, rng);
    check("metat", x, 0, [](double v) { return oracle::t_cdf_ibeta(v, 2.5); });
    check("metat", x, 1, [](double v) { return oracle::t_cdf_ibeta(v / 3.0, 12.0); });
  }
  o.detail << " crit=" << crit;
}

// 6. Option pricing identities, Greeks and the down-and-in call.
void pricing(Outcome& o) {
  RngState rng(606);
  double parity = 0.0;
  const std::pair<OptionKind, OptionKind> pairs[] = {{OptionKind::down_in_call, OptionKind::down_out_call},
                                                     {OptionKind::down_in_put, OptionKind::down_out_put},
                                                     {OptionKind::up_in_call, OptionKind::up_out_call},
                                                     {OptionKind::up_in_put, OptionKind::up_out_put}};
  for (int i = 0; i < 1000; ++i) {
    const MarketState m{100.0, 0.1 * rng.uniform(), 0.05 + 0.6 * rng.uniform()};
    const double t = 0.05 + 2.0 * rng.uniform();
    for (const auto& [in, out] : pairs) {
      const bool down = in == OptionKind::down_in_call || in == OptionKind::down_in_put;
      // Down barriers sit below the strike; up barriers anywhere above spot.
      const double h = down ? 60.0 + 39.0 * rng.uniform() : 101.0 + 60.0 * rng.uniform();
      const double k = down ? h + 1.0 + 60.0 * rng.uniform() : 50.0 + 120.0 * rng.uniform();
      const OptionSpec a{in, k, h, t}, b{out, k, h, t};
      const OptionSpec v{is_call(in) ? OptionKind::call : OptionKind::put, k, 0.0, t};
      parity = std::max(parity, std::abs(price(a, m).price + price(b, m).price - price(v, m).price));
    }
  }
  o.detail << "parity=" << parity;
  o.require(parity < 1e-10, "in-out parity < 1e-10");

  const MarketState m{100.0, 0.03, 0.25};
  std::vector<OptionSpec> specs = {{OptionKind::call, 95, 0, 0.5},       {OptionKind::put, 108, 0, 0.5},
                                   {OptionKind::cash_call, 103, 0, 0.5, 7}, {OptionKind::cash_put, 97, 0, 1.0},
                                   {OptionKind::down_in_call, 100, 90, 0.5}, {OptionKind::down_out_call, 100, 90, 0.5},
                                   {OptionKind::down_in_put, 100, 90, 0.5},  {OptionKind::down_out_put, 100, 90, 0.5},
                                   {OptionKind::up_in_call, 100, 115, 0.5},  {OptionKind::up_out_call, 100, 115, 0.5},
                                   {OptionKind::up_in_put, 100, 115, 0.5},   {OptionKind::up_out_put, 100, 115, 0.5}};
  double worst = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-12); };
  for (const auto& s : specs) {
    const PriceAndGreeks g = price(s, m);
    auto at = [&](double sp) { return price(s, {sp, m.rate, m.vol}).price; };
    const double hs = 1e-5 * m.spot, hg = 1e-4 * m.spot, ht = 1e-5 * s.expiry;
    OptionSpec a = s, b = s;
    a.expiry += ht;
    b.expiry -= ht;
    worst = std::max({worst, rel(g.delta, (at(m.spot + hs) - at(m.spot - hs)) / (2 * hs)),
                      rel(g.gamma, (at(m.spot + hg) - 2 * at(m.spot) + at(m.spot - hg)) / (hg * hg)),
                      rel(g.theta, (price(a, m).price - price(b, m).price) / (2 * ht))});
  }
  o.detail << " greeks=" << worst;
  o.require(worst < 1e-4, "Greeks within 1e-4");

  const double cdi = price({OptionKind::down_in_call, 100, 95, 0.5}, {100, 0.03, 0.25}).price;
  const auto mc = oracle::down_in_call_bridge_mc(100, 100, 95, 0.03, 0.25, 0.5, 1000000, 606);
  o.detail << " C_di=" << cdi << " mc=" << mc.mean << "+-" << mc.se;
  o.require(std::abs(cdi - mc.mean) < 3 * mc.se, "C_di within 3 s.e.");

  double cash = 0.0;
  for (int i = 0; i < 200; ++i) {
    const MarketState mk{50.0 + 100.0 * rng.uniform(), 0.1 * rng.uniform(), 0.05 + 0.6 * rng.uniform()};
    const double t = 0.05 + 2.0 * rng.uniform(), k = 50.0 + 100.0 * rng.uniform();
    cash = std::max(cash, std::abs(price({OptionKind::cash_call, k, 0, t}, mk).price +
                                   price({OptionKind::cash_put, k, 0, t}, mk).price - std::exp(-mk.rate * t)));
  }
  o.detail << " cash=" << cash;
  o.require(cash < 1e-12, "C_cn + P_cn = exp(-rT)");
}

// 7. Delta-gamma error is third order.
void delta_gamma_order(Outcome& o) {
  const Portfolio p = build_portfolio(preset_portfolio("nll"), {0.2, 0.25, 0.3, 0.35}, 0.03);
  const QuadraticLossCoefficients c = delta_gamma_coefficients(p);
  RngState rng(707);
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < 50; ++i) {
    // Co-moving shocks: per-asset cubic terms add instead of cancelling.
    VectorXd d(4);
    const double sign = rng.uniform() < 0.5 ? 1.0 : -1.0;
    for (int k = 0; k < 4; ++k) d[k] = sign * rng.uniform();
    d /= d.cwiseAbs().maxCoeff();
    const VectorXd x1 = 0.0025 * d, x2 = 0.00125 * d;
    const double e1 = std::abs(loss_quadratic(c, x1) - loss_full_revaluation(p, x1));
    const double e2 = std::abs(loss_quadratic(c, x2) - loss_full_revaluation(p, x2));
    lo = std::min(lo, e1 / e2);
    hi = std::max(hi, e1 / e2);
  }
  o.detail << "ratio in [" << lo << ", " << hi << "]";
  o.require(lo >= 6.0 && hi <= 10.0, "ratio in [6, 10]");
}

// 8. Violation counts of a correctly specified model.
void backtest_calibration(Outcome& o) {
  MatrixXd cov(4, 4);
  cov << 1.0, 0.4, 0.3, 0.2, 0.4, 1.0, 0.35, 0.25, 0.3, 0.35, 1.0, 0.3, 0.2, 0.25, 0.3, 1.0;
  const VectorXd sd = (VectorXd(4) << 0.012, 0.015, 0.01, 0.018).finished();
  cov = sd.asDiagonal() * cov * sd.asDiagonal();
  VarConfig cfg;
  cfg.window = 250;
  cfg.paths = 20000;
  cfg.seed = 808;
  cfg.refit_every = 5;
  const PortfolioSpec nll = preset_portfolio("nll");
  auto run = [&](const std::string& name, const RiskFactorModel& truth, ModelFamily family, std::uint64_t seed) {
    RngState rng(seed);
    const SampleMatrix x = sample(truth, 1250, rng);
    const BacktestReport r = rolling_backtest(x, nll, family, cfg);
    o.require(r.skipped == 0, name + " no skipped dates");
    for (const BetaResult& b : r.results) {
      const auto band = oracle::binomial_band99(r.observations, 1.0 - b.beta);
      o.detail << " " << name << "@" << b.beta << "=" << b.violations << "/" << r.observations << " band[" << band.first
               << "," << band.second << "]";
      o.require(b.violations >= band.first && b.violations <= band.second, name + " violations in band");
    }
  };
  run("gaussian", GaussianModel{CorrelationMatrix(cov)}, ModelFamily::gaussian, 8081);
  // t-like with the same dispersion: scales sigma_k^2 = Q_kk.
  run("t-like", TLikeModel{{4.0, 5.0, 6.0, 8.0}, CorrelationMatrix(cov)}, ModelFamily::t_like, 8082);
}

// 9. Copula degrees of freedom.
void copula_dof(Outcome& o) {
  const CorrelationMatrix q = mat2(1.0, 0.5, 1.0);
  const long n = 10000;
  {
    RngState rng(901);
    const SampleMatrix x = sample(MetaTModel{5.0, {4.0, 6.0}, {1.0, 1.5}, q}, n, rng);
    const double nu0 = std::get<MetaTModel>(fit_model(x, ModelFamily::meta_t).model).nu0;
    o.detail << "nu0=" << nu0;
    o.require(nu0 >= 3.5 && nu0 <= 7.0, "nu0 in [3.5, 7]");
  }
  {
    RngState rng(902);
    const SampleMatrix x = sample(MetaTModel{std::numeric_limits<double>::infinity(), {4.0, 6.0}, {1.0, 1.5}, q}, n, rng);
    const double nu0 = std::get<MetaTModel>(fit_model(x, ModelFamily::meta_t).model).nu0;
    o.detail << " gaussian-copula nu0=" << nu0;
    o.require(std::isinf(nu0), "meta-t degenerate endpoint");
  }
  {
    RngState rng(903);
    const SampleMatrix x = sample(MetaStableModel{2.0, {1.6, 1.8}, {1.0, 1.5}, q}, n, rng);
    const double a0 = std::get<MetaStableModel>(fit_model(x, ModelFamily::meta_stable).model).alpha0;
    o.detail << " gaussian-copula alpha0=" << a0;
    o.require(a0 == 2.0, "meta-stable degenerate endpoint");
  }
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "kupiec", 1e-3, kupiec},
      {2, "f_p suite", 10, fp_suite},
      {3, "estimator roundtrips", 60, estimator_roundtrips},
      {4, "interval coverage", 300, coverage},
      {5, "marginal KS", 30, marginal_ks},
      {6, "pricing", 120, pricing},
      {7, "delta-gamma order", 10, delta_gamma_order},
      {8, "backtest calibration", 1800, backtest_calibration},
      {9, "copula dof", 300, copula_dof},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  // The shared stable grid is loaded up front so it is not charged to a criterion.
  default_stable_grid();

  int failed = 0;
  for (const Criterion& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_seconds) {
      o.pass = false;
      o.detail << " [over budget " << c.budget_seconds << " s]";
    }
    std::printf("criterion %d %s: %s (%s; %.3f s)\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.str().c_str(),
                secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
