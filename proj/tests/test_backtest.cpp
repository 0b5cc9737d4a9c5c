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

#include "heavyvar/backtest.hpp"
#include "heavyvar/errors.hpp"
#include "oracles.hpp"

using namespace heavyvar;

namespace {

SampleMatrix gaussian_returns(Eigen::Index n, std::uint64_t seed) {
  MatrixXd q(2, 2);
  q << 1.5e-4, 5e-5, 5e-5, 1e-4;
  RngState rng(seed);
  return sample(GaussianModel{CorrelationMatrix(q)}, n, rng);
}

VarConfig small_config() {
  VarConfig c;
  c.paths = 2000;
  c.window = 100;
  c.seed = 8;
  return c;
}

}  // namespace

TEST_SUITE("backtest") {

TEST_CASE("family names") {
  for (auto f : {ModelFamily::gaussian, ModelFamily::stable_like, ModelFamily::t_like, ModelFamily::meta_stable,
                 ModelFamily::meta_t, ModelFamily::meta_stable_degenerate, ModelFamily::meta_t_degenerate})
    CHECK(model_family_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(model_family_from_string("copula"), Error);
}

TEST_CASE("fit_model per family") {
  const SampleMatrix x = gaussian_returns(300, 1);
  const auto g = std::get<GaussianModel>(fit_model(x, ModelFamily::gaussian).model);
  CHECK(g.q(0, 0) == doctest::Approx(x.col(0).squaredNorm() / 300).epsilon(1e-12));
  CHECK(g.q(0, 1) == doctest::Approx(x.col(0).dot(x.col(1)) / 300).epsilon(1e-12));

  const auto t = std::get<TLikeModel>(fit_model(x, ModelFamily::t_like).model);
  for (double nu : t.nus) CHECK(nu > 2.0);

  const auto s = std::get<StableLikeModel>(fit_model(x, ModelFamily::stable_like).model);
  for (double a : s.alphas) CHECK(a <= 1.99);

  const auto md = std::get<MetaTModel>(fit_model(x, ModelFamily::meta_t_degenerate).model);
  CHECK(std::isinf(md.nu0));
  CHECK(md.q.has_unit_diagonal());
  const auto sd = std::get<MetaStableModel>(fit_model(x, ModelFamily::meta_stable_degenerate).model);
  CHECK(sd.alpha0 == 2.0);

  const auto mt = std::get<MetaTModel>(fit_model(x, ModelFamily::meta_t).model);
  CHECK(mt.nu0 > 2.0);
}

TEST_CASE("rolling backtest bookkeeping") {
  const SampleMatrix x = gaussian_returns(160, 2);
  const VarConfig cfg = small_config();
  const BacktestReport r = rolling_backtest(x, preset_portfolio("nll"), ModelFamily::gaussian, cfg);
  CHECK(r.observations == 60);
  CHECK(r.skipped == 0);
  REQUIRE(r.dates.size() == 60);
  CHECK(r.dates.front() == 100);
  CHECK(r.dates.back() == 159);
  REQUIRE(r.results.size() == 2);
  for (const BetaResult& b : r.results) {
    long v = 0;
    for (std::size_t i = 0; i < b.xi.size(); ++i) {
      CHECK(b.xi[i] == (r.losses[i] > b.var[i] ? 1 : 0));
      v += b.xi[i];
    }
    CHECK(v == b.violations);
    CHECK(b.zeta == doctest::Approx(kupiec_pof(v, 60, b.beta).zeta));
  }
  for (std::size_t i = 0; i < r.results[0].var.size(); ++i) CHECK(r.results[0].var[i] <= r.results[1].var[i]);

  // Deterministic, and independent of the refit block size when refitting daily.
  const BacktestReport again = rolling_backtest(x, preset_portfolio("nll"), ModelFamily::gaussian, cfg);
  CHECK(again.results[1].var == r.results[1].var);

  VarConfig weekly = cfg;
  weekly.refit_every = 5;
  const BacktestReport w = rolling_backtest(x, preset_portfolio("nll"), ModelFamily::gaussian, weekly);
  CHECK(w.observations == 60);
  CHECK(w.losses == r.losses);
  CHECK(w.results[0].var[0] == r.results[0].var[0]);

  const std::string table = format_report_table(r);
  CHECK(table.find("violations") != std::string::npos);
  CHECK(table.find("LR") != std::string::npos);

  nlohmann::json j = r;
  CHECK(j["observations"] == 60);
  CHECK(j["results"].size() == 2);
}

TEST_CASE("unreliable results are marked") {
  BacktestReport r;
  r.family = "gaussian";
  r.portfolio = "nll";
  r.observations = 1000;
  BetaResult b;
  b.beta = 0.99;
  b.violations = 30;
  b.proportion = 0.03;
  const KupiecResult k = kupiec_pof(30, 1000, 0.99);
  b.zeta = k.zeta;
  b.reliable = k.reliable;
  r.results.push_back(b);
  CHECK_FALSE(b.reliable);
  CHECK(format_report_table(r).find('*') != std::string::npos);
}

TEST_CASE("short series") {
  const SampleMatrix x = gaussian_returns(100, 3);
  CHECK_THROWS_AS(rolling_backtest(x, preset_portfolio("nll"), ModelFamily::gaussian, small_config()), Error);
}

TEST_CASE("Gaussian calibration on Gaussian data") {
  const SampleMatrix x = gaussian_returns(700, 4);
  VarConfig cfg = small_config();
  cfg.window = 200;
  cfg.refit_every = 5;
  const BacktestReport r = rolling_backtest(x, preset_portfolio("nll"), ModelFamily::gaussian, cfg);
  REQUIRE(r.observations == 500);
  const auto band95 = oracle::binomial_band99(500, 0.05);
  CHECK(r.results[0].violations >= band95.first);
  CHECK(r.results[0].violations <= band95.second);
  const auto band99 = oracle::binomial_band99(500, 0.01);
  CHECK(r.results[1].violations >= band99.first);
  CHECK(r.results[1].violations <= band99.second);
}

}  // TEST_SUITE
