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


#include "heavyvar/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <optional>

#include "heavyvar/copula_fit.hpp"
#include "heavyvar/errors.hpp"
#include "heavyvar/estimation.hpp"
#include "heavyvar/marginal_fit.hpp"

namespace heavyvar {

namespace {

const char* kFamilyNames[] = {"gaussian", "stable-like", "t-like", "meta-stable",
                              "meta-t", "meta-stable-degenerate", "meta-t-degenerate"};

constexpr double kStableLikeAlphaCap = 1.99;

void absorb(std::vector<std::string>& w, const FitReport& r, const std::string& tag) {
  for (const auto& s : r.warnings) w.push_back(tag + ": " + s);
}

struct Marginals {
  std::vector<double> shape, scale;
};

Marginals stable_marginals(const SampleMatrix& x, const StableGrid& grid, std::vector<std::string>& w) {
  Marginals m;
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const StableFit f = fit_marginal_stable_ml(column(x, k), {}, grid);
    absorb(w, f.report, "stable marginal " + std::to_string(k));
    m.shape.push_back(f.alpha);
    m.scale.push_back(f.sigma);
  }
  return m;
}

Marginals t_marginals(const SampleMatrix& x, const TFitOptions& opt, std::vector<std::string>& w) {
  Marginals m;
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const TFit f = fit_marginal_t_ml(column(x, k), opt);
    absorb(w, f.report, "t marginal " + std::to_string(k));
    m.shape.push_back(f.nu);
    m.scale.push_back(f.delta);
  }
  return m;
}

std::vector<double> window_vols(const SampleMatrix& x) {
  std::vector<double> v;
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const auto c = x.col(k);
    const double mean = c.mean();
    const double var = (c.array() - mean).square().sum() / static_cast<double>(x.rows() - 1);
    v.push_back(std::sqrt(var * kTradingDays));
  }
  return v;
}

}  // namespace

std::string to_string(ModelFamily f) { return kFamilyNames[static_cast<int>(f)]; }

ModelFamily model_family_from_string(const std::string& s) {
  for (int i = 0; i < 7; ++i)
    if (s == kFamilyNames[i]) return static_cast<ModelFamily>(i);
  fail(ErrorKind::invalid_parameter, "unknown model family '" + s + "'");
}

ModelFit fit_model(const SampleMatrix& x, ModelFamily family, const StableGrid* grid_in) {
  auto grid = [&]() -> const StableGrid& { return grid_in ? *grid_in : default_stable_grid(); };
  if (x.rows() < 30 || x.cols() < 1) fail(ErrorKind::empty_input, "need at least 30 observations to fit a model");
  if (!x.allFinite()) fail(ErrorKind::invalid_parameter, "returns must be finite");
  ModelFit out{GaussianModel{}, {}};
  auto& w = out.warnings;
  switch (family) {
    case ModelFamily::gaussian: {
      const MatrixXd raw = (x.transpose() * x) / static_cast<double>(x.rows());
      auto fixed = repair_psd(raw, false);
      if (fixed.repaired) w.push_back("PSD repair applied");
      out.model = GaussianModel{fixed.matrix};
      break;
    }
    case ModelFamily::stable_like: {
      Marginals m = stable_marginals(x, grid(), w);
      for (double& a : m.shape) a = std::min(a, kStableLikeAlphaCap);
      const QEstimate q = estimate_Q_stable_like(x, m.shape, m.scale);
      absorb(w, q.report, "dispersion");
      out.model = StableLikeModel{m.shape, q.q};
      break;
    }
    case ModelFamily::t_like: {
      TFitOptions opt;
      opt.nu_min = 2.05;
      const Marginals m = t_marginals(x, opt, w);
      const QEstimate q = estimate_Q_t_like(x, m.shape);
      absorb(w, q.report, "dispersion");
      out.model = TLikeModel{m.shape, q.q};
      break;
    }
    case ModelFamily::meta_stable:
    case ModelFamily::meta_stable_degenerate: {
      const Marginals m = stable_marginals(x, grid(), w);
      const QEstimate q = estimate_Q_meta(x);
      absorb(w, q.report, "copula matrix");
      double alpha0 = 2.0;
      if (family == ModelFamily::meta_stable) {
        const SampleMatrix u = stable_probability_transform(x, m.shape, m.scale, grid());
        const CopulaFit c = fit_copula_dof(u, q.q, CopulaFamily::meta_stable, {}, grid());
        absorb(w, c.report, "copula index");
        alpha0 = c.value;
      }
      out.model = MetaStableModel{alpha0, m.shape, m.scale, q.q};
      break;
    }
    case ModelFamily::meta_t:
    case ModelFamily::meta_t_degenerate: {
      const Marginals m = t_marginals(x, {}, w);
      const QEstimate q = estimate_Q_meta(x);
      absorb(w, q.report, "copula matrix");
      double nu0 = std::numeric_limits<double>::infinity();
      if (family == ModelFamily::meta_t) {
        const SampleMatrix u = t_probability_transform(x, m.shape, m.scale);
        const CopulaFit c = fit_copula_dof(u, q.q, CopulaFamily::meta_t);
        absorb(w, c.report, "copula dof");
        nu0 = c.value;
      }
      out.model = MetaTModel{nu0, m.shape, m.scale, q.q};
      break;
    }
  }
  validate(out.model);
  return out;
}

void to_json(nlohmann::json& j, const BacktestReport& r) {
  j = nlohmann::json::object();
  j["family"] = r.family;
  j["portfolio"] = r.portfolio;
  j["revaluation"] = r.revaluation;
  j["window"] = r.window;
  j["paths"] = r.paths;
  j["seed"] = r.seed;
  j["refit_every"] = r.refit_every;
  j["observations"] = r.observations;
  j["skipped"] = r.skipped;
  j["failures"] = r.failures;
  j["dates"] = r.dates;
  j["losses"] = r.losses;
  auto& res = j["results"] = nlohmann::json::array();
  for (const auto& b : r.results) {
    res.push_back({{"beta", b.beta},
                   {"violations", b.violations},
                   {"proportion", b.proportion},
                   {"kupiec", b.zeta},
                   {"reliable", b.reliable},
                   {"var", b.var},
                   {"xi", b.xi}});
  }
}

std::string format_report_table(const BacktestReport& r) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "model %s, portfolio %s, %s revaluation, window %ld, %ld paths, %ld dates",
                r.family.c_str(), r.portfolio.c_str(), r.revaluation.c_str(), r.window, r.paths, r.observations);
  out += line;
  if (r.skipped > 0) out += " (" + std::to_string(r.skipped) + " skipped)";
  out += "\n";
  std::snprintf(line, sizeof line, "%-8s %10s %10s %9s\n", "level", "violations", "percentage", "LR");
  out += line;
  for (const auto& b : r.results) {
    std::snprintf(line, sizeof line, "%-8s %10ld %9.2f%% %8.2f%s\n", (std::to_string(std::lround(100 * b.beta)) + "%").c_str(),
                  b.violations, 100.0 * b.proportion, b.zeta, b.reliable ? " " : "*");
    out += line;
  }
  return out;
}

BacktestReport rolling_backtest(const SampleMatrix& returns, const PortfolioSpec& spec, ModelFamily family,
                                const VarConfig& cfg, const StableGrid* grid) {
  validate(cfg);
  const long t_total = static_cast<long>(returns.rows());
  const long ell = cfg.window;
  if (t_total <= ell + 1) fail(ErrorKind::invalid_parameter, "need more return rows than window + 1");
  if (!returns.allFinite()) fail(ErrorKind::invalid_parameter, "returns must be finite");
  const long n_dates = t_total - ell;
  const std::size_t n_beta = cfg.betas.size();

  std::vector<double> loss(n_dates, 0.0);
  std::vector<std::vector<double>> var(n_dates);
  std::vector<std::string> failure(n_dates);
  std::vector<char> ok(n_dates, 0);
  const long k = cfg.refit_every;
  const long n_blocks = (n_dates + k - 1) / k;
  std::exception_ptr err;

#pragma omp parallel for schedule(dynamic, 1)
  for (long b = 0; b < n_blocks; ++b) {
    const long first = b * k, last = std::min(n_dates, first + k);
    try {
      std::optional<RiskFactorModel> model;
      std::string why;
      try {
        const long t0 = ell + first;
        model = fit_model(returns.middleRows(t0 - ell, ell), family, grid).model;
      } catch (const Error& e) {
        why = "fit: " + std::string(e.what());
      }
      for (long i = first; i < last; ++i) {
        const long t = ell + i;
        if (!model) {
          failure[i] = why;
          continue;
        }
        try {
          const SampleMatrix window = returns.middleRows(t - ell, ell);
          const Portfolio p = build_portfolio(spec, window_vols(window), cfg.rate);
          const LossFunction f = cfg.revaluation == Revaluation::full ? LossFunction::full(p, cfg.horizon)
                                                                      : LossFunction::delta_gamma(p, cfg.horizon);
          RngState rng = RngState(cfg.seed).substream(static_cast<std::uint64_t>(t));
          var[i] = empirical_quantiles(simulate_losses_serial(*model, f, cfg.paths, rng, grid), cfg.betas);
          loss[i] = loss_full_revaluation(p, returns.row(t).transpose(), cfg.horizon);
          ok[i] = 1;
        } catch (const Error& e) {
          failure[i] = "var: " + std::string(e.what());
        }
      }
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  BacktestReport r;
  r.family = to_string(family);
  r.portfolio = spec.name;
  r.revaluation = to_string(cfg.revaluation);
  r.window = ell;
  r.paths = cfg.paths;
  r.seed = cfg.seed;
  r.refit_every = cfg.refit_every;
  for (double beta : cfg.betas) {
    BetaResult b;
    b.beta = beta;
    r.results.push_back(b);
  }
  for (long i = 0; i < n_dates; ++i) {
    if (!ok[i]) {
      ++r.skipped;
      r.failures.push_back("row " + std::to_string(ell + i) + ": " + failure[i]);
      continue;
    }
    r.dates.push_back(ell + i);
    r.losses.push_back(loss[i]);
    for (std::size_t j = 0; j < n_beta; ++j) r.results[j].var.push_back(var[i][j]);
  }
  r.observations = static_cast<long>(r.dates.size());
  if (r.observations == 0) fail(ErrorKind::non_convergence, "every backtest date failed");
  for (auto& b : r.results) {
    b.xi = violation_series(r.losses, b.var);
    for (int v : b.xi) b.violations += v;
    b.proportion = static_cast<double>(b.violations) / static_cast<double>(r.observations);
    const KupiecResult kr = kupiec_pof(b.violations, r.observations, b.beta);
    b.zeta = kr.zeta;
    b.reliable = kr.reliable;
  }
  return r;
}

}  // namespace heavyvar
