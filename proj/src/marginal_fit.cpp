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

#include "heavyvar/marginal_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "heavyvar/errors.hpp"
#include "heavyvar/numerics.hpp"
#include "heavyvar/unidist.hpp"

namespace heavyvar {

namespace {

constexpr double kBig = 1e300;

double sample_quantile(std::vector<double> v, double u) {
  // Linear interpolation between order statistics.
  std::sort(v.begin(), v.end());
  const double h = u * (v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(h));
  const std::size_t j = std::min(i + 1, v.size() - 1);
  return v[i] + (h - i) * (v[j] - v[i]);
}

void check_series(const std::vector<double>& s, std::size_t min_n) {
  if (s.size() < min_n) fail(ErrorKind::invalid_parameter, "need at least " + std::to_string(min_n) + " observations");
  for (double v : s)
    if (!std::isfinite(v)) fail(ErrorKind::invalid_parameter, "observations must be finite");
}

double interquartile(const std::vector<double>& s) {
  const double iqr = sample_quantile(s, 0.75) - sample_quantile(s, 0.25);
  if (!(iqr > 0.0)) fail(ErrorKind::degenerate_series, "series has zero interquartile range");
  return iqr;
}

double t_logpdf_const(double nu) { return std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2) - 0.5 * std::log(nu * kPi); }

}  // namespace

double stable_loglik(const std::vector<double>& series, double alpha, double sigma, const StableGrid& grid) {
  double s = 0.0;
  const double ls = std::log(sigma);
  for (double x : series) s += std::log(grid.pdf(x / sigma, alpha)) - ls;
  return s;
}

double t_loglik(const std::vector<double>& series, double nu, double delta) {
  const double c = t_logpdf_const(nu) - std::log(delta);
  double s = 0.0;
  for (double x : series) {
    const double z = x / delta;
    s += std::log1p(z * z / nu);
  }
  return series.size() * c - 0.5 * (nu + 1) * s;
}

StableFit fit_marginal_stable_ml(const std::vector<double>& series, const StableFitOptions& opt, const StableGrid& grid) {
  check_series(series, 100);
  if (!(opt.alpha_min >= grid.spec().alpha_min && opt.alpha_max <= grid.spec().alpha_max && opt.alpha_min < opt.alpha_max))
    fail(ErrorKind::grid_coverage, "alpha bounds outside the stable grid");
  const double iqr = interquartile(series);
  const double spread = sample_quantile(series, 0.95) - sample_quantile(series, 0.05);
  const double ratio = spread / iqr;
  const double lo = opt.alpha_min, span = opt.alpha_max - opt.alpha_min;
  auto sigma_for = [&](double a) { return iqr / (2.0 * grid.quantile(0.75, a)); };

  // Quantile-ratio starting index, scanned over a coarse alpha ladder.
  double a0 = 1.5, best_gap = kBig;
  for (int k = 0; k <= 40; ++k) {
    const double a = lo + span * (0.0125 + 0.975 * k / 40.0);
    const double r = grid.quantile(0.95, a) / grid.quantile(0.75, a);
    if (std::abs(r - ratio) < best_gap) {
      best_gap = std::abs(r - ratio);
      a0 = a;
    }
  }
  std::vector<double> starts = {a0, lo + 0.5 * span, lo + 0.9 * span};
  starts.resize(std::max(1, std::min<int>(opt.restarts, 3)));

  auto nll = [&](const std::vector<double>& th) {
    const double a = lo + span * logistic(th[0]);
    const double s = std::exp(th[1]);
    const double v = -stable_loglik(series, a, s, grid);
    return std::isfinite(v) ? v : kBig;
  };

  StableFit out;
  SimplexResult best;
  best.value = std::numeric_limits<double>::infinity();
  int iters = 0;
  for (double a : starts) {
    const double t0 = logit(std::clamp((a - lo) / span, 1e-6, 1 - 1e-6));
    auto r = nelder_mead(nll, {t0, std::log(sigma_for(a))}, {0.5, 0.2}, 1000, 1e-10, 1e-7);
    iters += r.iterations;
    if (r.value < best.value) best = r;
  }
  out.alpha = lo + span * logistic(best.x[0]);
  out.sigma = std::exp(best.x[1]);
  out.report.estimates = {{"alpha", out.alpha}, {"sigma", out.sigma}};
  out.report.loglik = -best.value;
  out.report.iterations = iters;
  out.report.converged = best.converged;
  if (!best.converged) out.report.warnings.push_back("simplex search hit its iteration limit");
  return out;
}

TFit fit_marginal_t_ml(const std::vector<double>& series, const TFitOptions& opt) {
  check_series(series, 100);
  if (!(opt.nu_min > 0.0 && opt.nu_max > opt.nu_min)) fail(ErrorKind::invalid_parameter, "bad dof bounds");
  const double lo = opt.nu_min, span = opt.nu_max - opt.nu_min;
  const double iqr = interquartile(series);
  double m2 = 0, m4 = 0;
  for (double v : series) {
    m2 += v * v;
    m4 += v * v * v * v;
  }
  m2 /= series.size();
  m4 /= series.size();
  const double kurt = m4 / (m2 * m2);
  const double nu_k = kurt > 3.2 ? 4.0 + 6.0 / (kurt - 3.0) : 30.0;
  auto clamp_nu = [&](double nu) { return std::clamp(nu, lo + 0.01 * span, lo + 0.99 * span); };
  auto delta_for = [&](double nu) { return iqr / (2.0 * t_quantile(0.75, nu)); };

  std::vector<double> starts = {clamp_nu(nu_k), clamp_nu(4.0), clamp_nu(30.0)};
  starts.resize(std::max(1, std::min<int>(opt.restarts, 3)));

  auto nll = [&](const std::vector<double>& th) {
    const double v = -t_loglik(series, lo + span * logistic(th[0]), std::exp(th[1]));
    return std::isfinite(v) ? v : kBig;
  };

  TFit out;
  SimplexResult best;
  best.value = std::numeric_limits<double>::infinity();
  int iters = 0;
  for (double nu : starts) {
    auto r = nelder_mead(nll, {logit((nu - lo) / span), std::log(delta_for(nu))}, {0.5, 0.2}, 1000, 1e-10, 1e-7);
    iters += r.iterations;
    if (r.value < best.value) best = r;
  }
  out.nu = lo + span * logistic(best.x[0]);
  out.delta = std::exp(best.x[1]);
  out.report.converged = best.converged;
  double ll = -best.value;

  // The likelihood flattens as nu grows; compare against the cap directly.
  const double cap = opt.nu_max;
  auto prof = [&](double ld) { return -t_loglik(series, cap, std::exp(ld)); };
  const double ld0 = std::log(std::sqrt(m2));
  auto pr = boost::math::tools::brent_find_minima(prof, ld0 - 2.0, ld0 + 2.0, 40);
  if (-pr.second >= ll) {
    out.nu = cap;
    out.delta = std::exp(pr.first);
    ll = -pr.second;
  }
  out.at_cap = out.nu >= 0.99 * cap;
  out.report.estimates = {{"nu", out.nu}, {"delta", out.delta}};
  out.report.loglik = ll;
  out.report.iterations = iters;
  if (out.at_cap) out.report.warnings.push_back("nu at cap; reported as Gaussian-like");
  if (!best.converged) out.report.warnings.push_back("simplex search hit its iteration limit");
  return out;
}

}  // namespace heavyvar
