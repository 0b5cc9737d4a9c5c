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


#include "heavyvar/var.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "heavyvar/errors.hpp"

namespace heavyvar {

std::string to_string(Revaluation r) { return r == Revaluation::full ? "full" : "quad"; }

Revaluation revaluation_from_string(const std::string& s) {
  if (s == "full") return Revaluation::full;
  if (s == "quad" || s == "quadratic") return Revaluation::quadratic;
  fail(ErrorKind::invalid_parameter, "revaluation must be full or quad");
}

LossFunction LossFunction::full(Portfolio p, double horizon) {
  validate(p);
  LossFunction f;
  f.kind = Revaluation::full;
  f.portfolio = std::move(p);
  f.horizon = horizon;
  return f;
}

LossFunction LossFunction::quadratic(QuadraticLossCoefficients c) {
  LossFunction f;
  f.kind = Revaluation::quadratic;
  f.coeffs = std::move(c);
  if (f.coeffs.gamma.size() == 0) f.coeffs.gamma = MatrixXd::Zero(f.coeffs.delta.size(), f.coeffs.delta.size());
  return f;
}

LossFunction LossFunction::linear(const VectorXd& w, double constant) {
  return quadratic({constant, w, MatrixXd::Zero(w.size(), w.size())});
}

LossFunction LossFunction::delta_gamma(const Portfolio& p, double horizon) {
  return quadratic(delta_gamma_coefficients(p, horizon));
}

Eigen::Index LossFunction::dim() const {
  return kind == Revaluation::full ? portfolio.dim() : coeffs.delta.size();
}

double LossFunction::operator()(const VectorXd& x) const {
  return kind == Revaluation::full ? loss_full_revaluation(portfolio, x, horizon) : loss_quadratic(coeffs, x);
}

void validate(const VarConfig& c) {
  if (c.betas.empty()) fail(ErrorKind::invalid_parameter, "need at least one beta level");
  for (double b : c.betas)
    if (!(b > 0.0 && b < 1.0)) fail(ErrorKind::invalid_parameter, "beta must lie in (0,1)");
  if (c.paths < 1000) fail(ErrorKind::invalid_parameter, "paths must be at least 1000");
  if (c.window < 50) fail(ErrorKind::invalid_parameter, "window must be at least 50");
  if (c.refit_every < 1) fail(ErrorKind::invalid_parameter, "refit interval must be at least 1");
  if (!(c.horizon > 0.0)) fail(ErrorKind::invalid_parameter, "horizon must be positive");
  if (!std::isfinite(c.rate)) fail(ErrorKind::invalid_parameter, "rate must be finite");
}

namespace {

std::size_t order_index(std::size_t m, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) fail(ErrorKind::invalid_parameter, "beta must lie in (0,1)");
  // ceil(beta m) with a guard against beta m landing a hair above an integer.
  double k = std::ceil(beta * static_cast<double>(m) - 1e-9);
  k = std::clamp(k, 1.0, static_cast<double>(m));
  return static_cast<std::size_t>(k) - 1;
}

void check_dims(const RiskFactorModel& model, const LossFunction& loss) {
  if (dimension(model) != loss.dim()) fail(ErrorKind::dimension_mismatch, "model and loss dimensions differ");
}

}  // namespace

double empirical_quantile(std::vector<double> samples, double beta) {
  if (samples.empty()) fail(ErrorKind::empty_input, "no samples");
  const std::size_t k = order_index(samples.size(), beta);
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(k), samples.end());
  return samples[k];
}

std::vector<double> empirical_quantiles(std::vector<double> samples, const std::vector<double>& betas) {
  if (samples.empty()) fail(ErrorKind::empty_input, "no samples");
  std::sort(samples.begin(), samples.end());
  std::vector<double> out;
  for (double b : betas) out.push_back(samples[order_index(samples.size(), b)]);
  return out;
}

std::vector<double> simulate_losses(const RiskFactorModel& model, const LossFunction& loss, long paths, RngState& rng,
                                    const StableGrid* grid) {
  check_dims(model, loss);
  if (paths < 1) fail(ErrorKind::invalid_parameter, "paths must be positive");
  const SampleMatrix x = sample(model, paths, rng, grid);
  std::vector<double> out(static_cast<std::size_t>(paths));
  std::exception_ptr err;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < paths; ++i) {
    try {
      out[i] = loss(x.row(i).transpose());
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<double> simulate_losses_serial(const RiskFactorModel& model, const LossFunction& loss, long paths,
                                           RngState& rng, const StableGrid* grid) {
  check_dims(model, loss);
  if (paths < 1) fail(ErrorKind::invalid_parameter, "paths must be positive");
  const SampleMatrix x = sample_serial(model, paths, rng, grid);
  std::vector<double> out(static_cast<std::size_t>(paths));
  for (long i = 0; i < paths; ++i) out[i] = loss(x.row(i).transpose());
  return out;
}

std::vector<double> simulate_var(const RiskFactorModel& model, const LossFunction& loss, const VarConfig& cfg,
                                 RngState& rng, const StableGrid* grid) {
  return empirical_quantiles(simulate_losses(model, loss, cfg.paths, rng, grid), cfg.betas);
}

std::vector<int> violation_series(const std::vector<double>& losses, const std::vector<double>& var) {
  if (losses.size() != var.size()) fail(ErrorKind::length_mismatch, "loss and VaR series lengths differ");
  std::vector<int> xi(losses.size());
  for (std::size_t t = 0; t < losses.size(); ++t) xi[t] = losses[t] > var[t] ? 1 : 0;
  return xi;
}

KupiecResult kupiec_pof(long x, long n, double beta) {
  if (n <= 0 || x < 0 || x > n) fail(ErrorKind::invalid_counts, "need 0 <= violations <= observations, observations > 0");
  if (!(beta > 0.0 && beta < 1.0)) fail(ErrorKind::invalid_parameter, "beta must lie in (0,1)");
  auto xlogy = [](double a, double b) { return a == 0.0 ? 0.0 : a * std::log(b); };
  const double xs = static_cast<double>(x), ns = static_cast<double>(n - x);
  const double ph = xs / static_cast<double>(n);
  const double l0 = xlogy(xs, 1.0 - beta) + xlogy(ns, beta);
  const double l1 = xlogy(xs, ph) + xlogy(ns, 1.0 - ph);
  KupiecResult r;
  r.zeta = std::max(0.0, -2.0 * (l0 - l1));
  r.reliable = r.zeta < kKupiecCritical;
  return r;
}

}  // namespace heavyvar
