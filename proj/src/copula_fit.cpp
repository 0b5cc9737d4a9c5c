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

#include "heavyvar/copula_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "heavyvar/errors.hpp"
#include "heavyvar/subgaussian.hpp"
#include "heavyvar/unidist.hpp"

namespace heavyvar {

namespace {

const double kUMin = std::numeric_limits<double>::min();
const double kUMax = std::nextafter(1.0, 0.0);

template <class Cdf>
SampleMatrix transform(const SampleMatrix& x, std::size_t d, Cdf cdf) {
  if (static_cast<std::size_t>(x.cols()) != d) fail(ErrorKind::dimension_mismatch, "parameter vectors must match the sample dimension");
  SampleMatrix u(x.rows(), x.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index t = 0; t < x.rows(); ++t)
    for (Eigen::Index k = 0; k < x.cols(); ++k) u(t, k) = std::clamp(cdf(x(t, k), k), kUMin, kUMax);
  return u;
}

}  // namespace

SampleMatrix stable_probability_transform(const SampleMatrix& x, const std::vector<double>& alphas,
                                          const std::vector<double>& sigmas, const StableGrid& grid) {
  if (alphas.size() != sigmas.size()) fail(ErrorKind::dimension_mismatch, "alphas and sigmas differ in length");
  return transform(x, alphas.size(), [&](double v, Eigen::Index k) { return grid.cdf(v / sigmas[k], alphas[k]); });
}

SampleMatrix t_probability_transform(const SampleMatrix& x, const std::vector<double>& nus,
                                     const std::vector<double>& deltas) {
  if (nus.size() != deltas.size()) fail(ErrorKind::dimension_mismatch, "nus and deltas differ in length");
  return transform(x, nus.size(), [&](double v, Eigen::Index k) { return t_cdf(v / deltas[k], nus[k]); });
}

CopulaFit fit_copula_dof(const SampleMatrix& u, const CorrelationMatrix& q, CopulaFamily family,
                         const CopulaFitOptions& opt, const StableGrid& grid) {
  if (u.cols() != q.dim()) fail(ErrorKind::dimension_mismatch, "copula sample and matrix dimensions differ");
  if (u.rows() < 2) fail(ErrorKind::invalid_parameter, "need at least two observations");
  if (!q.has_unit_diagonal(1e-10)) fail(ErrorKind::invalid_parameter, "copula matrix must have unit diagonal");
  const bool is_t = family == CopulaFamily::meta_t;
  const double endpoint = is_t ? std::numeric_limits<double>::infinity() : 2.0;
  CopulaFit out;
  const std::string name = is_t ? "nu0" : "alpha0";

  // Search variable: log nu0 for meta-t, alpha0 itself for meta-stable.
  const double lo = is_t ? std::log(opt.nu0_min) : opt.alpha0_min;
  const double hi = is_t ? std::log(opt.nu0_max) : opt.alpha0_max;
  auto param = [&](double s) { return is_t ? std::exp(s) : s; };
  auto loglik = [&](double v) {
    return is_t ? meta_t_copula_loglik(u, v, q) : meta_stable_copula_loglik(u, v, q, grid);
  };
  const double ll_end = loglik(endpoint);

  if (u.cols() == 1) {
    out.value = endpoint;
    out.degenerate = true;
    out.identifiable = false;
    out.report.loglik = ll_end;
    out.report.estimates[name] = endpoint;
    out.report.warnings.push_back("one-dimensional copula is flat; parameter not identifiable");
    return out;
  }

  int evals = 0;
  auto neg = [&](double s) {
    ++evals;
    const double v = -loglik(param(s));
    return std::isfinite(v) ? v : 1e300;
  };
  const int m = std::max(3, opt.scan_points);
  std::vector<double> grid_s(m), vals(m);
  for (int i = 0; i < m; ++i) {
    grid_s[i] = lo + (hi - lo) * i / (m - 1);
    vals[i] = neg(grid_s[i]);
  }
  const int ib = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  const double a = grid_s[std::max(ib - 1, 0)], b = grid_s[std::min(ib + 1, m - 1)];
  std::uintmax_t it = 60;
  const int bits = is_t ? 20 : 16;
  auto r = boost::math::tools::brent_find_minima(neg, a, b, bits, it);
  double s_best = r.first, f_best = r.second;
  if (vals[ib] < f_best) {
    s_best = grid_s[ib];
    f_best = vals[ib];
  }
  const double interior = param(s_best);
  out.report.iterations = evals;
  out.report.converged = it < 60;
  out.report.estimates["interior_" + name] = interior;
  out.report.estimates["interior_loglik"] = -f_best;
  out.report.estimates["endpoint_loglik"] = ll_end;
  const double lr = 2.0 * (-f_best - ll_end);
  out.report.estimates["endpoint_lr"] = lr;
  if (!(lr > opt.endpoint_lr_critical)) {
    out.value = endpoint;
    out.degenerate = true;
    out.report.loglik = ll_end;
  } else {
    out.value = interior;
    out.report.loglik = -f_best;
  }
  out.report.estimates[name] = out.value;
  if (!out.report.converged) out.report.warnings.push_back("Brent search hit its iteration limit");
  return out;
}

}  // namespace heavyvar
