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

#include "heavyvar/numerics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/erf.hpp>

namespace heavyvar {

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double norm_quantile(double u) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u); }

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, std::vector<double> step, int max_iter,
                          double ftol, double xtol) {
  const std::size_t n = x0.size();
  auto eval = [&](const std::vector<double>& x) {
    double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
  for (std::size_t i = 0; i <= n; ++i) val[i] = eval(pts[i]);

  SimplexResult out;
  std::vector<std::size_t> idx(n + 1);
  int it = 0;
  for (; it < max_iter; ++it) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return val[a] < val[b]; });
    const std::size_t best = idx[0], worst = idx[n], second = idx[n - 1];

    double spread = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        spread = std::max(spread, std::abs(pts[idx[i]][k] - pts[best][k]));
    if (std::abs(val[worst] - val[best]) <= ftol * (1.0 + std::abs(val[best])) && spread < xtol) {
      out.converged = true;
      break;
    }

    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) c[k] += pts[idx[i]][k] / n;
    auto along = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = c[k] + t * (pts[worst][k] - c[k]);
      return p;
    };

    auto xr = along(-1.0);
    double fr = eval(xr);
    if (fr < val[best]) {
      auto xe = along(-2.0);
      double fe = eval(xe);
      if (fe < fr) { pts[worst] = xe; val[worst] = fe; }
      else { pts[worst] = xr; val[worst] = fr; }
    } else if (fr < val[second]) {
      pts[worst] = xr; val[worst] = fr;
    } else {
      auto xc = fr < val[worst] ? along(-0.5) : along(0.5);
      double fc = eval(xc);
      if (fc < std::min(fr, val[worst])) {
        pts[worst] = xc; val[worst] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          auto& p = pts[idx[i]];
          for (std::size_t k = 0; k < n; ++k) p[k] = pts[best][k] + 0.5 * (p[k] - pts[best][k]);
          val[idx[i]] = eval(p);
        }
      }
    }
  }
  auto b = std::min_element(val.begin(), val.end()) - val.begin();
  out.x = pts[b];
  out.value = val[b];
  out.iterations = it;
  return out;
}

}  // namespace heavyvar
