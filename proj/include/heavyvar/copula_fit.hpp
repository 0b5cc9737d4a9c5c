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

#pragma once

#include <vector>

#include "heavyvar/estimation.hpp"
#include "heavyvar/stable_grid.hpp"

namespace heavyvar {

enum class CopulaFamily { meta_t, meta_stable };

struct CopulaFit {
  // nu0 (meta-t, +inf at the Gaussian endpoint) or alpha0 (meta-stable, 2 at the endpoint).
  double value = 0.0;
  bool degenerate = false;
  bool identifiable = true;
  FitReport report;
};

struct CopulaFitOptions {
  double nu0_min = 2.05;
  double nu0_max = 500.0;
  double alpha0_min = 1.05;
  double alpha0_max = 1.99;  // interior search bound; 2 is compared separately
  int scan_points = 10;
  // The endpoint is kept unless 2 (ll_interior - ll_endpoint) exceeds this.
  // 2.706 is the 5% point of the boundary law 0.5 chi2(0) + 0.5 chi2(1).
  double endpoint_lr_critical = 2.706;
};

// Maximises the copula log-likelihood over the interior range (coarse scan
// then Brent on log nu0 or alpha0) and compares against the Gaussian endpoint;
// the larger likelihood wins.
CopulaFit fit_copula_dof(const SampleMatrix& u, const CorrelationMatrix& q, CopulaFamily family,
                         const CopulaFitOptions& opt = {}, const StableGrid& grid = default_stable_grid());

// Probability transforms U_k = F(X_k / scale_k), kept strictly inside (0,1).
SampleMatrix stable_probability_transform(const SampleMatrix& x, const std::vector<double>& alphas,
                                          const std::vector<double>& sigmas,
                                          const StableGrid& grid = default_stable_grid());
SampleMatrix t_probability_transform(const SampleMatrix& x, const std::vector<double>& nus,
                                     const std::vector<double>& deltas);

}  // namespace heavyvar
