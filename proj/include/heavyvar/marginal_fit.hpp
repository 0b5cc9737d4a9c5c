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

struct StableFit {
  double alpha = 2.0;
  double sigma = 1.0;
  FitReport report;
};

struct TFit {
  double nu = 0.0;
  double delta = 1.0;
  bool at_cap = false;  // nu reached nu_max: data look Gaussian
  FitReport report;
};

struct StableFitOptions {
  double alpha_min = 1.05;
  double alpha_max = 2.0;
  int restarts = 3;
};

struct TFitOptions {
  double nu_min = 0.5;
  double nu_max = 500.0;
  int restarts = 3;
};

// Maximum likelihood for S_alpha(sigma,0,0) using the tabulated density.
StableFit fit_marginal_stable_ml(const std::vector<double>& series, const StableFitOptions& opt = {},
                                 const StableGrid& grid = default_stable_grid());

// Maximum likelihood for delta * t(nu).
TFit fit_marginal_t_ml(const std::vector<double>& series, const TFitOptions& opt = {});

double stable_loglik(const std::vector<double>& series, double alpha, double sigma,
                     const StableGrid& grid = default_stable_grid());
double t_loglik(const std::vector<double>& series, double nu, double delta);

}  // namespace heavyvar
