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

#include "heavyvar/correlation.hpp"
#include "heavyvar/rng.hpp"

namespace heavyvar {

// S_alpha(sigma, beta, mu) in the Samorodnitsky-Taqqu parametrization:
// S_alpha(1,0,0) has characteristic function exp(-|t|^alpha).
struct StableParams {
  double alpha = 2.0;
  double beta = 0.0;
  double sigma = 1.0;
  double mu = 0.0;

  void validate() const;
};

// Density of S_alpha(sigma, beta, mu). alpha = 1 is supported only for beta = 0.
double stable_pdf(double x, const StableParams& p);

// Standard symmetric S_alpha(1,0,0), alpha in (1,2].
double stable_cdf(double x, double alpha);
// 1 - F(x), accurate in the upper tail.
double stable_sf(double x, double alpha);
double stable_quantile(double u, double alpha);

double stable_sample(RngState& rng, const StableParams& p);

// A ~ S_{alpha/2}((cos(pi alpha/4))^{2/alpha}, 1, 0), so E exp(-s A) = exp(-s^{alpha/2}).
double subordinator_sample(RngState& rng, double alpha);

// Density of the positive stable law with Laplace transform exp(-s^a), a in (0,1).
double positive_stable_pdf(double x, double a);
double positive_stable_cdf(double x, double a);

double t_pdf(double x, double nu);
double t_cdf(double x, double nu);
double t_quantile(double u, double nu);

double chi2_sample(RngState& rng, double nu);

VectorXd mvnormal_sample(RngState& rng, const CorrelationMatrix& q);

namespace detail {
// Power-tail expansions of the symmetric standard law, valid for large x.
double stable_sf_asymptotic(double x, double alpha);
double stable_pdf_asymptotic(double x, double alpha);
}  // namespace detail

}  // namespace heavyvar
