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

#include <memory>
#include <vector>

#include "heavyvar/correlation.hpp"
#include "heavyvar/stable_grid.hpp"

namespace heavyvar {

// Radial profile of the sub-Gaussian stable law Y = A^{1/2} G:
// the density of Y with G ~ N(0, S) is det(S)^{-1/2} * R(<S^{-1}y, y>), with
// R(z) = (2 pi)^{-d/2} E[A^{-d/2} exp(-z / (2A))].
// Tabulated on a log-spaced z grid at construction.
class SubGaussianRadial {
 public:
  SubGaussianRadial(double alpha0, int d);

  double operator()(double z) const { return std::exp(log_value(z)); }
  double log_value(double z) const;
  double at_zero() const { return r0_; }
  double alpha0() const { return alpha0_; }
  int dim() const { return d_; }

  // Direct quadrature, bypassing the table.
  double direct(double z) const;

 private:
  double alpha0_;
  int d_;
  std::shared_ptr<const std::vector<std::pair<double, double>>> nodes_;  // (s = log a, weight * p_A(a) * a)
  double r0_;
  double lz0_, dlz_;
  std::vector<double> table_;  // log R at lz0_ + i * dlz_
  double tail_log_k_;          // log R ~ tail_log_k_ - (d + alpha0)/2 * log z
};

// Shared, lazily built radial profile for (alpha0, d).
std::shared_ptr<const SubGaussianRadial> subgaussian_radial(double alpha0, int d);

// Density at x of A^{1/2} G with G ~ N(0, s); alpha0 in (1,2).
double subgaussian_stable_density(const VectorXd& x, double alpha0, const CorrelationMatrix& s);

// Copula densities. Q is the unit-diagonal dispersion matrix.
double meta_t_copula_density(const VectorXd& u, double nu0, const CorrelationMatrix& q);
double meta_stable_copula_density(const VectorXd& u, double alpha0, const CorrelationMatrix& q,
                                  const StableGrid& grid = default_stable_grid());
double gaussian_copula_density(const VectorXd& u, const CorrelationMatrix& q);

// Log-likelihood sums over rows of U (n x d, entries in (0,1)).
// nu0 = +inf gives the Gaussian copula.
double meta_t_copula_loglik(const SampleMatrix& u, double nu0, const CorrelationMatrix& q);
// alpha0 = 2 gives the Gaussian copula.
double meta_stable_copula_loglik(const SampleMatrix& u, double alpha0, const CorrelationMatrix& q,
                                 const StableGrid& grid = default_stable_grid());
double gaussian_copula_loglik(const SampleMatrix& u, const CorrelationMatrix& q);

}  // namespace heavyvar
