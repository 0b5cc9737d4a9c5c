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

#include <utility>
#include <vector>

namespace heavyvar {

// E A^{p/2} for the subordinator of index alpha: Gamma(1 - p/alpha) / Gamma(1 - p/2).
double c_alpha_p(double alpha, double p);

// Signed moment f_p(q) = E (Z1 Z2)^<p> of a standard bivariate normal pair
// with correlation q, x^<p> = |x|^p sgn x.
double f_p(double q, double p);
// f_p'(q) = p^2 E |Z1 Z2|^{p-1}.
double f_p_derivative(double q, double p);
// E |Z1 Z2|^r, r > -1.
double abs_product_moment(double q, double r);
// sup |f_p| = E |Z|^{2p}, attained at q = +-1.
double f_p_sup(double p);
// Inverse on (-1 + 1e-9, 1 - 1e-9); out-of-range when |y| is not attained.
double f_p_inverse(double y, double p, double tol = 1e-12);

// Asymptotic variance of the normalised signed-moment estimator:
// gamma_p(q) / f_p'(q)^2 with gamma_p = Var g_p(X). Requires p < min(alpha)/4.
double gamma_p(double q, double p, double alpha1, double alpha2);
double stable_like_asymptotic_variance(double q, double p, double alpha1, double alpha2);

// phi_p(q) = int_0^q f_p'(y) / sqrt(gamma_p(y)) dy by adaptive quadrature.
double variance_stabilizing_phi(double q, double p, double alpha1, double alpha2);

// Tabulated phi_p on [0, q_max] (odd extension) with cubic Hermite
// interpolation using the exact derivative at the nodes.
class VarianceStabilizer {
 public:
  VarianceStabilizer(double p, double alpha1, double alpha2, int panels = 256, double q_max = 0.9999);
  double phi(double q) const;
  double phi_inverse(double y) const;
  // [phi^{-1}(phi(q) - z/sqrt(n)), phi^{-1}(phi(q) + z/sqrt(n))], z the two-sided normal quantile.
  std::pair<double, double> interval(double q_hat, long n, double level = 0.95) const;
  double p() const { return p_; }

 private:
  double p_, a1_, a2_, q_max_;
  std::vector<double> q_, phi_, dphi_;
};

// E V^{-p/2} for V ~ chi^2(nu): Gamma(nu/2 - p/2) / (2^{p/2} Gamma(nu/2)).
double tlike_fractional_moment(double nu, double p);

// C_nu = sqrt(nu) E V^{-1/2} inverted: the factor mapping E X_h X_k to Q_hk.
double tlike_moment_factor(double nu);
// Asymptotic variance of the t-like product-moment estimator of q.
double tlike_asymptotic_variance(double q, double nu1, double nu2);

}  // namespace heavyvar
