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

#include <limits>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heavyvar/correlation.hpp"

namespace heavyvar {

struct FitReport {
  std::map<std::string, double> estimates;
  std::map<std::string, double> std_errors;
  double loglik = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool converged = true;
  std::vector<std::string> warnings;
};

void to_json(nlohmann::json& j, const FitReport& r);

struct QEstimate {
  CorrelationMatrix q;
  FitReport report;
};

struct FracMomentConfig {
  double p = 0.5;
  double inversion_tol = 1e-12;
};

// Signed fractional-moment estimator of the stable-like dispersion matrix.
// Diagonal is 2 sigma_i^2; off-diagonal moments that f_p cannot reach are
// clamped to +-(1 - 1e-9) on the correlation scale with a warning.
QEstimate estimate_Q_stable_like(const SampleMatrix& x, const std::vector<double>& alphas,
                                 const std::vector<double>& sigmas, const FracMomentConfig& cfg = {});

// Product-moment estimator of the t-like dispersion matrix (all nu > 2).
QEstimate estimate_Q_t_like(const SampleMatrix& x, const std::vector<double>& nus);

// Proportion of concordant minus discordant pairs over all n(n-1)/2 pairs,
// computed in O(n log n).
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);
double kendall_tau_bruteforce(const std::vector<double>& x, const std::vector<double>& y);

// Unit-diagonal Q from sin(pi tau / 2), PSD-repaired.
QEstimate estimate_Q_meta(const SampleMatrix& x);

struct DescriptiveStats {
  long n = 0;
  double mean = 0, variance = 0, skewness = 0;
  double kurtosis = 0;  // fourth standardised moment (3 for the normal)
  double jarque_bera = 0;  // standard, unadjusted statistic
  double jb_pvalue = 0;    // chi^2(2) survival
};

DescriptiveStats descriptive_stats(const std::vector<double>& series);

std::vector<double> column(const SampleMatrix& x, Eigen::Index k);

}  // namespace heavyvar
