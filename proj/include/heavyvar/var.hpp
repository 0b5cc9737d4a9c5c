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

#include <cstdint>
#include <vector>

#include "heavyvar/models.hpp"
#include "heavyvar/portfolio.hpp"

namespace heavyvar {

enum class Revaluation { full, quadratic };

std::string to_string(Revaluation r);
Revaluation revaluation_from_string(const std::string& s);

// Loss as a function of one risk-factor draw. Full revaluation prices the
// book; quadratic (which also covers linear and constant losses) evaluates
// the Taylor polynomial.
struct LossFunction {
  Revaluation kind = Revaluation::quadratic;
  Portfolio portfolio;
  double horizon = 1.0 / kTradingDays;
  QuadraticLossCoefficients coeffs;

  static LossFunction full(Portfolio p, double horizon = 1.0 / kTradingDays);
  static LossFunction quadratic(QuadraticLossCoefficients c);
  static LossFunction linear(const VectorXd& w, double constant = 0.0);
  static LossFunction delta_gamma(const Portfolio& p, double horizon = 1.0 / kTradingDays);

  Eigen::Index dim() const;
  double operator()(const VectorXd& x) const;
};

struct VarConfig {
  std::vector<double> betas{0.95, 0.99};
  long paths = 20000;
  long window = 250;
  Revaluation revaluation = Revaluation::full;
  std::uint64_t seed = 1;
  double rate = 0.03;
  double horizon = 1.0 / kTradingDays;
  int refit_every = 1;
};

void validate(const VarConfig& c);

// ceil(beta M)-th order statistic.
double empirical_quantile(std::vector<double> samples, double beta);
// Same rule for several levels from one sort.
std::vector<double> empirical_quantiles(std::vector<double> samples, const std::vector<double>& betas);

std::vector<double> simulate_losses(const RiskFactorModel& model, const LossFunction& loss, long paths, RngState& rng,
                                    const StableGrid* grid = nullptr);
std::vector<double> simulate_losses_serial(const RiskFactorModel& model, const LossFunction& loss, long paths,
                                           RngState& rng, const StableGrid* grid = nullptr);

// One VaR per cfg.betas entry, all from the same simulated sample.
std::vector<double> simulate_var(const RiskFactorModel& model, const LossFunction& loss, const VarConfig& cfg,
                                 RngState& rng, const StableGrid* grid = nullptr);

// xi_t = 1 iff loss_t > var_t strictly.
std::vector<int> violation_series(const std::vector<double>& losses, const std::vector<double>& var);

struct KupiecResult {
  double zeta = 0.0;
  bool reliable = true;
};

inline constexpr double kKupiecCritical = 3.84;

KupiecResult kupiec_pof(long violations, long n, double beta);

}  // namespace heavyvar
