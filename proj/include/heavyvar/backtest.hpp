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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heavyvar/models.hpp"
#include "heavyvar/portfolio.hpp"
#include "heavyvar/var.hpp"

namespace heavyvar {

enum class ModelFamily {
  gaussian,
  stable_like,
  t_like,
  meta_stable,
  meta_t,
  meta_stable_degenerate,  // Gaussian copula, stable marginals
  meta_t_degenerate,       // Gaussian copula, t marginals
};

std::string to_string(ModelFamily f);
ModelFamily model_family_from_string(const std::string& s);

struct ModelFit {
  RiskFactorModel model;
  std::vector<std::string> warnings;
};

// Fits a family to a window of zero-mean returns (rows are dates). A null
// grid means default_stable_grid(), fetched only by the stable families.
ModelFit fit_model(const SampleMatrix& returns, ModelFamily family, const StableGrid* grid = nullptr);

struct BetaResult {
  double beta = 0.0;
  long violations = 0;
  double proportion = 0.0;
  double zeta = 0.0;
  bool reliable = true;
  std::vector<double> var;  // per evaluated date
  std::vector<int> xi;
};

struct BacktestReport {
  std::string family;
  std::string portfolio;
  std::string revaluation;
  long window = 0;
  long paths = 0;
  std::uint64_t seed = 0;
  int refit_every = 1;
  long observations = 0;  // dates evaluated (T - window minus skipped)
  long skipped = 0;
  std::vector<long> dates;  // return-row index of each realised loss
  std::vector<double> losses;
  std::vector<BetaResult> results;
  std::vector<std::string> failures;  // one line per skipped date
};

void to_json(nlohmann::json& j, const BacktestReport& r);

// Violations / percentage / LR per beta, asterisk on LR when zeta >= 3.84.
std::string format_report_table(const BacktestReport& r);

// For each row t >= window: fit on rows [t - window, t), simulate VaR for
// the book struck at the end of the window, and compare with the realised
// full-revaluation loss on row t. Dates run in parallel; every date draws
// from its own substream, so results do not depend on the thread count.
BacktestReport rolling_backtest(const SampleMatrix& returns, const PortfolioSpec& portfolio, ModelFamily family,
                                const VarConfig& cfg, const StableGrid* grid = nullptr);

}  // namespace heavyvar
