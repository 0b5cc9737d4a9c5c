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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heavyvar/correlation.hpp"
#include "heavyvar/pricing.hpp"

namespace heavyvar {

inline constexpr double kTradingDays = 252.0;

struct Position {
  Eigen::Index underlying = 0;
  double quantity = 1.0;
  std::optional<OptionSpec> option;  // empty for a stock holding
};

struct Portfolio {
  std::vector<Position> positions;
  std::vector<MarketState> markets;  // one per underlying
  Eigen::Index dim() const { return static_cast<Eigen::Index>(markets.size()); }
};

void validate(const Portfolio& p);

struct QuadraticLossCoefficients {
  double constant = 0.0;
  VectorXd delta;
  MatrixXd gamma;
};

// Value with every option's expiry shortened by `elapsed` years.
double portfolio_value(const Portfolio& p, const VectorXd& spots, double elapsed = 0.0);

// V(spots, 0) - V(spots * exp(x), horizon); horizon in years.
double loss_full_revaluation(const Portfolio& p, const VectorXd& x, double horizon = 1.0 / kTradingDays);

// Taylor coefficients of the full-revaluation loss in x at x = 0, Greeks
// taken at the decayed expiry. constant is the exact zero-shock loss.
QuadraticLossCoefficients delta_gamma_coefficients(const Portfolio& p, double horizon = 1.0 / kTradingDays);

double loss_quadratic(const QuadraticLossCoefficients& c, const VectorXd& x);

// Contract template, re-struck against current spots whenever a portfolio
// is built. underlying < 0 repeats the line on every asset.
struct PositionRule {
  Eigen::Index underlying = -1;
  double quantity = 1.0;
  std::string instrument = "stock";  // "stock" or an option kind name
  double moneyness = 1.0;            // strike / spot; 1 is at the money
  double barrier_fraction = 0.0;     // barrier / spot
  double expiry_months = 6.0;
  bool cash_is_strike = true;
  double cash = 1.0;
};

struct PortfolioSpec {
  std::string name;
  std::vector<PositionRule> rules;
};

PortfolioSpec preset_portfolio(const std::string& name);  // nll, nls, nldc

// Spots default to 100 per asset so the stock legs are equally value-weighted.
Portfolio build_portfolio(const PortfolioSpec& spec, const std::vector<double>& vols, double rate,
                          double spot = 100.0);

void to_json(nlohmann::json& j, const PortfolioSpec& s);
PortfolioSpec portfolio_spec_from_json(const nlohmann::json& j);

}  // namespace heavyvar
