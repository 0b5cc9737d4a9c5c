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


#include "heavyvar/portfolio.hpp"

#include <cmath>

#include "heavyvar/errors.hpp"

namespace heavyvar {

namespace {

void check_spots(const Portfolio& p, const VectorXd& v, const char* what) {
  if (v.size() != p.dim()) fail(ErrorKind::dimension_mismatch, std::string(what) + " length must match the portfolio dimension");
}

OptionSpec decayed(const OptionSpec& o, double elapsed) {
  OptionSpec s = o;
  s.expiry -= elapsed;
  return s;
}

}  // namespace

void validate(const Portfolio& p) {
  if (p.positions.empty()) fail(ErrorKind::invalid_parameter, "portfolio has no positions");
  for (const auto& m : p.markets) validate(m);
  for (const auto& pos : p.positions) {
    if (pos.underlying < 0 || pos.underlying >= p.dim())
      fail(ErrorKind::invalid_parameter, "position refers to an unknown underlying");
    if (!(pos.quantity != 0.0) || !std::isfinite(pos.quantity)) fail(ErrorKind::invalid_parameter, "position quantity must be nonzero");
    if (pos.option) validate(*pos.option);
  }
}

double portfolio_value(const Portfolio& p, const VectorXd& spots, double elapsed) {
  check_spots(p, spots, "spot vector");
  double v = 0.0;
  for (const auto& pos : p.positions) {
    const double s = spots[pos.underlying];
    if (!(s > 0.0) || !std::isfinite(s)) fail(ErrorKind::invalid_parameter, "spots must be positive");
    if (!pos.option) {
      v += pos.quantity * s;
      continue;
    }
    MarketState m = p.markets[pos.underlying];
    m.spot = s;
    v += pos.quantity * price(decayed(*pos.option, elapsed), m).price;
  }
  return v;
}

double loss_full_revaluation(const Portfolio& p, const VectorXd& x, double horizon) {
  check_spots(p, x, "risk-factor vector");
  if (!x.allFinite()) fail(ErrorKind::invalid_parameter, "risk factors must be finite");
  VectorXd s0(p.dim());
  for (Eigen::Index i = 0; i < p.dim(); ++i) s0[i] = p.markets[i].spot;
  const VectorXd s1 = s0.array() * x.array().exp();
  // Stock legs cancel exactly in the difference; keep them separate so the
  // zero shock gives no rounding from large stock values.
  double loss = 0.0;
  for (const auto& pos : p.positions) {
    const Eigen::Index i = pos.underlying;
    if (!pos.option) {
      loss -= pos.quantity * (s0[i] * std::expm1(x[i]));
      continue;
    }
    MarketState m = p.markets[i];
    const double v0 = price(*pos.option, m).price;
    m.spot = s1[i];
    const double v1 = price(decayed(*pos.option, horizon), m).price;
    loss += pos.quantity * (v0 - v1);
  }
  return loss;
}

QuadraticLossCoefficients delta_gamma_coefficients(const Portfolio& p, double horizon) {
  validate(p);
  const Eigen::Index d = p.dim();
  QuadraticLossCoefficients c;
  c.delta = VectorXd::Zero(d);
  c.gamma = MatrixXd::Zero(d, d);
  c.constant = loss_full_revaluation(p, VectorXd::Zero(d), horizon);
  for (const auto& pos : p.positions) {
    const Eigen::Index i = pos.underlying;
    const double s = p.markets[i].spot;
    if (!pos.option) {
      c.delta[i] -= pos.quantity * s;
      c.gamma(i, i) -= pos.quantity * s;
      continue;
    }
    const PriceAndGreeks g = price(decayed(*pos.option, horizon), p.markets[i]);
    // d/dx = S d/dS, d2/dx2 = S^2 d2/dS2 + S d/dS at x = 0.
    c.delta[i] -= pos.quantity * s * g.delta;
    c.gamma(i, i) -= pos.quantity * (s * s * g.gamma + s * g.delta);
  }
  return c;
}

double loss_quadratic(const QuadraticLossCoefficients& c, const VectorXd& x) {
  if (x.size() != c.delta.size() || c.gamma.rows() != x.size() || c.gamma.cols() != x.size())
    fail(ErrorKind::dimension_mismatch, "quadratic coefficients do not match the risk-factor dimension");
  return c.constant + c.delta.dot(x) + 0.5 * x.dot(c.gamma * x);
}

PortfolioSpec preset_portfolio(const std::string& name) {
  auto opt = [](double q, const char* kind) {
    PositionRule r;
    r.quantity = q;
    r.instrument = kind;
    return r;
  };
  PortfolioSpec s;
  s.name = name;
  s.rules.push_back(PositionRule{});
  if (name == "nll") {
    s.rules.push_back(opt(10, "call"));
    s.rules.push_back(opt(5, "put"));
  } else if (name == "nls") {
    s.rules.push_back(opt(-5, "call"));
    s.rules.push_back(opt(-10, "put"));
  } else if (name == "nldc") {
    PositionRule doc = opt(-10, "down-out-call");
    doc.barrier_fraction = 0.95;
    s.rules.push_back(doc);
    s.rules.push_back(opt(-5, "cash-put"));
  } else {
    fail(ErrorKind::invalid_parameter, "unknown portfolio preset '" + name + "'");
  }
  return s;
}

Portfolio build_portfolio(const PortfolioSpec& spec, const std::vector<double>& vols, double rate, double spot) {
  if (vols.empty()) fail(ErrorKind::invalid_parameter, "need at least one underlying");
  Portfolio p;
  for (double v : vols) p.markets.push_back(MarketState{spot, rate, v});
  const auto d = static_cast<Eigen::Index>(vols.size());
  for (const auto& r : spec.rules) {
    if (r.underlying >= d) fail(ErrorKind::invalid_parameter, "position refers to an unknown underlying");
    const Eigen::Index lo = r.underlying < 0 ? 0 : r.underlying;
    const Eigen::Index hi = r.underlying < 0 ? d : r.underlying + 1;
    for (Eigen::Index i = lo; i < hi; ++i) {
      Position pos;
      pos.underlying = i;
      pos.quantity = r.quantity;
      if (r.instrument != "stock") {
        OptionSpec o;
        o.kind = option_kind_from_string(r.instrument);
        o.strike = r.moneyness * spot;
        o.barrier = r.barrier_fraction * spot;
        o.expiry = r.expiry_months / 12.0;
        o.cash = r.cash_is_strike ? o.strike : r.cash;
        pos.option = o;
      }
      p.positions.push_back(pos);
    }
  }
  validate(p);
  return p;
}

void to_json(nlohmann::json& j, const PortfolioSpec& s) {
  j = nlohmann::json::object();
  j["name"] = s.name;
  auto& arr = j["positions"] = nlohmann::json::array();
  for (const auto& r : s.rules) {
    nlohmann::json e;
    if (r.underlying < 0)
      e["underlying"] = "all";
    else
      e["underlying"] = r.underlying;
    e["quantity"] = r.quantity;
    e["instrument"] = r.instrument;
    if (r.instrument != "stock") {
      if (r.moneyness == 1.0)
        e["strike"] = "atm";
      else
        e["strike"] = r.moneyness;
      e["expiry_months"] = r.expiry_months;
      if (r.barrier_fraction > 0.0) e["barrier_fraction"] = r.barrier_fraction;
      if (r.cash_is_strike)
        e["cash"] = "strike";
      else
        e["cash"] = r.cash;
    }
    arr.push_back(e);
  }
}

PortfolioSpec portfolio_spec_from_json(const nlohmann::json& j) {
  try {
    PortfolioSpec s;
    s.name = j.value("name", std::string("custom"));
    for (const auto& e : j.at("positions")) {
      PositionRule r;
      const auto& u = e.at("underlying");
      if (u.is_string()) {
        if (u.get<std::string>() != "all") fail(ErrorKind::parse_error, "underlying must be an index or \"all\"");
        r.underlying = -1;
      } else {
        r.underlying = u.get<Eigen::Index>();
        if (r.underlying < 0) fail(ErrorKind::parse_error, "underlying index must be nonnegative");
      }
      r.quantity = e.at("quantity").get<double>();
      r.instrument = e.value("instrument", std::string("stock"));
      if (r.instrument != "stock") {
        option_kind_from_string(r.instrument);
        const auto k = e.value("strike", nlohmann::json("atm"));
        if (k.is_string()) {
          if (k.get<std::string>() != "atm") fail(ErrorKind::parse_error, "strike rule must be \"atm\" or a moneyness");
        } else {
          r.moneyness = k.get<double>();
        }
        r.expiry_months = e.value("expiry_months", 6.0);
        r.barrier_fraction = e.value("barrier_fraction", 0.0);
        const auto c = e.value("cash", nlohmann::json("strike"));
        if (c.is_string()) {
          if (c.get<std::string>() != "strike") fail(ErrorKind::parse_error, "cash rule must be \"strike\" or a number");
        } else {
          r.cash_is_strike = false;
          r.cash = c.get<double>();
        }
      }
      s.rules.push_back(r);
    }
    if (s.rules.empty()) fail(ErrorKind::parse_error, "portfolio has no positions");
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse_error, std::string("portfolio: ") + e.what());
  }
}

}  // namespace heavyvar
