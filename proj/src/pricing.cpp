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

#include "heavyvar/pricing.hpp"

#include <cmath>

#include "heavyvar/errors.hpp"
#include "heavyvar/numerics.hpp"

namespace heavyvar {

namespace {

struct Greeks {
  double p = 0, d = 0, g = 0, t = 0;
  Greeks operator+(const Greeks& o) const { return {p + o.p, d + o.d, g + o.g, t + o.t}; }
  Greeks operator-(const Greeks& o) const { return {p - o.p, d - o.d, g - o.g, t - o.t}; }
};

// phi * [S N(phi x) - K e^{-rT} N(phi (x - v))], x = (ln(S/H) + (r + vol^2/2) T) / v,
// v = vol sqrt(T). H = K is the vanilla call (phi = 1) or put (phi = -1).
Greeks gap(double phi, double s, double k, double h, double t, double r, double vol) {
  const double v = vol * std::sqrt(t);
  const double disc = std::exp(-r * t);
  const double x = (std::log(s / h) + (r + 0.5 * vol * vol) * t) / v;
  const double w = x - v;
  const double nw = norm_pdf(w);
  Greeks out;
  out.p = phi * (s * norm_cdf(phi * x) - k * disc * norm_cdf(phi * w));
  // Uses S n(x) = H e^{-rT} n(w).
  out.d = phi * norm_cdf(phi * x) + (h - k) * disc * nw / (s * v);
  out.g = norm_pdf(x) / (s * v) - (h - k) * disc * nw * (1.0 + w / v) / (s * s * v);
  const double x_t = -std::log(s / h) / (2.0 * vol * t * std::sqrt(t)) + (r + 0.5 * vol * vol) / (2.0 * vol * std::sqrt(t));
  const double w_t = x_t - vol / (2.0 * std::sqrt(t));
  out.t = disc * nw * (h * x_t - k * w_t) + phi * r * k * disc * norm_cdf(phi * w);
  return out;
}

// c (H/S)^lambda f(H^2/S) and its S-derivatives from those of f.
Greeks image(double c, double lambda, double s, double h, const Greeks& f) {
  const double u = h * h / s, k = c * std::pow(h / s, lambda);
  Greeks out;
  out.p = k * f.p;
  out.d = k * (-lambda * f.p / s - (u / s) * f.d);
  out.g = k * (lambda * (lambda + 1) * f.p / (s * s) + 2 * (lambda + 1) * (u / (s * s)) * f.d + (u * u) / (s * s) * f.g);
  out.t = k * f.t;
  return out;
}

PriceAndGreeks to_public(const Greeks& g) {
  PriceAndGreeks o;
  o.price = g.p;
  o.delta = g.d;
  o.gamma = g.g;
  o.theta = g.t;
  return o;
}

bool is_down(OptionKind k) {
  return k == OptionKind::down_in_call || k == OptionKind::down_in_put || k == OptionKind::down_out_call ||
         k == OptionKind::down_out_put;
}

bool is_in(OptionKind k) {
  return k == OptionKind::down_in_call || k == OptionKind::down_in_put || k == OptionKind::up_in_call ||
         k == OptionKind::up_in_put;
}

}  // namespace

bool is_barrier(OptionKind k) {
  return k != OptionKind::call && k != OptionKind::put && k != OptionKind::cash_call && k != OptionKind::cash_put;
}

bool is_call(OptionKind k) {
  switch (k) {
    case OptionKind::call:
    case OptionKind::down_in_call:
    case OptionKind::down_out_call:
    case OptionKind::up_in_call:
    case OptionKind::up_out_call:
    case OptionKind::cash_call:
      return true;
    default:
      return false;
  }
}

std::string to_string(OptionKind k) {
  static const char* names[] = {"call",         "put",         "down-in-call", "down-in-put",
                                "down-out-call", "down-out-put", "up-in-call",   "up-in-put",
                                "up-out-call",   "up-out-put",   "cash-call",    "cash-put"};
  return names[static_cast<int>(k)];
}

OptionKind option_kind_from_string(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(OptionKind::cash_put); ++i)
    if (to_string(static_cast<OptionKind>(i)) == s) return static_cast<OptionKind>(i);
  fail(ErrorKind::invalid_parameter, "unknown option kind '" + s + "'");
}

void validate(const OptionSpec& spec) {
  if (!(spec.strike > 0.0) || !std::isfinite(spec.strike)) fail(ErrorKind::invalid_parameter, "strike must be positive");
  if (!(spec.expiry > 0.0) || !std::isfinite(spec.expiry)) fail(ErrorKind::expired_option, "option has expired");
  if (is_barrier(spec.kind)) {
    if (!(spec.barrier > 0.0) || !std::isfinite(spec.barrier)) fail(ErrorKind::invalid_parameter, "barrier must be positive");
    if (is_down(spec.kind) && !(spec.barrier < spec.strike))
      fail(ErrorKind::invalid_parameter, "down barriers must lie below the strike");
  }
  if (!(spec.cash > 0.0)) fail(ErrorKind::invalid_parameter, "cash payout must be positive");
}

void validate(const MarketState& m) {
  if (!(m.spot > 0.0) || !std::isfinite(m.spot)) fail(ErrorKind::invalid_parameter, "spot must be positive");
  if (!(m.vol > 0.0) || !std::isfinite(m.vol)) fail(ErrorKind::invalid_parameter, "volatility must be positive");
  if (!std::isfinite(m.rate)) fail(ErrorKind::invalid_parameter, "rate must be finite");
}

PriceAndGreeks bs_vanilla(const OptionSpec& spec, const MarketState& m) {
  validate(spec);
  validate(m);
  const double phi = is_call(spec.kind) ? 1.0 : -1.0;
  return to_public(gap(phi, m.spot, spec.strike, spec.strike, spec.expiry, m.rate, m.vol));
}

PriceAndGreeks barrier_price(const OptionSpec& spec, const MarketState& m) {
  validate(spec);
  validate(m);
  if (!is_barrier(spec.kind)) fail(ErrorKind::invalid_parameter, "not a barrier option");
  const double s = m.spot, k = spec.strike, h = spec.barrier, t = spec.expiry, r = m.rate, vol = m.vol;
  const bool down = is_down(spec.kind), in = is_in(spec.kind), call = is_call(spec.kind);
  const double phi = call ? 1.0 : -1.0;
  const double eta = down ? 1.0 : -1.0;
  const Greeks a = gap(phi, s, k, k, t, r, vol);

  if ((down && s <= h) || (!down && s >= h)) {
    PriceAndGreeks o = in ? to_public(a) : PriceAndGreeks{};
    o.knocked = true;
    return o;
  }

  // Reiner-Rubinstein building blocks; C and D are reflections of A and B
  // through the barrier with exponent lambda = 2r/vol^2 - 1.
  const double lambda = 2.0 * r / (vol * vol) - 1.0;
  const double u = h * h / s;
  const Greeks b = gap(phi, s, k, h, t, r, vol);
  const Greeks c = image(phi * eta, lambda, s, h, gap(eta, u, k, k, t, r, vol));
  const Greeks d = image(phi * eta, lambda, s, h, gap(eta, u, k, h, t, r, vol));
  const bool k_above = k >= h;
  Greeks in_value;
  if (down && call)
    in_value = k_above ? c : a - b + d;
  else if (down && !call)
    in_value = k_above ? b - c + d : a;
  else if (!down && call)
    in_value = k_above ? a : b - c + d;
  else
    in_value = k_above ? a - b + d : c;
  return to_public(in ? in_value : a - in_value);
}

PriceAndGreeks cash_or_nothing_price(const OptionSpec& spec, const MarketState& m) {
  validate(spec);
  validate(m);
  if (spec.kind != OptionKind::cash_call && spec.kind != OptionKind::cash_put)
    fail(ErrorKind::invalid_parameter, "not a cash-or-nothing option");
  const double s = m.spot, k = spec.strike, t = spec.expiry, r = m.rate, vol = m.vol;
  const double v = vol * std::sqrt(t), disc = spec.cash * std::exp(-r * t);
  const double d1 = (std::log(s / k) + (r + 0.5 * vol * vol) * t) / v, d2 = d1 - v;
  const double n2 = norm_pdf(d2);
  const double d2_t = -std::log(s / k) / (2.0 * vol * t * std::sqrt(t)) + (r - 0.5 * vol * vol) / (2.0 * vol * std::sqrt(t));
  PriceAndGreeks o;
  if (spec.kind == OptionKind::cash_call) {
    o.price = disc * norm_cdf(d2);
    o.delta = disc * n2 / (s * v);
    o.gamma = -disc * n2 * d1 / (s * s * v * v);
    o.theta = disc * (-r * norm_cdf(d2) + n2 * d2_t);
  } else {
    o.price = disc * norm_cdf(-d2);
    o.delta = -disc * n2 / (s * v);
    o.gamma = disc * n2 * d1 / (s * s * v * v);
    o.theta = disc * (-r * norm_cdf(-d2) - n2 * d2_t);
  }
  return o;
}

PriceAndGreeks price(const OptionSpec& spec, const MarketState& m) {
  if (spec.kind == OptionKind::call || spec.kind == OptionKind::put) return bs_vanilla(spec, m);
  if (spec.kind == OptionKind::cash_call || spec.kind == OptionKind::cash_put) return cash_or_nothing_price(spec, m);
  return barrier_price(spec, m);
}

}  // namespace heavyvar
