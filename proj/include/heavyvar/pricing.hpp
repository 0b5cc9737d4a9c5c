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

namespace heavyvar {

enum class OptionKind {
  call,
  put,
  down_in_call,
  down_in_put,
  down_out_call,
  down_out_put,
  up_in_call,
  up_in_put,
  up_out_call,
  up_out_put,
  cash_call,
  cash_put
};

struct OptionSpec {
  OptionKind kind = OptionKind::call;
  double strike = 100.0;
  double barrier = 0.0;  // barrier kinds only
  double expiry = 0.5;   // years
  double cash = 1.0;     // cash-or-nothing payout
};

struct MarketState {
  double spot = 100.0;
  double rate = 0.0;
  double vol = 0.2;  // annualised
};

struct PriceAndGreeks {
  double price = 0.0;
  double delta = 0.0;  // d/dS
  double gamma = 0.0;  // d2/dS2
  double theta = 0.0;  // d/dT (time to expiry)
  bool knocked = false;  // spot already at or beyond the barrier
};

bool is_barrier(OptionKind k);
bool is_call(OptionKind k);
std::string to_string(OptionKind k);
OptionKind option_kind_from_string(const std::string& s);

void validate(const OptionSpec& spec);
void validate(const MarketState& m);

PriceAndGreeks bs_vanilla(const OptionSpec& spec, const MarketState& m);
// Knocked-in options return the vanilla value and knocked-out ones zero, with knocked set.
PriceAndGreeks barrier_price(const OptionSpec& spec, const MarketState& m);
PriceAndGreeks cash_or_nothing_price(const OptionSpec& spec, const MarketState& m);
PriceAndGreeks price(const OptionSpec& spec, const MarketState& m);

}  // namespace heavyvar
