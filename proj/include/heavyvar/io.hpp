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

#include "heavyvar/correlation.hpp"
#include "heavyvar/var.hpp"

namespace heavyvar {

struct PriceTable {
  std::vector<std::string> dates;  // ISO-8601, strictly ascending
  std::vector<std::string> tickers;
  SampleMatrix prices;  // T x d, positive
};

// Comma-separated, header "date,TICKER,...", one ISO date per row.
PriceTable parse_prices_csv(const std::string& text);
PriceTable load_prices_csv(const std::string& path);
std::string format_prices_csv(const PriceTable& t);

SampleMatrix to_log_returns(const PriceTable& t);

struct RunConfig {
  std::string input;
  std::string model = "gaussian";
  std::string portfolio = "nll";  // preset name or file:PATH
  VarConfig var;
  std::string out;
};

void validate(const RunConfig& c);
void to_json(nlohmann::json& j, const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});

std::string read_file(const std::string& path);
// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace heavyvar
