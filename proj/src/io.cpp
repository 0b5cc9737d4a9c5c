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


#include "heavyvar/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "heavyvar/backtest.hpp"
#include "heavyvar/errors.hpp"

namespace heavyvar {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string where(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row) + " column " + std::to_string(col) + ": ";
}

bool valid_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (s[i] < '0' || s[i] > '9') return false;
  const std::chrono::year_month_day ymd{std::chrono::year{std::stoi(s.substr(0, 4))},
                                        std::chrono::month{static_cast<unsigned>(std::stoi(s.substr(5, 2)))},
                                        std::chrono::day{static_cast<unsigned>(std::stoi(s.substr(8, 2)))}};
  return ymd.ok();
}

}  // namespace

PriceTable parse_prices_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_no;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    rows.push_back(split(line));
    line_no.push_back(n);
  }
  if (rows.empty()) fail(ErrorKind::parse_error, "row 1: missing header");
  PriceTable t;
  const auto& head = rows[0];
  if (head.size() < 2) fail(ErrorKind::parse_error, "row 1: header needs a date column and at least one ticker");
  for (std::size_t c = 1; c < head.size(); ++c) {
    if (head[c].empty()) fail(ErrorKind::parse_error, where(line_no[0], c + 1) + "empty ticker name");
    t.tickers.push_back(head[c]);
  }
  const std::size_t d = t.tickers.size();
  t.prices.resize(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(d));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t ln = line_no[r];
    if (row.size() != d + 1)
      fail(ErrorKind::parse_error, "row " + std::to_string(ln) + ": expected " + std::to_string(d + 1) + " cells, found " +
                                       std::to_string(row.size()));
    if (!valid_iso_date(row[0])) fail(ErrorKind::parse_error, where(ln, 1) + "not an ISO-8601 date '" + row[0] + "'");
    if (!t.dates.empty() && !(row[0] > t.dates.back()))
      fail(ErrorKind::non_ascending_dates, "row " + std::to_string(ln) + ": date " + row[0] + " does not follow " + t.dates.back());
    t.dates.push_back(row[0]);
    for (std::size_t c = 0; c < d; ++c) {
      const std::string& cell = row[c + 1];
      if (cell.empty()) fail(ErrorKind::parse_error, where(ln, c + 2) + "missing value");
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v))
        fail(ErrorKind::parse_error, where(ln, c + 2) + "not a number '" + cell + "'");
      if (!(v > 0.0))
        fail(ErrorKind::nonpositive_price, where(ln, c + 2) + "nonpositive price " + cell + " for " + t.tickers[c]);
      t.prices(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) = v;
    }
  }
  if (t.dates.empty()) fail(ErrorKind::empty_input, "no price rows");
  return t;
}

PriceTable load_prices_csv(const std::string& path) { return parse_prices_csv(read_file(path)); }

std::string format_prices_csv(const PriceTable& t) {
  std::string out = "date";
  for (const auto& s : t.tickers) out += "," + s;
  out += "\n";
  char buf[64];
  for (Eigen::Index r = 0; r < t.prices.rows(); ++r) {
    out += t.dates[r];
    for (Eigen::Index c = 0; c < t.prices.cols(); ++c) {
      std::snprintf(buf, sizeof buf, ",%.17g", t.prices(r, c));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

SampleMatrix to_log_returns(const PriceTable& t) {
  if (t.prices.rows() < 2) fail(ErrorKind::empty_input, "need at least two price rows");
  const Eigen::Index n = t.prices.rows() - 1;
  SampleMatrix r(n, t.prices.cols());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < t.prices.cols(); ++k) r(i, k) = std::log(t.prices(i + 1, k) / t.prices(i, k));
  return r;
}

void validate(const RunConfig& c) {
  model_family_from_string(c.model);
  validate(c.var);
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"input", c.input},
                     {"model", c.model},
                     {"portfolio", c.portfolio},
                     {"beta", c.var.betas},
                     {"window", c.var.window},
                     {"paths", c.var.paths},
                     {"revaluation", to_string(c.var.revaluation)},
                     {"rate", c.var.rate},
                     {"horizon_days", c.var.horizon * kTradingDays},
                     {"refit_every", c.var.refit_every},
                     {"seed", c.var.seed},
                     {"out", c.out}};
}

RunConfig run_config_from_json(const nlohmann::json& j, RunConfig c) {
  try {
    if (!j.is_object()) fail(ErrorKind::parse_error, "config must be a JSON object");
    static const char* known[] = {"input", "model", "portfolio", "beta", "window", "paths", "revaluation",
                                  "rate", "horizon_days", "refit_every", "seed", "out"};
    for (const auto& [k, v] : j.items()) {
      bool found = false;
      for (const char* s : known) found = found || k == s;
      if (!found) fail(ErrorKind::parse_error, "unknown config key '" + k + "'");
    }
    c.input = j.value("input", c.input);
    c.model = j.value("model", c.model);
    c.portfolio = j.value("portfolio", c.portfolio);
    if (j.contains("beta")) {
      const auto& b = j.at("beta");
      c.var.betas = b.is_array() ? b.get<std::vector<double>>() : std::vector<double>{b.get<double>()};
    }
    c.var.window = j.value("window", c.var.window);
    c.var.paths = j.value("paths", c.var.paths);
    if (j.contains("revaluation")) c.var.revaluation = revaluation_from_string(j.at("revaluation").get<std::string>());
    c.var.rate = j.value("rate", c.var.rate);
    if (j.contains("horizon_days")) c.var.horizon = j.at("horizon_days").get<double>() / kTradingDays;
    c.var.refit_every = j.value("refit_every", c.var.refit_every);
    c.var.seed = j.value("seed", c.var.seed);
    c.out = j.value("out", c.out);
    return c;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse_error, std::string("config: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io_error, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::io_error, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) fail(ErrorKind::io_error, "cannot rename onto '" + path + "': " + ec.message());
}

}  // namespace heavyvar
