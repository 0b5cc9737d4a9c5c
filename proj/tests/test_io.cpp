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


#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "heavyvar/errors.hpp"
#include "heavyvar/io.hpp"

using namespace heavyvar;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_prices_csv(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::io_error;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("price CSV") {
  const PriceTable t = parse_prices_csv("date,AAA,BBB\n2020-01-02,10,20\n2020-01-03,11,19.5\n2020-01-06,12.5,21\n");
  CHECK(t.tickers == std::vector<std::string>{"AAA", "BBB"});
  CHECK(t.dates.size() == 3);
  CHECK(t.prices(2, 1) == 21.0);
  const PriceTable back = parse_prices_csv(format_prices_csv(t));
  CHECK(back.prices == t.prices);
  CHECK(back.dates == t.dates);

  CHECK(kind_of("date,A\n2020-01-02,10\n2020-01-03,0\n") == ErrorKind::nonpositive_price);
  CHECK(kind_of("date,A\n2020-01-03,10\n2020-01-02,11\n") == ErrorKind::non_ascending_dates);
  CHECK(kind_of("date,A\n2020-01-03,10\n2020-01-03,11\n") == ErrorKind::non_ascending_dates);
  CHECK(kind_of("date,A,B\n2020-01-02,10,\n") == ErrorKind::parse_error);
  CHECK(kind_of("date,A,B\n2020-01-02,10\n") == ErrorKind::parse_error);
  CHECK(kind_of("date,A\n2020-02-30,10\n") == ErrorKind::parse_error);
  CHECK(kind_of("date,A\n2020-01-02,abc\n") == ErrorKind::parse_error);

  try {
    parse_prices_csv("date,A,B\n2020-01-02,10,1\n2020-01-03,10,-1\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("B") != std::string::npos);
  }
}

TEST_CASE("log returns") {
  PriceTable t = parse_prices_csv("date,A,B\n2020-01-02,5,1\n2020-01-03,5,2\n2020-01-06,5,4\n");
  const SampleMatrix r = to_log_returns(t);
  REQUIRE(r.rows() == 2);
  CHECK(r(0, 0) == 0.0);
  CHECK(r(1, 0) == 0.0);
  CHECK(std::abs(r(0, 1) - std::log(2.0)) < 1e-15);

  t = parse_prices_csv("date,A\n2020-01-02,100\n2020-01-03,103.2\n2020-01-06,99.1\n2020-01-07,101.7\n");
  const SampleMatrix r2 = to_log_returns(t);
  double p = t.prices(0, 0);
  for (Eigen::Index i = 0; i < r2.rows(); ++i) p *= std::exp(r2(i, 0));
  CHECK(std::abs(p - t.prices(3, 0)) < 1e-12 * p);
}

TEST_CASE("run config") {
  RunConfig c;
  c.input = "prices.csv";
  c.model = "t-like";
  c.portfolio = "nldc";
  c.var.betas = {0.9, 0.975};
  c.var.paths = 5000;
  c.var.revaluation = Revaluation::quadratic;
  c.var.seed = 123;
  c.var.refit_every = 5;
  nlohmann::json j = c;
  const RunConfig back = run_config_from_json(nlohmann::json::parse(j.dump()));
  nlohmann::json j2 = back;
  CHECK(j == j2);
  CHECK(back.var.betas == c.var.betas);
  CHECK(back.var.horizon == doctest::Approx(c.var.horizon).epsilon(1e-15));

  CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"pathz": 10})")), Error);
  const RunConfig partial = run_config_from_json(nlohmann::json::parse(R"({"window": 300})"), c);
  CHECK(partial.var.window == 300);
  CHECK(partial.model == "t-like");
  CHECK_THROWS_AS(validate(run_config_from_json(nlohmann::json::parse(R"({"paths": 10})"), c)), Error);
}

TEST_CASE("atomic write") {
  const auto dir = std::filesystem::temp_directory_path() / "heavyvar_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.json").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  CHECK(read_file(path) == "second");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  CHECK_THROWS_AS(read_file((dir / "missing").string()), Error);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
