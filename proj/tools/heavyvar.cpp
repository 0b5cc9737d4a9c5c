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


// heavyvar command-line front end.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "heavyvar/backtest.hpp"
#include "heavyvar/errors.hpp"
#include "heavyvar/estimation.hpp"
#include "heavyvar/fracmoment.hpp"
#include "heavyvar/io.hpp"
#include "heavyvar/models.hpp"
#include "heavyvar/pricing.hpp"

using namespace heavyvar;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

struct RunFlags {
  std::string config;
  RunConfig run;
};

// Registers the shared run flags; values land in `f.run` only when given.
void add_run_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--config", f.config, "JSON run configuration");
  app->add_option("--input", f.run.input, "price CSV");
  app->add_option("--model", f.run.model, "model family")
      ->check(CLI::IsMember({"gaussian", "stable-like", "t-like", "meta-stable", "meta-t", "meta-stable-degenerate",
                             "meta-t-degenerate"}));
  app->add_option("--portfolio", f.run.portfolio, "nll, nls, nldc or file:PATH");
  app->add_option("--beta", f.run.var.betas, "confidence levels")->delimiter(',');
  app->add_option("--window", f.run.var.window, "rolling window length");
  app->add_option("--paths", f.run.var.paths, "Monte Carlo paths per date");
  app->add_option("--revaluation", f.run.var.revaluation, "full or quad")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Revaluation>{{"full", Revaluation::full},
                                                                            {"quad", Revaluation::quadratic}}));
  app->add_option("--rate", f.run.var.rate, "risk-free rate");
  app->add_option("--refit-every", f.run.var.refit_every, "refit interval in days");
  app->add_option("--seed", f.run.var.seed, "random seed");
  app->add_option("--out", f.run.out, "output path");
}

// Flags override the config file, which overrides defaults.
RunConfig resolve(CLI::App* app, const RunFlags& f) {
  RunConfig c;
  if (!f.config.empty()) c = run_config_from_json(json::parse(read_file(f.config), nullptr, false), c);
  auto given = [&](const char* name) { return app->get_option(name)->count() > 0; };
  if (given("--input")) c.input = f.run.input;
  if (given("--model")) c.model = f.run.model;
  if (given("--portfolio")) c.portfolio = f.run.portfolio;
  if (given("--beta")) c.var.betas = f.run.var.betas;
  if (given("--window")) c.var.window = f.run.var.window;
  if (given("--paths")) c.var.paths = f.run.var.paths;
  if (given("--revaluation")) c.var.revaluation = f.run.var.revaluation;
  if (given("--rate")) c.var.rate = f.run.var.rate;
  if (given("--refit-every")) c.var.refit_every = f.run.var.refit_every;
  if (given("--seed")) c.var.seed = f.run.var.seed;
  if (given("--out")) c.out = f.run.out;
  validate(c);
  return c;
}

PortfolioSpec resolve_portfolio(const std::string& s) {
  if (s.rfind("file:", 0) == 0) {
    const json j = json::parse(read_file(s.substr(5)), nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::parse_error, "portfolio file is not valid JSON");
    return portfolio_spec_from_json(j);
  }
  return preset_portfolio(s);
}

SampleMatrix load_returns(const RunConfig& c) {
  if (c.input.empty()) fail(ErrorKind::invalid_parameter, "--input is required");
  return to_log_returns(load_prices_csv(c.input));
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file_atomic(path, text);
}

int cmd_fit(CLI::App* app, const RunFlags& f) {
  const RunConfig c = resolve(app, f);
  const SampleMatrix r = load_returns(c);
  const long n = std::min<long>(c.var.window, r.rows());
  const ModelFit fit = fit_model(r.bottomRows(n), model_family_from_string(c.model));
  for (const auto& w : fit.warnings) std::cerr << "warning: " << one_line(w) << "\n";
  json j = fit.model;
  emit(c.out, j.dump(2) + "\n");
  return 0;
}

int cmd_var(CLI::App* app, const RunFlags& f, const std::string& model_file) {
  const RunConfig c = resolve(app, f);
  const SampleMatrix r = load_returns(c);
  if (r.rows() < c.var.window) fail(ErrorKind::invalid_parameter, "fewer return rows than the window");
  const SampleMatrix w = r.bottomRows(c.var.window);
  RiskFactorModel model;
  if (!model_file.empty()) {
    const json j = json::parse(read_file(model_file), nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::parse_error, "model file is not valid JSON");
    model = model_from_json(j);
  } else {
    model = fit_model(w, model_family_from_string(c.model)).model;
  }
  std::vector<double> vols;
  for (Eigen::Index k = 0; k < w.cols(); ++k) {
    const auto col = w.col(k);
    vols.push_back(std::sqrt((col.array() - col.mean()).square().sum() / (w.rows() - 1) * kTradingDays));
  }
  const Portfolio p = build_portfolio(resolve_portfolio(c.portfolio), vols, c.var.rate);
  const LossFunction loss = c.var.revaluation == Revaluation::full ? LossFunction::full(p, c.var.horizon)
                                                                   : LossFunction::delta_gamma(p, c.var.horizon);
  RngState rng(c.var.seed);
  const std::vector<double> v = simulate_var(model, loss, c.var, rng);
  json out = json::array();
  std::ostringstream text;
  char buf[128];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "VaR %.4g%%: %.6f\n", 100 * c.var.betas[i], v[i]);
    text << buf;
    out.push_back({{"beta", c.var.betas[i]}, {"var", v[i]}});
  }
  std::cout << text.str();
  if (!c.out.empty()) write_file_atomic(c.out, out.dump(2) + "\n");
  return 0;
}

int cmd_backtest(CLI::App* app, const RunFlags& f, const std::string& table) {
  const RunConfig c = resolve(app, f);
  const SampleMatrix r = load_returns(c);
  const BacktestReport rep =
      rolling_backtest(r, resolve_portfolio(c.portfolio), model_family_from_string(c.model), c.var);
  json j = rep;
  if (!c.out.empty()) write_file_atomic(c.out, j.dump(1) + "\n");
  const std::string t = format_report_table(rep);
  std::cout << t;
  if (!table.empty()) write_file_atomic(table, t);
  return 0;
}

struct PriceFlags {
  std::string kind = "call";
  OptionSpec spec;
  MarketState market;
};

int cmd_price(const PriceFlags& f) {
  OptionSpec s = f.spec;
  s.kind = option_kind_from_string(f.kind);
  const PriceAndGreeks g = price(s, f.market);
  json j{{"kind", f.kind}, {"price", g.price}, {"delta", g.delta}, {"gamma", g.gamma}, {"theta", g.theta},
         {"knocked", g.knocked}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_stats(CLI::App* app, const RunFlags& f) {
  const RunConfig c = resolve(app, f);
  const PriceTable t = load_prices_csv(c.input);
  const SampleMatrix r = to_log_returns(t);
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-12s %8s %12s %12s %14s %10s\n", "ticker", "n", "mean", "std", "kurtosis", "JB");
  out << buf;
  for (Eigen::Index k = 0; k < r.cols(); ++k) {
    const DescriptiveStats s = descriptive_stats(column(r, k));
    std::snprintf(buf, sizeof buf, "%-12s %8ld %12.3e %12.3e %14.4f %10.2f\n", t.tickers[k].c_str(), s.n, s.mean,
                  std::sqrt(s.variance), s.kurtosis, s.jarque_bera);
    out << buf;
  }
  emit(c.out, out.str());
  return 0;
}

int cmd_plot_fp(double p, int points, const std::string& path) {
  if (points < 2) fail(ErrorKind::invalid_parameter, "need at least two points");
  std::string out = "q,f\n";
  char buf[64];
  for (int i = 0; i < points; ++i) {
    const double q = 0.99 * i / (points - 1);
    std::snprintf(buf, sizeof buf, "%.6f,%.12f\n", q, f_p(q, p));
    out += buf;
  }
  emit(path, out);
  return 0;
}

// Business-day dated prices from a model, starting at 100.
int cmd_simulate(const std::string& model_file, long rows, std::uint64_t seed, const std::string& path) {
  const json j = json::parse(read_file(model_file), nullptr, false);
  if (j.is_discarded()) fail(ErrorKind::parse_error, "model file is not valid JSON");
  const RiskFactorModel m = model_from_json(j);
  if (rows < 2) fail(ErrorKind::invalid_parameter, "need at least two rows");
  RngState rng(seed);
  const SampleMatrix x = sample(m, rows - 1, rng);
  PriceTable t;
  const Eigen::Index d = x.cols();
  for (Eigen::Index k = 0; k < d; ++k) t.tickers.push_back("S" + std::to_string(k + 1));
  t.prices.resize(rows, d);
  t.prices.row(0).setConstant(100.0);
  for (long i = 1; i < rows; ++i) t.prices.row(i) = t.prices.row(i - 1).array() * x.row(i - 1).array().exp();
  using namespace std::chrono;
  sys_days day = year{2000} / January / 3;
  char buf[16];
  for (long i = 0; i < rows; ++i) {
    while (weekday{day} == Saturday || weekday{day} == Sunday) day += days{1};
    const year_month_day ymd{day};
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    t.dates.push_back(buf);
    day += days{1};
  }
  emit(path, format_prices_csv(t));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo VaR for option books under heavy-tailed risk-factor models"};
  app.require_subcommand(1);

  RunFlags fit_f, var_f, bt_f, stats_f;
  auto* fit = app.add_subcommand("fit", "fit a model family to the last window of returns");
  add_run_flags(fit, fit_f);

  auto* var = app.add_subcommand("var", "one-day VaR of a portfolio struck at the last date");
  add_run_flags(var, var_f);
  std::string model_file;
  var->add_option("--model-file", model_file, "use a fitted model JSON instead of fitting");

  auto* bt = app.add_subcommand("backtest", "rolling-window VaR backtest with the Kupiec test");
  add_run_flags(bt, bt_f);
  std::string table;
  bt->add_option("--table", table, "also write the text table here");

  PriceFlags pf;
  auto* pr = app.add_subcommand("price", "price an option with Greeks");
  pr->add_option("--kind", pf.kind, "call, put, down-out-call, cash-put, ...");
  pr->add_option("--spot", pf.market.spot);
  pr->add_option("--strike", pf.spec.strike);
  pr->add_option("--barrier", pf.spec.barrier);
  pr->add_option("--expiry", pf.spec.expiry, "years");
  pr->add_option("--rate", pf.market.rate);
  pr->add_option("--vol", pf.market.vol);
  pr->add_option("--cash", pf.spec.cash);

  auto* st = app.add_subcommand("stats", "kurtosis and Jarque-Bera of each return series");
  add_run_flags(st, stats_f);

  double fp_p = 0.5;
  int fp_points = 100;
  std::string fp_out;
  auto* fp = app.add_subcommand("plot-fp", "CSV of the signed moment function f_p on [0, 0.99]");
  fp->add_option("--p", fp_p);
  fp->add_option("--points", fp_points);
  fp->add_option("--out", fp_out);

  std::string sim_model, sim_out;
  long sim_rows = 1251;
  std::uint64_t sim_seed = 1;
  auto* sim = app.add_subcommand("simulate", "write a synthetic price CSV drawn from a model JSON");
  sim->add_option("--model-file", sim_model)->required();
  sim->add_option("--rows", sim_rows);
  sim->add_option("--seed", sim_seed);
  sim->add_option("--out", sim_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << one_line(e.what()) << "\n";
    return kExitInput;
  }

  try {
    if (*fit) return cmd_fit(fit, fit_f);
    if (*var) return cmd_var(var, var_f, model_file);
    if (*bt) return cmd_backtest(bt, bt_f, table);
    if (*pr) return cmd_price(pf);
    if (*st) return cmd_stats(st, stats_f);
    if (*fp) return cmd_plot_fp(fp_p, fp_points, fp_out);
    if (*sim) return cmd_simulate(sim_model, sim_rows, sim_seed, sim_out);
  } catch (const Error& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return is_numerical(e.kind()) ? kExitNumeric : kExitInput;
  } catch (const json::exception& e) {
    std::cerr << "error: parse-error: " << one_line(e.what()) << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << one_line(e.what()) << "\n";
    return kExitNumeric;
  }
  return 0;
}
