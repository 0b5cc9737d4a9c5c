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


// OpenMP kernels against their serial references. Both variants draw from
// the same block substreams, so they produce identical numbers.

#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>

#include "heavyvar/estimation.hpp"
#include "heavyvar/models.hpp"
#include "heavyvar/portfolio.hpp"
#include "heavyvar/var.hpp"

using namespace heavyvar;

namespace {

CorrelationMatrix unit_q(Eigen::Index d, double rho) {
  MatrixXd m = MatrixXd::Constant(d, d, rho);
  m.diagonal().setOnes();
  return CorrelationMatrix(m);
}

RiskFactorModel model_for(int which) {
  const Eigen::Index d = 4;
  switch (which) {
    case 0:
      return TLikeModel{{4, 5, 6, 8}, CorrelationMatrix(1e-4 * unit_q(d, 0.3).matrix())};
    case 1:
      return MetaTModel{5.0, {3, 4, 6, 9}, {0.01, 0.012, 0.009, 0.015}, unit_q(d, 0.4)};
    default:
      return MetaStableModel{1.7, {1.5, 1.6, 1.8, 1.9}, {0.01, 0.01, 0.01, 0.01}, unit_q(d, 0.4)};
  }
}

void BM_sample(benchmark::State& st) {
  const RiskFactorModel m = model_for(static_cast<int>(st.range(0)));
  const bool parallel = st.range(1) != 0;
  for (auto _ : st) {
    RngState rng(1);
    benchmark::DoNotOptimize(parallel ? sample(m, 20000, rng) : sample_serial(m, 20000, rng));
  }
}
BENCHMARK(BM_sample)->ArgNames({"model", "parallel"})->ArgsProduct({{0, 1, 2}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_simulate_losses(benchmark::State& st) {
  const RiskFactorModel m = model_for(0);
  const Portfolio p = build_portfolio(preset_portfolio("nll"), {0.16, 0.19, 0.14, 0.24}, 0.03);
  const LossFunction f = st.range(0) ? LossFunction::full(p) : LossFunction::delta_gamma(p);
  const bool parallel = st.range(1) != 0;
  for (auto _ : st) {
    RngState rng(2);
    benchmark::DoNotOptimize(parallel ? simulate_losses(m, f, 20000, rng) : simulate_losses_serial(m, f, 20000, rng));
  }
}
BENCHMARK(BM_simulate_losses)->ArgNames({"full", "parallel"})->ArgsProduct({{0, 1}, {0, 1}})->Unit(benchmark::kMillisecond);

// Kendall matrix: the library loop runs pairs in parallel; the reference
// computes the same pairs one after another.
void BM_kendall_matrix(benchmark::State& st) {
  RngState rng(3);
  const SampleMatrix x = sample_serial(model_for(1), 20000, rng);
  const bool parallel = st.range(0) != 0;
  for (auto _ : st) {
    if (parallel) {
      benchmark::DoNotOptimize(estimate_Q_meta(x));
    } else {
      MatrixXd q = MatrixXd::Identity(x.cols(), x.cols());
      for (Eigen::Index i = 0; i < x.cols(); ++i)
        for (Eigen::Index j = i + 1; j < x.cols(); ++j)
          q(i, j) = q(j, i) = std::sin(M_PI / 2 * kendall_tau(column(x, i), column(x, j)));
      benchmark::DoNotOptimize(q);
    }
  }
}
BENCHMARK(BM_kendall_matrix)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
