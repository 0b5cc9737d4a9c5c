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

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "heavyvar/correlation.hpp"
#include "heavyvar/rng.hpp"
#include "heavyvar/stable_grid.hpp"

namespace heavyvar {

struct GaussianModel {
  CorrelationMatrix q;
};

// X_i = A_i^{1/2} G_i with independent subordinators; Q_ii = 2 sigma_i^2.
struct StableLikeModel {
  std::vector<double> alphas;
  CorrelationMatrix q;
  double sigma(std::size_t i) const;
};

// X_k = G_k / sqrt(V_k / nu_k); Q_kk = sigma_k^2.
struct TLikeModel {
  std::vector<double> nus;
  CorrelationMatrix q;
  double sigma(std::size_t k) const;
};

// X_k = sigma_k F_{alpha_k}^{-1}(F_{alpha0}(X'_k)), X' = A^{1/2} G, G ~ N(0, 2Q).
// alpha0 = 2 is the Gaussian copula.
struct MetaStableModel {
  double alpha0 = 2.0;
  std::vector<double> alphas;
  std::vector<double> sigmas;
  CorrelationMatrix q;
};

// X_k = delta_k F_{nu_k}^{-1}(F_{nu0}(X'_k)), X' multivariate t(nu0, Q).
// nu0 = +inf is the Gaussian copula.
struct MetaTModel {
  double nu0 = 5.0;
  std::vector<double> nus;
  std::vector<double> deltas;
  CorrelationMatrix q;
};

using RiskFactorModel = std::variant<GaussianModel, StableLikeModel, TLikeModel, MetaStableModel, MetaTModel>;

void validate(const GaussianModel& m);
void validate(const StableLikeModel& m);
void validate(const TLikeModel& m);
void validate(const MetaStableModel& m);
void validate(const MetaTModel& m);
void validate(const RiskFactorModel& m);

Eigen::Index dimension(const RiskFactorModel& m);
std::string family_name(const RiskFactorModel& m);

// Rows are drawn in fixed blocks, block b from substream b of a child of
// `rng`, so the OpenMP and serial versions return identical matrices.
// `rng` advances by one draw per call.
SampleMatrix sample_gaussian(const GaussianModel& m, Eigen::Index n, RngState& rng);
SampleMatrix sample_stable_like(const StableLikeModel& m, Eigen::Index n, RngState& rng);
SampleMatrix sample_t_like(const TLikeModel& m, Eigen::Index n, RngState& rng);
SampleMatrix sample_meta_stable(const MetaStableModel& m, Eigen::Index n, RngState& rng,
                                const StableGrid& grid = default_stable_grid());
SampleMatrix sample_meta_t(const MetaTModel& m, Eigen::Index n, RngState& rng);
// A null grid means default_stable_grid(), fetched only for meta-stable models.
SampleMatrix sample(const RiskFactorModel& m, Eigen::Index n, RngState& rng, const StableGrid* grid = nullptr);
SampleMatrix sample_serial(const RiskFactorModel& m, Eigen::Index n, RngState& rng, const StableGrid* grid = nullptr);

constexpr Eigen::Index kSampleBlock = 512;

// Number of heavy copula transforms (stable grid or t(nu0) CDF evaluations)
// performed by the meta samplers since process start.
std::uint64_t copula_transform_count();

void to_json(nlohmann::json& j, const RiskFactorModel& m);
RiskFactorModel model_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const MatrixXd& m);
MatrixXd matrix_from_json(const nlohmann::json& j);

}  // namespace heavyvar
