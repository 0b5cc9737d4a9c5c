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

#include "heavyvar/models.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "heavyvar/errors.hpp"
#include "heavyvar/numerics.hpp"
#include "heavyvar/unidist.hpp"

namespace heavyvar {

namespace {

std::atomic<std::uint64_t> g_copula_transforms{0};

void check_dims(std::size_t n, const CorrelationMatrix& q, const char* what) {
  if (static_cast<Eigen::Index>(n) != q.dim())
    fail(ErrorKind::dimension_mismatch, std::string(what) + " length differs from matrix dimension");
}

void check_positive(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorKind::invalid_parameter, std::string(what) + " must be positive");
}

void check_unit_diagonal(const CorrelationMatrix& q) {
  if (!q.has_unit_diagonal(1e-10)) fail(ErrorKind::invalid_parameter, "copula matrix must have unit diagonal");
}

// Upper-tail mapping x = F_target^{-1}(F_source(x')) written through the
// tail probability so that extreme draws keep their precision.
template <class Sf, class Isf>
double tail_transform(double xp, Sf sf, Isf isf) {
  if (xp == 0.0) return 0.0;
  const double p = sf(std::abs(xp));
  if (!(p > 0.0)) return std::copysign(std::numeric_limits<double>::infinity(), xp);
  if (p >= 0.5) return 0.0;
  return std::copysign(isf(p), xp);
}

// Draw rows [r0, r1) of the sample; row filler gets its own generator per block.
template <class Fill>
SampleMatrix blocked(Eigen::Index n, Eigen::Index d, RngState& rng, bool parallel, Fill fill) {
  if (n < 0) fail(ErrorKind::invalid_parameter, "sample size must be nonnegative");
  const RngState base = rng.substream(rng());
  SampleMatrix out(n, d);
  const Eigen::Index blocks = (n + kSampleBlock - 1) / kSampleBlock;
  auto run = [&](Eigen::Index b) {
    RngState r = base.substream(static_cast<std::uint64_t>(b));
    const Eigen::Index r0 = b * kSampleBlock, r1 = std::min(n, r0 + kSampleBlock);
    VectorXd z(d);
    for (Eigen::Index t = r0; t < r1; ++t) fill(r, z, out.row(t));
  };
  if (parallel) {
    // Errors cannot leave an OpenMP region; capture the first one.
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index b = 0; b < blocks; ++b) {
      try {
        run(b);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (Eigen::Index b = 0; b < blocks; ++b) run(b);
  }
  return out;
}

inline void normals(RngState& r, VectorXd& z) {
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = r.normal();
}

SampleMatrix gaussian_impl(const GaussianModel& m, Eigen::Index n, RngState& rng, bool par) {
  validate(m);
  const MatrixXd& s = m.q.sqrt();
  return blocked(n, m.q.dim(), rng, par, [&](RngState& r, VectorXd& z, auto row) {
    normals(r, z);
    row = (s * z).transpose();
  });
}

SampleMatrix stable_like_impl(const StableLikeModel& m, Eigen::Index n, RngState& rng, bool par) {
  validate(m);
  const MatrixXd& s = m.q.sqrt();
  const Eigen::Index d = m.q.dim();
  return blocked(n, d, rng, par, [&](RngState& r, VectorXd& z, auto row) {
    normals(r, z);
    const VectorXd g = s * z;
    for (Eigen::Index i = 0; i < d; ++i) row[i] = std::sqrt(subordinator_sample(r, m.alphas[i])) * g[i];
  });
}

SampleMatrix t_like_impl(const TLikeModel& m, Eigen::Index n, RngState& rng, bool par) {
  validate(m);
  const MatrixXd& s = m.q.sqrt();
  const Eigen::Index d = m.q.dim();
  return blocked(n, d, rng, par, [&](RngState& r, VectorXd& z, auto row) {
    normals(r, z);
    const VectorXd g = s * z;
    for (Eigen::Index k = 0; k < d; ++k) row[k] = g[k] / std::sqrt(chi2_sample(r, m.nus[k]) / m.nus[k]);
  });
}

SampleMatrix meta_stable_impl(const MetaStableModel& m, Eigen::Index n, RngState& rng, const StableGrid& grid,
                              bool par) {
  validate(m);
  for (double a : m.alphas)
    if (a < 2.0 && !grid.covers(a)) fail(ErrorKind::grid_coverage, "marginal index outside stable grid range");
  if (m.alpha0 < 2.0 && !grid.covers(m.alpha0)) fail(ErrorKind::grid_coverage, "copula index outside stable grid range");
  const MatrixXd& s = m.q.sqrt();
  const Eigen::Index d = m.q.dim();
  const bool gauss = m.alpha0 == 2.0;
  return blocked(n, d, rng, par, [&](RngState& r, VectorXd& z, auto row) {
    normals(r, z);
    const VectorXd g = s * z;
    if (gauss) {
      // Gaussian copula: U_k = Phi(Z_k), no stable CDF involved.
      for (Eigen::Index k = 0; k < d; ++k) {
        const double ak = m.alphas[k];
        row[k] = m.sigmas[k] * (ak == 2.0 ? std::sqrt(2.0) * g[k]
                                          : tail_transform(
                                                g[k], [](double x) { return norm_cdf(-x); },
                                                [&](double p) { return -grid.quantile(p, ak); }));
      }
      return;
    }
    const double sa = std::sqrt(2.0 * subordinator_sample(r, m.alpha0));
    for (Eigen::Index k = 0; k < d; ++k) {
      const double ak = m.alphas[k];
      row[k] = m.sigmas[k] * tail_transform(
                                 sa * g[k], [&](double x) { return grid.sf(x, m.alpha0); },
                                 [&](double p) { return -grid.quantile(p, ak); });
    }
    g_copula_transforms.fetch_add(static_cast<std::uint64_t>(d), std::memory_order_relaxed);
  });
}

SampleMatrix meta_t_impl(const MetaTModel& m, Eigen::Index n, RngState& rng, bool par) {
  validate(m);
  const MatrixXd& s = m.q.sqrt();
  const Eigen::Index d = m.q.dim();
  const bool gauss = std::isinf(m.nu0);
  return blocked(n, d, rng, par, [&](RngState& r, VectorXd& z, auto row) {
    normals(r, z);
    const VectorXd g = s * z;
    if (gauss) {
      for (Eigen::Index k = 0; k < d; ++k) {
        const double nk = m.nus[k];
        row[k] = m.deltas[k] * tail_transform(
                                   g[k], [](double x) { return norm_cdf(-x); },
                                   [&](double p) { return -t_quantile(p, nk); });
      }
      return;
    }
    const double w = 1.0 / std::sqrt(chi2_sample(r, m.nu0) / m.nu0);
    for (Eigen::Index k = 0; k < d; ++k) {
      const double nk = m.nus[k];
      row[k] = m.deltas[k] * tail_transform(
                                 w * g[k], [&](double x) { return t_cdf(-x, m.nu0); },
                                 [&](double p) { return -t_quantile(p, nk); });
    }
    g_copula_transforms.fetch_add(static_cast<std::uint64_t>(d), std::memory_order_relaxed);
  });
}

SampleMatrix dispatch(const RiskFactorModel& m, Eigen::Index n, RngState& rng, const StableGrid* grid, bool par) {
  return std::visit(
      [&](const auto& x) -> SampleMatrix {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, GaussianModel>) return gaussian_impl(x, n, rng, par);
        if constexpr (std::is_same_v<T, StableLikeModel>) return stable_like_impl(x, n, rng, par);
        if constexpr (std::is_same_v<T, TLikeModel>) return t_like_impl(x, n, rng, par);
        if constexpr (std::is_same_v<T, MetaStableModel>) return meta_stable_impl(x, n, rng, grid ? *grid : default_stable_grid(), par);
        if constexpr (std::is_same_v<T, MetaTModel>) return meta_t_impl(x, n, rng, par);
      },
      m);
}

std::vector<double> vec_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorKind::parse_error, std::string("model JSON lacks '") + key + "'");
  return j.at(key).get<std::vector<double>>();
}

double number_or_inf(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
    fail(ErrorKind::parse_error, "unrecognised number '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

double StableLikeModel::sigma(std::size_t i) const { return std::sqrt(q(i, i) / 2.0); }
double TLikeModel::sigma(std::size_t k) const { return std::sqrt(q(k, k)); }

void validate(const GaussianModel&) {}

void validate(const StableLikeModel& m) {
  check_dims(m.alphas.size(), m.q, "alphas");
  for (double a : m.alphas)
    if (!(a > 1.0 && a < 2.0)) fail(ErrorKind::invalid_parameter, "stable-like indices must lie in (1,2)");
  for (Eigen::Index i = 0; i < m.q.dim(); ++i)
    if (!(m.q(i, i) > 0.0)) fail(ErrorKind::invalid_parameter, "dispersion diagonal must be positive");
}

void validate(const TLikeModel& m) {
  check_dims(m.nus.size(), m.q, "nus");
  for (double v : m.nus)
    if (!(v > 2.0)) fail(ErrorKind::dof_too_small, "t-like degrees of freedom must exceed 2");
  for (Eigen::Index i = 0; i < m.q.dim(); ++i)
    if (!(m.q(i, i) > 0.0)) fail(ErrorKind::invalid_parameter, "dispersion diagonal must be positive");
}

void validate(const MetaStableModel& m) {
  check_dims(m.alphas.size(), m.q, "alphas");
  check_dims(m.sigmas.size(), m.q, "sigmas");
  check_unit_diagonal(m.q);
  check_positive(m.sigmas, "sigmas");
  if (!(m.alpha0 > 1.0 && m.alpha0 <= 2.0)) fail(ErrorKind::invalid_parameter, "alpha0 must lie in (1,2]");
  for (double a : m.alphas)
    if (!(a > 1.0 && a <= 2.0)) fail(ErrorKind::invalid_parameter, "marginal indices must lie in (1,2]");
}

void validate(const MetaTModel& m) {
  check_dims(m.nus.size(), m.q, "nus");
  check_dims(m.deltas.size(), m.q, "deltas");
  check_unit_diagonal(m.q);
  check_positive(m.deltas, "deltas");
  check_positive(m.nus, "nus");
  if (!(m.nu0 > 2.0)) fail(ErrorKind::invalid_parameter, "nu0 must exceed 2");
}

void validate(const RiskFactorModel& m) {
  std::visit([](const auto& x) { validate(x); }, m);
}

Eigen::Index dimension(const RiskFactorModel& m) {
  return std::visit([](const auto& x) { return x.q.dim(); }, m);
}

std::string family_name(const RiskFactorModel& m) {
  static const char* names[] = {"gaussian", "stable-like", "t-like", "meta-stable", "meta-t"};
  return names[m.index()];
}

SampleMatrix sample_gaussian(const GaussianModel& m, Eigen::Index n, RngState& rng) {
  return gaussian_impl(m, n, rng, true);
}
SampleMatrix sample_stable_like(const StableLikeModel& m, Eigen::Index n, RngState& rng) {
  return stable_like_impl(m, n, rng, true);
}
SampleMatrix sample_t_like(const TLikeModel& m, Eigen::Index n, RngState& rng) {
  return t_like_impl(m, n, rng, true);
}
SampleMatrix sample_meta_stable(const MetaStableModel& m, Eigen::Index n, RngState& rng, const StableGrid& grid) {
  return meta_stable_impl(m, n, rng, grid, true);
}
SampleMatrix sample_meta_t(const MetaTModel& m, Eigen::Index n, RngState& rng) {
  return meta_t_impl(m, n, rng, true);
}
SampleMatrix sample(const RiskFactorModel& m, Eigen::Index n, RngState& rng, const StableGrid* grid) {
  return dispatch(m, n, rng, grid, true);
}
SampleMatrix sample_serial(const RiskFactorModel& m, Eigen::Index n, RngState& rng, const StableGrid* grid) {
  return dispatch(m, n, rng, grid, false);
}

std::uint64_t copula_transform_count() { return g_copula_transforms.load(); }

nlohmann::json matrix_to_json(const MatrixXd& m) {
  auto j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(m.cols());
    for (Eigen::Index k = 0; k < m.cols(); ++k) row[k] = m(i, k);
    j.push_back(row);
  }
  return j;
}

MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorKind::parse_error, "matrix must be a nonempty array of rows");
  const auto n = j.size();
  MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = j.at(i).get<std::vector<double>>();
    if (row.size() != n) fail(ErrorKind::parse_error, "matrix must be square");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = row[k];
  }
  return m;
}

void to_json(nlohmann::json& j, const RiskFactorModel& m) {
  j = nlohmann::json::object();
  j["family"] = family_name(m);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, StableLikeModel>) j["alphas"] = x.alphas;
        if constexpr (std::is_same_v<T, TLikeModel>) j["nus"] = x.nus;
        if constexpr (std::is_same_v<T, MetaStableModel>) {
          j["alpha0"] = x.alpha0;
          j["alphas"] = x.alphas;
          j["sigmas"] = x.sigmas;
        }
        if constexpr (std::is_same_v<T, MetaTModel>) {
          if (std::isinf(x.nu0))
            j["nu0"] = "inf";
          else
            j["nu0"] = x.nu0;
          j["nus"] = x.nus;
          j["deltas"] = x.deltas;
        }
        j["Q"] = matrix_to_json(x.q.matrix());
      },
      m);
}

RiskFactorModel model_from_json(const nlohmann::json& j) {
  try {
    const auto fam = j.at("family").get<std::string>();
    CorrelationMatrix q(matrix_from_json(j.at("Q")));
    RiskFactorModel m;
    if (fam == "gaussian")
      m = GaussianModel{q};
    else if (fam == "stable-like")
      m = StableLikeModel{vec_from(j, "alphas"), q};
    else if (fam == "t-like")
      m = TLikeModel{vec_from(j, "nus"), q};
    else if (fam == "meta-stable")
      m = MetaStableModel{j.at("alpha0").get<double>(), vec_from(j, "alphas"), vec_from(j, "sigmas"), q};
    else if (fam == "meta-t")
      m = MetaTModel{number_or_inf(j.at("nu0")), vec_from(j, "nus"), vec_from(j, "deltas"), q};
    else
      fail(ErrorKind::parse_error, "unknown model family '" + fam + "'");
    validate(m);
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse_error, std::string("model JSON: ") + e.what());
  }
}

}  // namespace heavyvar
