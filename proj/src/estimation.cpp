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

#include "heavyvar/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "heavyvar/errors.hpp"
#include "heavyvar/fracmoment.hpp"
#include "heavyvar/numerics.hpp"

namespace heavyvar {

namespace {

constexpr double kClampQ = 1.0 - 1e-9;

std::string pair_key(const char* name, Eigen::Index i, Eigen::Index j) {
  return std::string(name) + "_" + std::to_string(i) + "_" + std::to_string(j);
}

void check_rows(const SampleMatrix& x, Eigen::Index min_rows) {
  if (x.rows() < min_rows)
    fail(ErrorKind::invalid_parameter, "need at least " + std::to_string(min_rows) + " observations");
  if (!x.allFinite()) fail(ErrorKind::invalid_parameter, "observations must be finite");
}

inline double signed_pow(double v, double p) { return std::copysign(std::pow(std::abs(v), p), v); }

// Number of pairs tied within runs of equal values of a sorted sequence.
template <class It, class Eq>
long long tied_pairs(It first, It last, Eq eq) {
  long long total = 0, run = 1;
  for (It it = first; it != last; ++it) {
    if (it + 1 != last && eq(*it, *(it + 1))) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Bottom-up merge sort counting strict inversions.
long long merge_count(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> buf(n);
  long long swaps = 0;
  for (std::size_t w = 1; w < n; w *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * w) {
      const std::size_t mid = std::min(lo + w, n), hi = std::min(lo + 2 * w, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += static_cast<long long>(mid - i);
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    std::swap(v, buf);
  }
  return swaps;
}

}  // namespace

void to_json(nlohmann::json& j, const FitReport& r) {
  j = nlohmann::json{{"estimates", r.estimates},
                     {"std_errors", r.std_errors},
                     {"iterations", r.iterations},
                     {"converged", r.converged},
                     {"warnings", r.warnings}};
  if (std::isfinite(r.loglik))
    j["loglik"] = r.loglik;
  else
    j["loglik"] = nullptr;
}

std::vector<double> column(const SampleMatrix& x, Eigen::Index k) {
  std::vector<double> c(x.rows());
  for (Eigen::Index t = 0; t < x.rows(); ++t) c[t] = x(t, k);
  return c;
}

QEstimate estimate_Q_stable_like(const SampleMatrix& x, const std::vector<double>& alphas,
                                 const std::vector<double>& sigmas, const FracMomentConfig& cfg) {
  check_rows(x, 30);
  const Eigen::Index n = x.rows(), d = x.cols();
  if (static_cast<Eigen::Index>(alphas.size()) != d || static_cast<Eigen::Index>(sigmas.size()) != d)
    fail(ErrorKind::dimension_mismatch, "parameter vectors must match the sample dimension");
  const double p = cfg.p;
  const double amin = *std::min_element(alphas.begin(), alphas.end());
  if (!(p > 0.0 && p < amin / 2)) fail(ErrorKind::invalid_parameter, "need p < min(alpha)/2");
  for (double s : sigmas)
    if (!(s > 0.0)) fail(ErrorKind::invalid_parameter, "scales must be positive");

  SampleMatrix sp(n, d);
  for (Eigen::Index t = 0; t < n; ++t)
    for (Eigen::Index k = 0; k < d; ++k) sp(t, k) = signed_pow(x(t, k), p);

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) pairs.emplace_back(i, j);
  std::vector<double> qhat(pairs.size());
  std::vector<int> clamped(pairs.size(), 0);
  const double ymax = f_p(kClampQ, p);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const double m = sp.col(i).dot(sp.col(j)) / n;
    const double y = m / (std::pow(2.0 * sigmas[i] * sigmas[j], p) * c_alpha_p(alphas[i], p) * c_alpha_p(alphas[j], p));
    if (std::abs(y) >= ymax) {
      qhat[k] = std::copysign(kClampQ, y);
      clamped[k] = 1;
    } else {
      qhat[k] = f_p_inverse(y, p, cfg.inversion_tol);
    }
  }

  MatrixXd raw(d, d);
  for (Eigen::Index i = 0; i < d; ++i) raw(i, i) = 2.0 * sigmas[i] * sigmas[i];
  FitReport rep;
  const bool se = p < amin / 4;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    raw(i, j) = raw(j, i) = 2.0 * sigmas[i] * sigmas[j] * qhat[k];
    rep.estimates[pair_key("q", i, j)] = qhat[k];
    if (clamped[k]) rep.warnings.push_back("moment ratio for pair " + pair_key("q", i, j) + " clamped");
    if (se && !clamped[k])
      rep.std_errors[pair_key("q", i, j)] =
          std::sqrt(stable_like_asymptotic_variance(qhat[k], p, alphas[i], alphas[j]) / n);
  }
  auto fixed = repair_psd(raw, false);
  if (fixed.repaired) rep.warnings.push_back("PSD repair applied, max change " + std::to_string(fixed.change));
  rep.estimates["repair_change"] = fixed.change;
  return {fixed.matrix, rep};
}

QEstimate estimate_Q_t_like(const SampleMatrix& x, const std::vector<double>& nus) {
  check_rows(x, 30);
  const Eigen::Index n = x.rows(), d = x.cols();
  if (static_cast<Eigen::Index>(nus.size()) != d) fail(ErrorKind::dimension_mismatch, "nus must match the sample dimension");
  for (double v : nus)
    if (!(v > 2.0)) fail(ErrorKind::dof_too_small, "t-like moment estimator needs nu > 2");
  std::vector<double> c(d);
  for (Eigen::Index k = 0; k < d; ++k) c[k] = tlike_moment_factor(nus[k]);
  const MatrixXd m = (x.transpose() * x) / static_cast<double>(n);
  MatrixXd raw(d, d);
  FitReport rep;
  for (Eigen::Index h = 0; h < d; ++h) {
    raw(h, h) = (nus[h] - 2.0) / nus[h] * m(h, h);
    rep.estimates["sigma_" + std::to_string(h)] = std::sqrt(raw(h, h));
  }
  for (Eigen::Index h = 0; h < d; ++h)
    for (Eigen::Index k = h + 1; k < d; ++k) {
      raw(h, k) = raw(k, h) = c[h] * c[k] * m(h, k);
      const double rho = raw(h, k) / std::sqrt(raw(h, h) * raw(k, k));
      rep.estimates[pair_key("q", h, k)] = rho;
      rep.std_errors[pair_key("q", h, k)] = std::sqrt(tlike_asymptotic_variance(rho, nus[h], nus[k]) / n);
    }
  auto fixed = repair_psd(raw, false);
  if (fixed.repaired) rep.warnings.push_back("PSD repair applied, max change " + std::to_string(fixed.change));
  rep.estimates["repair_change"] = fixed.change;
  return {fixed.matrix, rep};
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) fail(ErrorKind::length_mismatch, "series lengths differ");
  const std::size_t n = x.size();
  if (n < 2) fail(ErrorKind::invalid_parameter, "need at least two observations");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]); });
  const long long n1 = tied_pairs(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] == x[b]; });
  const long long n3 =
      tied_pairs(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] == x[b] && y[a] == y[b]; });
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
  const long long swaps = merge_count(ys);
  const long long n2 = tied_pairs(ys.begin(), ys.end(), [](double a, double b) { return a == b; });
  const long long n0 = static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;
  // Pairs tied in x are neither concordant nor discordant; within an x-run
  // the secondary sort on y leaves no inversions.
  const long long s = n0 - n1 - n2 + n3 - 2 * swaps;
  return static_cast<double>(s) / static_cast<double>(n0);
}

double kendall_tau_bruteforce(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) fail(ErrorKind::length_mismatch, "series lengths differ");
  const std::size_t n = x.size();
  if (n < 2) fail(ErrorKind::invalid_parameter, "need at least two observations");
  long long s = 0;
  auto sgn = [](double v) { return (v > 0) - (v < 0); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += sgn(x[i] - x[j]) * sgn(y[i] - y[j]);
  return static_cast<double>(s) / (static_cast<double>(n) * (n - 1) / 2);
}

QEstimate estimate_Q_meta(const SampleMatrix& x) {
  check_rows(x, 30);
  const Eigen::Index d = x.cols();
  std::vector<std::vector<double>> cols(d);
  for (Eigen::Index k = 0; k < d; ++k) cols[k] = column(x, k);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) pairs.emplace_back(i, j);
  std::vector<double> tau(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < pairs.size(); ++k) tau[k] = kendall_tau(cols[pairs[k].first], cols[pairs[k].second]);
  MatrixXd raw = MatrixXd::Identity(d, d);
  FitReport rep;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    raw(i, j) = raw(j, i) = std::sin(kPi * tau[k] / 2);
    rep.estimates[pair_key("tau", i, j)] = tau[k];
    rep.estimates[pair_key("q", i, j)] = raw(i, j);
  }
  auto fixed = repair_psd(raw, true);
  if (fixed.repaired) rep.warnings.push_back("PSD repair applied, max change " + std::to_string(fixed.change));
  rep.estimates["repair_change"] = fixed.change;
  return {fixed.matrix, rep};
}

DescriptiveStats descriptive_stats(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 20) fail(ErrorKind::invalid_parameter, "need at least 20 observations");
  DescriptiveStats s;
  s.n = static_cast<long>(n);
  for (double v : series) s.mean += v;
  s.mean /= n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : series) {
    const double e = v - s.mean, e2 = e * e;
    m2 += e2;
    m3 += e2 * e;
    m4 += e2 * e2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (!(m2 > 0.0) || !std::isfinite(m2)) fail(ErrorKind::degenerate_series, "series has zero variance");
  s.variance = m2;
  s.skewness = m3 / std::pow(m2, 1.5);
  s.kurtosis = m4 / (m2 * m2);
  s.jarque_bera = n / 6.0 * (s.skewness * s.skewness + 0.25 * (s.kurtosis - 3) * (s.kurtosis - 3));
  s.jb_pvalue = std::exp(-0.5 * s.jarque_bera);
  return s;
}

}  // namespace heavyvar
