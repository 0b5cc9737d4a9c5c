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

#include "heavyvar/stable_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "heavyvar/errors.hpp"
#include "heavyvar/numerics.hpp"
#include "heavyvar/unidist.hpp"

namespace heavyvar {

namespace {

constexpr char kMagic[8] = {'H', 'V', 'S', 'G', 'R', 'I', 'D', '\0'};

inline void lagrange4(double t, double w[4]) {
  w[0] = -(t - 1) * (t - 2) * (t - 3) / 6;
  w[1] = t * (t - 2) * (t - 3) / 2;
  w[2] = -t * (t - 1) * (t - 3) / 2;
  w[3] = t * (t - 1) * (t - 2) / 6;
}

double tail_constant(double alpha) { return std::tgamma(alpha) * std::sin(kPi * alpha / 2) / kPi; }

// Solve tail(scale*sinh(s)) = u for s >= 0 by bracketed Newton in log space.
template <class Tail, class Dens>
double invert_tail(double u, double s0, double scale, Tail&& tail, Dens&& dens) {
  const double lu = std::log(u);
  auto h = [&](double s) { return std::log(tail(scale * std::sinh(s))) - lu; };
  double lo = 0.0, hi = std::max(s0, 0.0);
  double hhi = h(hi);
  if (hhi > 0) {
    double step = 0.25;
    lo = hi;
    do {
      lo = hi;
      hi += step;
      step *= 2;
      hhi = h(hi);
      if (step > 1e6) fail(ErrorKind::non_convergence, "stable quantile bracket expansion failed");
    } while (hhi > 0);
  } else {
    double step = 0.25;
    lo = hi;
    double hlo = hhi;
    while (hlo < 0 && lo > 0) {
      hi = lo;
      lo = std::max(0.0, lo - step);
      step *= 2;
      hlo = h(lo);
    }
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double x = scale * std::sinh(s);
    const double t = tail(x);
    const double f = std::log(t) - lu;
    if (f > 0) lo = s; else hi = s;
    const double df = -dens(x) * scale * std::cosh(s) / t;
    double next = s - f / df;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) < 1e-14 * std::max(1.0, s) || hi - lo < 1e-14 * std::max(1.0, s)) return next;
    s = next;
  }
  return s;
}

template <class T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
void get(std::ifstream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) fail(ErrorKind::io_error, "truncated stable grid cache");
}
void put_vec(std::ofstream& os, const std::vector<double>& v) {
  put(os, static_cast<std::uint64_t>(v.size()));
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}
void get_vec(std::ifstream& is, std::vector<double>& v, std::size_t expect) {
  std::uint64_t n = 0;
  get(is, n);
  if (n != expect) fail(ErrorKind::io_error, "stable grid cache has unexpected table size");
  v.resize(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!is) fail(ErrorKind::io_error, "truncated stable grid cache");
}

}  // namespace

void StableGridSpec::validate() const {
  if (!(alpha_min > 1.0 && alpha_max <= 2.0 && alpha_min < alpha_max))
    fail(ErrorKind::invalid_range, "alpha range must satisfy 1 < min < max <= 2");
  if (n_alpha < 4) fail(ErrorKind::invalid_range, "need at least 4 alpha nodes");
  if (n_x < 64 || n_x % 2 == 0) fail(ErrorKind::invalid_range, "x resolution must be odd and >= 64");
  if (n_u < 64) fail(ErrorKind::invalid_range, "u resolution must be >= 64");
  if (!(x_max >= 10.0)) fail(ErrorKind::invalid_range, "x range must reach at least 10");
  if (!(u_min > 0.0 && u_min < 0.01)) fail(ErrorKind::invalid_range, "u_min must lie in (0, 0.01)");
  if (!(scale > 0.0)) fail(ErrorKind::invalid_range, "scale must be positive");
}

StableGrid StableGrid::build(const StableGridSpec& spec) {
  spec.validate();
  StableGrid g;
  g.spec_ = spec;
  g.alpha_.resize(spec.n_alpha);
  for (int k = 0; k < spec.n_alpha; ++k)
    g.alpha_[k] = spec.alpha_min + (spec.alpha_max - spec.alpha_min) * k / (spec.n_alpha - 1);
  g.alpha_.back() = spec.alpha_max;
  g.half_ = (spec.n_x - 1) / 2;
  g.ds_ = std::asinh(spec.x_max / spec.scale) / g.half_;
  const int m = g.half_ + 1;
  g.tail_.assign(static_cast<std::size_t>(spec.n_alpha) * m, 0.0);
  g.dens_.assign(g.tail_.size(), 0.0);
  g.dw_ = (std::log(0.5) - std::log(spec.u_min)) / (spec.n_u - 1);
  g.qs_.assign(static_cast<std::size_t>(spec.n_alpha) * spec.n_u, 0.0);

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < spec.n_alpha; ++k) {
    const double a = g.alpha_[k];
    for (int j = 0; j < m; ++j) {
      const double x = spec.scale * std::sinh(j * g.ds_);
      g.tail_[k * m + j] = j == 0 ? 0.5 : stable_sf(x, a);
      g.dens_[k * m + j] = stable_pdf(x, {a});
    }
    auto tail = [a](double x) { return stable_sf(x, a); };
    auto dens = [a](double x) { return stable_pdf(x, {a}); };
    double s = 0.0;
    for (int i = spec.n_u - 1; i >= 0; --i) {
      const double u = i == spec.n_u - 1 ? 0.5 : std::exp(std::log(spec.u_min) + i * g.dw_);
      s = i == spec.n_u - 1 ? 0.0 : invert_tail(u, s, spec.scale, tail, dens);
      g.qs_[static_cast<std::size_t>(k) * spec.n_u + i] = s;
    }
  }
  return g;
}

void StableGrid::check(double alpha) const {
  if (!covers(alpha))
    fail(ErrorKind::grid_coverage, "alpha " + std::to_string(alpha) + " outside stable grid range");
}

bool StableGrid::covers(double alpha) const {
  return alpha >= spec_.alpha_min - 1e-12 && alpha <= spec_.alpha_max + 1e-12;
}

double StableGrid::interp(const std::vector<double>& table, double alpha, double s, bool odd_reflect) const {
  const int na = spec_.n_alpha, m = half_ + 1;
  const double p = (alpha - spec_.alpha_min) / (spec_.alpha_max - spec_.alpha_min) * (na - 1);
  int k0 = std::clamp(static_cast<int>(std::floor(p)) - 1, 0, na - 4);
  double wa[4];
  lagrange4(p - k0, wa);

  const double q = s / ds_;
  int j0 = std::min(static_cast<int>(std::floor(q)) - 1, half_ - 3);
  double ws[4];
  lagrange4(q - j0, ws);

  double out = 0.0;
  for (int a = 0; a < 4; ++a) {
    if (wa[a] == 0.0) continue;
    const double* row = &table[static_cast<std::size_t>(k0 + a) * m];
    double acc = 0.0;
    for (int b = 0; b < 4; ++b) {
      if (ws[b] == 0.0) continue;
      const int j = j0 + b;
      const double v = j >= 0 ? row[j] : (odd_reflect ? 1.0 - row[-j] : row[-j]);
      acc += ws[b] * v;
    }
    out += wa[a] * acc;
  }
  return out;
}

double StableGrid::lower_tail(double ax, double alpha) const {
  // The Gaussian row needs no table.
  if (alpha == 2.0) return 0.5 * std::erfc(ax / 2.0);
  if (ax > spec_.x_max) return detail::stable_sf_asymptotic(ax, alpha);
  const double v = interp(tail_, alpha, std::asinh(ax / spec_.scale), true);
  return std::clamp(v, 0.0, 0.5);
}

double StableGrid::sf(double x, double alpha) const {
  check(alpha);
  return x >= 0 ? lower_tail(x, alpha) : 1.0 - lower_tail(-x, alpha);
}

double StableGrid::cdf(double x, double alpha) const {
  check(alpha);
  return x < 0 ? lower_tail(-x, alpha) : 1.0 - lower_tail(x, alpha);
}

double StableGrid::pdf(double x, double alpha) const {
  check(alpha);
  const double ax = std::abs(x);
  if (alpha == 2.0) return std::exp(-0.25 * ax * ax) / (2.0 * std::sqrt(kPi));
  if (ax > spec_.x_max) return detail::stable_pdf_asymptotic(ax, alpha);
  return std::max(0.0, interp(dens_, alpha, std::asinh(ax / spec_.scale), false));
}

double StableGrid::solve_tail(double u, double alpha, double s0) const {
  return invert_tail(
      u, s0, spec_.scale, [&](double x) { return std::max(lower_tail(x, alpha), 1e-300); },
      [&](double x) { return std::max(pdf(x, alpha), 1e-300); });
}

double StableGrid::quantile(double u, double alpha) const {
  check(alpha);
  if (!(u > 0.0 && u < 1.0)) fail(ErrorKind::invalid_parameter, "quantile level must lie in (0,1)");
  if (u == 0.5) return 0.0;
  if (alpha == 2.0) return std::sqrt(2.0) * norm_quantile(u);
  const double tail = u < 0.5 ? u : 1.0 - u;
  const double w = std::log(tail) - std::log(spec_.u_min);
  double s0;
  if (w >= 0) {
    // Same 4x4 scheme on the (alpha, log u) table.
    const int na = spec_.n_alpha, nu = spec_.n_u;
    const double p = (alpha - spec_.alpha_min) / (spec_.alpha_max - spec_.alpha_min) * (na - 1);
    int k0 = std::clamp(static_cast<int>(std::floor(p)) - 1, 0, na - 4);
    const double q = w / dw_;
    int i0 = std::clamp(static_cast<int>(std::floor(q)) - 1, 0, nu - 4);
    double wa[4], wu[4];
    lagrange4(p - k0, wa);
    lagrange4(q - i0, wu);
    s0 = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) s0 += wa[a] * wu[b] * qs_[static_cast<std::size_t>(k0 + a) * nu + i0 + b];
  } else {
    const double x0 = alpha == 2.0 ? -std::sqrt(2.0) * norm_quantile(tail)
                                   : std::pow(tail_constant(alpha) / tail, 1.0 / alpha);
    s0 = std::asinh(x0 / spec_.scale);
  }
  const double x = spec_.scale * std::sinh(solve_tail(tail, alpha, std::max(s0, 0.0)));
  return u < 0.5 ? -x : x;
}

std::vector<double> StableGrid::x_nodes() const {
  std::vector<double> x(spec_.n_x);
  for (int j = -half_; j <= half_; ++j) x[j + half_] = spec_.scale * std::sinh(j * ds_);
  return x;
}

std::vector<std::vector<double>> StableGrid::cdf_table() const {
  const int m = half_ + 1;
  std::vector<std::vector<double>> out(spec_.n_alpha, std::vector<double>(spec_.n_x));
  for (int k = 0; k < spec_.n_alpha; ++k)
    for (int j = -half_; j <= half_; ++j) {
      const double t = tail_[static_cast<std::size_t>(k) * m + std::abs(j)];
      out[k][j + half_] = j < 0 ? t : 1.0 - t;
    }
  return out;
}

std::vector<double> StableGrid::u_nodes() const {
  std::vector<double> u(spec_.n_u);
  for (int i = 0; i < spec_.n_u; ++i) u[i] = std::exp(std::log(spec_.u_min) + i * dw_);
  u.back() = 0.5;
  return u;
}

std::vector<std::vector<double>> StableGrid::quantile_table() const {
  std::vector<std::vector<double>> out(spec_.n_alpha, std::vector<double>(spec_.n_u));
  for (int k = 0; k < spec_.n_alpha; ++k)
    for (int i = 0; i < spec_.n_u; ++i)
      out[k][i] = -spec_.scale * std::sinh(qs_[static_cast<std::size_t>(k) * spec_.n_u + i]);
  return out;
}

std::string StableGrid::cache_key(const StableGridSpec& spec_) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "stable_grid_v%u_a%.4f-%.4f_n%dx%d_u%d_x%g.bin", kFormatVersion,
                spec_.alpha_min, spec_.alpha_max, spec_.n_alpha, spec_.n_x, spec_.n_u, spec_.x_max);
  return buf;
}

void StableGrid::save(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) fail(ErrorKind::io_error, "cannot write " + tmp);
    os.write(kMagic, sizeof kMagic);
    put(os, kFormatVersion);
    put(os, spec_.alpha_min);
    put(os, spec_.alpha_max);
    put(os, spec_.n_alpha);
    put(os, spec_.x_max);
    put(os, spec_.n_x);
    put(os, spec_.n_u);
    put(os, spec_.u_min);
    put(os, spec_.scale);
    put_vec(os, alpha_);
    put_vec(os, tail_);
    put_vec(os, dens_);
    put_vec(os, qs_);
    if (!os) fail(ErrorKind::io_error, "write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

StableGrid StableGrid::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::io_error, "cannot open " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || !std::equal(magic, magic + 8, kMagic)) fail(ErrorKind::io_error, "not a stable grid cache: " + path);
  unsigned version = 0;
  get(is, version);
  if (version != kFormatVersion) fail(ErrorKind::io_error, "stable grid cache version mismatch");
  StableGrid g;
  auto& s = g.spec_;
  get(is, s.alpha_min);
  get(is, s.alpha_max);
  get(is, s.n_alpha);
  get(is, s.x_max);
  get(is, s.n_x);
  get(is, s.n_u);
  get(is, s.u_min);
  get(is, s.scale);
  s.validate();
  g.half_ = (s.n_x - 1) / 2;
  g.ds_ = std::asinh(s.x_max / s.scale) / g.half_;
  g.dw_ = (std::log(0.5) - std::log(s.u_min)) / (s.n_u - 1);
  const std::size_t m = static_cast<std::size_t>(g.half_ + 1) * s.n_alpha;
  get_vec(is, g.alpha_, s.n_alpha);
  get_vec(is, g.tail_, m);
  get_vec(is, g.dens_, m);
  get_vec(is, g.qs_, static_cast<std::size_t>(s.n_alpha) * s.n_u);
  return g;
}

const StableGrid& default_stable_grid() {
  static const StableGrid grid = [] {
    StableGridSpec spec;
    const char* dir = std::getenv("HEAVYVAR_GRID_CACHE");
    if (dir && *dir) {
      const std::string path = (std::filesystem::path(dir) / StableGrid::cache_key(spec)).string();
      if (std::filesystem::exists(path)) {
        try {
          return StableGrid::load(path);
        } catch (const Error&) {
        }
      }
      StableGrid g = StableGrid::build(spec);
      try {
        std::filesystem::create_directories(dir);
        g.save(path);
      } catch (const std::exception&) {
      }
      return g;
    }
    return StableGrid::build(spec);
  }();
  return grid;
}

}  // namespace heavyvar
