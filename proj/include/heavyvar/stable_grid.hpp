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

namespace heavyvar {

struct StableGridSpec {
  double alpha_min = 1.05;
  double alpha_max = 2.0;
  int n_alpha = 33;
  double x_max = 1e3;  // beyond this the power-tail expansion takes over
  int n_x = 513;       // odd: symmetric about 0
  int n_u = 257;
  double u_min = 1e-12;
  double scale = 1.0;  // x = scale * sinh(s)

  void validate() const;
};

// Tabulated symmetric standard stable CDF, density and quantile on
// (alpha, s = asinh(x / scale)) with 4x4 Lagrange interpolation.
// Immutable after construction.
class StableGrid {
 public:
  static constexpr unsigned kFormatVersion = 1;

  static StableGrid build(const StableGridSpec& spec = {});
  static StableGrid load(const std::string& path);
  void save(const std::string& path) const;

  const StableGridSpec& spec() const { return spec_; }
  std::string cache_key() const { return cache_key(spec_); }
  static std::string cache_key(const StableGridSpec& spec);
  bool covers(double alpha) const;

  double cdf(double x, double alpha) const;
  double sf(double x, double alpha) const;  // 1 - cdf, accurate in the tail
  double pdf(double x, double alpha) const;
  double quantile(double u, double alpha) const;

  const std::vector<double>& alpha_nodes() const { return alpha_; }
  std::vector<double> x_nodes() const;
  // Row k: F_{alpha_k} at x_nodes().
  std::vector<std::vector<double>> cdf_table() const;
  // Row k: F_{alpha_k}^{-1} at u_nodes().
  std::vector<std::vector<double>> quantile_table() const;
  std::vector<double> u_nodes() const;

 private:
  double interp(const std::vector<double>& table, double alpha, double s, bool odd_reflect) const;
  double lower_tail(double ax, double alpha) const;
  double solve_tail(double u, double alpha, double s0) const;
  void check(double alpha) const;

  StableGridSpec spec_;
  std::vector<double> alpha_;
  double ds_ = 0.0;
  int half_ = 0;  // s-nodes 0..half_
  std::vector<double> tail_;  // [k * (half_+1) + j] = 1 - F(x_j), x_j >= 0
  std::vector<double> dens_;
  double dw_ = 0.0;
  std::vector<double> qs_;  // [k * n_u + i] = s of the upper quantile for tail prob exp(w_i)
};

// Process-wide default grid, built on first use. If HEAVYVAR_GRID_CACHE names a
// directory the table is loaded from / saved to it.
const StableGrid& default_stable_grid();

}  // namespace heavyvar
