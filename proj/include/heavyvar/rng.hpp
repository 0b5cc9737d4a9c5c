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
#include <limits>
#include <random>

namespace heavyvar {

// Counter-based generator: output n is splitmix64(key + n * golden).
// The whole state is (key, counter) plus the cached second normal deviate,
// so substreams can be handed to threads without coordination.
class RngState {
 public:
  using result_type = std::uint64_t;

  explicit RngState(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on the open interval (0,1), 53-bit resolution.
  double uniform();
  double normal();
  double exponential();
  double gamma(double shape, double scale);

  // Independent child generator; depends only on this generator's key and index.
  RngState substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return counter_; }
  void discard(std::uint64_t n);

 private:
  RngState(std::uint64_t seed, std::uint64_t key, int);

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace heavyvar
