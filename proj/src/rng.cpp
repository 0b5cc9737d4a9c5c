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

#include "heavyvar/rng.hpp"

#include <cmath>

namespace heavyvar {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngState::RngState(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), key_(mix64(seed + kGolden) ^ mix64(stream * kGolden + 0x632BE59BD9B4E019ULL)) {}

RngState::RngState(std::uint64_t seed, std::uint64_t key, int) : seed_(seed), key_(key) {}

RngState::result_type RngState::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RngState::uniform() {
  // (k + 0.5) / 2^53 never hits 0 or 1
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngState::normal() { return normal_(*this); }

double RngState::exponential() { return -std::log(uniform()); }

double RngState::gamma(double shape, double scale) {
  std::gamma_distribution<double> g(shape, scale);
  return g(*this);
}

RngState RngState::substream(std::uint64_t index) const {
  return RngState(seed_, mix64(key_ ^ mix64(index + 0xD1B54A32D192ED03ULL)), 0);
}

void RngState::discard(std::uint64_t n) {
  counter_ += n;
  normal_.reset();
}

}  // namespace heavyvar
