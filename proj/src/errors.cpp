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

#include "heavyvar/errors.hpp"

namespace heavyvar {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::invalid_range: return "invalid-range";
    case ErrorKind::not_psd: return "not-psd";
    case ErrorKind::singular_matrix: return "singular-Q";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::grid_coverage: return "grid-coverage";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::length_mismatch: return "length-mismatch";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::dof_too_small: return "dof-too-small";
    case ErrorKind::expired_option: return "expired-option";
    case ErrorKind::invalid_counts: return "invalid-counts";
    case ErrorKind::empty_input: return "empty-input";
    case ErrorKind::degenerate_series: return "degenerate-series";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::non_ascending_dates: return "non-ascending-dates";
    case ErrorKind::nonpositive_price: return "nonpositive-price";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::not_psd:
    case ErrorKind::singular_matrix:
    case ErrorKind::grid_coverage:
    case ErrorKind::non_convergence:
    case ErrorKind::degenerate_series:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace heavyvar
