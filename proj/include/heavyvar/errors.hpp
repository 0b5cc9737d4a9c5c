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

#include <stdexcept>
#include <string>
#include <string_view>

namespace heavyvar {

enum class ErrorKind {
  invalid_parameter,
  invalid_range,
  not_psd,
  singular_matrix,
  out_of_range,
  grid_coverage,
  non_convergence,
  length_mismatch,
  dimension_mismatch,
  dof_too_small,
  expired_option,
  invalid_counts,
  empty_input,
  degenerate_series,
  parse_error,
  non_ascending_dates,
  nonpositive_price,
  io_error,
};

std::string_view to_string(ErrorKind kind);

// Input errors map to CLI exit code 2, numerical failures to 3.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool ok, ErrorKind kind, const char* message) {
  if (!ok) fail(kind, message);
}

}  // namespace heavyvar
