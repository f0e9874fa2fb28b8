// Copyright 2026 The nnlut Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Error curves over a uniform grid and baseline comparisons.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "nnlut/targets.hpp"

namespace nnlut {

struct ErrorReport {
  std::vector<double> grid;
  std::vector<double> ref_vals;
  std::vector<double> approx_vals;
  std::vector<double> abs_err;
  double mean_l1 = 0.0;
  double max_abs = 0.0;
  Interval range{0.0, 0.0};
  std::string approx_id;  // content hash of the evaluated artifact, if any

  bool operator==(const ErrorReport&) const = default;
};

// `points` samples from range.lo to range.hi inclusive; the last one is hi
// exactly.
std::vector<double> uniform_grid(Interval range, size_t points);

ErrorReport l1_error_curve(const std::function<double(double)>& approx,
                           const std::function<double(double)>& ref, Interval range,
                           size_t points, std::string approx_id = {});

// Builds a report from stored values, recomputing abs_err and the aggregates.
ErrorReport make_report(std::vector<double> grid, std::vector<double> ref_vals,
                        std::vector<double> approx_vals, Interval range,
                        std::string approx_id = {});

// max |approx/ref - 1| over the grid; ref must be non-zero everywhere.
double max_relative_error(const std::function<double(double)>& approx,
                          const std::function<double(double)>& ref, Interval range,
                          size_t points);

struct ComparisonSummary {
  // a.abs_err / b.abs_err per point; 1 where both are zero, +inf where only
  // b is.
  std::vector<double> ratio;
  size_t a_wins = 0;  // points where a's error is strictly smaller
  size_t b_wins = 0;
  size_t ties = 0;
  double mean_l1_ratio = 1.0;  // a.mean_l1 / b.mean_l1
};

// Throws PreconditionError unless both reports share the same grid.
ComparisonSummary compare(const ErrorReport& a, const ErrorReport& b);

// Columns x, ref, approx, abs_err with a header row; values at 17
// significant digits.
void write_csv(std::ostream& out, const ErrorReport& report);

nlohmann::json summary_json(const ErrorReport& report);
nlohmann::json summary_json(const ComparisonSummary& summary);

nlohmann::json to_json(const ErrorReport& report);
// Throws PreconditionError if the stored abs_err, mean_l1 or max_abs differ
// from the values recomputed from grid/ref/approx.
ErrorReport report_from_json(const nlohmann::json& j);

}  // namespace nnlut
