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

#include "nnlut/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "nnlut/error.hpp"

namespace nnlut {

std::vector<double> uniform_grid(Interval range, size_t points) {
  if (points < 2) throw PreconditionError("error curve: need at least 2 points");
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || !(range.lo <= range.hi)) {
    throw PreconditionError("error curve: invalid range");
  }
  std::vector<double> grid(points);
  const double last = static_cast<double>(points - 1);
  for (size_t i = 0; i < points; ++i) {
    grid[i] = range.lo + (range.hi - range.lo) * (static_cast<double>(i) / last);
  }
  grid.back() = range.hi;
  return grid;
}

ErrorReport make_report(std::vector<double> grid, std::vector<double> ref_vals,
                        std::vector<double> approx_vals, Interval range, std::string approx_id) {
  if (grid.size() != ref_vals.size() || grid.size() != approx_vals.size()) {
    throw PreconditionError("error report: vectors differ in length");
  }
  if (grid.empty()) throw PreconditionError("error report: empty grid");
  ErrorReport r;
  r.abs_err.resize(grid.size());
  double total = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    r.abs_err[i] = std::abs(approx_vals[i] - ref_vals[i]);
    total += r.abs_err[i];
    r.max_abs = std::max(r.max_abs, r.abs_err[i]);
  }
  r.mean_l1 = total / static_cast<double>(grid.size());
  r.grid = std::move(grid);
  r.ref_vals = std::move(ref_vals);
  r.approx_vals = std::move(approx_vals);
  r.range = range;
  r.approx_id = std::move(approx_id);
  return r;
}

ErrorReport l1_error_curve(const std::function<double(double)>& approx,
                           const std::function<double(double)>& ref, Interval range,
                           size_t points, std::string approx_id) {
  std::vector<double> grid = uniform_grid(range, points);
  std::vector<double> r(points), a(points);
  for (size_t i = 0; i < points; ++i) {
    r[i] = ref(grid[i]);
    a[i] = approx(grid[i]);
  }
  return make_report(std::move(grid), std::move(r), std::move(a), range, std::move(approx_id));
}

double max_relative_error(const std::function<double(double)>& approx,
                          const std::function<double(double)>& ref, Interval range,
                          size_t points) {
  double worst = 0.0;
  for (double x : uniform_grid(range, points)) {
    const double r = ref(x);
    if (r == 0.0) throw PreconditionError("relative error: reference is zero on the grid");
    worst = std::max(worst, std::abs(approx(x) / r - 1.0));
  }
  return worst;
}

ComparisonSummary compare(const ErrorReport& a, const ErrorReport& b) {
  if (a.grid != b.grid) throw PreconditionError("compare: reports use different grids");
  ComparisonSummary s;
  s.ratio.resize(a.grid.size());
  for (size_t i = 0; i < a.grid.size(); ++i) {
    const double ea = a.abs_err[i], eb = b.abs_err[i];
    if (eb == 0.0) {
      s.ratio[i] = ea == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
      s.ratio[i] = ea / eb;
    }
    if (ea < eb) {
      ++s.a_wins;
    } else if (eb < ea) {
      ++s.b_wins;
    } else {
      ++s.ties;
    }
  }
  if (b.mean_l1 == 0.0) {
    s.mean_l1_ratio = a.mean_l1 == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  } else {
    s.mean_l1_ratio = a.mean_l1 / b.mean_l1;
  }
  return s;
}

void write_csv(std::ostream& out, const ErrorReport& report) {
  out << "x,ref,approx,abs_err\n";
  char line[128];
  for (size_t i = 0; i < report.grid.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", report.grid[i],
                  report.ref_vals[i], report.approx_vals[i], report.abs_err[i]);
    out << line;
  }
}

namespace {

// JSON has no infinity; an unbounded ratio is written as null.
nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json summary_json(const ErrorReport& report) {
  return {{"points", report.grid.size()},
          {"range", {report.range.lo, report.range.hi}},
          {"mean_l1", report.mean_l1},
          {"max_abs", report.max_abs},
          {"approx_id", report.approx_id}};
}

nlohmann::json summary_json(const ComparisonSummary& summary) {
  double worst = 0.0;
  for (double r : summary.ratio) worst = std::max(worst, r);
  return {{"points", summary.ratio.size()},
          {"a_wins", summary.a_wins},
          {"b_wins", summary.b_wins},
          {"ties", summary.ties},
          {"mean_l1_ratio", finite_or_null(summary.mean_l1_ratio)},
          {"max_point_ratio", finite_or_null(worst)}};
}

nlohmann::json to_json(const ErrorReport& report) {
  nlohmann::json j = summary_json(report);
  j["grid"] = report.grid;
  j["ref"] = report.ref_vals;
  j["approx"] = report.approx_vals;
  j["abs_err"] = report.abs_err;
  return j;
}

ErrorReport report_from_json(const nlohmann::json& j) {
  ErrorReport r;
  try {
    const auto range = j.at("range").get<std::vector<double>>();
    if (range.size() != 2) throw PreconditionError("error report: range needs two values");
    r = make_report(j.at("grid").get<std::vector<double>>(), j.at("ref").get<std::vector<double>>(),
                    j.at("approx").get<std::vector<double>>(), {range[0], range[1]},
                    j.value("approx_id", std::string{}));
    if (j.at("abs_err").get<std::vector<double>>() != r.abs_err ||
        j.at("mean_l1").get<double>() != r.mean_l1 || j.at("max_abs").get<double>() != r.max_abs) {
      throw PreconditionError("error report: stored aggregates do not match the stored values");
    }
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("error report: malformed JSON: ") + e.what());
  }
  return r;
}

}  // namespace nnlut
