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

// Piecewise-linear lookup tables:
//
//   LUT(x) = s_1 x + t_1   if x < d_1
//            s_i x + t_i   if d_{i-1} <= x < d_i
//            s_N x + t_N   if x >= d_{N-1}
//
// plus the exact conversion from a one-hidden-layer ReLU net, the
// equally-spaced least-squares baseline, and lowering to binary16 / int32.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nnlut/net.hpp"
#include "nnlut/targets.hpp"

namespace nnlut {

enum class Precision { Binary32, Binary16Params, Int32 };

std::string_view precision_name(Precision p);
Precision parse_precision(std::string_view name);

// Fixed-point encoding. Real value of an integer code c in each field:
// breakpoints c * s_in, slopes c * s_slope, intercepts and outputs c * s_out.
struct QuantParams {
  double s_in = 1.0;
  double s_slope = 1.0;
  double s_out = 1.0;  // == s_slope * s_in, exactly
  // Non-decreasing; a breakpoint d maps to ceil(d / s_in).
  std::vector<int32_t> int_breakpoints;
  std::vector<int32_t> int_slopes;
  std::vector<int32_t> int_intercepts;

  bool operator==(const QuantParams&) const = default;
};

inline constexpr int32_t kSlopeCodeMax = (1 << 15) - 1;

class Lut {
 public:
  // Throws PreconditionError unless |slopes| == |intercepts| ==
  // |breakpoints| + 1, breakpoints strictly increase, every value is finite,
  // and an Int32 table carries matching QuantParams.
  Lut(std::vector<double> breakpoints, std::vector<double> slopes,
      std::vector<double> intercepts, Precision precision = Precision::Binary32,
      std::optional<QuantParams> quant = std::nullopt, std::vector<std::string> warnings = {});

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& slopes() const { return slopes_; }
  const std::vector<double>& intercepts() const { return intercepts_; }
  Precision precision() const { return precision_; }
  const std::optional<QuantParams>& quant() const { return quant_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  size_t entries() const { return slopes_.size(); }

  // Left-closed, right-open segments; total over the reals.
  size_t segment_index(double x) const;

  bool operator==(const Lut&) const = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
  std::vector<double> intercepts_;
  Precision precision_;
  std::optional<QuantParams> quant_;
  std::vector<std::string> warnings_;
};

// Breakpoints closer than this are merged by nn_to_lut.
inline constexpr double kBreakpointMergeTolerance = 1e-9;

// Rounds every parameter to binary32 and merges breakpoints that become equal
// (or lie within `merge_tolerance` before rounding), dropping the zero-width
// segment between them.
Lut make_binary32_lut(std::vector<double> breakpoints, std::vector<double> slopes,
                      std::vector<double> intercepts, double merge_tolerance = 0.0);

// s_i * x + t_i in binary32 arithmetic. Binary32 and Binary16Params only.
double eval_lut(const Lut& lut, double x);

/// Exact NN -> LUT transformation. Breakpoints are -b_i/n_i in ascending
/// order; each segment's slope and intercept are the sums of m_j*n_j and
/// m_j*b_j over the neurons active on it (n_j > 0 with breakpoint at or left
/// of the segment, n_j < 0 with breakpoint right of it), plus the folded
/// constant on every intercept.
Lut nn_to_lut(const FinalizedNet& net);

// Equally spaced breakpoints over `range` with an independent least-squares
// line per segment (1024 uniform samples each). The outer segments extend
// their boundary fits to infinity.
Lut fit_linear_lut(const std::function<double(double)>& f, Interval range, int entries);

inline constexpr int kLinearFitSamplesPerSegment = 1024;

// Rounds d, s, t to binary16 (ties to even). Values beyond +-65504 saturate
// and leave a warning on the result.
Lut to_fp16(const Lut& lut);

Lut to_int32(const Lut& lut, double s_in);

struct Int32Output {
  int32_t value;
  double scale;  // s_out
};

// value = int_slope * q + int_intercept, computed in 64 bits and saturated.
Int32Output eval_int32(const Lut& lut, int32_t q);

// Quantizes x with s_in, evaluates in integers, and dequantizes.
double eval_int32_real(const Lut& lut, double x);

// The interval with the same center and `factor` times the width.
Interval widen(Interval range, double factor);

inline constexpr double kEquivalenceTolerance = 1e-5;
inline constexpr size_t kEquivalencePoints = 1000000;

// max |LUT(x) - NN(x)| / (1 + |NN(x)|) over `points` uniform samples of
// `span`, endpoints included. NN includes the folded constant.
double equivalence_deviation(const FinalizedNet& net, const Lut& lut, Interval span,
                             size_t points = kEquivalencePoints);

// Evaluates any precision: eval_lut for float tables, eval_int32_real for Int32.
double eval_any(const Lut& lut, double x);

}  // namespace nnlut
