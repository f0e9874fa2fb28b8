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

// GELU, Softmax and LayerNorm assembled from scalar LUTs.

#include <cstddef>
#include <span>
#include <vector>

#include "nnlut/lut.hpp"

namespace nnlut {

// 1/sqrt(x) from a table trained on (1, K). Inputs in (0, 1) are multiplied
// by S = 2^scale_exponent before lookup and the result by sqrt(S).
class ScaledRsqrt {
 public:
  ScaledRsqrt(Lut lut, double upper_bound = 1024.0, int scale_exponent = 10);

  const Lut& lut() const { return lut_; }
  double upper_bound() const { return upper_bound_; }
  int scale_exponent() const { return scale_exponent_; }
  double scale() const;
  // Exact for even exponents, correctly rounded binary32 otherwise.
  double sqrt_scale() const { return sqrt_scale_; }

 private:
  Lut lut_;
  double upper_bound_;
  int scale_exponent_;
  double sqrt_scale_;
};

// Per-call counters for the range-management branches.
struct CompositeDiagnostics {
  size_t rsqrt_calls = 0;
  size_t rsqrt_scaled = 0;         // inputs in (0, 1) routed through S
  size_t softmax_calls = 0;
  size_t denominator_rescaled = 0;  // sums moved into [1, 1024] by 2^k
  int last_denominator_shift = 0;
  size_t length_warnings = 0;       // softmax rows longer than 1024
};

// Softmax rows longer than this push the exp sum past the divide table range.
inline constexpr size_t kSoftmaxMaxLength = 1024;
inline constexpr double kDivideRangeLo = 1.0;
inline constexpr double kDivideRangeHi = 1024.0;

double scaled_rsqrt(const ScaledRsqrt& sr, double x, CompositeDiagnostics* diag = nullptr);

double lut_gelu(const Lut& lut, double x);

/// u_i = max(0, EXP(v_i - max v)); D = sum u_i; out_i = u_i * DIV(D), with D
/// moved into [1, 1024] by a power of two when needed and the shift undone
/// on the reciprocal. Entries are clamped to [0, 1].
std::vector<double> lut_softmax(std::span<const double> v, const Lut& exp_lut,
                                const Lut& div_lut, CompositeDiagnostics* diag = nullptr);

// (v_i - mean) * rsqrt(var + eps) with exact mean and population variance.
std::vector<double> lut_layernorm(std::span<const double> v, const ScaledRsqrt& sr,
                                  CompositeDiagnostics* diag = nullptr);

}  // namespace nnlut
