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

#include "nnlut/composite.hpp"

#include <algorithm>
#include <cmath>

#include "nnlut/error.hpp"
#include "nnlut/targets.hpp"

namespace nnlut {

ScaledRsqrt::ScaledRsqrt(Lut lut, double upper_bound, int scale_exponent)
    : lut_(std::move(lut)), upper_bound_(upper_bound), scale_exponent_(scale_exponent) {
  if (scale_exponent_ < 1) throw PreconditionError("scaled rsqrt: S must be 2^k with k >= 1");
  if (!(upper_bound_ > 1.0)) throw PreconditionError("scaled rsqrt: K must exceed 1");
  if (scale_exponent_ % 2 == 0) {
    sqrt_scale_ = std::ldexp(1.0, scale_exponent_ / 2);
  } else {
    sqrt_scale_ = static_cast<float>(std::sqrt(std::ldexp(1.0, scale_exponent_)));
  }
}

double ScaledRsqrt::scale() const { return std::ldexp(1.0, scale_exponent_); }

double scaled_rsqrt(const ScaledRsqrt& sr, double x, CompositeDiagnostics* diag) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("scaled_rsqrt: input must be positive");
  if (diag) ++diag->rsqrt_calls;
  if (x >= 1.0) return eval_any(sr.lut(), x);
  if (diag) ++diag->rsqrt_scaled;
  return eval_any(sr.lut(), std::ldexp(x, sr.scale_exponent())) * sr.sqrt_scale();
}

double lut_gelu(const Lut& lut, double x) { return eval_any(lut, x); }

std::vector<double> lut_softmax(std::span<const double> v, const Lut& exp_lut,
                                const Lut& div_lut, CompositeDiagnostics* diag) {
  if (v.empty()) throw DomainError("softmax: empty input");
  for (double x : v) {
    if (!std::isfinite(x)) throw DomainError("softmax: non-finite input");
  }
  if (diag) {
    ++diag->softmax_calls;
    if (v.size() > kSoftmaxMaxLength) ++diag->length_warnings;
  }
  const double max = *std::max_element(v.begin(), v.end());
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    out[i] = std::max(0.0, eval_any(exp_lut, v[i] - max));
    sum += out[i];
  }
  if (!(sum > 0.0)) {
    throw DomainError("softmax: exp table returned no mass at its maximum input");
  }
  // 1/D = 2^k * (1 / (2^k * D)) with 2^k * D inside the divide table range.
  int shift = 0;
  if (sum < kDivideRangeLo || sum > kDivideRangeHi) {
    int exp = 0;
    std::frexp(sum, &exp);  // sum in [2^(exp-1), 2^exp)
    shift = sum < kDivideRangeLo ? 1 - exp : 10 - exp;
    if (diag) ++diag->denominator_rescaled;
  }
  if (diag) diag->last_denominator_shift = shift;
  const double recip = std::ldexp(eval_any(div_lut, std::ldexp(sum, shift)), shift);
  for (double& p : out) p = std::clamp(p * recip, 0.0, 1.0);
  return out;
}

std::vector<double> lut_layernorm(std::span<const double> v, const ScaledRsqrt& sr,
                                  CompositeDiagnostics* diag) {
  if (v.size() < 2) throw DomainError("layernorm: need at least 2 elements");
  const double count = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= count;
  // A constant row must standardize to exact zeros.
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; })) mean = v[0];
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= count;
  const double r = scaled_rsqrt(sr, var + kLayerNormEpsilon, diag);
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) * r;
  return out;
}

}  // namespace nnlut
