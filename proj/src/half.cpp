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

#include "nnlut/half.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nnlut {
namespace {

constexpr int kMantissaBits = 10;
constexpr int kMinNormalExp = -14;

}  // namespace

double round_to_binary16(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  int exp = 0;
  std::frexp(v, &exp);  // |v| in [2^(exp-1), 2^exp)
  // Spacing of binary16 values in the binade holding v; fixed at 2^-24 in
  // the subnormal range.
  const int quantum_exp = std::max(exp - 1, kMinNormalExp) - kMantissaBits;
  const double scaled = std::ldexp(v, -quantum_exp);
  // nearbyint honors the default round-to-nearest-even mode.
  const double rounded = std::ldexp(std::nearbyint(scaled), quantum_exp);
  if (std::abs(rounded) > kBinary16Max) {
    return std::copysign(std::numeric_limits<double>::infinity(), v);
  }
  return rounded;
}

uint16_t to_binary16_bits(double v) {
  if (std::isnan(v)) return 0x7e00;
  const double r = round_to_binary16(v);
  const uint16_t sign = std::signbit(r) ? 0x8000 : 0;
  const double a = std::abs(r);
  if (std::isinf(a)) return sign | 0x7c00;
  if (a == 0.0) return sign;
  int exp = 0;
  std::frexp(a, &exp);
  const int unbiased = exp - 1;
  if (unbiased < kMinNormalExp) {
    return sign | static_cast<uint16_t>(std::ldexp(a, 24));
  }
  const auto mantissa = static_cast<uint16_t>(std::ldexp(a, kMantissaBits - unbiased) - 1024.0);
  return sign | static_cast<uint16_t>((unbiased + 15) << kMantissaBits) | mantissa;
}

double from_binary16_bits(uint16_t bits) {
  const double sign = (bits & 0x8000) ? -1.0 : 1.0;
  const int exp_field = (bits >> kMantissaBits) & 0x1f;
  const int mantissa = bits & 0x3ff;
  if (exp_field == 0x1f) {
    return mantissa ? std::numeric_limits<double>::quiet_NaN()
                    : sign * std::numeric_limits<double>::infinity();
  }
  if (exp_field == 0) return sign * std::ldexp(mantissa, -24);
  return sign * std::ldexp(1024 + mantissa, exp_field - 15 - kMantissaBits);
}

}  // namespace nnlut
