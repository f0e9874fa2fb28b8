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

#include "nnlut/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nnlut/error.hpp"

namespace nnlut {
namespace {

constexpr double kSeriesCutoff = 3.0;
constexpr int kContinuedFractionTerms = 200;

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(fn) + ": non-finite input");
  }
}

// erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n 2^n x^(2n+1) / (2n+1)!!
// All terms share the sign of x, so there is no cancellation.
double erf_series(double x) {
  const double two_x2 = 2.0 * x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 500; ++n) {
    term *= two_x2 / (2.0 * n + 1.0);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x * x) * sum;
}

// erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
// evaluated bottom-up. Valid for x > 0; used for x >= kSeriesCutoff.
double erfc_continued_fraction(double x) {
  double f = x;
  for (int k = kContinuedFractionTerms; k >= 1; --k) {
    f = x + (0.5 * k) / f;
  }
  return std::exp(-x * x) / std::sqrt(std::numbers::pi) / f;
}

}  // namespace

TargetSpec default_target_spec(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::Gelu:
      return {kind, {-5.0, 5.0}, InitPolicy::RandomSigned};
    case FunctionKind::Exp:
      return {kind, {-256.0, 0.0}, InitPolicy::PositiveWPositiveB};
    case FunctionKind::Recip:
      return {kind, {1.0, 1024.0}, InitPolicy::NegativeWPositiveB};
    case FunctionKind::Rsqrt:
      return {kind, {0.1, 1024.0}, InitPolicy::NegativeWPositiveB};
  }
  throw PreconditionError("unknown function kind");
}

TargetSpec make_target_spec(FunctionKind kind, Interval range, InitPolicy policy) {
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || !(range.lo < range.hi)) {
    throw DomainError("target range must satisfy lo < hi with finite bounds");
  }
  if (kind == FunctionKind::Recip && range.lo <= 0.0 && range.hi >= 0.0) {
    throw DomainError("recip: range must exclude 0");
  }
  if (kind == FunctionKind::Rsqrt && range.lo <= 0.0) {
    throw DomainError("rsqrt: range must be strictly positive");
  }
  return {kind, range, policy};
}

TargetSpec make_target_spec(FunctionKind kind, Interval range) {
  return make_target_spec(kind, range, default_target_spec(kind).init_policy);
}

std::string_view kind_name(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::Gelu: return "gelu";
    case FunctionKind::Exp: return "exp";
    case FunctionKind::Recip: return "recip";
    case FunctionKind::Rsqrt: return "rsqrt";
  }
  return "unknown";
}

FunctionKind parse_kind(std::string_view name) {
  if (name == "gelu") return FunctionKind::Gelu;
  if (name == "exp") return FunctionKind::Exp;
  if (name == "recip" || name == "div") return FunctionKind::Recip;
  if (name == "rsqrt") return FunctionKind::Rsqrt;
  throw PreconditionError("unknown target function: " + std::string(name));
}

std::string_view policy_name(InitPolicy policy) {
  switch (policy) {
    case InitPolicy::RandomSigned: return "random_signed";
    case InitPolicy::PositiveWPositiveB: return "positive_w_positive_b";
    case InitPolicy::NegativeWPositiveB: return "negative_w_positive_b";
  }
  return "unknown";
}

InitPolicy parse_policy(std::string_view name) {
  if (name == "random_signed") return InitPolicy::RandomSigned;
  if (name == "positive_w_positive_b") return InitPolicy::PositiveWPositiveB;
  if (name == "negative_w_positive_b") return InitPolicy::NegativeWPositiveB;
  throw PreconditionError("unknown init policy: " + std::string(name));
}

double erf_ref(double x) {
  require_finite(x, "erf");
  if (std::abs(x) < kSeriesCutoff) return erf_series(x);
  const double tail = erfc_continued_fraction(std::abs(x));
  return x > 0 ? 1.0 - tail : tail - 1.0;
}

double erfc_ref(double x) {
  require_finite(x, "erfc");
  if (x >= kSeriesCutoff) return erfc_continued_fraction(x);
  if (x <= -kSeriesCutoff) return 2.0 - erfc_continued_fraction(-x);
  return 1.0 - erf_series(x);
}

double gelu_ref(double x) {
  require_finite(x, "gelu");
  // x/2 * (1 + erf(x/sqrt2)) == x/2 * erfc(-x/sqrt2); the erfc form keeps
  // full relative accuracy on the negative tail.
  return 0.5 * x * erfc_ref(-x / std::numbers::sqrt2);
}

double exp_ref(double x) {
  require_finite(x, "exp");
  return std::exp(x);
}

double recip_ref(double x) {
  require_finite(x, "recip");
  if (x == 0.0) throw DomainError("recip: input must be non-zero");
  return 1.0 / x;
}

double rsqrt_ref(double x) {
  require_finite(x, "rsqrt");
  if (!(x > 0.0)) throw DomainError("rsqrt: input must be positive");
  return 1.0 / std::sqrt(x);
}

double reference(FunctionKind kind, double x) {
  switch (kind) {
    case FunctionKind::Gelu: return gelu_ref(x);
    case FunctionKind::Exp: return exp_ref(x);
    case FunctionKind::Recip: return recip_ref(x);
    case FunctionKind::Rsqrt: return rsqrt_ref(x);
  }
  throw PreconditionError("unknown function kind");
}

std::function<double(double)> reference_function(FunctionKind kind) {
  return [kind](double x) { return reference(kind, x); };
}

std::vector<double> softmax_ref(std::span<const double> v) {
  if (v.empty()) throw DomainError("softmax: empty input");
  for (double x : v) require_finite(x, "softmax");
  const double max = *std::max_element(v.begin(), v.end());
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - max);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

std::vector<double> layernorm_ref(std::span<const double> v) {
  if (v.size() < 2) throw DomainError("layernorm: need at least 2 elements");
  for (double x : v) require_finite(x, "layernorm");
  const double count = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= count;
  // A constant row must standardize to exact zeros.
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; })) mean = v[0];
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= count;
  const double inv_sigma = 1.0 / std::sqrt(var + kLayerNormEpsilon);
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) * inv_sigma;
  return out;
}

}  // namespace nnlut
