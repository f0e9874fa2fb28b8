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

// Reference implementations of the scalar and vector functions the toolkit
// approximates. Everything here is binary64 and stateless.

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nnlut {

enum class FunctionKind { Gelu, Exp, Recip, Rsqrt };

// Sign constraints applied to first-layer weights and biases at init.
enum class InitPolicy { RandomSigned, PositiveWPositiveB, NegativeWPositiveB };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool operator==(const Interval&) const = default;
};

struct TargetSpec {
  FunctionKind kind = FunctionKind::Gelu;
  Interval input_range;
  InitPolicy init_policy = InitPolicy::RandomSigned;

  bool operator==(const TargetSpec&) const = default;
};

// Training range and init policy per function, as used for 16-entry tables.
TargetSpec default_target_spec(FunctionKind kind);

// Validates lo < hi and that the reference function is defined on the whole
// closed range. Throws DomainError otherwise.
TargetSpec make_target_spec(FunctionKind kind, Interval range, InitPolicy policy);
TargetSpec make_target_spec(FunctionKind kind, Interval range);

std::string_view kind_name(FunctionKind kind);
FunctionKind parse_kind(std::string_view name);
std::string_view policy_name(InitPolicy policy);
InitPolicy parse_policy(std::string_view name);

/// Error function evaluated with a positive-term power series for |x| < 3
/// and a continued fraction for the complementary function beyond that.
double erf_ref(double x);
double erfc_ref(double x);

double gelu_ref(double x);
double exp_ref(double x);
double recip_ref(double x);
double rsqrt_ref(double x);

double reference(FunctionKind kind, double x);
std::function<double(double)> reference_function(FunctionKind kind);

// Max-subtracted softmax.
std::vector<double> softmax_ref(std::span<const double> v);

// Stabilizer added to the population variance before the square root.
inline constexpr double kLayerNormEpsilon = 1e-12;

/// Standardization only: (v_i - mean) / sqrt(var + eps), population variance.
/// No learned gain or bias.
std::vector<double> layernorm_ref(std::span<const double> v);

}  // namespace nnlut
