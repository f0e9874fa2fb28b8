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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nnlut/error.hpp"
#include "nnlut/targets.hpp"

using namespace nnlut;

TEST(TargetSpec, DefaultsMatchTrainingSetup) {
  const auto gelu = default_target_spec(FunctionKind::Gelu);
  EXPECT_EQ(gelu.input_range, (Interval{-5.0, 5.0}));
  EXPECT_EQ(gelu.init_policy, InitPolicy::RandomSigned);
  const auto exp = default_target_spec(FunctionKind::Exp);
  EXPECT_EQ(exp.input_range, (Interval{-256.0, 0.0}));
  EXPECT_EQ(exp.init_policy, InitPolicy::PositiveWPositiveB);
  const auto recip = default_target_spec(FunctionKind::Recip);
  EXPECT_EQ(recip.input_range, (Interval{1.0, 1024.0}));
  EXPECT_EQ(recip.init_policy, InitPolicy::NegativeWPositiveB);
  const auto rsqrt = default_target_spec(FunctionKind::Rsqrt);
  EXPECT_EQ(rsqrt.input_range, (Interval{0.1, 1024.0}));
  EXPECT_EQ(rsqrt.init_policy, InitPolicy::NegativeWPositiveB);
}

TEST(TargetSpec, RejectsBadRanges) {
  EXPECT_THROW(make_target_spec(FunctionKind::Gelu, {1.0, 1.0}), DomainError);
  EXPECT_THROW(make_target_spec(FunctionKind::Gelu, {2.0, 1.0}), DomainError);
  EXPECT_THROW(make_target_spec(FunctionKind::Recip, {-1.0, 1.0}), DomainError);
  EXPECT_THROW(make_target_spec(FunctionKind::Rsqrt, {0.0, 1.0}), DomainError);
  EXPECT_THROW(make_target_spec(FunctionKind::Gelu, {-INFINITY, 1.0}), DomainError);
  EXPECT_NO_THROW(make_target_spec(FunctionKind::Recip, {-8.0, -1.0}));
  EXPECT_EQ(make_target_spec(FunctionKind::Rsqrt, {1.0, 1024.0}).init_policy,
            InitPolicy::NegativeWPositiveB);
}

TEST(TargetSpec, NamesRoundTrip) {
  for (auto k : {FunctionKind::Gelu, FunctionKind::Exp, FunctionKind::Recip, FunctionKind::Rsqrt}) {
    EXPECT_EQ(parse_kind(kind_name(k)), k);
  }
  EXPECT_EQ(parse_kind("div"), FunctionKind::Recip);
  EXPECT_THROW(parse_kind("tanh"), PreconditionError);
  for (auto p : {InitPolicy::RandomSigned, InitPolicy::PositiveWPositiveB,
                 InitPolicy::NegativeWPositiveB}) {
    EXPECT_EQ(parse_policy(policy_name(p)), p);
  }
}

TEST(Erf, MatchesLibmOnDenseGrid) {
  // libm's erf is an independent implementation good to a few ulp.
  double worst = 0.0;
  for (int i = -60000; i <= 60000; ++i) {
    const double x = i * 1e-4;
    worst = std::max(worst, std::abs(erf_ref(x) - std::erf(x)));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Erf, ComplementKeepsRelativeAccuracyInTheTail) {
  for (double x : {3.0, 4.0, 6.0, 10.0, 20.0}) {
    EXPECT_NEAR(erfc_ref(x) / std::erfc(x), 1.0, 1e-12) << x;
    EXPECT_NEAR(erfc_ref(-x), 2.0 - std::erfc(x), 1e-15) << x;
  }
}

TEST(Gelu, Examples) {
  EXPECT_EQ(gelu_ref(0.0), 0.0);
  EXPECT_NEAR(gelu_ref(5.0), 5.0, 1e-5);
  EXPECT_NEAR(gelu_ref(-5.0), 0.0, 1e-5);
  // x Phi(x) with Phi from libm erfc.
  for (double x : {-3.0, -1.0, -0.25, 0.5, 2.0}) {
    EXPECT_NEAR(gelu_ref(x), 0.5 * x * std::erfc(-x / std::sqrt(2.0)), 1e-14) << x;
  }
}

TEST(Gelu, OddPartIsHalfIdentity) {
  // gelu(x) - gelu(-x) = x/2 (erf(u) + 1) + x/2 (1 - erf(u)) = x.
  double worst = 0.0;
  for (int i = -6000; i <= 6000; ++i) {
    const double x = i * 1e-3;
    worst = std::max(worst, std::abs(gelu_ref(x) - gelu_ref(-x) - x));
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Gelu, RejectsNonFinite) {
  EXPECT_THROW(gelu_ref(NAN), DomainError);
  EXPECT_THROW(gelu_ref(INFINITY), DomainError);
}

TEST(Scalars, Examples) {
  EXPECT_EQ(exp_ref(0.0), 1.0);
  EXPECT_EQ(recip_ref(1024.0), 0.0009765625);
  EXPECT_EQ(rsqrt_ref(0.25), 2.0);
  EXPECT_THROW(recip_ref(0.0), DomainError);
  EXPECT_THROW(rsqrt_ref(0.0), DomainError);
  EXPECT_THROW(rsqrt_ref(-1.0), DomainError);
  EXPECT_THROW(exp_ref(NAN), DomainError);
}

TEST(Scalars, RecipOfSquaredRsqrtIsIdentity) {
  for (int i = 0; i <= 10000; ++i) {
    const double x = 0.1 * std::pow(10240.0, i / 10000.0);
    const double r = rsqrt_ref(x);
    EXPECT_NEAR(recip_ref(r * r) / x, 1.0, 1e-9);
  }
}

TEST(Scalars, DispatchMatchesDirectCalls) {
  EXPECT_EQ(reference(FunctionKind::Gelu, 1.5), gelu_ref(1.5));
  EXPECT_EQ(reference(FunctionKind::Exp, -2.0), exp_ref(-2.0));
  EXPECT_EQ(reference_function(FunctionKind::Recip)(4.0), 0.25);
  EXPECT_EQ(reference_function(FunctionKind::Rsqrt)(4.0), 0.5);
}

TEST(Softmax, Examples) {
  for (double c : {-7.0, 0.0, 3.5, 1e6}) {
    const std::vector<double> v{c, c, c};
    for (double p : softmax_ref(v)) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
  }
  const std::vector<double> v{0.0, std::log(3.0)};
  const auto p = softmax_ref(v);
  EXPECT_NEAR(p[0], 0.25, 1e-15);
  EXPECT_NEAR(p[1], 0.75, 1e-15);
  const std::vector<double> big{1000.0, 1000.0};
  const auto q = softmax_ref(big);
  EXPECT_EQ(q[0], 0.5);
  EXPECT_EQ(q[1], 0.5);
  EXPECT_THROW(softmax_ref(std::vector<double>{}), DomainError);
}

TEST(Softmax, ProbabilityVectorAndShiftInvariance) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(0.0, 4.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(1 + t % 64);
    for (auto& x : v) x = nd(rng);
    const auto p = softmax_ref(v);
    double sum = 0.0;
    for (double q : p) {
      EXPECT_GE(q, 0.0);
      EXPECT_LE(q, 1.0);
      sum += q;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    std::vector<double> shifted = v;
    for (auto& x : shifted) x += 17.25;
    const auto ps = softmax_ref(shifted);
    for (size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(ps[i], p[i], 1e-12);
  }
}

TEST(LayerNorm, Examples) {
  const std::vector<double> v{1.0, 2.0, 3.0};
  const auto z = layernorm_ref(v);
  EXPECT_NEAR(z[0], -std::sqrt(1.5), 1e-9);
  EXPECT_NEAR(z[1], 0.0, 1e-15);
  EXPECT_NEAR(z[2], std::sqrt(1.5), 1e-9);
  for (double c : {0.0, 0.1, -3.7, 1e8}) {
    const std::vector<double> flat(4, c);
    for (double x : layernorm_ref(flat)) EXPECT_EQ(x, 0.0);
  }
  EXPECT_THROW(layernorm_ref(std::vector<double>{1.0}), DomainError);
}

TEST(LayerNorm, StandardizesAndIsAffineInvariant) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(1.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(2 + t % 100);
    for (auto& x : v) x = nd(rng);
    const auto z = layernorm_ref(v);
    double mean = 0.0, var = 0.0;
    for (double x : z) mean += x;
    mean /= static_cast<double>(z.size());
    for (double x : z) var += (x - mean) * (x - mean);
    var /= static_cast<double>(z.size());
    EXPECT_NEAR(mean, 0.0, 1e-10);
    EXPECT_NEAR(var, 1.0, 1e-10);
    std::vector<double> w = v;
    for (auto& x : w) x = 2.0 * x + 7.0;
    const auto zw = layernorm_ref(w);
    for (size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(zw[i], z[i], 1e-9);
  }
}
