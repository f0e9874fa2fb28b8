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

#include "nnlut/net.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nnlut/error.hpp"

namespace nnlut {

void validate(const ReluNet1H& net, bool allow_empty) {
  if (net.n.size() != net.b.size() || net.n.size() != net.m.size()) {
    throw PreconditionError("net: n, b, m must have equal length");
  }
  if (net.n.empty() && !allow_empty) {
    throw PreconditionError("net: needs at least one hidden neuron");
  }
  for (const auto* v : {&net.n, &net.b, &net.m}) {
    for (double x : *v) {
      if (!std::isfinite(x)) throw PreconditionError("net: non-finite parameter");
    }
  }
}

InputFrame InputFrame::of(Interval range) {
  if (!(range.lo < range.hi)) throw PreconditionError("input frame: empty range");
  return {0.5 * (range.lo + range.hi), 0.5 * (range.hi - range.lo)};
}

InputFrame InputFrame::of_inputs(std::span<const double> xs) {
  if (xs.empty()) throw PreconditionError("input frame: no inputs");
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  if (*lo == *hi) return {*lo, 1.0};
  return of({*lo, *hi});
}

ReluNet1H InputFrame::to_raw(const ReluNet1H& framed) const {
  ReluNet1H raw = framed;
  for (size_t i = 0; i < raw.hidden(); ++i) {
    raw.n[i] = framed.n[i] / half_width;
    raw.b[i] = framed.b[i] - framed.n[i] * center / half_width;
  }
  return raw;
}

ReluNet1H InputFrame::to_framed(const ReluNet1H& raw) const {
  ReluNet1H framed = raw;
  for (size_t i = 0; i < framed.hidden(); ++i) {
    framed.n[i] = raw.n[i] * half_width;
    framed.b[i] = raw.b[i] + raw.n[i] * center;
  }
  return framed;
}

void TrainConfig::validate() const {
  if (hidden < 1) throw PreconditionError("train config: hidden must be >= 1");
  if (dataset_size < 2) throw PreconditionError("train config: dataset_size must be >= 2");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw PreconditionError("train config: lr must be > 0");
  if (epochs < 0) throw PreconditionError("train config: epochs must be >= 0");
  if (batch_size < 0) throw PreconditionError("train config: batch_size must be >= 0");
  for (const auto& ms : lr_milestones) {
    if (!(ms.multiplier > 0.0 && ms.multiplier <= 1.0)) {
      throw PreconditionError("train config: milestone multipliers must lie in (0, 1]");
    }
    if (!(ms.fraction >= 0.0 && ms.fraction <= 1.0)) {
      throw PreconditionError("train config: milestone fractions must lie in [0, 1]");
    }
  }
}

double TrainConfig::lr_at_epoch(int epoch) const {
  double rate = lr;
  for (const auto& ms : lr_milestones) {
    if (epoch >= ms.fraction * epochs) rate *= ms.multiplier;
  }
  return rate;
}

TrainConfig TrainConfig::calibration() {
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 32;
  cfg.lr_milestones.clear();
  return cfg;
}

namespace {

// Portion of `range` on the side of zero where a sign-constrained neuron's
// breakpoint -b/n must fall, as magnitudes [lo, hi]. Empty when the range
// has no points of that sign.
bool breakpoint_span(Interval range, bool positive, double& lo, double& hi) {
  const double a = positive ? std::max(range.lo, 0.0) : std::max(-range.hi, 0.0);
  const double c = positive ? range.hi : -range.lo;
  if (!(c > 0.0)) return false;
  // Keep a range that touches zero off the singular log end.
  hi = c;
  lo = std::max(a, kInitDelta * c);
  return lo < hi;
}

}  // namespace

ReluNet1H init_net(const TargetSpec& spec, const TrainConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  // Open interval (-1, 1) for the unconstrained draws.
  std::uniform_real_distribution<double> signed_dist(std::nextafter(-1.0, 0.0), 1.0);
  std::uniform_real_distribution<double> positive(kInitDelta, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto h = static_cast<size_t>(cfg.hidden);
  ReluNet1H net{std::vector<double>(h), std::vector<double>(h), std::vector<double>(h)};
  if (spec.init_policy == InitPolicy::RandomSigned) {
    for (size_t i = 0; i < h; ++i) net.n[i] = signed_dist(rng);
    for (size_t i = 0; i < h; ++i) net.b[i] = signed_dist(rng);
    for (size_t i = 0; i < h; ++i) net.m[i] = signed_dist(rng);
    return net;
  }

  // b > 0 in both constrained policies, so the sign of n fixes the side of
  // zero the breakpoint lands on. Breakpoints are spread log-uniformly over
  // that part of the range and n is solved from b; a neuron whose kink sits
  // outside the data is dead from the first step.
  const double sign = spec.init_policy == InitPolicy::PositiveWPositiveB ? 1.0 : -1.0;
  double lo = 0.0, hi = 0.0;
  const bool spread = breakpoint_span(spec.input_range, sign < 0.0, lo, hi);
  for (size_t i = 0; i < h; ++i) net.b[i] = positive(rng);
  for (size_t i = 0; i < h; ++i) {
    if (spread) {
      const double at = lo * std::pow(hi / lo, unit(rng));
      net.n[i] = sign * net.b[i] / at;
    } else {
      net.n[i] = sign * positive(rng);
    }
  }
  for (size_t i = 0; i < h; ++i) net.m[i] = signed_dist(rng);
  return net;
}

double forward(const ReluNet1H& net, double x) {
  double y = 0.0;
  for (size_t i = 0; i < net.n.size(); ++i) {
    const double pre = net.n[i] * x + net.b[i];
    if (pre > 0.0) y += net.m[i] * pre;
  }
  return y;
}

void forward(const ReluNet1H& net, std::span<const double> xs, std::span<double> out) {
  if (xs.size() != out.size()) throw PreconditionError("forward: output size mismatch");
  // Block over the grid so the accumulator stays in cache; the per-point
  // summation order matches the scalar overload.
  constexpr size_t kBlock = 2048;
  for (size_t start = 0; start < xs.size(); start += kBlock) {
    const size_t stop = std::min(xs.size(), start + kBlock);
    std::fill(out.begin() + start, out.begin() + stop, 0.0);
    for (size_t i = 0; i < net.n.size(); ++i) {
      const double n = net.n[i], b = net.b[i], m = net.m[i];
      for (size_t k = start; k < stop; ++k) {
        const double pre = n * xs[k] + b;
        out[k] += pre > 0.0 ? m * pre : 0.0;
      }
    }
  }
}

std::vector<Sample> sample_dataset(const TargetSpec& spec, size_t size, uint64_t seed) {
  if (size < 2) throw PreconditionError("sample_dataset: size must be >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(spec.input_range.lo, spec.input_range.hi);
  std::vector<Sample> data(size);
  for (auto& s : data) {
    s.x = dist(rng);
    s.y = reference(spec.kind, s.x);
  }
  return data;
}

double mean_loss(const ReluNet1H& net, std::span<const Sample> data, LossKind loss) {
  if (data.empty()) throw PreconditionError("mean_loss: empty data");
  double total = 0.0;
  for (const auto& s : data) {
    const double r = forward(net, s.x) - s.y;
    total += loss == LossKind::L1 ? std::abs(r) : r * r;
  }
  return total / static_cast<double>(data.size());
}

FinalizedNet finalize_net(const ReluNet1H& net) {
  validate(net, true);
  FinalizedNet out;
  for (size_t i = 0; i < net.hidden(); ++i) {
    if (std::abs(net.n[i]) < kFinalizeThreshold) {
      // relu(~0 * x + b) is the constant max(b, 0).
      if (net.b[i] > 0.0) out.folded_constant += net.m[i] * net.b[i];
      continue;
    }
    out.net.n.push_back(net.n[i]);
    out.net.b.push_back(net.b[i]);
    out.net.m.push_back(net.m[i]);
  }
  return out;
}

TrainResult calibrate(const ReluNet1H& net, std::span<const double> samples,
                      const std::function<double(double)>& ref, const TrainConfig& cfg) {
  if (samples.empty()) throw DomainError("calibrate: no samples");
  std::vector<Sample> data;
  data.reserve(samples.size());
  for (double x : samples) data.push_back({x, ref(x)});
  return train(net, data, cfg);
}

}  // namespace nnlut
