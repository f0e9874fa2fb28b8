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

#include "nnlut/lut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "nnlut/error.hpp"
#include "nnlut/half.hpp"

namespace nnlut {
namespace {

struct Segments {
  std::vector<double> d, s, t;
};

// Drops the segment between any two breakpoints that lie within `tol` of
// each other; the region right of the kept breakpoint takes the right-hand
// segment.
Segments collapse(const std::vector<double>& d, const std::vector<double>& s,
                  const std::vector<double>& t, double tol) {
  Segments out;
  out.s.push_back(s[0]);
  out.t.push_back(t[0]);
  for (size_t k = 0; k < d.size(); ++k) {
    if (!out.d.empty() && d[k] - out.d.back() <= tol) {
      out.s.back() = s[k + 1];
      out.t.back() = t[k + 1];
    } else {
      out.d.push_back(d[k]);
      out.s.push_back(s[k + 1]);
      out.t.push_back(t[k + 1]);
    }
  }
  return out;
}

double to_binary32(double v) { return static_cast<double>(static_cast<float>(v)); }

void require_float_precision(const Lut& lut, const char* fn) {
  if (lut.precision() == Precision::Int32) {
    throw PreconditionError(std::string(fn) + ": int32 table needs eval_int32");
  }
}

int32_t checked_code(double v, const char* field, size_t index) {
  constexpr double lo = std::numeric_limits<int32_t>::min();
  constexpr double hi = std::numeric_limits<int32_t>::max();
  if (!(v >= lo && v <= hi)) {
    std::ostringstream msg;
    msg << "to_int32: " << field << "[" << index << "] = " << v
        << " does not fit a 32-bit signed integer";
    throw QuantizationError(field, msg.str());
  }
  return static_cast<int32_t>(v);
}

}  // namespace

std::string_view precision_name(Precision p) {
  switch (p) {
    case Precision::Binary32: return "fp32";
    case Precision::Binary16Params: return "fp16";
    case Precision::Int32: return "int32";
  }
  return "unknown";
}

Precision parse_precision(std::string_view name) {
  if (name == "fp32") return Precision::Binary32;
  if (name == "fp16") return Precision::Binary16Params;
  if (name == "int32") return Precision::Int32;
  throw PreconditionError("unknown precision: " + std::string(name));
}

Lut::Lut(std::vector<double> breakpoints, std::vector<double> slopes,
         std::vector<double> intercepts, Precision precision, std::optional<QuantParams> quant,
         std::vector<std::string> warnings)
    : breakpoints_(std::move(breakpoints)),
      slopes_(std::move(slopes)),
      intercepts_(std::move(intercepts)),
      precision_(precision),
      quant_(std::move(quant)),
      warnings_(std::move(warnings)) {
  if (slopes_.empty() || slopes_.size() != intercepts_.size() ||
      slopes_.size() != breakpoints_.size() + 1) {
    throw PreconditionError("lut: need |slopes| == |intercepts| == |breakpoints| + 1 >= 1");
  }
  for (const auto* v : {&breakpoints_, &slopes_, &intercepts_}) {
    for (double x : *v) {
      if (!std::isfinite(x)) throw PreconditionError("lut: non-finite entry");
    }
  }
  for (size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i - 1] < breakpoints_[i])) {
      throw PreconditionError("lut: breakpoints must be strictly increasing");
    }
  }
  if (precision_ == Precision::Int32) {
    if (!quant_) throw PreconditionError("lut: int32 table without quantization parameters");
    const auto& q = *quant_;
    if (q.int_breakpoints.size() != breakpoints_.size() || q.int_slopes.size() != slopes_.size() ||
        q.int_intercepts.size() != intercepts_.size()) {
      throw PreconditionError("lut: quantized fields do not match the table shape");
    }
    if (!std::is_sorted(q.int_breakpoints.begin(), q.int_breakpoints.end())) {
      throw PreconditionError("lut: integer breakpoints must be non-decreasing");
    }
    if (!(q.s_in > 0.0 && q.s_slope > 0.0 && q.s_out > 0.0)) {
      throw PreconditionError("lut: scale factors must be positive");
    }
  }
}

size_t Lut::segment_index(double x) const {
  return static_cast<size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) -
                             breakpoints_.begin());
}

Lut make_binary32_lut(std::vector<double> breakpoints, std::vector<double> slopes,
                      std::vector<double> intercepts, double merge_tolerance) {
  if (slopes.size() != breakpoints.size() + 1 || intercepts.size() != slopes.size()) {
    throw PreconditionError("lut: need |slopes| == |intercepts| == |breakpoints| + 1");
  }
  Segments merged = collapse(breakpoints, slopes, intercepts, merge_tolerance);
  for (auto* v : {&merged.d, &merged.s, &merged.t}) {
    for (double& x : *v) x = to_binary32(x);
  }
  merged = collapse(merged.d, merged.s, merged.t, 0.0);
  return Lut(std::move(merged.d), std::move(merged.s), std::move(merged.t));
}

double eval_lut(const Lut& lut, double x) {
  require_float_precision(lut, "eval_lut");
  const size_t i = lut.segment_index(x);
  const float s = static_cast<float>(lut.slopes()[i]);
  const float t = static_cast<float>(lut.intercepts()[i]);
  const float r = s * static_cast<float>(x) + t;
  return static_cast<double>(r);
}

Lut nn_to_lut(const FinalizedNet& fin) {
  const ReluNet1H& net = fin.net;
  validate(net, true);
  const size_t h = net.hidden();
  std::vector<double> bp(h);
  for (size_t j = 0; j < h; ++j) {
    if (net.n[j] == 0.0) {
      throw PreconditionError("nn_to_lut: net is not finalized (n_" + std::to_string(j) + " == 0)");
    }
    bp[j] = -net.b[j] / net.n[j];
    if (!std::isfinite(bp[j])) {
      throw PreconditionError("nn_to_lut: breakpoint of neuron " + std::to_string(j) +
                              " is not finite");
    }
  }
  std::vector<size_t> order(h);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t c) { return bp[a] < bp[c]; });

  std::vector<double> d(h), s(h + 1), t(h + 1);
  for (size_t k = 0; k < h; ++k) d[k] = bp[order[k]];
  // Segment k has the first k sorted breakpoints at or left of it.
  for (size_t k = 0; k <= h; ++k) {
    double slope = 0.0;
    double intercept = fin.folded_constant;
    for (size_t r = 0; r < h; ++r) {
      const size_t j = order[r];
      const bool left = r < k;
      const bool active = left ? net.n[j] > 0.0 : net.n[j] < 0.0;
      if (active) {
        slope += net.m[j] * net.n[j];
        intercept += net.m[j] * net.b[j];
      }
    }
    s[k] = slope;
    t[k] = intercept;
  }
  return make_binary32_lut(std::move(d), std::move(s), std::move(t), kBreakpointMergeTolerance);
}

Lut fit_linear_lut(const std::function<double(double)>& f, Interval range, int entries) {
  if (entries < 2) throw PreconditionError("fit_linear_lut: need at least 2 entries");
  if (!(range.lo < range.hi)) throw PreconditionError("fit_linear_lut: empty range");
  const auto n = static_cast<size_t>(entries);
  const double width = range.width() / static_cast<double>(n);
  std::vector<double> d(n - 1), s(n), t(n);
  for (size_t k = 1; k < n; ++k) d[k - 1] = range.lo + width * static_cast<double>(k);

  constexpr int samples = kLinearFitSamplesPerSegment;
  for (size_t seg = 0; seg < n; ++seg) {
    const double a = seg == 0 ? range.lo : d[seg - 1];
    const double c = seg + 1 == n ? range.hi : d[seg];
    const double mid = 0.5 * (a + c);
    // Centered ordinary least squares: y = slope * (x - mid) + level.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < samples; ++i) {
      const double x = a + (c - a) * i / (samples - 1);
      const double u = x - mid;
      const double y = f(x);
      sx += u;
      sy += y;
      sxx += u * u;
      sxy += u * y;
    }
    const double count = samples;
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    const double level = (sy - slope * sx) / count;
    s[seg] = slope;
    t[seg] = level - slope * mid;
  }
  return make_binary32_lut(std::move(d), std::move(s), std::move(t));
}

Lut to_fp16(const Lut& lut) {
  if (lut.precision() != Precision::Binary32) {
    throw PreconditionError("to_fp16: input table must be binary32");
  }
  std::vector<std::string> warnings = lut.warnings();
  auto lower = [&](const std::vector<double>& src, const char* field) {
    std::vector<double> out(src.size());
    for (size_t i = 0; i < src.size(); ++i) {
      if (std::abs(src[i]) > kBinary16Max) {
        out[i] = std::copysign(kBinary16Max, src[i]);
        std::ostringstream msg;
        msg << "fp16 saturation: " << field << "[" << i << "] = " << src[i] << " -> " << out[i];
        warnings.push_back(msg.str());
      } else {
        out[i] = round_to_binary16(src[i]);
      }
    }
    return out;
  };
  const auto d = lower(lut.breakpoints(), "breakpoints");
  const auto s = lower(lut.slopes(), "slopes");
  const auto t = lower(lut.intercepts(), "intercepts");
  Segments merged = collapse(d, s, t, 0.0);
  return Lut(std::move(merged.d), std::move(merged.s), std::move(merged.t),
             Precision::Binary16Params, std::nullopt, std::move(warnings));
}

Lut to_int32(const Lut& lut, double s_in) {
  if (lut.precision() != Precision::Binary32) {
    throw PreconditionError("to_int32: input table must be binary32");
  }
  if (!(s_in > 0.0) || !std::isfinite(s_in)) {
    throw PreconditionError("to_int32: s_in must be a positive finite scale");
  }
  QuantParams q;
  // Both scales are kept binary32-representable so their product is exact in
  // binary64.
  q.s_in = to_binary32(s_in);
  double max_slope = 0.0;
  for (double s : lut.slopes()) max_slope = std::max(max_slope, std::abs(s));
  if (max_slope == 0.0) {
    if (lut.entries() != 1) {
      throw QuantizationError("slopes",
                              "to_int32: all slopes are zero; use a 1-segment constant table");
    }
    q.s_slope = 1.0;
  } else {
    float scale = static_cast<float>(max_slope / kSlopeCodeMax);
    // Round up so no slope code exceeds kSlopeCodeMax in magnitude.
    if (static_cast<double>(scale) < max_slope / kSlopeCodeMax) {
      scale = std::nextafter(scale, std::numeric_limits<float>::infinity());
    }
    q.s_slope = scale;
  }
  q.s_out = q.s_slope * q.s_in;

  const auto& d = lut.breakpoints();
  const auto& s = lut.slopes();
  const auto& t = lut.intercepts();
  for (size_t i = 0; i < d.size(); ++i) {
    q.int_breakpoints.push_back(checked_code(std::ceil(d[i] / q.s_in), "int_breakpoints", i));
  }
  for (size_t i = 0; i < s.size(); ++i) {
    q.int_slopes.push_back(checked_code(std::nearbyint(s[i] / q.s_slope), "int_slopes", i));
  }
  for (size_t i = 0; i < t.size(); ++i) {
    q.int_intercepts.push_back(checked_code(std::nearbyint(t[i] / q.s_out), "int_intercepts", i));
  }
  return Lut(d, s, t, Precision::Int32, std::move(q), lut.warnings());
}

Int32Output eval_int32(const Lut& lut, int32_t q) {
  if (lut.precision() != Precision::Int32) {
    throw PreconditionError("eval_int32: table is not int32");
  }
  const QuantParams& p = *lut.quant();
  const auto k = static_cast<size_t>(
      std::upper_bound(p.int_breakpoints.begin(), p.int_breakpoints.end(), q) -
      p.int_breakpoints.begin());
  const int64_t acc = static_cast<int64_t>(p.int_slopes[k]) * static_cast<int64_t>(q) +
                      static_cast<int64_t>(p.int_intercepts[k]);
  const int64_t clamped = std::clamp<int64_t>(acc, std::numeric_limits<int32_t>::min(),
                                              std::numeric_limits<int32_t>::max());
  return {static_cast<int32_t>(clamped), p.s_out};
}

double eval_int32_real(const Lut& lut, double x) {
  if (lut.precision() != Precision::Int32) {
    throw PreconditionError("eval_int32_real: table is not int32");
  }
  const double code = std::nearbyint(x / lut.quant()->s_in);
  const double clamped = std::clamp<double>(code, std::numeric_limits<int32_t>::min(),
                                            std::numeric_limits<int32_t>::max());
  const Int32Output out = eval_int32(lut, static_cast<int32_t>(clamped));
  return static_cast<double>(out.value) * out.scale;
}

double eval_any(const Lut& lut, double x) {
  return lut.precision() == Precision::Int32 ? eval_int32_real(lut, x) : eval_lut(lut, x);
}

Interval widen(Interval range, double factor) {
  const double center = 0.5 * (range.lo + range.hi);
  const double half = 0.5 * (range.hi - range.lo) * factor;
  return {center - half, center + half};
}

double equivalence_deviation(const FinalizedNet& net, const Lut& lut, Interval span,
                             size_t points) {
  if (points < 2) throw PreconditionError("equivalence check: need at least 2 points");
  std::vector<double> xs(points), nn(points);
  const double last = static_cast<double>(points - 1);
  for (size_t i = 0; i < points; ++i) {
    xs[i] = span.lo + (span.hi - span.lo) * (static_cast<double>(i) / last);
  }
  xs.back() = span.hi;
  forward(net.net, xs, nn);
  double worst = 0.0;
  for (size_t i = 0; i < points; ++i) {
    const double y = nn[i] + net.folded_constant;
    worst = std::max(worst, std::abs(eval_any(lut, xs[i]) - y) / (1.0 + std::abs(y)));
  }
  return worst;
}

}  // namespace nnlut
