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

// One PASS/FAIL line per acceptance criterion; exits 1 if any fail.

#include <chrono>
#include <cstdlib>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nnlut/composite.hpp"
#include "nnlut/costmodel.hpp"
#include "nnlut/lut.hpp"
#include "nnlut/metrics.hpp"
#include "nnlut/net.hpp"
#include "oracles.hpp"
#include "pinned_thresholds.hpp"

using namespace nnlut;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

int failures = 0;
std::vector<int> only;  // criteria named on the command line; empty runs all

void run(int id, const char* name, const std::function<Outcome()>& body) {
  if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) return;
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

struct Trained {
  TargetSpec spec;
  ReluNet1H raw;
  FinalizedNet net;
  Lut lut;
};

// Default config, 15 hidden neurons (16 entries), seed 1.
Trained train_default(const TargetSpec& spec) {
  TrainConfig cfg;
  cfg.seed = 1;
  const auto data = sample_dataset(spec, static_cast<size_t>(cfg.dataset_size), cfg.seed);
  const auto res = train(init_net(spec, cfg), data, cfg);
  const auto fin = finalize_net(res.net);
  return {spec, res.net, fin, nn_to_lut(fin)};
}

std::map<FunctionKind, Trained>& default_nets() {
  static std::map<FunctionKind, Trained> nets;
  if (nets.empty()) {
    for (auto k : {FunctionKind::Gelu, FunctionKind::Exp, FunctionKind::Recip, FunctionKind::Rsqrt}) {
      nets.emplace(k, train_default(default_target_spec(k)));
    }
  }
  return nets;
}

double lut_mean_l1(const Lut& lut, FunctionKind k, Interval r) {
  return l1_error_curve([&](double x) { return eval_any(lut, x); }, reference_function(k), r, 100000)
      .mean_l1;
}

// ---- 1 -------------------------------------------------------------------

Outcome equivalence() {
  const std::vector<TargetSpec> specs{
      default_target_spec(FunctionKind::Gelu), default_target_spec(FunctionKind::Exp),
      default_target_spec(FunctionKind::Recip), default_target_spec(FunctionKind::Rsqrt),
      make_target_spec(FunctionKind::Gelu, {-5.0, 5.0}, InitPolicy::PositiveWPositiveB),
      make_target_spec(FunctionKind::Gelu, {-5.0, 5.0}, InitPolicy::NegativeWPositiveB),
      make_target_spec(FunctionKind::Recip, {1.0, 1024.0}, InitPolicy::RandomSigned)};
  double worst = 0.0;
  int over = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto& spec = specs[static_cast<size_t>(i) % specs.size()];
    TrainConfig cfg;
    cfg.hidden = 1 + i % 32;
    cfg.seed = static_cast<uint64_t>(1000 + i);
    const auto fin = finalize_net(init_net(spec, cfg));
    const double dev =
        equivalence_deviation(fin, nn_to_lut(fin), widen(spec.input_range, 3.0), kEquivalencePoints);
    worst = std::max(worst, dev);
    if (!(dev <= kEquivalenceTolerance)) ++over;
  }
  return {over == 0, "1000 nets, H 1..32, 3 policies; max relative deviation " + fmt("%.3g", worst) +
                         ", nets over 1e-5: " + std::to_string(over)};
}

// ---- 2 -------------------------------------------------------------------

Outcome default_specs() {
  struct Row {
    FunctionKind kind;
    Interval range;
    InitPolicy policy;
  };
  const Row rows[] = {{FunctionKind::Gelu, {-5.0, 5.0}, InitPolicy::RandomSigned},
                      {FunctionKind::Exp, {-256.0, 0.0}, InitPolicy::PositiveWPositiveB},
                      {FunctionKind::Recip, {1.0, 1024.0}, InitPolicy::NegativeWPositiveB},
                      {FunctionKind::Rsqrt, {0.1, 1024.0}, InitPolicy::NegativeWPositiveB}};
  int bad = 0;
  for (const auto& r : rows) {
    const auto s = default_target_spec(r.kind);
    if (!(s.input_range == r.range && s.init_policy == r.policy)) ++bad;
  }
  int violations = 0;
  bool saw_pos = false, saw_neg = false;
  for (const auto& r : rows) {
    for (uint64_t seed = 0; seed < 100; ++seed) {
      TrainConfig cfg;
      cfg.seed = seed;
      const auto net = init_net(default_target_spec(r.kind), cfg);
      for (size_t i = 0; i < net.hidden(); ++i) {
        switch (r.policy) {
          case InitPolicy::RandomSigned:
            if (!(std::abs(net.n[i]) < 1 && std::abs(net.b[i]) < 1 && std::abs(net.m[i]) < 1)) ++violations;
            (net.n[i] > 0 ? saw_pos : saw_neg) = true;
            break;
          case InitPolicy::PositiveWPositiveB:
            if (!(net.n[i] > 0 && net.b[i] > 0)) ++violations;
            break;
          case InitPolicy::NegativeWPositiveB:
            if (!(net.n[i] < 0 && net.b[i] > 0)) ++violations;
            break;
        }
      }
    }
  }
  return {bad == 0 && violations == 0 && saw_pos && saw_neg,
          "rows mismatched " + std::to_string(bad) + ", sign violations over 100 seeds x 4 rows " +
              std::to_string(violations)};
}

// ---- 3 -------------------------------------------------------------------

Outcome relational() {
  auto& nets = default_nets();
  bool ok = true;
  std::string d;
  for (auto k : {FunctionKind::Recip, FunctionKind::Rsqrt}) {
    const auto r = default_target_spec(k).input_range;
    const double nn = lut_mean_l1(nets.at(k).lut, k, r);
    const double lin = lut_mean_l1(fit_linear_lut(reference_function(k), r, 16), k, r);
    ok = ok && nn <= lin;
    d += std::string(kind_name(k)) + " NN " + fmt("%.3g", nn) + " vs linear " + fmt("%.3g", lin) + "; ";
  }
  const auto r = default_target_spec(FunctionKind::Gelu).input_range;
  const double nn = lut_mean_l1(nets.at(FunctionKind::Gelu).lut, FunctionKind::Gelu, r);
  const double lin = lut_mean_l1(fit_linear_lut(gelu_ref, r, 16), FunctionKind::Gelu, r);
  ok = ok && nn <= kGeluMeanL1Threshold && lin <= kGeluMeanL1Threshold;
  d += "gelu NN " + fmt("%.3g", nn) + ", linear " + fmt("%.3g", lin) + " (pinned " +
       fmt("%.3g", kGeluMeanL1Threshold) + "); includes training";
  return {ok, d};
}

// ---- 4 -------------------------------------------------------------------

Outcome input_scaling() {
  const auto t = train_default(make_target_spec(FunctionKind::Rsqrt, {1.0, 1024.0}));
  const ScaledRsqrt sr(t.lut);
  const auto f = [&](double x) { return scaled_rsqrt(sr, x); };
  const double below = max_relative_error(f, rsqrt_ref, {0.001, 1.0 - 1e-9}, 100000);
  const double above = max_relative_error(f, rsqrt_ref, {1.0, 1024.0}, 100000);
  // The lookup path and the identity 1/sqrt(Sx) * sqrt(S) = 1/sqrt(x).
  int path_mismatch = 0;
  double identity = 0.0;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.001, 1.0);
  for (int i = 0; i < 100000; ++i) {
    const double x = u(rng);
    if (scaled_rsqrt(sr, x) != eval_lut(sr.lut(), x * sr.scale()) * sr.sqrt_scale()) ++path_mismatch;
    identity = std::max(identity, std::abs(rsqrt_ref(x * sr.scale()) * sr.sqrt_scale() * std::sqrt(x) - 1.0));
  }
  return {below <= 2.0 * above && path_mismatch == 0 && identity <= 4e-16,
          "max relative error on (0.001,1) " + fmt("%.4g", below) + " vs (1,1024) " + fmt("%.4g", above) +
              "; lookup-path mismatches " + std::to_string(path_mismatch) +
              ", identity residual " + fmt("%.2g", identity)};
}

// ---- 5 -------------------------------------------------------------------

Outcome calibration() {
  auto& nets = default_nets();
  struct Shift {
    FunctionKind kind;
    std::function<double(std::mt19937_64&)> draw;
    const char* label;
  };
  const std::vector<Shift> shifts{
      {FunctionKind::Recip,
       [](std::mt19937_64& g) { return std::exp(std::uniform_real_distribution<double>(0.0, std::log(16.0))(g)); },
       "recip log-uniform [1,16]"},
      {FunctionKind::Rsqrt,
       [](std::mt19937_64& g) { return std::uniform_real_distribution<double>(0.5, 2.0)(g); },
       "rsqrt [0.5,2]"},
      {FunctionKind::Exp,
       [](std::mt19937_64& g) { return -std::abs(std::normal_distribution<double>(0.0, 3.0)(g)); },
       "exp -|N(0,3)|"},
      {FunctionKind::Gelu,
       [](std::mt19937_64& g) { return std::normal_distribution<double>(0.0, 1.0)(g); },
       "gelu N(0,1)"}};
  bool ok = true;
  std::string d;
  for (const auto& s : shifts) {
    std::mt19937_64 rng(55);
    std::vector<double> cal(2000), held(20000);
    for (auto& x : cal) x = s.draw(rng);
    for (auto& x : held) x = s.draw(rng);
    const auto ref = reference_function(s.kind);
    auto l1 = [&](const ReluNet1H& net, const std::vector<double>& xs) {
      double t = 0.0;
      for (double x : xs) t += std::abs(forward(net, x) - ref(x));
      return t / static_cast<double>(xs.size());
    };
    const auto& start = nets.at(s.kind).raw;
    TrainConfig cfg = TrainConfig::calibration();
    cfg.seed = 5;
    const auto res = calibrate(start, cal, ref, cfg);
    const double b = l1(start, cal), a = l1(res.net, cal);
    const double hb = l1(start, held), ha = l1(res.net, held);
    ok = ok && a <= b + 1e-9 && ha <= hb + 1e-9;
    d += std::string(s.label) + ": " + fmt("%.3g", b) + " -> " + fmt("%.3g", a) + " (held-out " +
         fmt("%.3g", hb) + " -> " + fmt("%.3g", ha) + "); ";
  }
  return {ok, d};
}

// ---- 6 -------------------------------------------------------------------

// Bound on |binary32 eval - exact line| for float s, t.
double b32_error(double s, double t, double x) {
  const double eps = std::ldexp(1.0, -24);
  return eps * (2.01 * std::abs(s * x) + 1.01 * std::abs(s * x + t)) + 1e-300;
}

Outcome precision() {
  auto& nets = default_nets();
  size_t fp16_viol = 0, int_viol = 0, fp16_pts = 0, int_pts = 0;
  double fp16_worst = 0.0, int_worst = 0.0;
  for (auto& [kind, t] : nets) {
    const Interval r = t.spec.input_range;
    const Lut& f32 = t.lut;
    const Lut f16 = to_fp16(f32);
    // Rounding can merge breakpoints, which renumbers segments; the fp16
    // segment at x carries the rounded parameters of the binary32 segment
    // found against the rounded breakpoint list (rightmost of equal ones).
    std::vector<double> rounded;
    for (double d : f32.breakpoints()) rounded.push_back(oracle::round_half(d));
    for (double x : uniform_grid(r, 200000)) {
      const size_t i = f32.segment_index(x);
      const auto k = static_cast<size_t>(std::upper_bound(rounded.begin(), rounded.end(), x) - rounded.begin());
      const size_t j = f16.segment_index(x);
      const double s = f32.slopes()[k], tt = f32.intercepts()[k];
      if (oracle::round_half(s) != f16.slopes()[j] || oracle::round_half(tt) != f16.intercepts()[j]) {
        ++fp16_viol;
        continue;
      }
      double bound = oracle::half_ulp(s) * std::abs(x) + oracle::half_ulp(tt);
      if (i != k) bound += std::abs((f32.slopes()[i] - s) * x + f32.intercepts()[i] - tt);
      bound += b32_error(f32.slopes()[i], f32.intercepts()[i], x) +
               b32_error(f16.slopes()[j], f16.intercepts()[j], x);
      const double e = std::abs(eval_lut(f16, x) - eval_lut(f32, x));
      fp16_worst = std::max(fp16_worst, e);
      if (e > bound) ++fp16_viol;
      ++fp16_pts;
    }
    // Power-of-two input scale giving about 2^15 codes over the widest bound.
    const double span = std::max(std::abs(r.lo), std::abs(r.hi));
    const double s_in = std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(span / 32767.0))));
    const Lut q = to_int32(f32, s_in);
    const auto& p = *q.quant();
    const auto lo = static_cast<int32_t>(std::ceil(r.lo / s_in));
    const auto hi = static_cast<int32_t>(std::floor(r.hi / s_in));
    for (int32_t c = lo; c <= hi; ++c) {
      const double x = c * s_in;
      const size_t seg = f32.segment_index(x);
      const double want = f32.slopes()[seg] * x + f32.intercepts()[seg];
      const auto out = eval_int32(q, c);
      const double e = std::abs(out.value * out.scale - want);
      int_worst = std::max(int_worst, e / (2.0 * p.s_out + std::abs(x) * p.s_slope));
      if (e > 2.0 * p.s_out + std::abs(x) * p.s_slope) ++int_viol;
      ++int_pts;
    }
  }
  return {fp16_viol == 0 && int_viol == 0,
          "fp16: " + std::to_string(fp16_viol) + "/" + std::to_string(fp16_pts) +
              " points over bound (max |fp16-fp32| " + fmt("%.3g", fp16_worst) + "); int32: " +
              std::to_string(int_viol) + "/" + std::to_string(int_pts) +
              " lattice points over bound (worst error/bound " + fmt("%.3f", int_worst) + ")"};
}

// ---- 7 -------------------------------------------------------------------

Outcome cost() {
  bool ok = true;
  std::string d = "identity:";
  for (const auto& col : published_breakdown()) {
    const double s = speedup_from_matmul_share(col.nn_lut[3], col.ibert[3]);
    ok = ok && std::abs(s - col.speedup) <= 0.01;
    d += " " + std::to_string(col.seq_len) + "->" + fmt("%.3f", s) + "/" + fmt("%.2f", col.speedup);
  }
  d += "; model:";
  double last = 0.0;
  for (const auto& col : published_breakdown()) {
    const auto r = cycle_report(WorkloadSpec::roberta_base(col.seq_len), CostParams{});
    ok = ok && r.speedup >= last;
    last = r.speedup;
    d += " " + fmt("%.3f", r.speedup);
  }
  return {ok, d};
}

// ---- 8 -------------------------------------------------------------------

std::vector<double> softmax_row(std::mt19937_64& g) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double sigma = std::exp(std::uniform_real_distribution<double>(std::log(0.25), std::log(4.0))(g));
  std::vector<double> v(128);
  for (auto& x : v) x = sigma * nd(g);
  return v;
}

std::vector<double> layernorm_row(std::mt19937_64& g) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double var = std::exp(std::uniform_real_distribution<double>(std::log(1e-3), std::log(512.0))(g));
  const double mu = std::uniform_real_distribution<double>(-5.0, 5.0)(g);
  std::vector<double> v(128);
  for (auto& x : v) x = mu + std::sqrt(var) * nd(g);
  return v;
}

struct CompositeErrors {
  double softmax = 0.0;
  double layernorm = 0.0;
};

CompositeErrors composite_errors(const Lut& exp_lut, const Lut& div_lut, const ScaledRsqrt& sr,
                                 uint64_t seed, size_t rows) {
  std::mt19937_64 g(seed);
  CompositeErrors e;
  for (size_t r = 0; r < rows; ++r) {
    const auto v = softmax_row(g);
    const auto got = lut_softmax(v, exp_lut, div_lut);
    const auto want = softmax_ref(v);
    for (size_t i = 0; i < v.size(); ++i) e.softmax = std::max(e.softmax, std::abs(got[i] - want[i]));
    const auto w = layernorm_row(g);
    const auto gz = lut_layernorm(w, sr);
    const auto wz = layernorm_ref(w);
    for (size_t i = 0; i < w.size(); ++i) e.layernorm = std::max(e.layernorm, std::abs(gz[i] - wz[i]));
  }
  return e;
}

Lut recalibrated(const ReluNet1H& net, const std::vector<double>& xs, FunctionKind k) {
  TrainConfig cfg = TrainConfig::calibration();
  cfg.seed = 8;
  return nn_to_lut(finalize_net(calibrate(net, xs, reference_function(k), cfg).net));
}

Outcome composites() {
  auto& nets = default_nets();
  const Lut& exp_lut = nets.at(FunctionKind::Exp).lut;
  const Lut& div_lut = nets.at(FunctionKind::Recip).lut;
  const ScaledRsqrt sr(nets.at(FunctionKind::Rsqrt).lut);
  const auto before = composite_errors(exp_lut, div_lut, sr, 808, 10000);

  // Record the scalar inputs each table sees on a disjoint calibration set.
  std::vector<double> exp_in, div_in, rsqrt_in;
  std::mt19937_64 g(909);
  for (int r = 0; r < 1000; ++r) {
    const auto v = softmax_row(g);
    const double mx = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) {
      exp_in.push_back(x - mx);
      sum += std::max(0.0, eval_lut(exp_lut, x - mx));
    }
    CompositeDiagnostics diag;
    lut_softmax(v, exp_lut, div_lut, &diag);
    div_in.push_back(std::ldexp(sum, diag.last_denominator_shift));
    const auto w = layernorm_row(g);
    double mean = 0.0, var = 0.0;
    for (double x : w) mean += x;
    mean /= 128.0;
    for (double x : w) var += (x - mean) * (x - mean);
    var = var / 128.0 + kLayerNormEpsilon;
    rsqrt_in.push_back(var >= 1.0 ? var : std::ldexp(var, sr.scale_exponent()));
  }
  const Lut exp_cal = recalibrated(nets.at(FunctionKind::Exp).raw, exp_in, FunctionKind::Exp);
  const Lut div_cal = recalibrated(nets.at(FunctionKind::Recip).raw, div_in, FunctionKind::Recip);
  const ScaledRsqrt sr_cal(recalibrated(nets.at(FunctionKind::Rsqrt).raw, rsqrt_in, FunctionKind::Rsqrt));
  const auto after = composite_errors(exp_cal, div_cal, sr_cal, 808, 10000);
  return {after.softmax <= 0.01 && after.layernorm <= 0.02,
          "10^4 rows of length 128, calibrated: softmax max abs err " + fmt("%.4g", after.softmax) +
              " (bound 0.01), layernorm " + fmt("%.4g", after.layernorm) +
              " (bound 0.02); uncalibrated " + fmt("%.4g", before.softmax) + " / " +
              fmt("%.4g", before.layernorm)};
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  run(1, "nn-lut equivalence", equivalence);
  run(2, "default target specs", default_specs);
  run(3, "nn-lut vs linear-lut", relational);
  run(4, "rsqrt input scaling", input_scaling);
  run(5, "calibration", calibration);
  run(6, "precision lowering", precision);
  run(7, "cost model", cost);
  run(8, "composite operator bounds", composites);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
