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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "nnlut/error.hpp"
#include "nnlut/net.hpp"

namespace nnlut {
namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

struct Gradient {
  std::vector<double> n, b, m;

  explicit Gradient(size_t h) : n(h), b(h), m(h) {}
  void clear() {
    std::fill(n.begin(), n.end(), 0.0);
    std::fill(b.begin(), b.end(), 0.0);
    std::fill(m.begin(), m.end(), 0.0);
  }
};

class Adam {
 public:
  explicit Adam(size_t h) : m1_(h), v_(h) {}

  void step(ReluNet1H& net, const Gradient& g, double lr) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    update(net.n, g.n, m1_.n, v_.n, lr, c1, c2);
    update(net.b, g.b, m1_.b, v_.b, lr, c1, c2);
    update(net.m, g.m, m1_.m, v_.m, lr, c1, c2);
  }

 private:
  static void update(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m1,
                     std::vector<double>& v, double lr, double c1, double c2) {
    for (size_t i = 0; i < p.size(); ++i) {
      m1[i] = kBeta1 * m1[i] + (1.0 - kBeta1) * g[i];
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
      p[i] -= lr * (m1[i] / c1) / (std::sqrt(v[i] / c2) + kAdamEps);
    }
  }

  Gradient m1_;
  Gradient v_;
  int t_ = 0;
};

// Accumulates the gradient of the mean loss over `batch` into `g` (cleared
// first) and returns the mean loss. ReLU'(0) is taken as 0.
double loss_and_gradient(const ReluNet1H& net, std::span<const Sample> batch, LossKind loss,
                         Gradient& g, std::vector<double>& pre) {
  g.clear();
  const size_t h = net.hidden();
  const double inv_count = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (const auto& s : batch) {
    double pred = 0.0;
    for (size_t i = 0; i < h; ++i) {
      pre[i] = net.n[i] * s.x + net.b[i];
      pred += pre[i] > 0.0 ? net.m[i] * pre[i] : 0.0;
    }
    const double r = pred - s.y;
    double dr;
    if (loss == LossKind::L1) {
      total += std::abs(r);
      dr = r > 0.0 ? inv_count : (r < 0.0 ? -inv_count : 0.0);
    } else {
      total += r * r;
      dr = 2.0 * r * inv_count;
    }
    if (dr == 0.0) continue;
    for (size_t i = 0; i < h; ++i) {
      if (pre[i] > 0.0) {
        const double dpre = dr * net.m[i];
        g.m[i] += dr * pre[i];
        g.n[i] += dpre * s.x;
        g.b[i] += dpre;
      }
    }
  }
  return total * inv_count;
}

}  // namespace

TrainResult train(const ReluNet1H& start, std::span<const Sample> data, const TrainConfig& cfg) {
  cfg.validate();
  validate(start);
  if (data.empty()) throw PreconditionError("train: empty dataset");

  TrainResult result{start, {}};
  if (cfg.epochs == 0) {
    const double loss = mean_loss(start, data, cfg.loss);
    result.trace.initial_loss = result.trace.final_loss = loss;
    return result;
  }

  const size_t h = start.hidden();
  std::vector<double> xs(data.size());
  for (size_t i = 0; i < data.size(); ++i) xs[i] = data[i].x;
  const InputFrame frame = InputFrame::of_inputs(xs);
  std::vector<Sample> framed_data(data.size());
  for (size_t i = 0; i < data.size(); ++i) framed_data[i] = {frame.normalize(data[i].x), data[i].y};

  ReluNet1H net = frame.to_framed(start);
  ReluNet1H best = net;
  ReluNet1H last_finite = net;
  double last_finite_loss = std::numeric_limits<double>::quiet_NaN();
  double best_loss = std::numeric_limits<double>::infinity();
  Adam adam(h);
  Gradient grad(h);
  std::vector<double> pre(h);

  const bool full_batch = cfg.batch_size == 0 || static_cast<size_t>(cfg.batch_size) >= data.size();
  std::vector<size_t> order;
  std::vector<Sample> batch;
  std::mt19937_64 rng(cfg.seed);
  if (!full_batch) {
    order.resize(data.size());
    std::iota(order.begin(), order.end(), size_t{0});
    batch.reserve(static_cast<size_t>(cfg.batch_size));
  }

  auto record = [&](double loss, int epoch) {
    if (!std::isfinite(loss)) {
      throw TrainingError("training diverged at epoch " + std::to_string(epoch) +
                              " (last finite loss " + std::to_string(last_finite_loss) + ")",
                          frame.to_raw(last_finite), last_finite_loss, epoch);
    }
    if (loss < best_loss) {
      best_loss = loss;
      best = net;
      result.trace.best_epoch = epoch;
    }
    last_finite = net;
    last_finite_loss = loss;
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = cfg.lr_at_epoch(epoch);
    if (full_batch) {
      const double loss = loss_and_gradient(net, framed_data, cfg.loss, grad, pre);
      result.trace.epoch_loss.push_back(loss);
      record(loss, epoch);
      adam.step(net, grad, lr);
      continue;
    }
    const double loss = mean_loss(net, framed_data, cfg.loss);
    result.trace.epoch_loss.push_back(loss);
    record(loss, epoch);
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t start_idx = 0; start_idx < order.size();
         start_idx += static_cast<size_t>(cfg.batch_size)) {
      const size_t stop = std::min(order.size(), start_idx + static_cast<size_t>(cfg.batch_size));
      batch.clear();
      for (size_t k = start_idx; k < stop; ++k) batch.push_back(framed_data[order[k]]);
      loss_and_gradient(net, batch, cfg.loss, grad, pre);
      adam.step(net, grad, lr);
    }
  }
  record(mean_loss(net, framed_data, cfg.loss), cfg.epochs);

  // Report losses of the raw-unit nets; fall back to the untouched start net
  // unless the mapped-back best state is strictly better.
  result.trace.initial_loss = mean_loss(start, data, cfg.loss);
  ReluNet1H candidate = frame.to_raw(best);
  const double candidate_loss = mean_loss(candidate, data, cfg.loss);
  if (result.trace.best_epoch > 0 && candidate_loss < result.trace.initial_loss) {
    result.net = std::move(candidate);
    result.trace.final_loss = candidate_loss;
  } else {
    result.net = start;
    result.trace.best_epoch = 0;
    result.trace.final_loss = result.trace.initial_loss;
  }
  return result;
}

}  // namespace nnlut
