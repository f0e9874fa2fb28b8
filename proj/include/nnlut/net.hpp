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

// One-hidden-layer ReLU approximator NN(x) = sum_i m_i * relu(n_i * x + b_i)
// and its training loop.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nnlut/targets.hpp"

namespace nnlut {

struct ReluNet1H {
  std::vector<double> n;  // first-layer weights
  std::vector<double> b;  // first-layer biases
  std::vector<double> m;  // second-layer weights

  size_t hidden() const { return n.size(); }
  bool operator==(const ReluNet1H&) const = default;
};

// Throws PreconditionError unless all three vectors share a length >= 1 and
// every entry is finite. An empty net is allowed when `allow_empty` is set
// (finalization can remove every neuron).
void validate(const ReluNet1H& net, bool allow_empty = false);

// Affine input frame x' = (x - center) / half_width. A net in frame
// coordinates (n', b') computes the same function of x as the raw net
// n = n' / half_width, b = b' - n' * center / half_width.
struct InputFrame {
  double center = 0.0;
  double half_width = 1.0;

  // Maps the interval onto [-1, 1].
  static InputFrame of(Interval range);
  // Frame of the sample inputs' [min, max]; unit width when they coincide.
  static InputFrame of_inputs(std::span<const double> xs);

  double normalize(double x) const { return (x - center) / half_width; }
  ReluNet1H to_raw(const ReluNet1H& framed) const;
  ReluNet1H to_framed(const ReluNet1H& raw) const;
};

// A net whose every first-layer weight is non-zero, plus the constant picked
// up from removed neurons with n_i ~ 0 and b_i > 0.
struct FinalizedNet {
  ReluNet1H net;
  double folded_constant = 0.0;

  bool operator==(const FinalizedNet&) const = default;
};

enum class LossKind { L1, L2 };

struct LrMilestone {
  double fraction;    // of total epochs
  double multiplier;  // in (0, 1]
  bool operator==(const LrMilestone&) const = default;
};

struct TrainConfig {
  int hidden = 15;
  int dataset_size = 100000;
  double lr = 1e-3;
  std::vector<LrMilestone> lr_milestones{{0.6, 0.1}, {0.85, 0.1}};
  int epochs = 300;
  LossKind loss = LossKind::L1;
  uint64_t seed = 0;
  // Shuffled minibatches per epoch; 0 selects one full-batch step per epoch.
  int batch_size = 256;

  void validate() const;
  double lr_at_epoch(int epoch) const;

  // Five epochs of small minibatches, no decay.
  static TrainConfig calibration();

  bool operator==(const TrainConfig&) const = default;
};

struct Sample {
  double x;
  double y;
};

struct TrainTrace {
  // Mean loss of the parameters at the start of each epoch.
  std::vector<double> epoch_loss;
  double initial_loss = 0.0;
  double final_loss = 0.0;  // loss of the returned parameters
  int best_epoch = 0;       // epochs completed when the returned state was seen
};

struct TrainResult {
  ReluNet1H net;
  TrainTrace trace;
};

// Raised when the loss turns non-finite; carries the last state whose loss
// was finite.
class TrainingError : public std::runtime_error {
 public:
  TrainingError(const std::string& what, ReluNet1H last_finite, double last_loss, int epoch)
      : std::runtime_error(what),
        last_finite_(std::move(last_finite)),
        last_loss_(last_loss),
        epoch_(epoch) {}

  const ReluNet1H& last_finite() const noexcept { return last_finite_; }
  double last_loss() const noexcept { return last_loss_; }
  int epoch() const noexcept { return epoch_; }

 private:
  ReluNet1H last_finite_;
  double last_loss_;
  int epoch_;
};

// Lower bound on |n_i| and b_i for the sign-constrained init policies.
inline constexpr double kInitDelta = 1e-3;
// Neurons with |n_i| below this are folded away by finalize_net.
inline constexpr double kFinalizeThreshold = 1e-9;

// RandomSigned: n, b, m uniform on (-1, 1). The sign-constrained policies
// draw b on (delta, 1) and m on (-1, 1), place each breakpoint -b/n
// log-uniformly inside the part of the input range it can reach, and solve
// for n with the policy's sign. If the range has no point on that side, |n|
// is drawn on (delta, 1).
ReluNet1H init_net(const TargetSpec& spec, const TrainConfig& cfg);

double forward(const ReluNet1H& net, double x);
void forward(const ReluNet1H& net, std::span<const double> xs, std::span<double> out);

std::vector<Sample> sample_dataset(const TargetSpec& spec, size_t size, uint64_t seed);

double mean_loss(const ReluNet1H& net, std::span<const Sample> data, LossKind loss);

/// Adam (beta1 0.9, beta2 0.999, eps 1e-8) on the mean L1 or L2 loss.
///
/// Optimization runs in the input frame of the data (see InputFrame); the
/// result is mapped back to raw units. The returned net is the lowest-loss
/// state visited, so the final loss never exceeds the initial one. With zero
/// epochs the input net comes back unchanged. Runs are bit-reproducible for a
/// fixed config on one platform.
TrainResult train(const ReluNet1H& net, std::span<const Sample> data, const TrainConfig& cfg);

FinalizedNet finalize_net(const ReluNet1H& net);

// Re-fit against `ref` on an empirical input distribution.
TrainResult calibrate(const ReluNet1H& net, std::span<const double> samples,
                      const std::function<double(double)>& ref, const TrainConfig& cfg);

}  // namespace nnlut
