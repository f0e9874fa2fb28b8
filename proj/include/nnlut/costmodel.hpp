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

// Analytic cycle model for one transformer encoder stack: element counts per
// non-linear operator times per-element latency, against MatMul cycles from
// MAC throughput.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace nnlut {

enum class Backend { NnLut, IBert };

std::string_view backend_name(Backend b);

// Cycles per scalar element.
struct OpLatencies {
  int gelu;
  int exp;
  int div;
  int rsqrt;

  bool operator==(const OpLatencies&) const = default;
};

struct CostParams {
  OpLatencies nn_lut{2, 2, 2, 2};
  // DIV has no published figure; it defaults to the SQRT latency.
  OpLatencies ibert{3, 4, 5, 5};
  int engines = 2;
  int dot_products_per_engine = 64;
  int dot_length = 16;
  // Special-function lanes working in parallel: one per output channel of
  // each engine's partial-sum vector.
  int sfu_lanes = 32;
  // Fixed overhead added to "etc." for every layer (control, buffering).
  double etc_cycles_per_layer = 0.0;

  double macs_per_cycle() const;
  const OpLatencies& latencies(Backend b) const;
  // PreconditionError on a latency < 1, a non-positive width or a negative
  // overhead.
  void validate() const;
};

struct WorkloadSpec {
  int hidden = 768;
  int ffn = 3072;
  int heads = 12;
  int layers = 12;
  int seq_len = 128;

  void validate() const;
  static WorkloadSpec roberta_base(int seq_len);

  bool operator==(const WorkloadSpec&) const = default;
};

// Element counts over the whole stack.
struct OpCounts {
  uint64_t gelu = 0;         // SL * FFN per layer
  uint64_t exp = 0;          // heads * SL^2 per layer
  uint64_t div = 0;          // one reciprocal per softmax row: heads * SL
  uint64_t rsqrt = 0;        // two LayerNorms: 2 * SL
  uint64_t matmul_macs = 0;  // projections, attention, FFN, LayerNorm mean/variance sums
  uint64_t elementwise = 0;  // residual additions: 2 * SL * hidden
  uint64_t layers = 0;

  bool operator==(const OpCounts&) const = default;
};

OpCounts op_counts(const WorkloadSpec& w);

enum class Category { Gelu, LayerNorm, Softmax, MatMul, Etc };
inline constexpr std::array<Category, 5> kCategories{Category::Gelu, Category::LayerNorm,
                                                     Category::Softmax, Category::MatMul,
                                                     Category::Etc};
std::string_view category_name(Category c);

struct BackendCycles {
  std::array<double, 5> cycles{};   // indexed by Category
  std::array<double, 5> percent{};
  double total = 0.0;

  double at(Category c) const { return cycles[static_cast<size_t>(c)]; }
  double share(Category c) const { return percent[static_cast<size_t>(c)]; }
};

BackendCycles cycles(const OpCounts& counts, const CostParams& params, Backend backend);

struct CycleReport {
  WorkloadSpec workload;
  BackendCycles ibert;
  BackendCycles nn_lut;
  double speedup = 1.0;  // total(I-BERT) / total(NN-LUT)
};

CycleReport cycle_report(const WorkloadSpec& w, const CostParams& params);

// MatMul cycles are the same under both backends, so the speedup equals the
// ratio of MatMul shares.
double speedup_from_matmul_share(double nn_lut_matmul_pct, double ibert_matmul_pct);

// Published relative-cycle breakdown for RoBERTa, by sequence length.
struct PublishedColumn {
  int seq_len;
  std::array<double, 5> ibert;   // percent, indexed by Category
  std::array<double, 5> nn_lut;
  double speedup;
};
const std::array<PublishedColumn, 8>& published_breakdown();

// Aligned text table: one column per report, rows per category and backend.
std::string format_table(const std::vector<CycleReport>& reports);

nlohmann::json to_json(const CycleReport& report);

}  // namespace nnlut
