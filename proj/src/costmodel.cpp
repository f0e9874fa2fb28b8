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

#include "nnlut/costmodel.hpp"

#include <cstdio>
#include <string>

#include "nnlut/error.hpp"

namespace nnlut {

std::string_view backend_name(Backend b) {
  return b == Backend::NnLut ? "nn_lut" : "ibert";
}

double CostParams::macs_per_cycle() const {
  return static_cast<double>(engines) * dot_products_per_engine * dot_length;
}

const OpLatencies& CostParams::latencies(Backend b) const {
  return b == Backend::NnLut ? nn_lut : ibert;
}

void CostParams::validate() const {
  for (const auto* l : {&nn_lut, &ibert}) {
    if (l->gelu < 1 || l->exp < 1 || l->div < 1 || l->rsqrt < 1) {
      throw PreconditionError("cost params: latencies must be >= 1 cycle");
    }
  }
  if (engines < 1 || dot_products_per_engine < 1 || dot_length < 1 || sfu_lanes < 1) {
    throw PreconditionError("cost params: throughput widths must be positive");
  }
  if (!(etc_cycles_per_layer >= 0.0)) throw PreconditionError("cost params: negative overhead");
}

void WorkloadSpec::validate() const {
  if (hidden < 1 || ffn < 1 || heads < 1 || layers < 1 || seq_len < 1) {
    throw PreconditionError("workload: all dimensions must be positive");
  }
}

WorkloadSpec WorkloadSpec::roberta_base(int seq_len) {
  WorkloadSpec w;
  w.seq_len = seq_len;
  return w;
}

OpCounts op_counts(const WorkloadSpec& w) {
  w.validate();
  const uint64_t sl = static_cast<uint64_t>(w.seq_len);
  const uint64_t h = static_cast<uint64_t>(w.hidden);
  const uint64_t ffn = static_cast<uint64_t>(w.ffn);
  const uint64_t heads = static_cast<uint64_t>(w.heads);
  const uint64_t layers = static_cast<uint64_t>(w.layers);

  OpCounts c;
  c.gelu = layers * sl * ffn;
  c.exp = layers * heads * sl * sl;
  c.div = layers * heads * sl;
  c.rsqrt = layers * 2 * sl;
  // Q, K, V and output projections; QK^T and attention-times-V (heads
  // partition the hidden size); the two FFN layers; sum and sum of squares
  // for each LayerNorm.
  const uint64_t per_layer = 4 * sl * h * h + 2 * sl * sl * h + 2 * sl * h * ffn + 2 * 2 * sl * h;
  c.matmul_macs = layers * per_layer;
  c.elementwise = layers * 2 * sl * h;
  c.layers = layers;
  return c;
}

std::string_view category_name(Category c) {
  switch (c) {
    case Category::Gelu: return "GELU";
    case Category::LayerNorm: return "LayerNorm";
    case Category::Softmax: return "Softmax";
    case Category::MatMul: return "MatMul";
    case Category::Etc: return "etc.";
  }
  return "unknown";
}

BackendCycles cycles(const OpCounts& counts, const CostParams& params, Backend backend) {
  params.validate();
  const OpLatencies& lat = params.latencies(backend);
  const double lanes = params.sfu_lanes;
  auto sfu = [&](uint64_t elements, int latency) {
    return static_cast<double>(elements) * latency / lanes;
  };

  BackendCycles r;
  auto set = [&](Category c, double v) { r.cycles[static_cast<size_t>(c)] = v; };
  set(Category::Gelu, sfu(counts.gelu, lat.gelu));
  set(Category::LayerNorm, sfu(counts.rsqrt, lat.rsqrt));
  set(Category::Softmax, sfu(counts.exp, lat.exp) + sfu(counts.div, lat.div));
  set(Category::MatMul, static_cast<double>(counts.matmul_macs) / params.macs_per_cycle());
  set(Category::Etc, sfu(counts.elementwise, 1) +
                        static_cast<double>(counts.layers) * params.etc_cycles_per_layer);
  for (double v : r.cycles) r.total += v;
  for (size_t i = 0; i < r.cycles.size(); ++i) r.percent[i] = 100.0 * r.cycles[i] / r.total;
  return r;
}

CycleReport cycle_report(const WorkloadSpec& w, const CostParams& params) {
  const OpCounts counts = op_counts(w);
  CycleReport r;
  r.workload = w;
  r.ibert = cycles(counts, params, Backend::IBert);
  r.nn_lut = cycles(counts, params, Backend::NnLut);
  r.speedup = r.ibert.total / r.nn_lut.total;
  return r;
}

double speedup_from_matmul_share(double nn_lut_matmul_pct, double ibert_matmul_pct) {
  if (!(nn_lut_matmul_pct > 0.0) || !(ibert_matmul_pct > 0.0)) {
    throw PreconditionError("speedup: MatMul shares must be positive");
  }
  return nn_lut_matmul_pct / ibert_matmul_pct;
}

const std::array<PublishedColumn, 8>& published_breakdown() {
  // {GELU, LayerNorm, Softmax, MatMul, etc.}
  static const std::array<PublishedColumn, 8> table{{
      {16, {6.55, 9.82, 1.36, 81.17, 1.09}, {4.71, 5.89, 0.59, 87.63, 1.18}, 1.08},
      {32, {6.58, 9.86, 1.37, 81.64, 0.55}, {4.73, 5.92, 0.59, 88.17, 0.59}, 1.08},
      {64, {6.45, 9.68, 2.69, 80.65, 0.54}, {4.68, 5.85, 1.17, 87.72, 0.58}, 1.09},
      {128, {6.22, 9.33, 5.18, 78.76, 0.52}, {4.57, 5.71, 2.29, 86.86, 0.57}, 1.10},
      {256, {5.80, 8.70, 9.66, 75.36, 0.48}, {4.37, 5.46, 4.37, 85.25, 0.55}, 1.13},
      {384, {5.43, 8.14, 13.57, 72.40, 0.45}, {4.19, 5.24, 6.28, 83.77, 0.52}, 1.16},
      {512, {5.11, 7.66, 17.02, 69.79, 0.43}, {4.02, 5.03, 8.04, 82.41, 0.50}, 1.18},
      {1024, {4.12, 6.19, 27.49, 61.86, 0.34}, {3.46, 4.33, 13.85, 77.92, 0.43}, 1.26},
  }};
  return table;
}

std::string format_table(const std::vector<CycleReport>& reports) {
  std::string out;
  char cell[64];
  auto row = [&](const std::string& label, auto value) {
    std::snprintf(cell, sizeof cell, "%-22s", label.c_str());
    out += cell;
    for (const auto& r : reports) {
      std::snprintf(cell, sizeof cell, " %9s", value(r).c_str());
      out += cell;
    }
    out += '\n';
  };
  auto pct = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f", v);
    return std::string(b);
  };

  row("Seq-Length", [](const CycleReport& r) { return std::to_string(r.workload.seq_len); });
  for (Backend b : {Backend::IBert, Backend::NnLut}) {
    const std::string prefix = b == Backend::IBert ? "I-BERT " : "NN-LUT ";
    for (Category c : kCategories) {
      row(prefix + std::string(category_name(c)) + " %", [&](const CycleReport& r) {
        return pct((b == Backend::IBert ? r.ibert : r.nn_lut).share(c));
      });
    }
  }
  row("Speedup (x)", [&](const CycleReport& r) { return pct(r.speedup); });
  return out;
}

nlohmann::json to_json(const CycleReport& report) {
  auto backend = [](const BackendCycles& b) {
    nlohmann::json cyc = nlohmann::json::object(), pct = nlohmann::json::object();
    for (Category c : kCategories) {
      cyc[std::string(category_name(c))] = b.at(c);
      pct[std::string(category_name(c))] = b.share(c);
    }
    return nlohmann::json{{"cycles", cyc}, {"percent", pct}, {"total_cycles", b.total}};
  };
  const auto& w = report.workload;
  return {{"workload",
           {{"hidden", w.hidden},
            {"ffn", w.ffn},
            {"heads", w.heads},
            {"layers", w.layers},
            {"seq_len", w.seq_len}}},
          {"ibert", backend(report.ibert)},
          {"nn_lut", backend(report.nn_lut)},
          {"speedup", report.speedup}};
}

}  // namespace nnlut
