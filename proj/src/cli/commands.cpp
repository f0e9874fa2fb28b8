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

#include "nnlut/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "nnlut/artifact.hpp"
#include "nnlut/composite.hpp"
#include "nnlut/costmodel.hpp"
#include "nnlut/error.hpp"
#include "nnlut/lut.hpp"
#include "nnlut/metrics.hpp"
#include "nnlut/net.hpp"

namespace nnlut::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  std::vector<std::string> command_line;
  std::ostream& out;
  std::ostream& err;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_double(std::string_view s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || end != t.data() + t.size()) return std::nullopt;
  return v;
}

uint64_t resolve_seed(uint64_t flag) {
  const char* env = std::getenv("NNLUT_SEED");
  if (env == nullptr || *env == '\0') return flag;
  uint64_t v = 0;
  const std::string_view s(env);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw UsageError("NNLUT_SEED must be a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

Provenance provenance(const Context& ctx, uint64_t seed, std::vector<std::string> parents = {}) {
  return {ctx.command_line, seed, std::string(toolkit_version()), std::move(parents)};
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return in;
}

// ---- train ---------------------------------------------------------------

struct TrainArgs {
  std::string target;
  int entries = 16;
  uint64_t seed = 0;
  std::string out;
  std::vector<double> range;
  std::optional<int> epochs;
  std::optional<int> batch_size;
  std::optional<double> lr;
  std::optional<int> dataset_size;
};

int cmd_train(const TrainArgs& a, const Context& ctx) {
  if (a.entries < 2) throw UsageError("--entries must be >= 2 (hidden = entries - 1)");
  const FunctionKind kind = parse_kind(a.target);
  const TargetSpec spec = a.range.empty() ? default_target_spec(kind)
                                          : make_target_spec(kind, {a.range[0], a.range[1]});
  TrainConfig cfg;
  cfg.hidden = a.entries - 1;
  cfg.seed = resolve_seed(a.seed);
  if (a.epochs) cfg.epochs = *a.epochs;
  if (a.batch_size) cfg.batch_size = *a.batch_size;
  if (a.lr) cfg.lr = *a.lr;
  if (a.dataset_size) cfg.dataset_size = *a.dataset_size;
  cfg.validate();

  const auto data = sample_dataset(spec, static_cast<size_t>(cfg.dataset_size), cfg.seed);
  const TrainResult res = train(init_net(spec, cfg), data, cfg);
  const FinalizedNet fin = finalize_net(res.net);

  NetPayload p{spec, fin, {}};
  p.training = {{"hidden", cfg.hidden},
                {"dataset_size", cfg.dataset_size},
                {"epochs", cfg.epochs},
                {"batch_size", cfg.batch_size},
                {"lr", cfg.lr},
                {"loss", "l1"},
                {"seed", u64_to_string(cfg.seed)},
                {"initial_loss", res.trace.initial_loss},
                {"final_loss", res.trace.final_loss},
                {"best_epoch", res.trace.best_epoch}};
  Artifact art{ArtifactKind::Net, provenance(ctx, cfg.seed), net_payload(p)};
  art.notes["removed_neurons"] = res.net.hidden() - fin.net.hidden();
  save_artifact(a.out, art);
  ctx.out << "target " << kind_name(kind) << " range [" << spec.input_range.lo << ", "
          << spec.input_range.hi << "] hidden " << fin.net.hidden() << "\n"
          << "initial mean L1 " << res.trace.initial_loss << "\n"
          << "final mean L1 " << res.trace.final_loss << "\n"
          << "wrote " << a.out << " (" << art.content_hash() << ")\n";
  return kExitOk;
}

// ---- fit-linear ----------------------------------------------------------

int cmd_fit_linear(const std::string& target, int entries, const std::vector<double>& range,
                   const std::string& out, const Context& ctx) {
  if (entries < 1) throw UsageError("--entries must be >= 1");
  const FunctionKind kind = parse_kind(target);
  const TargetSpec spec =
      range.empty() ? default_target_spec(kind) : make_target_spec(kind, {range[0], range[1]});
  Lut lut = fit_linear_lut(reference_function(kind), spec.input_range, entries);
  Artifact art{ArtifactKind::Lut, provenance(ctx, 0),
               lut_payload({kind, spec.input_range, "linear", std::move(lut)})};
  save_artifact(out, art);
  ctx.out << "wrote " << out << " (" << art.content_hash() << ")\n";
  return kExitOk;
}

// ---- convert -------------------------------------------------------------

int cmd_convert(const std::string& net_path, const std::string& out, const std::string& precision,
                std::optional<double> s_in, const Context& ctx) {
  const Precision prec = parse_precision(precision);
  if (prec == Precision::Int32 && !s_in) throw UsageError("--precision int32 requires --s-in");
  const Artifact src = load_artifact(net_path, ArtifactKind::Net);
  const NetPayload np = parse_net_payload(src.payload);

  const Lut exact = nn_to_lut(np.net);
  const Interval span = widen(np.target.input_range, 3.0);
  const double dev = equivalence_deviation(np.net, exact, span);
  if (!(dev <= kEquivalenceTolerance)) {
    throw ContractError("equivalence check failed: max relative deviation " + std::to_string(dev) +
                        " exceeds " + std::to_string(kEquivalenceTolerance));
  }

  Lut lut = exact;
  if (prec == Precision::Binary16Params) lut = to_fp16(exact);
  if (prec == Precision::Int32) lut = to_int32(exact, *s_in);

  Artifact art{ArtifactKind::Lut, provenance(ctx, src.provenance.seed, {src.content_hash()}),
               lut_payload({np.target.kind, np.target.input_range, "nn", lut})};
  art.notes["equivalence"] = {{"max_relative_deviation", dev},
                              {"span", {span.lo, span.hi}},
                              {"points", kEquivalencePoints},
                              {"tolerance", kEquivalenceTolerance}};
  if (prec != Precision::Binary32) {
    art.notes["lowered_max_relative_deviation"] = equivalence_deviation(np.net, lut, span);
  }
  art.notes["warnings"] = lut.warnings();
  save_artifact(out, art);
  ctx.out << "segments " << lut.entries() << " precision " << precision_name(prec) << "\n"
          << "equivalence max relative deviation " << dev << "\n";
  for (const auto& w : lut.warnings()) ctx.out << "warning: " << w << "\n";
  ctx.out << "wrote " << out << " (" << art.content_hash() << ")\n";
  return kExitOk;
}

// ---- eval ----------------------------------------------------------------

struct EvalArgs {
  std::string lut;
  std::vector<double> range;
  long long points = 100000;
  std::string csv;
  std::string out;
  std::string baseline;
};

int cmd_eval(const EvalArgs& a, const Context& ctx) {
  if (a.points < 2) throw UsageError("--points must be >= 2");
  const Artifact art = load_artifact(a.lut, ArtifactKind::Lut);
  const LutPayload lp = parse_lut_payload(art.payload);
  const Interval range = a.range.empty() ? lp.range : Interval{a.range[0], a.range[1]};
  make_target_spec(lp.target, range);  // domain check, names the function
  const auto ref = reference_function(lp.target);
  const auto points = static_cast<size_t>(a.points);

  const ErrorReport report = l1_error_curve([&](double x) { return eval_any(lp.lut, x); }, ref,
                                            range, points, art.content_hash());
  nlohmann::json summary = summary_json(report);
  summary["target"] = kind_name(lp.target);
  std::vector<std::string> parents{art.content_hash()};

  nlohmann::json payload = to_json(report);
  payload["target"] = kind_name(lp.target);
  if (!a.baseline.empty()) {
    const Artifact base_art = load_artifact(a.baseline, ArtifactKind::Lut);
    const LutPayload bp = parse_lut_payload(base_art.payload);
    if (bp.target != lp.target) throw UsageError("--baseline targets a different function");
    const ErrorReport base = l1_error_curve([&](double x) { return eval_any(bp.lut, x); }, ref,
                                            range, points, base_art.content_hash());
    const nlohmann::json cmp = summary_json(compare(report, base));
    summary["baseline"] = summary_json(base);
    summary["comparison"] = cmp;
    payload["baseline"] = summary_json(base);
    payload["comparison"] = cmp;
    parents.push_back(base_art.content_hash());
  }
  if (!a.csv.empty()) {
    std::ofstream csv(a.csv);
    if (!csv) throw UsageError("cannot write " + a.csv);
    write_csv(csv, report);
  }
  if (!a.out.empty()) {
    save_artifact(a.out, {ArtifactKind::Report, provenance(ctx, art.provenance.seed, parents),
                          std::move(payload)});
  }
  ctx.out << summary.dump(2) << "\n";
  return kExitOk;
}

// ---- compose -------------------------------------------------------------

std::vector<std::vector<double>> read_vectors(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  for (size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto v = parse_double(cell);
      if (!v) {
        throw ContractError(path + ":" + std::to_string(lineno) + ": not a number: '" + trim(cell) +
                            "'");
      }
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct ComposeArgs {
  std::string op;
  std::vector<std::string> luts;
  std::string input;
  std::string out;
  std::string bundle;
  int scale_exponent = 10;
  double upper_bound = 1024.0;
};

int cmd_compose(const ComposeArgs& a, const Context& ctx) {
  std::map<FunctionKind, std::pair<Lut, std::string>> by_kind;
  for (const auto& path : a.luts) {
    const Artifact art = load_artifact(path, ArtifactKind::Lut);
    LutPayload lp = parse_lut_payload(art.payload);
    if (by_kind.count(lp.target)) {
      throw UsageError("two LUTs given for " + std::string(kind_name(lp.target)));
    }
    by_kind.emplace(lp.target, std::make_pair(std::move(lp.lut), art.content_hash()));
  }
  std::vector<FunctionKind> needed;
  if (a.op == "softmax") {
    needed = {FunctionKind::Exp, FunctionKind::Recip};
  } else if (a.op == "layernorm") {
    needed = {FunctionKind::Rsqrt};
  } else if (a.op == "gelu") {
    needed = {FunctionKind::Gelu};
  } else {
    throw UsageError("--op must be softmax, layernorm or gelu");
  }
  std::string missing;
  for (FunctionKind k : needed) {
    if (!by_kind.count(k)) {
      if (!missing.empty()) missing += ", ";
      missing += k == FunctionKind::Recip ? "div" : std::string(kind_name(k));
    }
  }
  if (!missing.empty()) throw UsageError(a.op + " needs LUTs for: " + missing);

  const auto rows = read_vectors(a.input);
  CompositeDiagnostics diag;
  std::optional<ScaledRsqrt> sr;
  if (a.op == "layernorm") {
    sr.emplace(by_kind.at(FunctionKind::Rsqrt).first, a.upper_bound, a.scale_exponent);
  }

  std::ofstream csv(a.out);
  if (!csv) throw UsageError("cannot write " + a.out);
  csv << "vector,index,input,output,reference,abs_err\n";
  double worst = 0.0;
  char line[160];
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto& v = rows[r];
    std::vector<double> got, want;
    if (a.op == "softmax") {
      got = lut_softmax(v, by_kind.at(FunctionKind::Exp).first,
                        by_kind.at(FunctionKind::Recip).first, &diag);
      want = softmax_ref(v);
    } else if (a.op == "layernorm") {
      got = lut_layernorm(v, *sr, &diag);
      want = layernorm_ref(v);
    } else {
      const Lut& g = by_kind.at(FunctionKind::Gelu).first;
      for (double x : v) {
        got.push_back(lut_gelu(g, x));
        want.push_back(gelu_ref(x));
      }
    }
    for (size_t i = 0; i < v.size(); ++i) {
      const double e = std::abs(got[i] - want[i]);
      worst = std::max(worst, e);
      std::snprintf(line, sizeof line, "%zu,%zu,%.17g,%.17g,%.17g,%.17g\n", r, i, v[i], got[i],
                    want[i], e);
      csv << line;
    }
  }

  const nlohmann::json diagnostics = {{"rsqrt_calls", diag.rsqrt_calls},
                                      {"rsqrt_scaled", diag.rsqrt_scaled},
                                      {"softmax_calls", diag.softmax_calls},
                                      {"denominator_rescaled", diag.denominator_rescaled},
                                      {"length_warnings", diag.length_warnings}};
  if (!a.bundle.empty()) {
    nlohmann::json luts = nlohmann::json::object();
    std::vector<std::string> parents;
    for (FunctionKind k : needed) {
      luts[std::string(kind_name(k))] = by_kind.at(k).second;
      parents.push_back(by_kind.at(k).second);
    }
    nlohmann::json payload = {{"op", a.op}, {"luts", luts}};
    if (sr) payload["scaled_rsqrt"] = {{"K", a.upper_bound}, {"scale_exponent", a.scale_exponent}};
    Artifact art{ArtifactKind::Composite, provenance(ctx, 0, parents), payload};
    art.notes["diagnostics"] = diagnostics;
    art.notes["max_abs_err"] = worst;
    save_artifact(a.bundle, art);
  }
  ctx.out << "vectors " << rows.size() << " max abs err " << worst << "\n"
          << "diagnostics " << diagnostics.dump() << "\n";
  return kExitOk;
}

// ---- calibrate -----------------------------------------------------------

std::vector<double> read_samples(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<double> xs;
  std::string line;
  for (size_t lineno = 1; std::getline(in, line); ++lineno) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::stringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      const auto v = parse_double(tok);
      if (!v) {
        throw ContractError(path + ":" + std::to_string(lineno) + ": not a number: '" + tok + "'");
      }
      xs.push_back(*v);
    }
  }
  return xs;
}

struct CalibrateArgs {
  std::string net;
  std::string samples;
  int epochs = 5;
  int batch_size = 32;
  uint64_t seed = 0;
  std::string out;
};

int cmd_calibrate(const CalibrateArgs& a, const Context& ctx) {
  const Artifact src = load_artifact(a.net, ArtifactKind::Net);
  NetPayload np = parse_net_payload(src.payload);
  const auto xs = read_samples(a.samples);
  if (xs.empty()) throw UsageError("--samples file holds no values");

  TrainConfig cfg = TrainConfig::calibration();
  cfg.epochs = a.epochs;
  cfg.batch_size = a.batch_size;
  cfg.seed = resolve_seed(a.seed);
  cfg.validate();

  const auto ref = reference_function(np.target.kind);
  const double c = np.net.folded_constant;
  auto loss_of = [&](const ReluNet1H& net, double constant) {
    double total = 0.0;
    for (double x : xs) total += std::abs(forward(net, x) + constant - ref(x));
    return total / static_cast<double>(xs.size());
  };
  const double before = loss_of(np.net.net, c);

  FinalizedNet fin = np.net;
  if (cfg.epochs > 0 && np.net.net.hidden() > 0) {
    // The folded constant stays fixed; the neurons fit what remains.
    const TrainResult res =
        calibrate(np.net.net, xs, [&](double x) { return ref(x) - c; }, cfg);
    fin = finalize_net(res.net);
    fin.folded_constant += c;
  }
  const double after = loss_of(fin.net, fin.folded_constant);

  NetPayload out{np.target, fin, np.training};
  out.training["calibration"] = {{"epochs", cfg.epochs},
                                 {"batch_size", cfg.batch_size},
                                 {"samples", xs.size()},
                                 {"seed", u64_to_string(cfg.seed)},
                                 {"before_mean_l1", before},
                                 {"after_mean_l1", after}};
  Artifact art{ArtifactKind::Net, provenance(ctx, cfg.seed, {src.content_hash()}),
               net_payload(out)};
  save_artifact(a.out, art);
  ctx.out << "mean L1 on samples before " << before << "\n"
          << "mean L1 on samples after " << after << "\n"
          << "wrote " << a.out << " (" << art.content_hash() << ")\n";
  return kExitOk;
}

// ---- cost ----------------------------------------------------------------

std::vector<int> parse_int_list(const std::string& s, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const std::string t = trim(tok);
    int v = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size()) {
      throw UsageError(std::string(flag) + ": not an integer: '" + t + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

OpLatencies parse_latencies(const std::string& s, const char* flag) {
  const auto v = parse_int_list(s, flag);
  if (v.size() != 4) throw UsageError(std::string(flag) + " takes GELU,EXP,DIV,RSQRT");
  return {v[0], v[1], v[2], v[3]};
}

struct CostArgs {
  std::string model_dims;
  std::string sl = "16,32,64,128,256,384,512,1024";
  std::string out;
  std::string nn_latency;
  std::string ibert_latency;
  std::optional<int> sfu_lanes;
  std::optional<double> etc_cycles;
};

int cmd_cost(const CostArgs& a, const Context& ctx) {
  WorkloadSpec base;
  if (!a.model_dims.empty()) {
    std::ifstream in = open_input(a.model_dims);
    try {
      nlohmann::json j;
      in >> j;
      base.hidden = j.value("hidden", base.hidden);
      base.ffn = j.value("ffn", base.ffn);
      base.heads = j.value("heads", base.heads);
      base.layers = j.value("layers", base.layers);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(a.model_dims + ": " + e.what());
    }
  }
  CostParams params;
  if (!a.nn_latency.empty()) params.nn_lut = parse_latencies(a.nn_latency, "--nn-latency");
  if (!a.ibert_latency.empty()) params.ibert = parse_latencies(a.ibert_latency, "--ibert-latency");
  if (a.sfu_lanes) params.sfu_lanes = *a.sfu_lanes;
  if (a.etc_cycles) params.etc_cycles_per_layer = *a.etc_cycles;
  params.validate();

  std::vector<CycleReport> reports;
  for (int sl : parse_int_list(a.sl, "--sl")) {
    WorkloadSpec w = base;
    w.seq_len = sl;
    reports.push_back(cycle_report(w, params));
  }
  ctx.out << format_table(reports);
  if (!a.out.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : reports) rows.push_back(to_json(r));
    const nlohmann::json lat = [&] {
      auto one = [](const OpLatencies& l) {
        return nlohmann::json{{"gelu", l.gelu}, {"exp", l.exp}, {"div", l.div}, {"rsqrt", l.rsqrt}};
      };
      return nlohmann::json{{"nn_lut", one(params.nn_lut)},
                            {"ibert", one(params.ibert)},
                            {"sfu_lanes", params.sfu_lanes},
                            {"macs_per_cycle", params.macs_per_cycle()},
                            {"etc_cycles_per_layer", params.etc_cycles_per_layer}};
    }();
    save_artifact(a.out, {ArtifactKind::Report, provenance(ctx, 0),
                          {{"cost_params", lat}, {"cycle_reports", rows}}});
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"NN-LUT toolkit: train ReLU approximators, convert them to lookup tables, "
               "evaluate and compose them, and estimate cycle savings",
               "nnlut"};
  app.require_subcommand(1);
  Context ctx{args, out, err};

  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train", "train a one-hidden-layer ReLU approximator");
  train_cmd->add_option("--target", ta.target, "gelu | exp | recip (div) | rsqrt")->required();
  train_cmd->add_option("--entries", ta.entries, "LUT entries; hidden neurons = entries - 1")
      ->capture_default_str();
  train_cmd->add_option("--seed", ta.seed, "RNG seed (NNLUT_SEED overrides)")->capture_default_str();
  train_cmd->add_option("--out", ta.out, "output net artifact")->required();
  train_cmd->add_option("--range", ta.range, "input range LO HI")->expected(2);
  train_cmd->add_option("--epochs", ta.epochs, "training epochs");
  train_cmd->add_option("--batch-size", ta.batch_size, "minibatch size, 0 = full batch");
  train_cmd->add_option("--lr", ta.lr, "Adam learning rate");
  train_cmd->add_option("--dataset-size", ta.dataset_size, "uniform samples drawn from the range");

  std::string fl_target, fl_out;
  int fl_entries = 16;
  std::vector<double> fl_range;
  auto* fit_cmd = app.add_subcommand("fit-linear", "equally spaced least-squares baseline LUT");
  fit_cmd->add_option("--target", fl_target)->required();
  fit_cmd->add_option("--entries", fl_entries)->capture_default_str();
  fit_cmd->add_option("--range", fl_range)->expected(2);
  fit_cmd->add_option("--out", fl_out)->required();

  std::string cv_net, cv_out, cv_precision = "fp32";
  std::optional<double> cv_s_in;
  auto* convert_cmd = app.add_subcommand("convert", "convert a net artifact into a LUT");
  convert_cmd->add_option("--net", cv_net)->required();
  convert_cmd->add_option("--out", cv_out)->required();
  convert_cmd->add_option("--precision", cv_precision, "fp32 | fp16 | int32")
      ->capture_default_str();
  convert_cmd->add_option("--s-in", cv_s_in, "input scale for int32");

  EvalArgs ea;
  auto* eval_cmd = app.add_subcommand("eval", "L1 error curve of a LUT against its reference");
  eval_cmd->add_option("--lut", ea.lut)->required();
  eval_cmd->add_option("--range", ea.range)->expected(2);
  eval_cmd->add_option("--points", ea.points)->capture_default_str();
  eval_cmd->add_option("--csv", ea.csv, "write x,ref,approx,abs_err");
  eval_cmd->add_option("--out", ea.out, "write a report artifact");
  eval_cmd->add_option("--baseline", ea.baseline, "second LUT to compare against");

  ComposeArgs ca;
  auto* compose_cmd = app.add_subcommand("compose", "run a composite operator over input vectors");
  compose_cmd->add_option("--op", ca.op, "softmax | layernorm | gelu")->required();
  compose_cmd->add_option("--luts", ca.luts, "LUT artifacts")->required()->expected(1, -1);
  compose_cmd->add_option("--input", ca.input, "one comma-separated vector per line")->required();
  compose_cmd->add_option("--out", ca.out, "output CSV")->required();
  compose_cmd->add_option("--bundle", ca.bundle, "write a composite artifact");
  compose_cmd->add_option("--scale-exponent", ca.scale_exponent, "S = 2^k for rsqrt inputs below 1")
      ->capture_default_str();
  compose_cmd->add_option("--upper-bound", ca.upper_bound, "K, top of the rsqrt table range")
      ->capture_default_str();

  CalibrateArgs cla;
  auto* cal_cmd = app.add_subcommand("calibrate", "re-fit a net on recorded input samples");
  cal_cmd->add_option("--net", cla.net)->required();
  cal_cmd->add_option("--samples", cla.samples, "real values, whitespace or comma separated")
      ->required();
  cal_cmd->add_option("--epochs", cla.epochs)->capture_default_str();
  cal_cmd->add_option("--batch-size", cla.batch_size)->capture_default_str();
  cal_cmd->add_option("--seed", cla.seed)->capture_default_str();
  cal_cmd->add_option("--out", cla.out)->required();

  CostArgs co;
  auto* cost_cmd = app.add_subcommand("cost", "analytic cycle breakdown and speedup");
  cost_cmd->add_option("--model-dims", co.model_dims, "JSON with hidden, ffn, heads, layers");
  cost_cmd->add_option("--sl", co.sl, "comma-separated sequence lengths")->capture_default_str();
  cost_cmd->add_option("--out", co.out, "write a report artifact");
  cost_cmd->add_option("--nn-latency", co.nn_latency, "GELU,EXP,DIV,RSQRT cycles");
  cost_cmd->add_option("--ibert-latency", co.ibert_latency, "GELU,EXP,DIV,RSQRT cycles");
  cost_cmd->add_option("--sfu-lanes", co.sfu_lanes);
  cost_cmd->add_option("--etc-cycles", co.etc_cycles, "fixed overhead per layer");

  try {
    std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rev.begin(), rev.end());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train_cmd) return cmd_train(ta, ctx);
    if (*fit_cmd) return cmd_fit_linear(fl_target, fl_entries, fl_range, fl_out, ctx);
    if (*convert_cmd) return cmd_convert(cv_net, cv_out, cv_precision, cv_s_in, ctx);
    if (*eval_cmd) return cmd_eval(ea, ctx);
    if (*compose_cmd) return cmd_compose(ca, ctx);
    if (*cal_cmd) return cmd_calibrate(cla, ctx);
    if (*cost_cmd) return cmd_cost(co, ctx);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TrainingError& e) {
    err << "training diverged at epoch " << e.epoch() << "; last finite mean loss "
        << e.last_loss() << "\n";
    return kExitDivergence;
  } catch (const QuantizationError& e) {
    err << "quantization error (" << e.field() << "): " << e.what() << "\n";
    return kExitContract;
  } catch (const std::exception& e) {
    // Precondition, domain, artifact and equivalence failures.
    err << "error: " << e.what() << "\n";
    return kExitContract;
  }
  return kExitUsage;
}

}  // namespace nnlut::cli
