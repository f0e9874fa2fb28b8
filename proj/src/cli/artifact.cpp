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

#include "nnlut/artifact.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "nnlut/error.hpp"

#ifndef NNLUT_VERSION
#define NNLUT_VERSION "0.0.0"
#endif

namespace nnlut {

std::string_view toolkit_version() { return NNLUT_VERSION; }

std::string_view artifact_kind_name(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::Net: return "net";
    case ArtifactKind::Lut: return "lut";
    case ArtifactKind::Composite: return "composite";
    case ArtifactKind::Report: return "report";
  }
  return "unknown";
}

ArtifactKind parse_artifact_kind(std::string_view name) {
  if (name == "net") return ArtifactKind::Net;
  if (name == "lut") return ArtifactKind::Lut;
  if (name == "composite") return ArtifactKind::Composite;
  if (name == "report") return ArtifactKind::Report;
  throw ArtifactError("unknown artifact kind: " + std::string(name));
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string payload_hash(const nlohmann::json& payload) {
  // nlohmann objects keep keys sorted, so dump() is canonical.
  return "sha256:" + sha256_hex(payload.dump());
}

std::string Artifact::content_hash() const { return payload_hash(payload); }

std::string u64_to_string(uint64_t v) { return std::to_string(v); }

uint64_t u64_from_json(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return j.get<uint64_t>();
  const auto s = j.get<std::string>();
  uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ArtifactError("not a decimal unsigned integer: " + s);
  }
  return v;
}

namespace {

int32_t i32_from_json(const nlohmann::json& j) {
  const auto s = j.get<std::string>();
  int32_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ArtifactError("not a decimal int32: " + s);
  }
  return v;
}

nlohmann::json i32_array(const std::vector<int32_t>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (int32_t x : v) out.push_back(std::to_string(x));
  return out;
}

std::vector<int32_t> i32_vector(const nlohmann::json& j) {
  std::vector<int32_t> out;
  for (const auto& x : j) out.push_back(i32_from_json(x));
  return out;
}

Interval interval_from(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 2) throw ArtifactError("range must hold two numbers");
  return {v[0], v[1]};
}

}  // namespace

nlohmann::json to_json(const Artifact& a) {
  nlohmann::json prov = {{"command_line", a.provenance.command_line},
                         {"seed", u64_to_string(a.provenance.seed)},
                         {"toolkit_version", a.provenance.toolkit_version},
                         {"parents", a.provenance.parents}};
  nlohmann::json manifest = {{"schema_version", kSchemaVersion},
                             {"artifact_kind", artifact_kind_name(a.kind)},
                             {"content_hash", a.content_hash()},
                             {"provenance", prov},
                             {"notes", a.notes}};
  return {{"manifest", manifest}, {"payload", a.payload}};
}

Artifact artifact_from_json(const nlohmann::json& j) {
  Artifact a;
  try {
    const auto& m = j.at("manifest");
    if (m.at("schema_version").get<int>() != kSchemaVersion) {
      throw ArtifactError("unsupported schema version " + m.at("schema_version").dump());
    }
    a.kind = parse_artifact_kind(m.at("artifact_kind").get<std::string>());
    const auto& p = m.at("provenance");
    a.provenance.command_line = p.at("command_line").get<std::vector<std::string>>();
    a.provenance.seed = u64_from_json(p.at("seed"));
    a.provenance.toolkit_version = p.at("toolkit_version").get<std::string>();
    a.provenance.parents = p.at("parents").get<std::vector<std::string>>();
    a.notes = m.value("notes", nlohmann::json::object());
    a.payload = j.at("payload");
    const auto stored = m.at("content_hash").get<std::string>();
    if (stored != a.content_hash()) {
      throw ArtifactError("content hash mismatch: stored " + stored + ", payload hashes to " +
                          a.content_hash());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("malformed artifact: ") + e.what());
  }
  return a;
}

void save_artifact(const std::filesystem::path& path, const Artifact& a) {
  std::ofstream out(path);
  if (!out) throw ArtifactError("cannot write " + path.string());
  out << to_json(a).dump(2) << '\n';
  if (!out) throw ArtifactError("write failed: " + path.string());
}

Artifact load_artifact(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArtifactError("cannot read " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(path.string() + ": invalid JSON: " + e.what());
  }
  return artifact_from_json(j);
}

Artifact load_artifact(const std::filesystem::path& path, ArtifactKind expected) {
  Artifact a = load_artifact(path);
  if (a.kind != expected) {
    throw ArtifactError(path.string() + ": expected a " + std::string(artifact_kind_name(expected)) +
                        " artifact, found " + std::string(artifact_kind_name(a.kind)));
  }
  return a;
}

nlohmann::json net_payload(const NetPayload& p) {
  return {{"target", kind_name(p.target.kind)},
          {"range", {p.target.input_range.lo, p.target.input_range.hi}},
          {"init_policy", policy_name(p.target.init_policy)},
          {"n", p.net.net.n},
          {"b", p.net.net.b},
          {"m", p.net.net.m},
          {"folded_constant", p.net.folded_constant},
          {"training", p.training}};
}

NetPayload parse_net_payload(const nlohmann::json& j) {
  NetPayload p;
  try {
    p.target = make_target_spec(parse_kind(j.at("target").get<std::string>()),
                                interval_from(j.at("range")),
                                parse_policy(j.at("init_policy").get<std::string>()));
    p.net.net.n = j.at("n").get<std::vector<double>>();
    p.net.net.b = j.at("b").get<std::vector<double>>();
    p.net.net.m = j.at("m").get<std::vector<double>>();
    p.net.folded_constant = j.at("folded_constant").get<double>();
    p.training = j.value("training", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("malformed net payload: ") + e.what());
  }
  validate(p.net.net, true);
  return p;
}

nlohmann::json lut_payload(const LutPayload& p) {
  const Lut& l = p.lut;
  nlohmann::json j = {{"target", kind_name(p.target)},
                      {"range", {p.range.lo, p.range.hi}},
                      {"source", p.source},
                      {"precision", precision_name(l.precision())},
                      {"breakpoints", l.breakpoints()},
                      {"slopes", l.slopes()},
                      {"intercepts", l.intercepts()},
                      {"warnings", l.warnings()}};
  if (l.quant()) {
    const QuantParams& q = *l.quant();
    j["quant"] = {{"s_in", q.s_in},
                  {"s_slope", q.s_slope},
                  {"s_out", q.s_out},
                  {"int_breakpoints", i32_array(q.int_breakpoints)},
                  {"int_slopes", i32_array(q.int_slopes)},
                  {"int_intercepts", i32_array(q.int_intercepts)}};
  }
  return j;
}

LutPayload parse_lut_payload(const nlohmann::json& j) {
  try {
    std::optional<QuantParams> quant;
    if (j.contains("quant")) {
      const auto& q = j.at("quant");
      quant = QuantParams{q.at("s_in").get<double>(),
                          q.at("s_slope").get<double>(),
                          q.at("s_out").get<double>(),
                          i32_vector(q.at("int_breakpoints")),
                          i32_vector(q.at("int_slopes")),
                          i32_vector(q.at("int_intercepts"))};
    }
    Lut lut(j.at("breakpoints").get<std::vector<double>>(), j.at("slopes").get<std::vector<double>>(),
            j.at("intercepts").get<std::vector<double>>(),
            parse_precision(j.at("precision").get<std::string>()), std::move(quant),
            j.value("warnings", std::vector<std::string>{}));
    return {parse_kind(j.at("target").get<std::string>()), interval_from(j.at("range")),
            j.value("source", std::string("nn")), std::move(lut)};
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("malformed lut payload: ") + e.what());
  }
}

}  // namespace nnlut
