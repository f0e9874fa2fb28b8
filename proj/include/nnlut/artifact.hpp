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

// JSON artifacts: a manifest (kind, content hash, provenance) wrapped around
// a payload. The hash is SHA-256 over the payload's canonical dump (sorted
// keys, shortest round-trip doubles), so it covers every stored number.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nnlut/lut.hpp"
#include "nnlut/metrics.hpp"
#include "nnlut/net.hpp"
#include "nnlut/targets.hpp"

namespace nnlut {

inline constexpr int kSchemaVersion = 1;
std::string_view toolkit_version();

enum class ArtifactKind { Net, Lut, Composite, Report };
std::string_view artifact_kind_name(ArtifactKind k);
ArtifactKind parse_artifact_kind(std::string_view name);

struct Provenance {
  std::vector<std::string> command_line;
  uint64_t seed = 0;
  std::string toolkit_version;
  std::vector<std::string> parents;  // content hashes
};

struct Artifact {
  ArtifactKind kind = ArtifactKind::Net;
  Provenance provenance;
  nlohmann::json payload;
  // Extra manifest entries (diagnostics, warnings); not hashed.
  nlohmann::json notes = nlohmann::json::object();

  std::string content_hash() const;
};

// Raised for unreadable, malformed or tampered artifact files.
class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(std::string_view bytes);
std::string payload_hash(const nlohmann::json& payload);

nlohmann::json to_json(const Artifact& a);
// Checks schema version and that the stored hash matches the payload.
Artifact artifact_from_json(const nlohmann::json& j);

void save_artifact(const std::filesystem::path& path, const Artifact& a);
// `expected` (if set) must match the stored kind.
Artifact load_artifact(const std::filesystem::path& path);
Artifact load_artifact(const std::filesystem::path& path, ArtifactKind expected);

// 64-bit integers travel as decimal strings.
std::string u64_to_string(uint64_t v);
uint64_t u64_from_json(const nlohmann::json& j);

struct NetPayload {
  TargetSpec target;
  FinalizedNet net;
  nlohmann::json training = nlohmann::json::object();
};
nlohmann::json net_payload(const NetPayload& p);
NetPayload parse_net_payload(const nlohmann::json& j);

struct LutPayload {
  FunctionKind target = FunctionKind::Gelu;
  Interval range{0.0, 0.0};
  std::string source;  // "nn" or "linear"
  Lut lut;
};
nlohmann::json lut_payload(const LutPayload& p);
LutPayload parse_lut_payload(const nlohmann::json& j);

}  // namespace nnlut
