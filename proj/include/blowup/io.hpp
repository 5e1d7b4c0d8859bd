// Copyright 2026 The Blowup Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// JSON documents: instance files, embeddings, run reports, round logs and
// embedding-state dumps.

#ifndef BLOWUP_IO_HPP
#define BLOWUP_IO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "blowup/batch.hpp"
#include "blowup/embedder.hpp"
#include "blowup/instance.hpp"

namespace blowup {

using Json = nlohmann::ordered_json;

inline constexpr int kInstanceFormatVersion = 1;
inline constexpr int kStateFormatVersion = 1;

/// Host adjacency is stored per cluster edge (i, j) as N hex rows, row a
/// holding the neighbours of vertex iN + a inside cluster j.
Json instance_to_json(const Instance& inst);

/// Throws FormatError on a malformed document and InvariantError when the
/// decoded instance fails validation.
Instance instance_from_json(const Json& doc);

Json params_to_json(const ParameterCascade& p);
ParameterCascade params_from_json(const Json& doc);

Json embedding_to_json(std::span<const VertexId> phi);
std::vector<VertexId> embedding_from_json(const Json& doc);

Json report_to_json(const RunReport& report);
Json round_log_to_json(const RoundLog& log);

Json state_to_json(const EmbeddingState& state, const ParameterCascade& params);
/// Inverse of state_to_json for a host (and pattern) of `n` vertices.
EmbeddingState state_from_json(const Json& doc, std::size_t n);

/// Throws FormatError when the file cannot be read or parsed.
Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline; throws Error on I/O failure.
void write_json_file(const std::filesystem::path& path, const Json& doc);

}  // namespace blowup

#endif  // BLOWUP_IO_HPP
