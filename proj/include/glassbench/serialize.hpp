// Copyright 2026 The glassbench Authors
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

// JSON documents for graphs, instances, embeddings, registries and samples.

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "glassbench/embedding.hpp"
#include "glassbench/lattice.hpp"
#include "glassbench/metrics.hpp"
#include "glassbench/sampler.hpp"
#include "glassbench/topology.hpp"

namespace glassbench {

using Json = nlohmann::json;

// { "family", "shape": {...}, "defects": { "qubits": [[..]], "couplers": [[[..],[..]]] } }
// Ideal edges are regenerated on load.
Json graph_to_json(const HardwareGraph& graph);
HardwareGraph graph_from_json(const Json& doc);
Json shape_to_json(const GraphShape& shape);
GraphShape shape_from_json(const Json& family, const Json& shape);

// { "spec": [L1,L2,L3], "sites": [[x,y,z]..], "edges": [[site, site, "x|y|z", J]..],
//   "seed": S, "id": "hex" }
Json instance_to_json(const Instance& instance);
Instance instance_from_json(const Json& doc);

// { "target": {"family","shape"}, "spec": [..], "chains": {"x,y,z": [qubit..]},
//   "chain_couplers": {"x,y,z": [[q,q]..]}, "edges": [[site, site, [[coupler, share]..]]..] }
Json embedding_to_json(const EmbeddingMap& emb);
EmbeddingMap embedding_from_json(const Json& doc);

Json registry_to_json(const GroundTruthRegistry& registry);
GroundTruthRegistry registry_from_json(const Json& doc);

// One JSON object per read: {"read", "energy", "spins"}; labels go in a
// leading header line.
std::string samples_to_jsonl(const SampleSet& samples);

Json instance_result_to_json(const InstanceResult& r);
InstanceResult instance_result_from_json(const Json& doc);

std::string read_text(const std::filesystem::path& path);
// Writes to a sibling temporary file, then renames over the target.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& doc);

std::string content_hash(const std::string& bytes);  // FNV-1a 64, hex

// Fixed-format number for CSV output ("%.12g"); empty for nullopt.
std::string format_number(double value);
std::string format_optional(const std::optional<double>& value);

}  // namespace glassbench
