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

// End-to-end experiments: scaling study, head-to-head comparison and the
// cube-isometry study. Outputs land under one directory with a manifest.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "glassbench/metrics.hpp"
#include "glassbench/sampler.hpp"
#include "glassbench/serialize.hpp"
#include "glassbench/topology.hpp"

namespace glassbench {

inline constexpr const char* kCodeVersion = "glassbench 1.0.0";

struct TopologySetting {
    GraphShape shape;
    std::size_t defect_qubits = 0;
    std::size_t defect_couplers = 0;
    std::optional<std::uint64_t> defect_seed;  // derived from the master seed when unset
};

struct IsometrySetting {
    int size = 6;
    int instances = 100;
    int effort = 128;
};

struct ExperimentConfig {
    std::uint64_t master_seed = 2020;
    std::vector<int> sizes{5, 6, 7, 8, 9, 10};
    int instances = 100;
    std::vector<TopologySetting> topologies;
    ProtocolConfig protocol;
    SamplerKind sampler = SamplerKind::SaPhysical;
    double beta_min = 0.1;
    double beta_max = 10.0;
    double chain_strength = kDefaultChainStrength;
    int yield_passes = kDefaultYieldPasses;
    // Logical SA pass that seeds the registry when exact solving is out of reach.
    int reference_reads = 64;
    int reference_effort = 1024;
    IsometrySetting isometry;
    std::string output_dir = "out";
    int parallelism = 1;

    ExperimentConfig();  // chimera 16,16,4 and pegasus 16 working graphs
    void validate() const;
};

Json config_to_json(const ExperimentConfig& config);
// Missing keys keep their defaults; unknown keys are a Config error.
ExperimentConfig config_from_json(const Json& doc);
// `key` is a top-level or dotted config key ("isometry.effort"); `value` is
// JSON text, or a bare string. "families" keeps only the listed topologies;
// "defects" = "none" makes every working graph ideal.
void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

struct ManifestEntry {
    std::string path;  // relative to the output directory
    std::string hash;
    std::size_t bytes = 0;
};

struct RunManifest {
    std::string command;
    Json config;
    std::string code_version = kCodeVersion;
    std::string started;
    std::string finished;
    std::vector<ManifestEntry> outputs;

    const ManifestEntry* find(const std::string& path) const;
};

Json manifest_to_json(const RunManifest& manifest);

using LogFn = std::function<void(const std::string&)>;

struct SkippedSize {
    Family family;
    int size = 0;
    std::string reason;
};

struct ScalingResult {
    RunManifest manifest;
    std::vector<SkippedSize> skipped;
    // Per topology (config order): one InstanceResult per completed task.
    std::vector<std::vector<InstanceResult>> results;
    std::size_t failures = 0;
};

ScalingResult run_scaling(const ExperimentConfig& config, const LogFn& log = {});

struct CompareResult {
    SpeedupReport report;
    std::vector<std::string> files;
};

// Reads two per-instance JSONL result files and writes the speedup CSV and
// the unsolved sets next to it. Throws NoOverlap for disjoint ids.
CompareResult run_compare(const std::filesystem::path& a, const std::filesystem::path& b,
                          const std::filesystem::path& out_csv);

struct IsometryResult {
    RunManifest manifest;
    // Per topology: per instance, the 48 results in isometry order.
    std::vector<std::vector<std::vector<InstanceResult>>> results;
    std::vector<std::vector<IsometrySummary>> summaries;
};

IsometryResult run_isometry(const ExperimentConfig& config, const LogFn& log = {});

std::vector<InstanceResult> read_instance_results(const std::filesystem::path& path);

}  // namespace glassbench
