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

// Self-check suite behind `glassbench verify`.

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace glassbench {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    // Optional fixture: an embedding file, validated against a graph file
    // (or the ideal graph of its target when no graph is given).
    std::optional<std::filesystem::path> embedding;
    std::optional<std::filesystem::path> graph;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool passed() const;
};

using CheckCallback = std::function<void(const CheckResult&)>;

CheckResult check_topology_counts();
CheckResult check_capacity();
CheckResult check_chain_strength();
CheckResult check_coupling_values();
CheckResult check_tts_identities();
CheckResult check_isometry_group();
CheckResult check_embedding_fixture(const std::filesystem::path& embedding,
                                    const std::optional<std::filesystem::path>& graph);

VerifyReport run_verification(const VerifyOptions& options, const CheckCallback& on_check = {});

}  // namespace glassbench
