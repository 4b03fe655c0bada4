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

// Chimera and Pegasus qubit-connectivity graphs.
//
// Qubits are addressed by a dense linear index into the ideal graph's index
// space; QubitCoord carries the family-specific coordinate tuple.
//
//   Chimera(rows, cols, t):  (row, col, side, k), side 0 = vertical,
//                            1 = horizontal, k in [0, t).
//                            index = ((row * cols + col) * 2 + side) * t + k
//   Pegasus(m):              (u, w, k, z), u = orientation, w in [0, m),
//                            k in [0, 12), z in [0, m - 1).
//                            index = ((u * m + w) * 12 + k) * (m - 1) + z

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace glassbench {

enum class Family { Chimera, Pegasus };

const char* family_name(Family family) noexcept;
Family parse_family(const std::string& name);

using QubitIndex = std::int32_t;

struct QubitCoord {
    std::array<int, 4> v{};
    auto operator<=>(const QubitCoord&) const = default;
};

// Unordered qubit pair, stored with a < b.
struct Coupler {
    QubitIndex a = 0;
    QubitIndex b = 0;

    Coupler() = default;
    Coupler(QubitIndex p, QubitIndex q) : a(p < q ? p : q), b(p < q ? q : p) {}

    std::uint64_t key() const noexcept {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint32_t>(b);
    }
    auto operator<=>(const Coupler&) const = default;
};

struct GraphShape {
    Family family = Family::Chimera;
    int rows = 0;   // chimera
    int cols = 0;   // chimera
    int shore = 0;  // chimera
    int m = 0;      // pegasus

    bool operator==(const GraphShape&) const = default;
    std::string describe() const;
};

struct DefectMask {
    std::vector<QubitIndex> qubits;
    std::vector<Coupler> couplers;
    std::string provenance;

    bool empty() const { return qubits.empty() && couplers.empty(); }
};

struct GraphStats {
    std::size_t qubits = 0;
    std::size_t couplers = 0;
    std::map<int, std::size_t> degree_histogram;
    bool bipartite = false;
    int max_degree = 0;
    int min_degree = 0;
};

// Immutable after construction; safe for concurrent readers.
class HardwareGraph {
public:
    static HardwareGraph chimera(int rows, int cols, int shore);
    static HardwareGraph pegasus(int m);
    static HardwareGraph ideal(const GraphShape& shape);

    const GraphShape& shape() const { return shape_; }
    Family family() const { return shape_.family; }

    std::size_t index_space() const { return present_.size(); }
    std::size_t num_qubits() const { return qubits_.size(); }
    std::size_t num_couplers() const { return couplers_.size(); }

    bool has_qubit(QubitIndex q) const {
        return q >= 0 && static_cast<std::size_t>(q) < present_.size() && present_[q];
    }
    bool has_coupler(QubitIndex a, QubitIndex b) const {
        return coupler_keys_.count(Coupler(a, b).key()) != 0;
    }
    bool has_coupler(const Coupler& c) const { return coupler_keys_.count(c.key()) != 0; }

    std::span<const QubitIndex> qubits() const { return qubits_; }
    std::span<const Coupler> couplers() const { return couplers_; }
    std::span<const QubitIndex> neighbors(QubitIndex q) const { return adjacency_[q]; }
    int degree(QubitIndex q) const { return static_cast<int>(adjacency_[q].size()); }

    // Coordinates are defined over the whole index space, present or not.
    QubitCoord coord(QubitIndex q) const;
    // Returns nullopt when the coordinate lies outside the index space.
    std::optional<QubitIndex> index(const QubitCoord& c) const;
    QubitIndex index_or_throw(const QubitCoord& c) const;

    const DefectMask& defects() const { return defects_; }

    HardwareGraph() = default;

private:
    HardwareGraph(GraphShape shape, std::vector<bool> present, std::vector<Coupler> couplers);

    GraphShape shape_;
    std::vector<bool> present_;
    std::vector<QubitIndex> qubits_;
    std::vector<Coupler> couplers_;
    std::vector<std::vector<QubitIndex>> adjacency_;
    std::unordered_set<std::uint64_t> coupler_keys_;
    DefectMask defects_;

    friend HardwareGraph apply_defects(const HardwareGraph& graph, const DefectMask& mask);
};

HardwareGraph build_chimera(int rows, int cols, int shore);
HardwareGraph build_pegasus(int m);

// Mask elements are checked against the ideal graph of the same shape, so
// re-applying a mask that is already in effect is a no-op.
HardwareGraph apply_defects(const HardwareGraph& graph, const DefectMask& mask);

DefectMask sample_defect_mask(const HardwareGraph& graph, std::size_t n_qubits,
                              std::size_t n_couplers, std::uint64_t seed);

GraphStats graph_stats(const HardwareGraph& graph);

// Chimera closed forms.
constexpr std::size_t chimera_qubit_count(std::size_t m, std::size_t n, std::size_t t) {
    return 2 * m * n * t;
}
constexpr std::size_t chimera_coupler_count(std::size_t m, std::size_t n, std::size_t t) {
    return m * n * t * t + t * (m * (n - 1) + n * (m - 1));
}

// Pegasus track offsets (standard layout).
inline constexpr std::array<int, 12> kPegasusVerticalOffsets = {2, 2, 2, 2, 10, 10, 10, 10, 6, 6, 6, 6};
inline constexpr std::array<int, 12> kPegasusHorizontalOffsets = {6, 6, 6, 6, 2, 2, 2, 2, 10, 10, 10, 10};

}  // namespace glassbench
