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

#include "glassbench/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

#include "glassbench/error.hpp"
#include "glassbench/rng.hpp"

namespace glassbench {

const char* family_name(Family family) noexcept {
    return family == Family::Chimera ? "chimera" : "pegasus";
}

Family parse_family(const std::string& name) {
    if (name == "chimera") return Family::Chimera;
    if (name == "pegasus") return Family::Pegasus;
    fail(ErrorCode::InvalidArgument, "unknown graph family '" + name + "'");
}

std::string GraphShape::describe() const {
    if (family == Family::Chimera) {
        return "chimera(" + std::to_string(rows) + "," + std::to_string(cols) + "," +
               std::to_string(shore) + ")";
    }
    return "pegasus(" + std::to_string(m) + ")";
}

HardwareGraph::HardwareGraph(GraphShape shape, std::vector<bool> present,
                             std::vector<Coupler> couplers)
    : shape_(shape), present_(std::move(present)), couplers_(std::move(couplers)) {
    std::sort(couplers_.begin(), couplers_.end());
    couplers_.erase(std::unique(couplers_.begin(), couplers_.end()), couplers_.end());
    adjacency_.assign(present_.size(), {});
    coupler_keys_.reserve(couplers_.size() * 2);
    for (const Coupler& c : couplers_) {
        adjacency_[c.a].push_back(c.b);
        adjacency_[c.b].push_back(c.a);
        coupler_keys_.insert(c.key());
    }
    for (auto& row : adjacency_) std::sort(row.begin(), row.end());
    for (std::size_t q = 0; q < present_.size(); ++q) {
        if (present_[q]) qubits_.push_back(static_cast<QubitIndex>(q));
    }
}

QubitCoord HardwareGraph::coord(QubitIndex q) const {
    QubitCoord c;
    int rem = q;
    if (shape_.family == Family::Chimera) {
        const int t = shape_.shore;
        c.v[3] = rem % t;
        rem /= t;
        c.v[2] = rem % 2;
        rem /= 2;
        c.v[1] = rem % shape_.cols;
        c.v[0] = rem / shape_.cols;
    } else {
        const int m1 = shape_.m - 1;
        c.v[3] = rem % m1;
        rem /= m1;
        c.v[2] = rem % 12;
        rem /= 12;
        c.v[1] = rem % shape_.m;
        c.v[0] = rem / shape_.m;
    }
    return c;
}

std::optional<QubitIndex> HardwareGraph::index(const QubitCoord& c) const {
    const auto& v = c.v;
    if (shape_.family == Family::Chimera) {
        if (v[0] < 0 || v[0] >= shape_.rows || v[1] < 0 || v[1] >= shape_.cols || v[2] < 0 ||
            v[2] > 1 || v[3] < 0 || v[3] >= shape_.shore) {
            return std::nullopt;
        }
        return ((v[0] * shape_.cols + v[1]) * 2 + v[2]) * shape_.shore + v[3];
    }
    const int m = shape_.m;
    if (v[0] < 0 || v[0] > 1 || v[1] < 0 || v[1] >= m || v[2] < 0 || v[2] >= 12 || v[3] < 0 ||
        v[3] >= m - 1) {
        return std::nullopt;
    }
    return ((v[0] * m + v[1]) * 12 + v[2]) * (m - 1) + v[3];
}

QubitIndex HardwareGraph::index_or_throw(const QubitCoord& c) const {
    auto q = index(c);
    if (!q) {
        fail(ErrorCode::InvalidArgument,
             "qubit coordinate [" + std::to_string(c.v[0]) + "," + std::to_string(c.v[1]) + "," +
                 std::to_string(c.v[2]) + "," + std::to_string(c.v[3]) + "] outside " +
                 shape_.describe());
    }
    return *q;
}

HardwareGraph HardwareGraph::chimera(int rows, int cols, int shore) {
    if (rows < 1 || cols < 1 || shore < 1) {
        fail(ErrorCode::InvalidArgument, "chimera dimensions must be positive");
    }
    GraphShape shape{Family::Chimera, rows, cols, shore, 0};
    const auto idx = [&](int r, int c, int side, int k) {
        return ((r * cols + c) * 2 + side) * shore + k;
    };
    std::vector<bool> present(chimera_qubit_count(rows, cols, shore), true);
    std::vector<Coupler> couplers;
    couplers.reserve(chimera_coupler_count(rows, cols, shore));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            for (int i = 0; i < shore; ++i) {
                for (int j = 0; j < shore; ++j) couplers.emplace_back(idx(r, c, 0, i), idx(r, c, 1, j));
                if (r + 1 < rows) couplers.emplace_back(idx(r, c, 0, i), idx(r + 1, c, 0, i));
                if (c + 1 < cols) couplers.emplace_back(idx(r, c, 1, i), idx(r, c + 1, 1, i));
            }
        }
    }
    return HardwareGraph(shape, std::move(present), std::move(couplers));
}

HardwareGraph HardwareGraph::pegasus(int m) {
    if (m < 2) fail(ErrorCode::InvalidArgument, "pegasus size must be at least 2");
    GraphShape shape{Family::Pegasus, 0, 0, 0, m};
    const int m1 = m - 1;
    const auto idx = [&](int u, int w, int k, int z) { return ((u * m + w) * 12 + k) * m1 + z; };
    const std::size_t space = static_cast<std::size_t>(2) * m * 12 * m1;

    std::vector<Coupler> couplers;
    // external: consecutive z along one track
    for (int u = 0; u < 2; ++u)
        for (int w = 0; w < m; ++w)
            for (int k = 0; k < 12; ++k)
                for (int z = 0; z + 1 < m1; ++z) couplers.emplace_back(idx(u, w, k, z), idx(u, w, k, z + 1));
    // odd: paired tracks 2j / 2j+1
    for (int u = 0; u < 2; ++u)
        for (int w = 0; w < m; ++w)
            for (int k = 0; k < 12; k += 2)
                for (int z = 0; z < m1; ++z) couplers.emplace_back(idx(u, w, k, z), idx(u, w, k + 1, z));
    // internal: a vertical qubit crosses the twelve horizontal tracks inside
    // its span; the offsets place each crossing on a definite (w, z).
    std::vector<int> internal_degree(space, 0);
    for (int w = 0; w < m; ++w) {
        for (int k = 0; k < 12; ++k) {
            for (int z = 0; z < m1; ++z) {
                for (int kk = 0; kk < 12; ++kk) {
                    const int hw = z + (kk < kPegasusVerticalOffsets[k] ? 1 : 0);
                    const int hz = w - (k < kPegasusHorizontalOffsets[kk] ? 1 : 0);
                    if (hw < 0 || hw >= m || hz < 0 || hz >= m1) continue;
                    const int a = idx(0, w, k, z);
                    const int b = idx(1, hw, kk, hz);
                    couplers.emplace_back(a, b);
                    ++internal_degree[a];
                    ++internal_degree[b];
                }
            }
        }
    }
    // Trim boundary qubits without any internal coupler.
    std::vector<bool> present(space);
    for (std::size_t q = 0; q < space; ++q) present[q] = internal_degree[q] > 0;
    std::erase_if(couplers, [&](const Coupler& c) { return !present[c.a] || !present[c.b]; });
    return HardwareGraph(shape, std::move(present), std::move(couplers));
}

HardwareGraph HardwareGraph::ideal(const GraphShape& shape) {
    return shape.family == Family::Chimera ? chimera(shape.rows, shape.cols, shape.shore)
                                           : pegasus(shape.m);
}

HardwareGraph build_chimera(int rows, int cols, int shore) {
    return HardwareGraph::chimera(rows, cols, shore);
}

HardwareGraph build_pegasus(int m) { return HardwareGraph::pegasus(m); }

HardwareGraph apply_defects(const HardwareGraph& graph, const DefectMask& mask) {
    const HardwareGraph ideal = HardwareGraph::ideal(graph.shape());
    for (QubitIndex q : mask.qubits) {
        if (!ideal.has_qubit(q)) {
            fail(ErrorCode::MaskMismatch, "defect mask removes qubit " + std::to_string(q) +
                                              " which is not in " + graph.shape().describe());
        }
    }
    for (const Coupler& c : mask.couplers) {
        if (!ideal.has_coupler(c)) {
            fail(ErrorCode::MaskMismatch, "defect mask removes coupler (" + std::to_string(c.a) + "," +
                                              std::to_string(c.b) + ") which is not in " +
                                              graph.shape().describe());
        }
    }

    DefectMask merged;
    std::set<QubitIndex> dead_qubits(graph.defects().qubits.begin(), graph.defects().qubits.end());
    dead_qubits.insert(mask.qubits.begin(), mask.qubits.end());
    std::set<Coupler> dead_couplers(graph.defects().couplers.begin(), graph.defects().couplers.end());
    dead_couplers.insert(mask.couplers.begin(), mask.couplers.end());
    merged.qubits.assign(dead_qubits.begin(), dead_qubits.end());
    merged.couplers.assign(dead_couplers.begin(), dead_couplers.end());
    merged.provenance = mask.provenance.empty() ? graph.defects().provenance : mask.provenance;

    std::vector<bool> present(ideal.index_space(), false);
    for (QubitIndex q : ideal.qubits()) present[q] = true;
    for (QubitIndex q : merged.qubits) present[q] = false;
    std::vector<Coupler> couplers;
    couplers.reserve(ideal.num_couplers());
    for (const Coupler& c : ideal.couplers()) {
        if (present[c.a] && present[c.b] && !dead_couplers.count(c)) couplers.push_back(c);
    }
    HardwareGraph working(graph.shape(), std::move(present), std::move(couplers));
    working.defects_ = std::move(merged);
    return working;
}

DefectMask sample_defect_mask(const HardwareGraph& graph, std::size_t n_qubits,
                              std::size_t n_couplers, std::uint64_t seed) {
    if (n_qubits > graph.num_qubits()) {
        fail(ErrorCode::CountExceeded, "requested " + std::to_string(n_qubits) +
                                           " qubit defects but the graph has " +
                                           std::to_string(graph.num_qubits()) + " qubits");
    }
    if (n_couplers > graph.num_couplers()) {
        fail(ErrorCode::CountExceeded, "requested " + std::to_string(n_couplers) +
                                           " coupler defects but the graph has " +
                                           std::to_string(graph.num_couplers()) + " couplers");
    }
    DefectMask mask;
    mask.provenance = "seed:" + std::to_string(seed);

    // Partial Fisher-Yates: the first n entries are a uniform sample.
    Rng qubit_rng(derive_seed(seed, {purpose_tag("defects.qubits")}));
    std::vector<QubitIndex> qubits(graph.qubits().begin(), graph.qubits().end());
    for (std::size_t i = 0; i < n_qubits; ++i) {
        std::size_t j = i + qubit_rng.below(qubits.size() - i);
        std::swap(qubits[i], qubits[j]);
    }
    mask.qubits.assign(qubits.begin(), qubits.begin() + static_cast<std::ptrdiff_t>(n_qubits));
    std::sort(mask.qubits.begin(), mask.qubits.end());

    Rng coupler_rng(derive_seed(seed, {purpose_tag("defects.couplers")}));
    std::vector<Coupler> couplers(graph.couplers().begin(), graph.couplers().end());
    for (std::size_t i = 0; i < n_couplers; ++i) {
        std::size_t j = i + coupler_rng.below(couplers.size() - i);
        std::swap(couplers[i], couplers[j]);
    }
    mask.couplers.assign(couplers.begin(), couplers.begin() + static_cast<std::ptrdiff_t>(n_couplers));
    std::sort(mask.couplers.begin(), mask.couplers.end());
    return mask;
}

GraphStats graph_stats(const HardwareGraph& graph) {
    GraphStats stats;
    stats.qubits = graph.num_qubits();
    stats.couplers = graph.num_couplers();
    stats.min_degree = graph.num_qubits() ? std::numeric_limits<int>::max() : 0;
    for (QubitIndex q : graph.qubits()) {
        const int d = graph.degree(q);
        ++stats.degree_histogram[d];
        stats.max_degree = std::max(stats.max_degree, d);
        stats.min_degree = std::min(stats.min_degree, d);
    }

    // BFS 2-colouring over every component.
    std::vector<int> colour(graph.index_space(), -1);
    stats.bipartite = true;
    std::deque<QubitIndex> queue;
    for (QubitIndex start : graph.qubits()) {
        if (colour[start] >= 0) continue;
        colour[start] = 0;
        queue.push_back(start);
        while (!queue.empty() && stats.bipartite) {
            QubitIndex q = queue.front();
            queue.pop_front();
            for (QubitIndex n : graph.neighbors(q)) {
                if (colour[n] < 0) {
                    colour[n] = 1 - colour[q];
                    queue.push_back(n);
                } else if (colour[n] == colour[q]) {
                    stats.bipartite = false;
                    break;
                }
            }
        }
        if (!stats.bipartite) break;
    }
    return stats;
}

}  // namespace glassbench
