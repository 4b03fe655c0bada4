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

// Minor embeddings of cubic lattices into Chimera (4-qubit chains) and
// Pegasus (2-qubit chains), physical parameter setting and unembedding.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "glassbench/lattice.hpp"
#include "glassbench/topology.hpp"

namespace glassbench {

struct Chain {
    SiteIndex site = 0;
    std::vector<QubitIndex> qubits;
    std::vector<Coupler> couplers;  // spanning the chain
    bool operator==(const Chain&) const = default;
};

struct EdgeCoupler {
    Coupler coupler;
    double share = 1.0;
    bool operator==(const EdgeCoupler&) const = default;
};

struct EdgeEmbedding {
    LatticeEdge edge;
    std::vector<EdgeCoupler> couplers;
    bool operator==(const EdgeEmbedding&) const = default;
};

struct EmbeddingMap {
    GraphShape target;
    LatticeSpec spec;
    std::vector<Chain> chains;         // sorted by site
    std::vector<EdgeEmbedding> edges;  // sorted by edge
    // Cell offset of the canonical layout this map derives from.
    int origin_x = 0;
    int origin_y = 0;

    const Chain* chain_for(SiteIndex site) const;
    const EdgeEmbedding* edge_for(const LatticeEdge& edge) const;
    std::size_t qubits_used() const;
    // Every qubit of every chain, sorted.
    std::vector<QubitIndex> used_qubits() const;
    bool operator==(const EmbeddingMap&) const = default;
};

int required_chain_length(Family family);

// Canonical site (x, y, z) -> chain layouts on the ideal graph.
EmbeddingMap embed_cubic_chimera(const LatticeSpec& spec, const HardwareGraph& graph);
EmbeddingMap embed_cubic_pegasus(const LatticeSpec& spec, const HardwareGraph& graph);
EmbeddingMap embed_cubic(const LatticeSpec& spec, const HardwareGraph& graph);

struct YieldReport {
    std::size_t sites_embedded = 0;
    std::size_t sites_total = 0;
    std::size_t edges_embedded = 0;
    std::size_t edges_total = 0;
    std::vector<SiteIndex> dropped_sites;
    std::vector<LatticeEdge> dropped_edges;

    double site_yield() const { return sites_total ? double(sites_embedded) / double(sites_total) : 0.0; }
    double edge_yield() const { return edges_total ? double(edges_embedded) / double(edges_total) : 0.0; }
    bool complete() const { return sites_embedded == sites_total && edges_embedded == edges_total; }
};

struct YieldResult {
    LogicalGraph logical;
    EmbeddingMap embedding;
    YieldReport report;
};

inline constexpr int kDefaultYieldPasses = 20;

// Shifts every chain and edge coupler by whole unit cells (dx along the
// first lattice axis, dy along the second). Throws CapacityExceeded if the
// result leaves the ideal graph.
EmbeddingMap translate_embedding(const EmbeddingMap& emb, int dx, int dy);

// Cell offsets at which the canonical layout of `spec` fits, origin first.
std::vector<std::pair<int, int>> placement_offsets(const LatticeSpec& spec, const GraphShape& shape);

// Restricts the template to the working graph, repairs damaged chains from
// a bounded candidate set and runs improvement passes that accept changes
// improving (embedded sites, embedded edges) lexicographically.
YieldResult maximize_yield(const EmbeddingMap& tmpl, const HardwareGraph& working,
                           std::uint64_t seed, int passes = kDefaultYieldPasses);

// Scores every placement of the canonical layout on the working graph,
// runs maximize_yield on the `shortlist` best and keeps the highest yield
// (earlier placement on ties).
YieldResult place_and_maximize(const LatticeSpec& spec, const HardwareGraph& working, std::uint64_t seed,
                               int passes = kDefaultYieldPasses, int shortlist = 4);

// Keeps only the chains and edges of `logical`.
EmbeddingMap restrict_embedding(const EmbeddingMap& emb, const LogicalGraph& logical);

// Sites with a chain and edges with couplers.
LogicalGraph covered_graph(const EmbeddingMap& emb);

// Intersection of logical graphs over the same spec.
LogicalGraph intersect(const LogicalGraph& a, const LogicalGraph& b);

struct ValidationReport {
    bool passed = true;
    std::vector<std::string> violations;
    std::string first() const { return violations.empty() ? std::string() : violations.front(); }
};

ValidationReport validate_embedding(const EmbeddingMap& emb, const HardwareGraph& working,
                                    const LogicalGraph& logical);

inline constexpr double kCouplingMin = -2.0;
inline constexpr double kCouplingMax = 1.0;
inline constexpr double kDefaultChainStrength = 2.0;

// Physical Ising problem. Variables are the used qubits in ascending order;
// `chain_variables[i]` lists positions in `variables` for `chain_sites[i]`.
struct EmbeddedProblem {
    GraphShape target;
    LatticeSpec spec;
    std::string instance_id;
    std::size_t index_space = 0;
    std::vector<QubitIndex> variables;
    std::vector<std::pair<Coupler, double>> values;  // sorted by coupler
    double chain_strength = kDefaultChainStrength;
    double offset = 0.0;
    std::vector<SiteIndex> chain_sites;
    std::vector<std::vector<std::int32_t>> chain_variables;
    std::size_t chain_coupler_count = 0;

    std::optional<double> value(const Coupler& c) const;
};

EmbeddedProblem set_parameters(const Instance& instance, const EmbeddingMap& emb,
                               double chain_strength = kDefaultChainStrength);

// Qubit-indexed over the target index space; unused qubits hold 0.
using PhysicalState = std::vector<std::int8_t>;

double physical_energy(const EmbeddedProblem& problem, std::span<const std::int8_t> state);

// Copies each site's spin onto every qubit of its chain.
PhysicalState embed_spins(const EmbeddedProblem& problem, std::span<const std::int8_t> spins);

struct UnembedResult {
    SpinAssignment spins;
    std::vector<SiteIndex> broken_chains;
    double broken_fraction = 0.0;
};

// Majority vote per chain; exact ties are drawn from Rng(tie_seed), one draw
// per tied chain in ascending site order.
UnembedResult unembed(std::span<const std::int8_t> state, const EmbeddingMap& emb,
                      std::uint64_t tie_seed);

// Unembedding over the dense variable order of an EmbeddedProblem, using the
// same majority and tie rule as unembed(). Returns the broken chain count.
class ChainDecoder {
public:
    explicit ChainDecoder(const EmbeddedProblem& problem);
    std::size_t decode(std::span<const std::int8_t> dense, std::uint64_t tie_seed,
                       SpinAssignment& out) const;
    std::size_t num_chains() const { return sites_.size(); }

private:
    std::size_t num_sites_ = 0;
    std::vector<SiteIndex> sites_;
    std::vector<std::int32_t> offsets_;
    std::vector<std::int32_t> vars_;
};

}  // namespace glassbench
