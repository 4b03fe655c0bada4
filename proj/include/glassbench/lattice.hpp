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

// Open-boundary 3D lattices, +/-1 spin-glass instances and the cube
// isometry group.

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace glassbench {

struct LatticeSpec {
    int l1 = 1;
    int l2 = 1;
    int l3 = 1;

    bool operator==(const LatticeSpec&) const = default;
    int num_sites() const { return l1 * l2 * l3; }
    std::size_t full_edge_count() const;
    bool is_cube() const { return l1 == l2 && l2 == l3; }
    void validate() const;
    std::string describe() const;
};

struct Site {
    int x = 0;
    int y = 0;
    int z = 0;
    auto operator<=>(const Site&) const = default;
};

// Sites are numbered (x * l2 + y) * l3 + z, i.e. lexicographically.
using SiteIndex = std::int32_t;

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

char axis_name(Axis axis) noexcept;
Axis parse_axis(const std::string& name);

// Unit step from `a` to the larger site `b` along `axis`.
struct LatticeEdge {
    SiteIndex a = 0;
    SiteIndex b = 0;
    Axis axis = Axis::X;
    auto operator<=>(const LatticeEdge&) const = default;
};

class LogicalGraph {
public:
    LogicalGraph() = default;
    // Builds the full open-boundary lattice.
    explicit LogicalGraph(const LatticeSpec& spec);
    // Subgraph; every edge must join present sites at unit distance.
    LogicalGraph(const LatticeSpec& spec, std::vector<SiteIndex> sites, std::vector<LatticeEdge> edges);

    const LatticeSpec& spec() const { return spec_; }
    std::span<const SiteIndex> sites() const { return sites_; }
    std::span<const LatticeEdge> edges() const { return edges_; }
    bool has_site(SiteIndex s) const {
        return s >= 0 && s < static_cast<SiteIndex>(present_.size()) && present_[s];
    }
    // Position of an edge in edges(), or -1.
    std::ptrdiff_t edge_position(const LatticeEdge& e) const;
    bool is_full() const;
    int degree(SiteIndex s) const;

    Site site(SiteIndex s) const;
    SiteIndex index(const Site& s) const;
    bool in_bounds(const Site& s) const;

    bool operator==(const LogicalGraph& other) const {
        return spec_ == other.spec_ && sites_ == other.sites_ && edges_ == other.edges_;
    }

private:
    LatticeSpec spec_;
    std::vector<bool> present_;
    std::vector<SiteIndex> sites_;
    std::vector<LatticeEdge> edges_;
};

LogicalGraph build_lattice(const LatticeSpec& spec);

// Canonical edge between two sites at unit distance.
LatticeEdge make_edge(const LatticeSpec& spec, SiteIndex p, SiteIndex q);

struct Instance {
    std::shared_ptr<const LogicalGraph> graph;
    std::vector<std::int8_t> couplings;  // aligned with graph->edges()
    std::uint64_t seed = 0;
    std::string id;

    bool operator==(const Instance& other) const {
        return *graph == *other.graph && couplings == other.couplings && seed == other.seed &&
               id == other.id;
    }
};

// Site-indexed over the full lattice; absent sites hold 0.
using SpinAssignment = std::vector<std::int8_t>;

Instance generate_instance(const LogicalGraph& graph, std::uint64_t seed);
Instance generate_instance(std::shared_ptr<const LogicalGraph> graph, std::uint64_t seed);
// Stable FNV-1a digest of (spec, seed, couplings), 16 hex digits.
std::string instance_id(const LogicalGraph& graph, std::span<const std::int8_t> couplings,
                        std::uint64_t seed);

double logical_energy(const Instance& instance, std::span<const std::int8_t> spins);

struct Isometry {
    std::array<int, 3> perm{0, 1, 2};   // output axis i reads input axis perm[i]
    std::array<int, 3> signs{1, 1, 1};  // -1 reflects that output axis
    auto operator<=>(const Isometry&) const = default;

    Site apply(const Site& s, int side) const;
    // (a * b)(s) = a(b(s))
    Isometry compose(const Isometry& inner) const;
    Isometry inverse() const;
};

// Permutations in lexicographic order, then sign vectors with + before -.
const std::vector<Isometry>& enumerate_isometries();
std::ptrdiff_t isometry_position(const Isometry& g);

Instance apply_isometry(const Instance& instance, const Isometry& g);
SpinAssignment apply_isometry(const LatticeSpec& spec, std::span<const std::int8_t> spins,
                              const Isometry& g);

}  // namespace glassbench
