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

#include "glassbench/lattice.hpp"

#include <algorithm>
#include <cstdio>

#include "glassbench/error.hpp"
#include "glassbench/rng.hpp"

namespace glassbench {

std::size_t LatticeSpec::full_edge_count() const {
    const std::size_t a = l1, b = l2, c = l3;
    return b * c * (a - 1) + a * c * (b - 1) + a * b * (c - 1);
}

void LatticeSpec::validate() const {
    if (l1 < 1 || l2 < 1 || l3 < 1) {
        fail(ErrorCode::InvalidArgument, "lattice sides must be positive, got " + describe());
    }
}

std::string LatticeSpec::describe() const {
    return std::to_string(l1) + "x" + std::to_string(l2) + "x" + std::to_string(l3);
}

char axis_name(Axis axis) noexcept { return "xyz"[static_cast<int>(axis)]; }

Axis parse_axis(const std::string& name) {
    if (name == "x") return Axis::X;
    if (name == "y") return Axis::Y;
    if (name == "z") return Axis::Z;
    fail(ErrorCode::Parse, "unknown lattice axis '" + name + "'");
}

LogicalGraph::LogicalGraph(const LatticeSpec& spec) : spec_(spec) {
    spec.validate();
    present_.assign(spec.num_sites(), true);
    sites_.resize(spec.num_sites());
    for (SiteIndex s = 0; s < spec.num_sites(); ++s) sites_[s] = s;
    edges_.reserve(spec.full_edge_count());
    for (SiteIndex s = 0; s < spec.num_sites(); ++s) {
        const Site p = site(s);
        if (p.x + 1 < spec.l1) edges_.push_back({s, index({p.x + 1, p.y, p.z}), Axis::X});
        if (p.y + 1 < spec.l2) edges_.push_back({s, index({p.x, p.y + 1, p.z}), Axis::Y});
        if (p.z + 1 < spec.l3) edges_.push_back({s, index({p.x, p.y, p.z + 1}), Axis::Z});
    }
    std::sort(edges_.begin(), edges_.end());
}

LogicalGraph::LogicalGraph(const LatticeSpec& spec, std::vector<SiteIndex> sites,
                           std::vector<LatticeEdge> edges)
    : spec_(spec), sites_(std::move(sites)), edges_(std::move(edges)) {
    spec.validate();
    present_.assign(spec.num_sites(), false);
    std::sort(sites_.begin(), sites_.end());
    sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
    for (SiteIndex s : sites_) {
        if (s < 0 || s >= spec.num_sites()) {
            fail(ErrorCode::InvalidArgument, "site index out of range for " + spec.describe());
        }
        present_[s] = true;
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (const LatticeEdge& e : edges_) {
        if (!has_site(e.a) || !has_site(e.b)) {
            fail(ErrorCode::InvalidArgument, "edge joins a site missing from the logical graph");
        }
        if (make_edge(spec, e.a, e.b) != e) {
            fail(ErrorCode::InvalidArgument, "edge is not a canonical unit step");
        }
    }
}

std::ptrdiff_t LogicalGraph::edge_position(const LatticeEdge& e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return -1;
    return it - edges_.begin();
}

bool LogicalGraph::is_full() const {
    return sites_.size() == static_cast<std::size_t>(spec_.num_sites()) &&
           edges_.size() == spec_.full_edge_count();
}

int LogicalGraph::degree(SiteIndex s) const {
    int d = 0;
    for (const LatticeEdge& e : edges_) d += (e.a == s || e.b == s) ? 1 : 0;
    return d;
}

Site LogicalGraph::site(SiteIndex s) const {
    const int z = s % spec_.l3;
    const int rest = s / spec_.l3;
    return {rest / spec_.l2, rest % spec_.l2, z};
}

SiteIndex LogicalGraph::index(const Site& s) const { return (s.x * spec_.l2 + s.y) * spec_.l3 + s.z; }

bool LogicalGraph::in_bounds(const Site& s) const {
    return s.x >= 0 && s.x < spec_.l1 && s.y >= 0 && s.y < spec_.l2 && s.z >= 0 && s.z < spec_.l3;
}

LogicalGraph build_lattice(const LatticeSpec& spec) { return LogicalGraph(spec); }

LatticeEdge make_edge(const LatticeSpec& spec, SiteIndex p, SiteIndex q) {
    if (p > q) std::swap(p, q);
    const int d = q - p;
    const auto coord = [&](SiteIndex s) {
        return Site{s / spec.l3 / spec.l2, (s / spec.l3) % spec.l2, s % spec.l3};
    };
    const Site a = coord(p), b = coord(q);
    if (d == 1 && a.z + 1 == b.z && a.x == b.x && a.y == b.y) return {p, q, Axis::Z};
    if (d == spec.l3 && a.y + 1 == b.y && a.x == b.x && a.z == b.z) return {p, q, Axis::Y};
    if (d == spec.l3 * spec.l2 && a.x + 1 == b.x && a.y == b.y && a.z == b.z) return {p, q, Axis::X};
    fail(ErrorCode::InvalidArgument, "sites " + std::to_string(p) + " and " + std::to_string(q) +
                                         " are not lattice neighbours");
}

std::string instance_id(const LogicalGraph& graph, std::span<const std::int8_t> couplings,
                        std::uint64_t seed) {
    const LatticeSpec& spec = graph.spec();
    std::string text = spec.describe() + "|" + std::to_string(seed) + "|";
    for (std::size_t i = 0; i < couplings.size(); ++i) {
        const LatticeEdge& e = graph.edges()[i];
        text += std::to_string(e.a) + "-" + std::to_string(e.b) + (couplings[i] > 0 ? "+" : "-") + ";";
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
    return buf;
}

Instance generate_instance(std::shared_ptr<const LogicalGraph> graph, std::uint64_t seed) {
    if (graph->edges().empty()) {
        fail(ErrorCode::EmptyGraph, "cannot generate an instance on a graph without edges");
    }
    Rng rng(derive_seed(seed, {purpose_tag("instance.couplings")}));
    Instance inst;
    inst.couplings.resize(graph->edges().size());
    for (auto& j : inst.couplings) j = rng.coin() ? 1 : -1;
    inst.seed = seed;
    inst.id = instance_id(*graph, inst.couplings, seed);
    inst.graph = std::move(graph);
    return inst;
}

Instance generate_instance(const LogicalGraph& graph, std::uint64_t seed) {
    return generate_instance(std::make_shared<const LogicalGraph>(graph), seed);
}

double logical_energy(const Instance& instance, std::span<const std::int8_t> spins) {
    const LogicalGraph& g = *instance.graph;
    if (spins.size() != static_cast<std::size_t>(g.spec().num_sites())) {
        fail(ErrorCode::IncompleteAssignment, "spin assignment size does not match the lattice");
    }
    for (SiteIndex s : g.sites()) {
        if (spins[s] != 1 && spins[s] != -1) {
            fail(ErrorCode::IncompleteAssignment, "site " + std::to_string(s) + " has no +/-1 spin");
        }
    }
    long energy = 0;
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const LatticeEdge& e = g.edges()[i];
        energy += instance.couplings[i] * spins[e.a] * spins[e.b];
    }
    return static_cast<double>(energy);
}

Site Isometry::apply(const Site& s, int side) const {
    const std::array<int, 3> c{s.x, s.y, s.z};
    std::array<int, 3> out{};
    for (int i = 0; i < 3; ++i) {
        const int v = c[perm[i]];
        out[i] = signs[i] > 0 ? v : side - 1 - v;
    }
    return {out[0], out[1], out[2]};
}

Isometry Isometry::compose(const Isometry& inner) const {
    Isometry r;
    for (int i = 0; i < 3; ++i) {
        r.perm[i] = inner.perm[perm[i]];
        r.signs[i] = signs[i] * inner.signs[perm[i]];
    }
    return r;
}

Isometry Isometry::inverse() const {
    Isometry r;
    for (int i = 0; i < 3; ++i) {
        r.perm[perm[i]] = i;
        r.signs[perm[i]] = signs[i];
    }
    return r;
}

const std::vector<Isometry>& enumerate_isometries() {
    static const std::vector<Isometry> group = [] {
        std::vector<Isometry> out;
        std::array<int, 3> p{0, 1, 2};
        do {
            for (int mask = 0; mask < 8; ++mask) {
                Isometry g;
                g.perm = p;
                for (int i = 0; i < 3; ++i) g.signs[i] = (mask >> (2 - i)) & 1 ? -1 : 1;
                out.push_back(g);
            }
        } while (std::next_permutation(p.begin(), p.end()));
        return out;
    }();
    return group;
}

std::ptrdiff_t isometry_position(const Isometry& g) {
    const auto& all = enumerate_isometries();
    auto it = std::find(all.begin(), all.end(), g);
    return it == all.end() ? -1 : it - all.begin();
}

Instance apply_isometry(const Instance& instance, const Isometry& g) {
    const LogicalGraph& graph = *instance.graph;
    if (!graph.spec().is_cube() || !graph.is_full()) {
        fail(ErrorCode::NotFullCube,
             "isometries act only on the full cubic lattice, got " + graph.spec().describe() +
                 (graph.is_full() ? "" : " with missing sites or edges"));
    }
    const int side = graph.spec().l1;
    Instance out;
    out.graph = instance.graph;
    out.seed = instance.seed;
    out.couplings.assign(instance.couplings.size(), 0);
    for (std::size_t i = 0; i < graph.edges().size(); ++i) {
        const LatticeEdge& e = graph.edges()[i];
        const SiteIndex a = graph.index(g.apply(graph.site(e.a), side));
        const SiteIndex b = graph.index(g.apply(graph.site(e.b), side));
        const std::ptrdiff_t pos = graph.edge_position(make_edge(graph.spec(), a, b));
        out.couplings[static_cast<std::size_t>(pos)] = instance.couplings[i];
    }
    out.id = instance_id(graph, out.couplings, out.seed);
    return out;
}

SpinAssignment apply_isometry(const LatticeSpec& spec, std::span<const std::int8_t> spins,
                              const Isometry& g) {
    if (!spec.is_cube()) fail(ErrorCode::NotFullCube, "isometries act only on cubic lattices");
    const LogicalGraph shape(spec);
    SpinAssignment out(spins.size(), 0);
    for (SiteIndex s = 0; s < spec.num_sites(); ++s) {
        out[shape.index(g.apply(shape.site(s), spec.l1))] = spins[s];
    }
    return out;
}

}  // namespace glassbench
