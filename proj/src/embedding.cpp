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

#include "glassbench/embedding.hpp"

#include <algorithm>
#include <tuple>
#include <cmath>
#include <map>
#include <set>

#include "glassbench/error.hpp"
#include "glassbench/rng.hpp"

namespace glassbench {

namespace {

Site site_of(const LatticeSpec& spec, SiteIndex s) {
    return {s / spec.l3 / spec.l2, (s / spec.l3) % spec.l2, s % spec.l3};
}

bool contains(const std::vector<QubitIndex>& qubits, QubitIndex q) {
    return std::find(qubits.begin(), qubits.end(), q) != qubits.end();
}

bool joins(const Coupler& c, const Chain& a, const Chain& b) {
    return (contains(a.qubits, c.a) && contains(b.qubits, c.b)) ||
           (contains(a.qubits, c.b) && contains(b.qubits, c.a));
}

// ---------------------------------------------------------------------------
// Chimera: site (x, y, z) with k = z mod 4, q = z / 4, r = 2x + q, c = 2y + q
// uses the vertical pair V(2x, c), V(2x+1, c) on track kv and the horizontal
// pair H(r, 2y), H(r, 2y+1) on track kh, joined by the internal coupler of
// cell (r, c). The template uses kv = kh = k.

Chain chimera_chain(const HardwareGraph& g, const LatticeSpec& spec, SiteIndex s, int kv, int kh, int ox = 0,
                    int oy = 0) {
    const Site p = site_of(spec, s);
    const int q = p.z / 4;
    const int r = 2 * p.x + q;
    const int c = 2 * p.y + q;
    const auto at = [&](int row, int col, int side, int k) {
        return g.index_or_throw({{row + ox, col + oy, side, k}});
    };
    Chain chain;
    chain.site = s;
    const QubitIndex v0 = at(2 * p.x, c, 0, kv);
    const QubitIndex v1 = at(2 * p.x + 1, c, 0, kv);
    const QubitIndex h0 = at(r, 2 * p.y, 1, kh);
    const QubitIndex h1 = at(r, 2 * p.y + 1, 1, kh);
    chain.qubits = {v0, v1, h0, h1};
    chain.couplers = {Coupler(v0, v1), Coupler(at(r, c, 0, kv), at(r, c, 1, kh)), Coupler(h0, h1)};
    return chain;
}

// ---------------------------------------------------------------------------
// Pegasus: the qubits of P(m) split into three interleaved grids of K4,4
// cells indexed by (X, Y) in [0, m-2]^2. In block t the cell's vertical
// qubits are (0, X + dw_v, 4 gv + i, Y + dz_v) and its horizontal qubits
// are (1, Y + dw_h, 4 gh + i, X + dz_h), i in [0, 4). Horizontal qubits of
// cells (X, Y) and (X+1, Y) on the same track are joined by an external
// coupler, as are vertical qubits of (X, Y) and (X, Y+1).
//
// Site (x, y, z) occupies cell (x, y) and the chain slot z below. Slots run
// through block 0, then block 2, then block 1; consecutive slots always share
// two internal couplers with distinct endpoints.

struct PegasusBlock {
    int gv, gh, dw_v, dz_v, dw_h, dz_h;
};
constexpr PegasusBlock kPegasusBlocks[3] = {
    {0, 2, 1, 0, 0, 0},
    {1, 1, 0, 0, 1, 0},
    {2, 0, 0, 0, 1, 0},
};

struct PegasusSlot {
    int block, vertical, horizontal;
};
constexpr int kPegasusLayers = 12;
constexpr PegasusSlot kPegasusSlots[kPegasusLayers] = {
    {0, 0, 0}, {0, 1, 1}, {0, 2, 2}, {0, 3, 3},
    {2, 2, 1}, {2, 0, 0}, {2, 1, 2}, {2, 3, 3},
    {1, 2, 1}, {1, 0, 0}, {1, 1, 2}, {1, 3, 3},
};

QubitIndex pegasus_vertical(const HardwareGraph& g, int cx, int cy, int block, int i) {
    const PegasusBlock& b = kPegasusBlocks[block];
    return g.index_or_throw({{0, cx + b.dw_v, 4 * b.gv + i, cy + b.dz_v}});
}

QubitIndex pegasus_horizontal(const HardwareGraph& g, int cx, int cy, int block, int i) {
    const PegasusBlock& b = kPegasusBlocks[block];
    return g.index_or_throw({{1, cy + b.dw_h, 4 * b.gh + i, cx + b.dz_h}});
}

Chain pegasus_chain(SiteIndex s, QubitIndex v, QubitIndex h) {
    Chain chain;
    chain.site = s;
    chain.qubits = {v, h};
    chain.couplers = {Coupler(v, h)};
    return chain;
}

Chain pegasus_template_chain(const HardwareGraph& g, const LatticeSpec& spec, SiteIndex s) {
    const Site p = site_of(spec, s);
    const PegasusSlot& slot = kPegasusSlots[p.z];
    return pegasus_chain(s, pegasus_vertical(g, p.x, p.y, slot.block, slot.vertical),
                         pegasus_horizontal(g, p.x, p.y, slot.block, slot.horizontal));
}

// ---------------------------------------------------------------------------

std::vector<Coupler> couplers_between(const Chain& a, const Chain& b, const HardwareGraph& g) {
    std::vector<Coupler> out;
    for (QubitIndex qa : a.qubits) {
        if (!g.has_qubit(qa)) continue;
        for (QubitIndex n : g.neighbors(qa)) {
            if (contains(b.qubits, n)) out.emplace_back(qa, n);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::vector<EdgeCoupler>> find_edge_couplers(const Chain& a, const Chain& b, Axis axis,
                                                           const HardwareGraph& g,
                                                           const EdgeEmbedding* preferred) {
    if (preferred) {
        bool usable = !preferred->couplers.empty();
        for (const EdgeCoupler& ec : preferred->couplers) {
            usable = usable && g.has_coupler(ec.coupler) && joins(ec.coupler, a, b);
        }
        if (usable) return preferred->couplers;
    }
    const std::vector<Coupler> between = couplers_between(a, b, g);
    if (axis != Axis::Z) {
        if (between.empty()) return std::nullopt;
        return std::vector<EdgeCoupler>{{between.front(), 1.0}};
    }
    // z: two couplers with distinct endpoints in both chains.
    const auto side = [&](const Coupler& c, const Chain& chain) {
        return contains(chain.qubits, c.a) ? c.a : c.b;
    };
    for (std::size_t i = 0; i < between.size(); ++i) {
        for (std::size_t j = i + 1; j < between.size(); ++j) {
            if (side(between[i], a) != side(between[j], a) && side(between[i], b) != side(between[j], b)) {
                return std::vector<EdgeCoupler>{{between[i], 0.5}, {between[j], 0.5}};
            }
        }
    }
    return std::nullopt;
}

std::vector<Chain> candidate_chains(const EmbeddingMap& tmpl, const HardwareGraph& g, SiteIndex s) {
    std::vector<Chain> out;
    const Chain* base = tmpl.chain_for(s);
    if (base) out.push_back(*base);
    const Site p = site_of(tmpl.spec, s);
    if (tmpl.target.family == Family::Chimera) {
        for (int kv = 0; kv < 4; ++kv) {
            for (int kh = 0; kh < 4; ++kh) {
                Chain c = chimera_chain(g, tmpl.spec, s, kv, kh, tmpl.origin_x, tmpl.origin_y);
                if (!base || c != *base) out.push_back(std::move(c));
            }
        }
        return out;
    }
    // Any vertical/horizontal pair of the site's cell across all three blocks.
    for (int bv = 0; bv < 3; ++bv) {
        for (int i = 0; i < 4; ++i) {
            const QubitIndex v = pegasus_vertical(g, p.x + tmpl.origin_x, p.y + tmpl.origin_y, bv, i);
            for (int bh = 0; bh < 3; ++bh) {
                for (int j = 0; j < 4; ++j) {
                    const QubitIndex h = pegasus_horizontal(g, p.x + tmpl.origin_x, p.y + tmpl.origin_y, bh, j);
                    Chain c = pegasus_chain(s, v, h);
                    if (base && c == *base) continue;
                    out.push_back(std::move(c));
                }
            }
        }
    }
    return out;
}

void sort_map(EmbeddingMap& emb) {
    std::sort(emb.chains.begin(), emb.chains.end(),
              [](const Chain& a, const Chain& b) { return a.site < b.site; });
    std::sort(emb.edges.begin(), emb.edges.end(),
              [](const EdgeEmbedding& a, const EdgeEmbedding& b) { return a.edge < b.edge; });
}

std::string describe_site(const LatticeSpec& spec, SiteIndex s) {
    const Site p = site_of(spec, s);
    return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + "," + std::to_string(p.z) + ")";
}

std::string describe_edge(const LatticeSpec& spec, const LatticeEdge& e) {
    return describe_site(spec, e.a) + "-" + describe_site(spec, e.b) + " [" + axis_name(e.axis) + "]";
}

}  // namespace

const Chain* EmbeddingMap::chain_for(SiteIndex site) const {
    auto it = std::lower_bound(chains.begin(), chains.end(), site,
                               [](const Chain& c, SiteIndex s) { return c.site < s; });
    return it != chains.end() && it->site == site ? &*it : nullptr;
}

const EdgeEmbedding* EmbeddingMap::edge_for(const LatticeEdge& edge) const {
    auto it = std::lower_bound(edges.begin(), edges.end(), edge,
                               [](const EdgeEmbedding& e, const LatticeEdge& x) { return e.edge < x; });
    return it != edges.end() && it->edge == edge ? &*it : nullptr;
}

std::size_t EmbeddingMap::qubits_used() const {
    std::size_t n = 0;
    for (const Chain& c : chains) n += c.qubits.size();
    return n;
}

std::vector<QubitIndex> EmbeddingMap::used_qubits() const {
    std::vector<QubitIndex> out;
    for (const Chain& c : chains) out.insert(out.end(), c.qubits.begin(), c.qubits.end());
    std::sort(out.begin(), out.end());
    return out;
}

int required_chain_length(Family family) { return family == Family::Chimera ? 4 : 2; }

EmbeddingMap embed_cubic_chimera(const LatticeSpec& spec, const HardwareGraph& graph) {
    spec.validate();
    if (graph.family() != Family::Chimera) {
        fail(ErrorCode::WrongFamily, "four-qubit cubic embedding needs a chimera graph, got " +
                                         graph.shape().describe());
    }
    const GraphShape& shape = graph.shape();
    if (shape.shore != 4) {
        fail(ErrorCode::WrongFamily, "four-qubit cubic embedding needs chimera shore 4, got " +
                                         shape.describe());
    }
    if (spec.l1 > 8 || spec.l2 > 8 || spec.l3 > 8 || shape.rows < 2 * spec.l1 || shape.cols < 2 * spec.l2) {
        fail(ErrorCode::CapacityExceeded,
             "lattice " + spec.describe() + " does not fit " + shape.describe() +
                 " with four-qubit chains (every side at most 8, rows >= 2 L1, cols >= 2 L2)");
    }
    const HardwareGraph ideal = HardwareGraph::ideal(shape);
    const LogicalGraph lattice(spec);
    EmbeddingMap emb;
    emb.target = shape;
    emb.spec = spec;
    for (SiteIndex s : lattice.sites()) {
        const int k = site_of(spec, s).z % 4;
        emb.chains.push_back(chimera_chain(ideal, spec, s, k, k));
    }
    const auto at = [&](int row, int col, int side, int k) { return ideal.index_or_throw({{row, col, side, k}}); };
    for (const LatticeEdge& e : lattice.edges()) {
        const Site p = site_of(spec, e.a);
        const int k = p.z % 4;
        const int q = p.z / 4;
        EdgeEmbedding ee{e, {}};
        if (e.axis == Axis::X) {
            const int c = 2 * p.y + q;
            ee.couplers = {{Coupler(at(2 * p.x + 1, c, 0, k), at(2 * p.x + 2, c, 0, k)), 1.0}};
        } else if (e.axis == Axis::Y) {
            const int r = 2 * p.x + q;
            ee.couplers = {{Coupler(at(r, 2 * p.y + 1, 1, k), at(r, 2 * p.y + 2, 1, k)), 1.0}};
        } else {
            auto found = find_edge_couplers(emb.chains[e.a], emb.chains[e.b], Axis::Z, ideal, nullptr);
            if (!found) fail(ErrorCode::CapacityExceeded, "no split z coupling for " + describe_edge(spec, e));
            ee.couplers = *found;
        }
        emb.edges.push_back(std::move(ee));
    }
    sort_map(emb);
    return emb;
}

EmbeddingMap embed_cubic_pegasus(const LatticeSpec& spec, const HardwareGraph& graph) {
    spec.validate();
    if (graph.family() != Family::Pegasus) {
        fail(ErrorCode::WrongFamily, "two-qubit cubic embedding needs a pegasus graph, got " +
                                         graph.shape().describe());
    }
    const GraphShape& shape = graph.shape();
    if (spec.l1 > shape.m - 1 || spec.l2 > shape.m - 1 || spec.l3 > kPegasusLayers) {
        fail(ErrorCode::CapacityExceeded,
             "lattice " + spec.describe() + " does not fit " + shape.describe() +
                 " with two-qubit chains (L1, L2 at most " + std::to_string(shape.m - 1) + ", L3 at most 12)");
    }
    const HardwareGraph ideal = HardwareGraph::ideal(shape);
    const LogicalGraph lattice(spec);
    EmbeddingMap emb;
    emb.target = shape;
    emb.spec = spec;
    for (SiteIndex s : lattice.sites()) emb.chains.push_back(pegasus_template_chain(ideal, spec, s));
    for (const LatticeEdge& e : lattice.edges()) {
        const Chain& a = emb.chains[e.a];
        const Chain& b = emb.chains[e.b];
        EdgeEmbedding ee{e, {}};
        if (e.axis == Axis::X) {
            ee.couplers = {{Coupler(a.qubits[1], b.qubits[1]), 1.0}};  // horizontal externals
        } else if (e.axis == Axis::Y) {
            ee.couplers = {{Coupler(a.qubits[0], b.qubits[0]), 1.0}};  // vertical externals
        } else {
            const Coupler cross1(a.qubits[0], b.qubits[1]);
            const Coupler cross2(a.qubits[1], b.qubits[0]);
            const Coupler par1(a.qubits[0], b.qubits[0]);
            const Coupler par2(a.qubits[1], b.qubits[1]);
            if (ideal.has_coupler(cross1) && ideal.has_coupler(cross2)) {
                ee.couplers = {{cross1, 0.5}, {cross2, 0.5}};
            } else if (ideal.has_coupler(par1) && ideal.has_coupler(par2)) {
                ee.couplers = {{par1, 0.5}, {par2, 0.5}};
            } else {
                fail(ErrorCode::CapacityExceeded, "no split z coupling for " + describe_edge(spec, e));
            }
        }
        for (const EdgeCoupler& ec : ee.couplers) {
            if (!ideal.has_coupler(ec.coupler)) {
                fail(ErrorCode::CapacityExceeded, "missing coupler for " + describe_edge(spec, e) + " in " +
                                                      shape.describe());
            }
        }
        emb.edges.push_back(std::move(ee));
    }
    sort_map(emb);
    return emb;
}

EmbeddingMap embed_cubic(const LatticeSpec& spec, const HardwareGraph& graph) {
    return graph.family() == Family::Chimera ? embed_cubic_chimera(spec, graph)
                                             : embed_cubic_pegasus(spec, graph);
}

YieldResult maximize_yield(const EmbeddingMap& tmpl, const HardwareGraph& working, std::uint64_t seed,
                           int passes) {
    if (!(tmpl.target == working.shape())) {
        fail(ErrorCode::WrongFamily, "template targets " + tmpl.target.describe() + " but the working graph is " +
                                         working.shape().describe());
    }
    const LatticeSpec& spec = tmpl.spec;
    const LogicalGraph lattice(spec);
    const HardwareGraph ideal = HardwareGraph::ideal(tmpl.target);
    const int n = spec.num_sites();

    struct Incident {
        SiteIndex other;
        LatticeEdge edge;
        const EdgeEmbedding* preferred;
    };
    std::vector<std::vector<Incident>> incident(n);
    for (const LatticeEdge& e : lattice.edges()) {
        const EdgeEmbedding* pref = tmpl.edge_for(e);
        incident[e.a].push_back({e.b, e, pref});
        incident[e.b].push_back({e.a, e, pref});
    }

    std::vector<int> owner(working.index_space(), -1);
    std::vector<std::optional<Chain>> current(n);

    const auto usable = [&](const Chain& c, SiteIndex s) {
        for (QubitIndex q : c.qubits) {
            if (!working.has_qubit(q) || (owner[q] != -1 && owner[q] != s)) return false;
        }
        for (const Coupler& cp : c.couplers) {
            if (!working.has_coupler(cp)) return false;
        }
        return true;
    };
    const auto assign = [&](SiteIndex s, std::optional<Chain> c) {
        if (current[s]) {
            for (QubitIndex q : current[s]->qubits) owner[q] = -1;
        }
        current[s] = std::move(c);
        if (current[s]) {
            for (QubitIndex q : current[s]->qubits) owner[q] = s;
        }
    };
    const auto score = [&](SiteIndex s, const Chain& c) {
        int edges = 0;
        for (const Incident& inc : incident[s]) {
            if (!current[inc.other]) continue;
            const Chain& other = *current[inc.other];
            const bool forward = inc.edge.a == s;
            auto found = forward ? find_edge_couplers(c, other, inc.edge.axis, working, inc.preferred)
                                 : find_edge_couplers(other, c, inc.edge.axis, working, inc.preferred);
            if (found) ++edges;
        }
        return edges;
    };
    const auto alive_neighbours = [&](SiteIndex s) {
        int count = 0;
        for (const Incident& inc : incident[s]) count += current[inc.other] ? 1 : 0;
        return count;
    };
    // Best usable candidate for a site, or nullopt. Ties keep the earliest.
    const auto best_candidate = [&](SiteIndex s, int floor) -> std::optional<std::pair<Chain, int>> {
        std::optional<std::pair<Chain, int>> best;
        for (Chain& c : candidate_chains(tmpl, ideal, s)) {
            if (!usable(c, s)) continue;
            const int e = score(s, c);
            if (e > floor && (!best || e > best->second)) best = std::make_pair(std::move(c), e);
        }
        return best;
    };

    for (const Chain& c : tmpl.chains) {
        if (usable(c, c.site)) assign(c.site, c);
    }

    std::vector<SiteIndex> dead;
    for (SiteIndex s = 0; s < n; ++s) {
        if (!current[s] && tmpl.chain_for(s)) dead.push_back(s);
    }
    Rng repair_rng(derive_seed(seed, {purpose_tag("yield.repair")}));
    repair_rng.shuffle(std::span<SiteIndex>(dead));
    for (SiteIndex s : dead) {
        if (auto best = best_candidate(s, -1)) assign(s, std::move(best->first));
    }

    std::vector<SiteIndex> order;
    for (SiteIndex s = 0; s < n; ++s) {
        if (tmpl.chain_for(s)) order.push_back(s);
    }
    for (int pass = 0; pass < passes; ++pass) {
        Rng pass_rng(derive_seed(seed, {purpose_tag("yield.pass"), static_cast<std::uint64_t>(pass)}));
        pass_rng.shuffle(std::span<SiteIndex>(order));
        bool changed = false;
        for (SiteIndex s : order) {
            if (!current[s]) {
                if (auto best = best_candidate(s, -1)) {
                    assign(s, std::move(best->first));
                    changed = true;
                }
                continue;
            }
            const int now = score(s, *current[s]);
            if (now >= alive_neighbours(s)) continue;
            if (auto best = best_candidate(s, now)) {
                assign(s, std::move(best->first));
                changed = true;
            }
        }
        if (!changed) break;
    }

    // Joint moves: both ends of a missing edge between live chains.
    const auto local_edges = [&](SiteIndex a, SiteIndex b) {
        int total = 0;
        for (SiteIndex s : {a, b}) {
            for (const Incident& inc : incident[s]) {
                if (s == b && inc.other == a) continue;
                if (!current[s] || !current[inc.other]) continue;
                const LatticeEdge& e = inc.edge;
                if (find_edge_couplers(*current[e.a], *current[e.b], e.axis, working, inc.preferred)) ++total;
            }
        }
        return total;
    };
    const auto overlap = [](const Chain& x, const Chain& y) {
        for (QubitIndex q : x.qubits) {
            if (contains(y.qubits, q)) return true;
        }
        return false;
    };
    for (int round = 0; round < std::min(passes, 3); ++round) {
        bool changed = false;
        for (const LatticeEdge& e : lattice.edges()) {
            if (!current[e.a] || !current[e.b]) continue;
            const EdgeEmbedding* pref = tmpl.edge_for(e);
            if (find_edge_couplers(*current[e.a], *current[e.b], e.axis, working, pref)) continue;
            const int before = local_edges(e.a, e.b);
            const Chain keep_a = *current[e.a];
            const Chain keep_b = *current[e.b];
            assign(e.a, std::nullopt);
            assign(e.b, std::nullopt);
            std::vector<Chain> cands_b;
            for (Chain& c : candidate_chains(tmpl, ideal, e.b)) {
                if (usable(c, e.b)) cands_b.push_back(std::move(c));
            }
            std::optional<std::pair<Chain, Chain>> best;
            int best_total = before;
            for (const Chain& ca : candidate_chains(tmpl, ideal, e.a)) {
                if (!usable(ca, e.a)) continue;
                for (const Chain& cb : cands_b) {
                    if (overlap(ca, cb) || !find_edge_couplers(ca, cb, e.axis, working, pref)) continue;
                    assign(e.a, ca);
                    assign(e.b, cb);
                    const int total = local_edges(e.a, e.b);
                    assign(e.a, std::nullopt);
                    assign(e.b, std::nullopt);
                    if (total > best_total) {
                        best_total = total;
                        best = std::make_pair(ca, cb);
                    }
                }
            }
            if (best) {
                assign(e.a, std::move(best->first));
                assign(e.b, std::move(best->second));
                changed = true;
            } else {
                assign(e.a, keep_a);
                assign(e.b, keep_b);
            }
        }
        if (!changed) break;
    }

    YieldResult result;
    EmbeddingMap& emb = result.embedding;
    emb.target = tmpl.target;
    emb.spec = spec;
    emb.origin_x = tmpl.origin_x;
    emb.origin_y = tmpl.origin_y;
    std::vector<SiteIndex> sites;
    std::vector<LatticeEdge> edges;
    for (SiteIndex s = 0; s < n; ++s) {
        if (current[s]) {
            emb.chains.push_back(*current[s]);
            sites.push_back(s);
        } else {
            result.report.dropped_sites.push_back(s);
        }
    }
    for (const LatticeEdge& e : lattice.edges()) {
        std::optional<std::vector<EdgeCoupler>> found;
        if (current[e.a] && current[e.b]) {
            found = find_edge_couplers(*current[e.a], *current[e.b], e.axis, working, tmpl.edge_for(e));
        }
        if (found) {
            emb.edges.push_back({e, std::move(*found)});
            edges.push_back(e);
        } else {
            result.report.dropped_edges.push_back(e);
        }
    }
    sort_map(emb);
    result.logical = LogicalGraph(spec, std::move(sites), std::move(edges));
    result.report.sites_total = static_cast<std::size_t>(n);
    result.report.edges_total = lattice.edges().size();
    result.report.sites_embedded = result.logical.sites().size();
    result.report.edges_embedded = result.logical.edges().size();
    return result;
}

EmbeddingMap translate_embedding(const EmbeddingMap& emb, int dx, int dy) {
    const HardwareGraph ideal = HardwareGraph::ideal(emb.target);
    const bool chimera = emb.target.family == Family::Chimera;
    const auto move = [&](QubitIndex q) {
        QubitCoord c = ideal.coord(q);
        if (chimera) {
            c.v[0] += dx;
            c.v[1] += dy;
        } else if (c.v[0] == 0) {
            c.v[1] += dx;
            c.v[3] += dy;
        } else {
            c.v[1] += dy;
            c.v[3] += dx;
        }
        const std::optional<QubitIndex> idx = ideal.index(c);
        if (!idx || !ideal.has_qubit(*idx)) {
            fail(ErrorCode::CapacityExceeded, "offset (" + std::to_string(dx) + "," + std::to_string(dy) +
                                                  ") moves the layout off " + emb.target.describe());
        }
        return *idx;
    };
    const auto move_coupler = [&](const Coupler& cp) {
        const Coupler out(move(cp.a), move(cp.b));
        if (!ideal.has_coupler(out)) {
            fail(ErrorCode::CapacityExceeded, "offset (" + std::to_string(dx) + "," + std::to_string(dy) +
                                                  ") lands on a missing coupler of " + emb.target.describe());
        }
        return out;
    };
    EmbeddingMap out = emb;
    out.origin_x += dx;
    out.origin_y += dy;
    for (Chain& c : out.chains) {
        for (QubitIndex& q : c.qubits) q = move(q);
        for (Coupler& cp : c.couplers) cp = move_coupler(cp);
    }
    for (EdgeEmbedding& e : out.edges) {
        for (EdgeCoupler& ec : e.couplers) ec.coupler = move_coupler(ec.coupler);
    }
    return out;
}

std::vector<std::pair<int, int>> placement_offsets(const LatticeSpec& spec, const GraphShape& shape) {
    int nx = 0, ny = 0;
    if (shape.family == Family::Chimera) {
        nx = shape.rows - 2 * spec.l1;
        ny = shape.cols - 2 * spec.l2;
    } else {
        nx = shape.m - 1 - spec.l1;
        ny = shape.m - 1 - spec.l2;
    }
    std::vector<std::pair<int, int>> out;
    for (int dx = 0; dx <= nx; ++dx) {
        for (int dy = 0; dy <= ny; ++dy) out.emplace_back(dx, dy);
    }
    return out;
}

YieldResult place_and_maximize(const LatticeSpec& spec, const HardwareGraph& working, std::uint64_t seed, int passes,
                               int shortlist) {
    const HardwareGraph ideal = HardwareGraph::ideal(working.shape());
    const EmbeddingMap base = embed_cubic(spec, ideal);
    struct Scored {
        std::size_t order;
        int sites;
        int edges;
        EmbeddingMap tmpl;
    };
    std::vector<Scored> scored;
    const auto offsets = placement_offsets(spec, working.shape());
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        EmbeddingMap t;
        try {
            t = translate_embedding(base, offsets[i].first, offsets[i].second);
        } catch (const Error&) {
            continue;
        }
        std::vector<bool> alive(static_cast<std::size_t>(spec.num_sites()), false);
        int sites = 0, edges = 0;
        for (const Chain& c : t.chains) {
            bool ok = std::all_of(c.qubits.begin(), c.qubits.end(), [&](QubitIndex q) { return working.has_qubit(q); }) &&
                      std::all_of(c.couplers.begin(), c.couplers.end(), [&](const Coupler& cp) { return working.has_coupler(cp); });
            alive[static_cast<std::size_t>(c.site)] = ok;
            sites += ok ? 1 : 0;
        }
        for (const EdgeEmbedding& e : t.edges) {
            if (!alive[static_cast<std::size_t>(e.edge.a)] || !alive[static_cast<std::size_t>(e.edge.b)]) continue;
            if (std::all_of(e.couplers.begin(), e.couplers.end(),
                            [&](const EdgeCoupler& ec) { return working.has_coupler(ec.coupler); })) {
                ++edges;
            }
        }
        scored.push_back({i, sites, edges, std::move(t)});
    }
    if (scored.empty()) fail(ErrorCode::CapacityExceeded, spec.describe() + " has no placement on " + working.shape().describe());
    std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        return std::tie(b.sites, b.edges) < std::tie(a.sites, a.edges);
    });
    std::optional<YieldResult> best;
    const std::size_t tries = std::min(scored.size(), static_cast<std::size_t>(std::max(shortlist, 1)));
    for (std::size_t i = 0; i < tries; ++i) {
        YieldResult y = maximize_yield(scored[i].tmpl, working, seed, passes);
        if (!best || std::tie(y.report.sites_embedded, y.report.edges_embedded) >
                         std::tie(best->report.sites_embedded, best->report.edges_embedded)) {
            best = std::move(y);
        }
        if (best->report.complete()) break;
    }
    return std::move(*best);
}

EmbeddingMap restrict_embedding(const EmbeddingMap& emb, const LogicalGraph& logical) {
    EmbeddingMap out;
    out.target = emb.target;
    out.spec = emb.spec;
    out.origin_x = emb.origin_x;
    out.origin_y = emb.origin_y;
    for (const Chain& c : emb.chains) {
        if (logical.has_site(c.site)) out.chains.push_back(c);
    }
    for (const EdgeEmbedding& e : emb.edges) {
        if (logical.edge_position(e.edge) >= 0) out.edges.push_back(e);
    }
    return out;
}

LogicalGraph intersect(const LogicalGraph& a, const LogicalGraph& b) {
    if (!(a.spec() == b.spec())) fail(ErrorCode::InvalidArgument, "cannot intersect lattices of different specs");
    std::vector<SiteIndex> sites;
    std::set_intersection(a.sites().begin(), a.sites().end(), b.sites().begin(), b.sites().end(),
                          std::back_inserter(sites));
    std::vector<LatticeEdge> edges;
    std::set_intersection(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end(),
                          std::back_inserter(edges));
    return LogicalGraph(a.spec(), std::move(sites), std::move(edges));
}

ValidationReport validate_embedding(const EmbeddingMap& emb, const HardwareGraph& working,
                                    const LogicalGraph& logical) {
    ValidationReport report;
    const auto violation = [&](std::string text) {
        report.passed = false;
        report.violations.push_back(std::move(text));
    };
    const LatticeSpec& spec = emb.spec;
    if (!(emb.target == working.shape())) {
        violation("target: embedding targets " + emb.target.describe() + " but graph is " +
                  working.shape().describe());
        return report;
    }
    if (!(logical.spec() == spec)) {
        violation("spec: embedding is for " + spec.describe() + " but logical graph is " +
                  logical.spec().describe());
        return report;
    }
    const int length = required_chain_length(emb.target.family);
    std::map<QubitIndex, SiteIndex> owner;
    for (const Chain& c : emb.chains) {
        const std::string where = "chain " + describe_site(spec, c.site);
        if (c.site < 0 || c.site >= spec.num_sites()) {
            violation("coverage: chain for out-of-range site " + std::to_string(c.site));
            continue;
        }
        if (static_cast<int>(c.qubits.size()) != length) {
            violation("chain length: " + where + " has " + std::to_string(c.qubits.size()) +
                      " qubits, expected " + std::to_string(length));
        }
        std::set<QubitIndex> distinct(c.qubits.begin(), c.qubits.end());
        if (distinct.size() != c.qubits.size()) violation("chain distinctness: " + where + " repeats a qubit");
        for (QubitIndex q : c.qubits) {
            if (!working.has_qubit(q)) violation("qubit existence: " + where + " uses missing qubit " + std::to_string(q));
            auto [it, inserted] = owner.emplace(q, c.site);
            if (!inserted && it->second != c.site) {
                violation("disjointness: qubit " + std::to_string(q) + " is shared by chains " +
                          describe_site(spec, it->second) + " and " + describe_site(spec, c.site));
            }
        }
        if (c.couplers.size() + 1 < c.qubits.size()) {
            violation("chain connectivity: " + where + " has too few chain couplers");
        }
        // Union-find over the chain couplers.
        std::map<QubitIndex, QubitIndex> parent;
        for (QubitIndex q : c.qubits) parent[q] = q;
        const auto find = [&](QubitIndex q) {
            while (parent[q] != q) q = parent[q] = parent[parent[q]];
            return q;
        };
        for (const Coupler& cp : c.couplers) {
            if (!distinct.count(cp.a) || !distinct.count(cp.b)) {
                violation("chain connectivity: " + where + " lists a coupler leaving the chain");
                continue;
            }
            if (!working.has_coupler(cp)) {
                violation("coupler existence: " + where + " uses missing coupler (" + std::to_string(cp.a) + "," +
                          std::to_string(cp.b) + ")");
            }
            parent[find(cp.a)] = find(cp.b);
        }
        std::set<QubitIndex> roots;
        for (QubitIndex q : c.qubits) roots.insert(find(q));
        if (roots.size() > 1) violation("chain connectivity: " + where + " is disconnected");
    }
    for (const EdgeEmbedding& ee : emb.edges) {
        const std::string where = "edge " + describe_edge(spec, ee.edge);
        const Chain* a = emb.chain_for(ee.edge.a);
        const Chain* b = emb.chain_for(ee.edge.b);
        if (!a || !b) {
            violation("coverage: " + where + " has an endpoint without a chain");
            continue;
        }
        const std::size_t expected = ee.edge.axis == Axis::Z ? 2 : 1;
        if (ee.couplers.size() != expected) {
            violation(std::string(ee.edge.axis == Axis::Z ? "z-edge" : "x/y-edge") + " coupler count: " + where +
                      " maps to " + std::to_string(ee.couplers.size()) + " couplers, expected " +
                      std::to_string(expected));
        }
        double total = 0.0;
        for (const EdgeCoupler& ec : ee.couplers) {
            total += ec.share;
            if (!(ec.share > 0.0)) violation("weight shares: " + where + " has a non-positive share");
            if (!working.has_coupler(ec.coupler)) {
                violation("coupler existence: " + where + " uses missing coupler (" + std::to_string(ec.coupler.a) +
                          "," + std::to_string(ec.coupler.b) + ")");
            }
            if (!joins(ec.coupler, *a, *b)) violation("edge endpoints: " + where + " coupler does not join its chains");
        }
        if (std::abs(total - 1.0) > 1e-12) violation("weight shares: " + where + " shares sum to " + std::to_string(total));
    }
    for (SiteIndex s : logical.sites()) {
        if (!emb.chain_for(s)) violation("coverage: site " + describe_site(spec, s) + " has no chain");
    }
    for (const LatticeEdge& e : logical.edges()) {
        if (!emb.edge_for(e)) violation("coverage: " + describe_edge(spec, e) + " is not mapped");
    }
    return report;
}

std::optional<double> EmbeddedProblem::value(const Coupler& c) const {
    auto it = std::lower_bound(values.begin(), values.end(), c,
                               [](const std::pair<Coupler, double>& v, const Coupler& x) { return v.first < x; });
    if (it == values.end() || it->first != c) return std::nullopt;
    return it->second;
}

EmbeddedProblem set_parameters(const Instance& instance, const EmbeddingMap& emb, double chain_strength) {
    if (!(chain_strength > 0.0)) fail(ErrorCode::InvalidArgument, "chain strength must be positive");
    const LogicalGraph& logical = *instance.graph;
    if (!(logical.spec() == emb.spec)) {
        fail(ErrorCode::InvalidArgument, "instance lattice " + logical.spec().describe() +
                                             " differs from embedding lattice " + emb.spec.describe());
    }
    EmbeddedProblem p;
    p.target = emb.target;
    p.spec = emb.spec;
    p.instance_id = instance.id;
    p.chain_strength = chain_strength;
    p.index_space = HardwareGraph::ideal(emb.target).index_space();

    std::map<Coupler, double> values;
    const auto put = [&](const Coupler& c, double v, const std::string& what) {
        if (!values.emplace(c, v).second) {
            fail(ErrorCode::InvalidArgument, "coupler (" + std::to_string(c.a) + "," + std::to_string(c.b) +
                                                 ") is used twice (" + what + ")");
        }
    };
    std::vector<const Chain*> chains;
    for (SiteIndex s : logical.sites()) {
        const Chain* c = emb.chain_for(s);
        if (!c) fail(ErrorCode::InvalidArgument, "embedding has no chain for site " + describe_site(emb.spec, s));
        chains.push_back(c);
        for (const Coupler& cp : c->couplers) put(cp, -chain_strength, "chain");
        p.chain_coupler_count += c->couplers.size();
        p.variables.insert(p.variables.end(), c->qubits.begin(), c->qubits.end());
    }
    for (std::size_t i = 0; i < logical.edges().size(); ++i) {
        const LatticeEdge& e = logical.edges()[i];
        const EdgeEmbedding* ee = emb.edge_for(e);
        if (!ee) fail(ErrorCode::InvalidArgument, "embedding does not map " + describe_edge(emb.spec, e));
        for (const EdgeCoupler& ec : ee->couplers) put(ec.coupler, instance.couplings[i] * ec.share, "edge");
    }
    for (const auto& [c, v] : values) {
        if (v < kCouplingMin - 1e-12 || v > kCouplingMax + 1e-12) {
            fail(ErrorCode::RangeViolation, "coupler value " + std::to_string(v) + " outside [-2, 1]");
        }
    }
    p.values.assign(values.begin(), values.end());
    std::sort(p.variables.begin(), p.variables.end());
    p.offset = -chain_strength * static_cast<double>(p.chain_coupler_count);
    for (const Chain* c : chains) {
        p.chain_sites.push_back(c->site);
        std::vector<std::int32_t> vars;
        for (QubitIndex q : c->qubits) {
            vars.push_back(static_cast<std::int32_t>(
                std::lower_bound(p.variables.begin(), p.variables.end(), q) - p.variables.begin()));
        }
        p.chain_variables.push_back(std::move(vars));
    }
    return p;
}

double physical_energy(const EmbeddedProblem& problem, std::span<const std::int8_t> state) {
    if (state.size() != problem.index_space) {
        fail(ErrorCode::IncompleteAssignment, "physical state does not span the target index space");
    }
    for (QubitIndex q : problem.variables) {
        if (state[q] != 1 && state[q] != -1) {
            fail(ErrorCode::IncompleteAssignment, "qubit " + std::to_string(q) + " has no +/-1 value");
        }
    }
    double energy = 0.0;
    for (const auto& [c, v] : problem.values) energy += v * state[c.a] * state[c.b];
    return energy;
}

PhysicalState embed_spins(const EmbeddedProblem& problem, std::span<const std::int8_t> spins) {
    PhysicalState state(problem.index_space, 0);
    for (std::size_t i = 0; i < problem.chain_sites.size(); ++i) {
        const std::int8_t s = spins[problem.chain_sites[i]];
        if (s != 1 && s != -1) {
            fail(ErrorCode::IncompleteAssignment, "site " + std::to_string(problem.chain_sites[i]) + " has no spin");
        }
        for (std::int32_t v : problem.chain_variables[i]) state[problem.variables[v]] = s;
    }
    return state;
}

UnembedResult unembed(std::span<const std::int8_t> state, const EmbeddingMap& emb, std::uint64_t tie_seed) {
    UnembedResult out;
    out.spins.assign(emb.spec.num_sites(), 0);
    std::optional<Rng> rng;
    for (const Chain& c : emb.chains) {
        int sum = 0;
        for (QubitIndex q : c.qubits) {
            if (q < 0 || static_cast<std::size_t>(q) >= state.size() || (state[q] != 1 && state[q] != -1)) {
                fail(ErrorCode::IncompleteAssignment, "chain qubit " + std::to_string(q) + " has no +/-1 value");
            }
            sum += state[q];
        }
        const int n = static_cast<int>(c.qubits.size());
        if (sum != n && sum != -n) out.broken_chains.push_back(c.site);
        if (sum > 0) {
            out.spins[c.site] = 1;
        } else if (sum < 0) {
            out.spins[c.site] = -1;
        } else {
            if (!rng) rng.emplace(tie_seed);
            out.spins[c.site] = rng->spin();
        }
    }
    out.broken_fraction = emb.chains.empty() ? 0.0 : double(out.broken_chains.size()) / double(emb.chains.size());
    return out;
}

ChainDecoder::ChainDecoder(const EmbeddedProblem& problem)
    : num_sites_(static_cast<std::size_t>(problem.spec.num_sites())), sites_(problem.chain_sites) {
    offsets_.push_back(0);
    for (const auto& vars : problem.chain_variables) {
        vars_.insert(vars_.end(), vars.begin(), vars.end());
        offsets_.push_back(static_cast<std::int32_t>(vars_.size()));
    }
}

std::size_t ChainDecoder::decode(std::span<const std::int8_t> dense, std::uint64_t tie_seed,
                                 SpinAssignment& out) const {
    out.assign(num_sites_, 0);
    std::optional<Rng> rng;
    std::size_t broken = 0;
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        int sum = 0;
        for (std::int32_t k = offsets_[i]; k < offsets_[i + 1]; ++k) sum += dense[vars_[k]];
        const int n = offsets_[i + 1] - offsets_[i];
        if (sum != n && sum != -n) ++broken;
        if (sum > 0) {
            out[sites_[i]] = 1;
        } else if (sum < 0) {
            out[sites_[i]] = -1;
        } else {
            if (!rng) rng.emplace(tie_seed);
            out[sites_[i]] = rng->spin();
        }
    }
    return broken;
}

LogicalGraph covered_graph(const EmbeddingMap& emb) {
    std::vector<SiteIndex> sites;
    for (const Chain& c : emb.chains) sites.push_back(c.site);
    std::vector<LatticeEdge> edges;
    for (const EdgeEmbedding& e : emb.edges) edges.push_back(e.edge);
    return LogicalGraph(emb.spec, std::move(sites), std::move(edges));
}

}  // namespace glassbench
