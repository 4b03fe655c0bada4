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

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <set>

#include "doctest.h"
#include "glassbench/error.hpp"
#include "glassbench/topology.hpp"

using namespace glassbench;

namespace {

// Plain BFS 2-colouring.
bool two_colourable(const HardwareGraph& g) {
    std::vector<int> colour(g.index_space(), -1);
    for (QubitIndex start : g.qubits()) {
        if (colour[start] >= 0) continue;
        colour[start] = 0;
        std::queue<QubitIndex> todo;
        todo.push(start);
        while (!todo.empty()) {
            QubitIndex q = todo.front();
            todo.pop();
            for (QubitIndex n : g.neighbors(q)) {
                if (colour[n] < 0) {
                    colour[n] = 1 - colour[q];
                    todo.push(n);
                } else if (colour[n] == colour[q]) {
                    return false;
                }
            }
        }
    }
    return true;
}

// Chimera adjacency straight from the cell picture: K_{t,t} inside a cell,
// same-side same-index qubits of neighbouring cells along that side's direction.
bool chimera_adjacent(const QubitCoord& a, const QubitCoord& b, int& vertical_side) {
    const auto [r1, c1, s1, k1] = a.v;
    const auto [r2, c2, s2, k2] = b.v;
    if (r1 == r2 && c1 == c2) return s1 != s2;
    if (s1 != s2 || k1 != k2) return false;
    const int dr = std::abs(r1 - r2), dc = std::abs(c1 - c2);
    if (dr + dc != 1) return false;
    const int side_moving_rows = dr == 1 ? s1 : 1 - s1;
    if (vertical_side < 0) vertical_side = side_moving_rows;
    return vertical_side == side_moving_rows;
}

}  // namespace

TEST_SUITE("topology") {

TEST_CASE("chimera 16x16x4 counts") {
    HardwareGraph g = build_chimera(16, 16, 4);
    CHECK(g.num_qubits() == 2048);
    CHECK(g.num_couplers() == 6016);
    std::size_t internal = 0, external = 0;
    int vertical_side = -1;
    for (const Coupler& c : g.couplers()) {
        const QubitCoord a = g.coord(c.a), b = g.coord(c.b);
        REQUIRE(chimera_adjacent(a, b, vertical_side));
        (a.v[0] == b.v[0] && a.v[1] == b.v[1] ? internal : external)++;
    }
    CHECK(internal == 4096);
    CHECK(external == 1920);
}

TEST_CASE("chimera couplers match brute-force adjacency") {
    for (auto [m, n, t] : {std::tuple{1, 1, 4}, {2, 3, 4}, {3, 2, 2}, {4, 4, 1}}) {
        HardwareGraph g = build_chimera(m, n, t);
        REQUIRE(g.num_qubits() == std::size_t(2 * m * n * t));
        // Orientation taken from the first inter-cell coupler.
        int vertical_side = -1;
        for (const Coupler& c : g.couplers()) {
            const QubitCoord a = g.coord(c.a), b = g.coord(c.b);
            if (a.v[0] != b.v[0] || a.v[1] != b.v[1]) {
                chimera_adjacent(a, b, vertical_side);
                break;
            }
        }
        std::size_t pairs = 0;
        for (QubitIndex a : g.qubits()) {
            for (QubitIndex b : g.qubits()) {
                if (a < b && chimera_adjacent(g.coord(a), g.coord(b), vertical_side)) {
                    ++pairs;
                    CHECK(g.has_coupler(a, b));
                }
            }
        }
        CHECK(pairs == g.num_couplers());
        CHECK(pairs == chimera_coupler_count(m, n, t));
    }
}

TEST_CASE("single chimera cell") {
    HardwareGraph g = build_chimera(1, 1, 4);
    CHECK(g.num_qubits() == 8);
    CHECK(g.num_couplers() == 16);
    GraphStats s = graph_stats(g);
    CHECK(s.max_degree == 4);
    CHECK(s.degree_histogram == std::map<int, std::size_t>{{4, 8}});
    CHECK(s.bipartite);
}

TEST_CASE("chimera is bipartite, pegasus is not") {
    CHECK(graph_stats(build_chimera(16, 16, 4)).bipartite);
    CHECK(two_colourable(build_chimera(16, 16, 4)));
    HardwareGraph p = build_pegasus(16);
    CHECK_FALSE(graph_stats(p).bipartite);
    CHECK_FALSE(two_colourable(p));
}

TEST_CASE("pegasus 16 counts") {
    HardwareGraph g = build_pegasus(16);
    GraphStats s = graph_stats(g);
    CHECK(s.qubits == 5640);
    // Reference figures for the fabric-only P16 graph.
    CHECK(s.couplers == 40484);
    CHECK(s.max_degree == 15);
    std::size_t total = 0, weighted = 0;
    for (auto [d, n] : s.degree_histogram) {
        total += n;
        weighted += std::size_t(d) * n;
    }
    CHECK(total == 5640);
    CHECK(weighted == 2 * 40484);
}

TEST_CASE("smallest pegasus") {
    HardwareGraph g = build_pegasus(2);
    REQUIRE(g.num_qubits() > 0);
    for (QubitIndex q : g.qubits()) CHECK(g.degree(q) >= 1);
}

TEST_CASE("coordinates round-trip") {
    for (const HardwareGraph& g : {build_chimera(3, 4, 4), build_pegasus(4)}) {
        for (std::size_t q = 0; q < g.index_space(); ++q) {
            auto back = g.index(g.coord(QubitIndex(q)));
            REQUIRE(back.has_value());
            CHECK(*back == QubitIndex(q));
        }
    }
}

TEST_CASE("bad shapes") {
    CHECK_THROWS_AS(build_chimera(0, 4, 4), Error);
    CHECK_THROWS_AS(build_pegasus(1), Error);
    CHECK_THROWS_AS(parse_family("zephyr"), Error);
}

TEST_CASE("defect masks") {
    HardwareGraph c = build_chimera(16, 16, 4);
    CHECK(sample_defect_mask(c, 0, 0, 99).empty());

    DefectMask m1 = sample_defect_mask(c, 7, 0, 1);
    DefectMask m2 = sample_defect_mask(c, 7, 0, 1);
    CHECK(m1.qubits == m2.qubits);
    CHECK(m1.couplers == m2.couplers);
    CHECK(std::set<QubitIndex>(m1.qubits.begin(), m1.qubits.end()).size() == 7);
    CHECK(sample_defect_mask(c, 7, 0, 2).qubits != m1.qubits);

    HardwareGraph w = apply_defects(c, m1);
    CHECK(w.num_qubits() == 2041);
    for (QubitIndex q : m1.qubits) CHECK_FALSE(w.has_qubit(q));
    for (const Coupler& e : w.couplers()) {
        CHECK(w.has_qubit(e.a));
        CHECK(w.has_qubit(e.b));
    }

    HardwareGraph p = apply_defects(build_pegasus(16), sample_defect_mask(build_pegasus(16), 130, 0, 5));
    CHECK(p.num_qubits() == 5510);
}

TEST_CASE("coupler defects") {
    HardwareGraph c = build_chimera(4, 4, 4);
    DefectMask m = sample_defect_mask(c, 2, 5, 11);
    CHECK(m.qubits.size() == 2);
    CHECK(m.couplers.size() == 5);
    HardwareGraph w = apply_defects(c, m);
    for (const Coupler& e : m.couplers) CHECK_FALSE(w.has_coupler(e));
    CHECK(w.num_qubits() == c.num_qubits() - 2);
}

TEST_CASE("empty mask is identity") {
    HardwareGraph c = build_chimera(4, 4, 4);
    HardwareGraph w = apply_defects(c, DefectMask{});
    CHECK(w.num_qubits() == c.num_qubits());
    CHECK(std::equal(w.couplers().begin(), w.couplers().end(), c.couplers().begin(), c.couplers().end()));
}

TEST_CASE("masks compose and are checked against the ideal graph") {
    HardwareGraph c = build_chimera(4, 4, 4);
    DefectMask m = sample_defect_mask(c, 3, 2, 4);
    HardwareGraph once = apply_defects(c, m);
    HardwareGraph twice = apply_defects(once, m);
    CHECK(twice.num_qubits() == once.num_qubits());
    CHECK(twice.num_couplers() == once.num_couplers());
    CHECK(twice.defects().qubits == once.defects().qubits);

    DefectMask more;
    more.qubits = {c.qubits()[0]};
    CHECK(apply_defects(once, more).defects().qubits.size() == 4 - (once.has_qubit(c.qubits()[0]) ? 0 : 1));

    DefectMask bad;
    bad.qubits = {QubitIndex(c.index_space())};
    try {
        apply_defects(c, bad);
        FAIL("expected MaskMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MaskMismatch);
    }
    DefectMask bad_coupler;
    bad_coupler.couplers = {Coupler(0, 1)};  // same side of one cell
    CHECK_THROWS_AS(apply_defects(c, bad_coupler), Error);
}

TEST_CASE("too many defects") {
    HardwareGraph c = build_chimera(1, 1, 4);
    CHECK_THROWS_AS(sample_defect_mask(c, 9, 0, 1), Error);
}

}  // TEST_SUITE
