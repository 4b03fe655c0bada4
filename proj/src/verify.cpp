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

#include "glassbench/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "glassbench/embedding.hpp"
#include "glassbench/error.hpp"
#include "glassbench/lattice.hpp"
#include "glassbench/metrics.hpp"
#include "glassbench/rng.hpp"
#include "glassbench/sampler.hpp"
#include "glassbench/serialize.hpp"
#include "glassbench/topology.hpp"

namespace glassbench {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <class Body>
CheckResult timed(const std::string& name, Body&& body) {
    CheckResult r;
    r.name = name;
    const auto t0 = Clock::now();
    std::ostringstream detail;
    try {
        r.passed = body(detail);
    } catch (const std::exception& e) {
        r.passed = false;
        detail << "unexpected error: " << e.what();
    }
    r.seconds = since(t0);
    r.detail = detail.str();
    return r;
}

bool capacity_error(const LatticeSpec& spec, const HardwareGraph& g) {
    try {
        embed_cubic(spec, g);
    } catch (const Error& e) {
        return e.code() == ErrorCode::CapacityExceeded;
    }
    return false;
}

std::vector<double> spectrum(const Instance& inst) {
    const std::size_t n = static_cast<std::size_t>(inst.graph->spec().num_sites());
    std::vector<double> out;
    SpinAssignment s(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1 ? 1 : -1;
        out.push_back(logical_energy(inst, s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

CheckResult check_topology_counts() {
    return timed("topology counts", [](std::ostringstream& out) {
        bool ok = true;
        auto t0 = Clock::now();
        const HardwareGraph c = HardwareGraph::chimera(16, 16, 4);
        const GraphStats cs = graph_stats(c);
        const double tc = since(t0);
        if (cs.qubits != 2048 || cs.couplers != 6016 || !cs.bipartite || cs.max_degree != 6 || tc >= 1.0) ok = false;
        out << "chimera(16,16,4): " << cs.qubits << " qubits, " << cs.couplers << " couplers, max degree "
            << cs.max_degree << (cs.bipartite ? ", bipartite" : ", not bipartite") << "; ";
        t0 = Clock::now();
        const HardwareGraph p = HardwareGraph::pegasus(16);
        const GraphStats ps = graph_stats(p);
        const double tp = since(t0);
        if (ps.qubits != 5640 || ps.max_degree != 15 || ps.bipartite || tp >= 1.0) ok = false;
        out << "pegasus(16): " << ps.qubits << " qubits, " << ps.couplers << " couplers, max degree "
            << ps.max_degree << (ps.bipartite ? ", bipartite" : ", not bipartite");
        return ok;
    });
}

CheckResult check_capacity() {
    return timed("embedding capacity", [](std::ostringstream& out) {
        const HardwareGraph c = HardwareGraph::chimera(16, 16, 4);
        std::size_t ok_specs = 0;
        for (int a = 1; a <= 8; ++a) {
            for (int b = 1; b <= 8; ++b) {
                for (int d = 1; d <= 8; ++d) {
                    const LatticeSpec spec{a, b, d};
                    const ValidationReport v = validate_embedding(embed_cubic_chimera(spec, c), c, LogicalGraph(spec));
                    if (!v.passed) {
                        out << "chimera " << spec.describe() << ": " << v.first();
                        return false;
                    }
                    ++ok_specs;
                }
            }
        }
        for (const LatticeSpec& spec : {LatticeSpec{9, 1, 1}, LatticeSpec{1, 9, 1}, LatticeSpec{1, 1, 9}, LatticeSpec{9, 9, 9}}) {
            if (!capacity_error(spec, c)) {
                out << "chimera " << spec.describe() << " did not fail with CapacityExceeded";
                return false;
            }
        }
        const HardwareGraph p = HardwareGraph::pegasus(16);
        const LatticeSpec big{15, 15, 12};
        const ValidationReport v = validate_embedding(embed_cubic_pegasus(big, p), p, LogicalGraph(big));
        if (!v.passed) {
            out << "pegasus " << big.describe() << ": " << v.first();
            return false;
        }
        for (const LatticeSpec& spec : {LatticeSpec{16, 15, 12}, LatticeSpec{15, 16, 12}, LatticeSpec{15, 15, 13}}) {
            if (!capacity_error(spec, p)) {
                out << "pegasus " << spec.describe() << " did not fail with CapacityExceeded";
                return false;
            }
        }
        out << ok_specs << " chimera specs and pegasus 15x15x12 validated; oversized specs rejected";
        return true;
    });
}

CheckResult check_chain_strength() {
    return timed("chain strength", [](std::ostringstream& out) {
        struct Case {
            LatticeSpec spec;
            HardwareGraph graph;
        };
        const Case cases[] = {{{2, 2, 1}, HardwareGraph::chimera(16, 16, 4)}, {{2, 2, 2}, HardwareGraph::pegasus(16)}};
        int passed = 0, total = 0;
        for (const Case& c : cases) {
            const EmbeddingMap emb = embed_cubic(c.spec, c.graph);
            const LogicalGraph lattice(c.spec);
            for (std::uint64_t k = 0; k < 20; ++k) {
                ++total;
                const Instance inst = generate_instance(lattice, derive_seed(7, {purpose_tag("verify.chain"), k}));
                const EmbeddedProblem prob = set_parameters(inst, emb, kDefaultChainStrength);
                if (prob.variables.size() != 16) {
                    out << "expected 16 physical qubits, got " << prob.variables.size();
                    return false;
                }
                const LogicalOptimum lo = solve_exact(inst);
                const PhysicalOptimum po = solve_exact(prob);
                // Unbroken states cost exactly logical energy + offset, so
                // equality means an unbroken optimum exists.
                if (std::abs(po.energy - (lo.energy + prob.offset)) < 1e-9) ++passed;
            }
        }
        out << passed << "/" << total << " instances have an unbroken physical optimum";
        return passed == total;
    });
}

CheckResult check_coupling_values() {
    return timed("coupling values", [](std::ostringstream& out) {
        const LatticeSpec spec{4, 4, 4};
        const LogicalGraph lattice(spec);
        std::size_t problems = 0;
        for (const HardwareGraph& g : {HardwareGraph::chimera(16, 16, 4), HardwareGraph::pegasus(16)}) {
            const EmbeddingMap emb = embed_cubic(spec, g);
            std::set<std::uint64_t> chain_keys;
            for (const Chain& c : emb.chains) {
                for (const Coupler& cp : c.couplers) chain_keys.insert(cp.key());
            }
            for (std::uint64_t k = 0; k < 100; ++k) {
                const Instance inst = generate_instance(lattice, derive_seed(11, {purpose_tag("verify.values"), k}));
                const EmbeddedProblem prob = set_parameters(inst, emb, kDefaultChainStrength);
                for (const auto& [cp, v] : prob.values) {
                    if (v < kCouplingMin || v > kCouplingMax) {
                        out << "value " << v << " out of range";
                        return false;
                    }
                    if (chain_keys.count(cp.key()) && v != -2.0) {
                        out << "chain coupler value " << v;
                        return false;
                    }
                }
                for (std::size_t e = 0; e < inst.graph->edges().size(); ++e) {
                    const LatticeEdge& edge = inst.graph->edges()[e];
                    const double j = inst.couplings[e];
                    const EdgeEmbedding* ee = emb.edge_for(edge);
                    for (const EdgeCoupler& ec : ee->couplers) {
                        const double want = edge.axis == Axis::Z ? 0.5 * j : j;
                        if (prob.value(ec.coupler) != want) {
                            out << "edge coupler value " << *prob.value(ec.coupler) << " != " << want;
                            return false;
                        }
                    }
                }
                ++problems;
            }
        }
        out << problems << " embedded problems checked";
        return true;
    });
}

CheckResult check_tts_identities() {
    return timed("tts identities", [](std::ostringstream& out) {
        for (double e : {1.0, 2.0, 3.5, 128.0, 1e6}) {
            const double v = *tts(e, 0.99);
            if (std::abs(v - e) > 1e-12 * e) {
                out << "tts(" << e << ", 0.99) = " << v;
                return false;
            }
        }
        const double half = *tts(2.0, 0.5);
        if (std::abs(half - 13.287712379549449) > 1e-6) {
            out << "tts(2, 0.5) = " << half;
            return false;
        }
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= 1000; ++i) {
            const double v = *tts(4.0, i / 1000.0);
            if (!(v < prev)) {
                out << "not decreasing at p = " << i / 1000.0;
                return false;
            }
            prev = v;
        }
        if (tts(8.0, 0.0)) {
            out << "tts(8, 0) should be unsolved";
            return false;
        }
        out << "tts(e,0.99)=e, tts(2,0.5)=" << half << ", strictly decreasing on 1000 points";
        return true;
    });
}

CheckResult check_isometry_group() {
    return timed("isometry group", [](std::ostringstream& out) {
        const std::vector<Isometry>& g = enumerate_isometries();
        if (g.size() != 48 || std::set<Isometry>(g.begin(), g.end()).size() != 48) {
            out << "expected 48 distinct isometries";
            return false;
        }
        if (g[0] != Isometry{}) {
            out << "element 0 is not the identity";
            return false;
        }
        for (const Isometry& a : g) {
            if (isometry_position(a.inverse()) < 0 || a.compose(a.inverse()) != Isometry{}) {
                out << "inverse missing";
                return false;
            }
            for (const Isometry& b : g) {
                if (isometry_position(a.compose(b)) < 0) {
                    out << "not closed under composition";
                    return false;
                }
            }
        }
        const LatticeSpec spec{2, 2, 2};
        const LogicalGraph lattice(spec);
        for (std::uint64_t k = 0; k < 5; ++k) {
            const Instance inst = generate_instance(lattice, derive_seed(13, {purpose_tag("verify.spectrum"), k}));
            const std::vector<double> base = spectrum(inst);
            for (const Isometry& iso : g) {
                if (spectrum(apply_isometry(inst, iso)) != base) {
                    out << "spectrum differs for instance " << inst.id;
                    return false;
                }
            }
        }
        out << "48 elements, closed with inverses; 5 spectra invariant";
        return true;
    });
}

CheckResult check_embedding_fixture(const std::filesystem::path& embedding,
                                    const std::optional<std::filesystem::path>& graph) {
    return timed("embedding fixture", [&](std::ostringstream& out) {
        EmbeddingMap emb;
        HardwareGraph working;
        try {
            emb = embedding_from_json(read_json(embedding));
            working = graph ? graph_from_json(read_json(*graph)) : HardwareGraph::ideal(emb.target);
        } catch (const Error& e) {
            out << e.what();
            return false;
        }
        std::optional<LogicalGraph> logical;
        try {
            logical.emplace(covered_graph(emb));
        } catch (const Error& e) {
            out << e.what();
            return false;
        }
        const ValidationReport v = validate_embedding(emb, working, *logical);
        if (!v.passed) {
            out << v.first();
            return false;
        }
        out << emb.chains.size() << " chains and " << emb.edges.size() << " edges valid";
        return true;
    });
}

VerifyReport run_verification(const VerifyOptions& options, const CheckCallback& on_check) {
    VerifyReport report;
    auto add = [&](CheckResult r) {
        if (on_check) on_check(r);
        report.checks.push_back(std::move(r));
    };
    add(check_topology_counts());
    add(check_capacity());
    add(check_chain_strength());
    add(check_coupling_values());
    add(check_tts_identities());
    add(check_isometry_group());
    if (options.embedding) add(check_embedding_fixture(*options.embedding, options.graph));
    return report;
}

}  // namespace glassbench
