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
#include <cmath>
#include <limits>

#include "doctest.h"
#include "glassbench/error.hpp"
#include "glassbench/sampler.hpp"

using namespace glassbench;

namespace {

struct Brute {
    double min = std::numeric_limits<double>::infinity();
    std::uint64_t count = 0;
};

Brute brute_force(const IsingModel& m) {
    Brute b;
    const std::size_t n = m.num_variables;
    for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
        double e = 0;
        for (const auto& t : m.terms) {
            const int si = (bits >> t.i) & 1 ? 1 : -1, sj = (bits >> t.j) & 1 ? 1 : -1;
            e += t.weight * si * sj;
        }
        if (e < b.min - 1e-9) {
            b.min = e;
            b.count = 1;
        } else if (std::abs(e - b.min) <= 1e-9) {
            ++b.count;
        }
    }
    return b;
}

SamplerConfig sa(SamplerKind kind, int effort, int reads, std::uint64_t seed) {
    SamplerConfig c;
    c.kind = kind;
    c.effort = effort;
    c.reads = reads;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_SUITE("sampler") {

TEST_CASE("exact solver on tiny models") {
    IsingModel pair = IsingModel::from_terms(2, {{0, 1, 1.0}});
    ExactResult r = solve_exact(pair);
    CHECK(r.min_energy == -1.0);
    CHECK(r.optimum_count == 2);

    IsingModel chain = IsingModel::from_terms(4, {{0, 1, -2.0}, {1, 2, -2.0}, {2, 3, -2.0}});
    r = solve_exact(chain);
    CHECK(r.min_energy == -6.0);
    CHECK(r.optimum_count == 2);
    CHECK(chain.energy(r.assignment) == -6.0);

    CHECK_THROWS_AS(solve_exact(IsingModel::from_terms(27, {{0, 26, 1.0}})), Error);
}

TEST_CASE("exact solver matches brute force") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        Instance inst = generate_instance(build_lattice({2, 2, 3}), seed);
        IsingModel m = logical_model(inst);
        Brute b = brute_force(m);
        LogicalOptimum opt = solve_exact(inst);
        CHECK(opt.energy == b.min);
        CHECK(opt.optimum_count == b.count);
        CHECK(logical_energy(inst, opt.spins) == opt.energy);
    }
}

TEST_CASE("embedded optimum is the logical optimum plus the chain constant") {
    for (const HardwareGraph& g : {build_chimera(4, 4, 4), build_pegasus(4)}) {
        const LatticeSpec spec = g.family() == Family::Chimera ? LatticeSpec{2, 2, 1} : LatticeSpec{2, 2, 2};
        EmbeddingMap emb = embed_cubic(spec, g);
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            Instance inst = generate_instance(build_lattice(spec), seed);
            EmbeddedProblem p = set_parameters(inst, emb);
            REQUIRE(p.variables.size() == 16);
            Brute phys = brute_force(physical_model(p));
            LogicalOptimum lo = solve_exact(inst);
            PhysicalOptimum po = solve_exact(p);
            CHECK(po.energy == phys.min);
            CHECK(phys.min == doctest::Approx(lo.energy + p.offset));
            UnembedResult u = unembed(po.state, emb, 0);
            CHECK(u.broken_chains.empty());
            CHECK(logical_energy(inst, u.spins) == lo.energy);
        }
    }
}

TEST_CASE("weaker chains: search for broken-only optima") {
    // Reported, not asserted: the factor 2 is a worst-case bound.
    HardwareGraph g = build_chimera(4, 4, 4);
    EmbeddingMap emb = embed_cubic_chimera({2, 2, 1}, g);
    const int trials = 40;
    const auto count = [&](double strength) {
        int broken_only = 0;
        for (std::uint64_t seed = 0; seed < trials; ++seed) {
            Instance inst = generate_instance(build_lattice({2, 2, 1}), seed);
            EmbeddedProblem p = set_parameters(inst, emb, strength);
            if (solve_exact(p).energy < solve_exact(inst).energy + p.offset - 1e-9) ++broken_only;
        }
        return broken_only;
    };
    const int at_15 = count(1.5);
    MESSAGE("chain strength 1.5: " << at_15 << "/" << trials << " instances with only broken optima");
    CHECK(count(2.0) == 0);
    // The detector itself works: very weak chains do break.
    CHECK(count(0.25) > 0);
}

TEST_CASE("beta schedule") {
    SamplerConfig c = sa(SamplerKind::SaLogical, 5, 1, 0);
    auto b = c.beta_schedule();
    REQUIRE(b.size() == 5);
    CHECK(b.front() == doctest::Approx(0.1));
    CHECK(b.back() == doctest::Approx(10.0));
    CHECK(b[2] == doctest::Approx(1.0));
    c.interpolation = BetaInterpolation::Linear;
    CHECK(c.beta_schedule()[2] == doctest::Approx(5.05));
    c.effort = 1;
    CHECK(c.beta_schedule() == std::vector<double>{10.0});
    c.effort = 0;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("annealing finds the ground state of a small embedded cube") {
    HardwareGraph g = build_pegasus(4);
    EmbeddingMap emb = embed_cubic_pegasus({2, 2, 2}, g);
    Instance inst = generate_instance(build_lattice({2, 2, 2}), 17);
    EmbeddedProblem p = set_parameters(inst, emb);
    SampleSet s = sample_sa(p, sa(SamplerKind::SaPhysical, 1024, 100, 5));
    CHECK(s.reads.size() == 100);
    GroundTruthRegistry reg;
    LogicalOptimum opt = solve_exact(inst);
    reg.observe(inst.id, opt.energy, opt.spins, Provenance::Exact);
    HitCount h = count_ground_hits(s, inst, &p, reg);
    CHECK(h.hits > 0);
    CHECK_FALSE(h.registry_improved);
    CHECK(reg.find(inst.id)->energy == opt.energy);

    const auto agg = s.aggregate();
    CHECK(agg.front().energy == doctest::Approx(opt.energy + p.offset));
}

TEST_CASE("annealing is reproducible") {
    Instance inst = generate_instance(build_lattice({3, 3, 3}), 1);
    SampleSet a = sample_sa(inst, sa(SamplerKind::SaLogical, 32, 20, 9));
    SampleSet b = sample_sa(inst, sa(SamplerKind::SaLogical, 32, 20, 9));
    SampleSet c = sample_sa(inst, sa(SamplerKind::SaLogical, 32, 20, 10));
    REQUIRE(a.reads.size() == b.reads.size());
    bool differs = false;
    for (std::size_t i = 0; i < a.reads.size(); ++i) {
        CHECK(a.reads[i].spins == b.reads[i].spins);
        CHECK(a.reads[i].energy == b.reads[i].energy);
        differs |= a.reads[i].spins != c.reads[i].spins;
    }
    CHECK(differs);
    for (const Read& r : a.reads) {
        SpinAssignment spins(27);
        for (std::size_t i = 0; i < a.labels.size(); ++i) spins[a.labels[i]] = r.spins[i];
        CHECK(logical_energy(inst, spins) == r.energy);
    }
}

TEST_CASE("one read") {
    Instance inst = generate_instance(build_lattice({2, 2, 2}), 1);
    SampleSet s = sample_sa(inst, sa(SamplerKind::SaLogical, 8, 1, 0));
    auto agg = s.aggregate();
    REQUIRE(agg.size() == 1);
    CHECK(agg[0].multiplicity == 1);
}

TEST_CASE("aggregate sorts by energy and counts") {
    Instance inst = generate_instance(build_lattice({2, 2, 2}), 3);
    SampleSet s = sample_sa(inst, sa(SamplerKind::SaLogical, 4, 200, 2));
    auto agg = s.aggregate();
    std::size_t total = 0;
    for (std::size_t i = 0; i < agg.size(); ++i) {
        total += agg[i].multiplicity;
        if (i) CHECK(agg[i - 1].energy <= agg[i].energy);
    }
    CHECK(total == 200);
}

TEST_CASE("hit counting and registry") {
    Instance inst = generate_instance(build_lattice({2, 2, 1}), 5);
    LogicalOptimum opt = solve_exact(inst);
    SampleSet s;
    s.labels = {0, 1, 2, 3};
    s.config = sa(SamplerKind::SaLogical, 1, 3, 0);
    for (int i = 0; i < 3; ++i) s.reads.push_back({opt.spins, opt.energy});

    GroundTruthRegistry reg;
    reg.observe(inst.id, opt.energy, opt.spins, Provenance::Exact);
    HitCount h = count_ground_hits(s, inst, nullptr, reg);
    CHECK(h.hits == 3);
    CHECK(h.reads == 3);

    GroundTruthRegistry stale;
    stale.observe(inst.id, opt.energy + 2, {}, Provenance::BestSeen);
    h = count_ground_hits(s, inst, nullptr, stale);
    CHECK(h.registry_improved);
    CHECK(h.hits == 3);
    CHECK(stale.find(inst.id)->energy == opt.energy);
    CHECK(stale.find(inst.id)->revision == 1);

    // Energies never rise.
    CHECK_FALSE(stale.observe(inst.id, opt.energy + 4, {}, Provenance::BestSeen));
    CHECK(stale.find(inst.id)->energy == opt.energy);
    CHECK(stale.observe(inst.id, opt.energy, opt.spins, Provenance::Exact));
    CHECK(stale.find(inst.id)->provenance == Provenance::Exact);

    s.physical = true;
    CHECK_THROWS_AS(count_ground_hits(s, inst, nullptr, reg), Error);
}

TEST_CASE("hits against the exact optimum on an embedded (2,2,1)") {
    HardwareGraph g = build_chimera(4, 4, 4);
    EmbeddingMap emb = embed_cubic_chimera({2, 2, 1}, g);
    Instance inst = generate_instance(build_lattice({2, 2, 1}), 12);
    EmbeddedProblem p = set_parameters(inst, emb);
    LogicalOptimum opt = solve_exact(inst);
    GroundTruthRegistry reg;
    reg.observe(inst.id, opt.energy, opt.spins, Provenance::Exact);
    SampleSet s = sample_sa(p, sa(SamplerKind::SaPhysical, 64, 50, 1));
    HitCount h = count_ground_hits(s, inst, &p, reg);

    std::size_t expect = 0;
    for (std::size_t r = 0; r < s.reads.size(); ++r) {
        PhysicalState full(p.index_space, 0);
        for (std::size_t i = 0; i < p.variables.size(); ++i) full[p.variables[i]] = s.reads[r].spins[i];
        UnembedResult u = unembed(full, emb, unembed_tie_seed(s.config.seed, r));
        if (logical_energy(inst, u.spins) == opt.energy) ++expect;
    }
    CHECK(h.hits == expect);
    CHECK(h.hits > 0);
}

TEST_CASE("sampler kinds") {
    CHECK(parse_sampler_kind("sa-physical") == SamplerKind::SaPhysical);
    CHECK(std::string(sampler_kind_name(SamplerKind::SaLogical)) == "sa-logical");
    CHECK_THROWS_AS(parse_sampler_kind("qpu"), Error);
}

}  // TEST_SUITE
