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

#include "glassbench/sampler.hpp"

#include <algorithm>
#include <bit>
#include <array>
#include <cmath>
#include <limits>

#include "glassbench/error.hpp"
#include "glassbench/rng.hpp"

namespace glassbench {

IsingModel IsingModel::from_terms(std::size_t n, std::vector<Term> terms) {
    IsingModel m;
    m.num_variables = n;
    m.terms = std::move(terms);
    std::vector<std::int32_t> degree(n, 0);
    for (const Term& t : m.terms) {
        ++degree[t.i];
        ++degree[t.j];
    }
    m.offsets.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) m.offsets[v + 1] = m.offsets[v] + degree[v];
    m.neighbors.resize(m.offsets[n]);
    m.weights.resize(m.offsets[n]);
    std::vector<std::int32_t> fill(m.offsets.begin(), m.offsets.end() - 1);
    for (const Term& t : m.terms) {
        m.neighbors[fill[t.i]] = t.j;
        m.weights[fill[t.i]++] = t.weight;
        m.neighbors[fill[t.j]] = t.i;
        m.weights[fill[t.j]++] = t.weight;
    }
    return m;
}

double IsingModel::energy(std::span<const std::int8_t> spins) const {
    double e = 0.0;
    for (const Term& t : terms) e += t.weight * spins[t.i] * spins[t.j];
    return e;
}

IsingModel logical_model(const Instance& instance) {
    const LogicalGraph& g = *instance.graph;
    std::vector<std::int32_t> position(g.spec().num_sites(), -1);
    for (std::size_t i = 0; i < g.sites().size(); ++i) position[g.sites()[i]] = static_cast<std::int32_t>(i);
    std::vector<IsingModel::Term> terms;
    for (std::size_t k = 0; k < g.edges().size(); ++k) {
        const LatticeEdge& e = g.edges()[k];
        terms.push_back({position[e.a], position[e.b], static_cast<double>(instance.couplings[k])});
    }
    return IsingModel::from_terms(g.sites().size(), std::move(terms));
}

IsingModel physical_model(const EmbeddedProblem& problem) {
    const auto pos = [&](QubitIndex q) {
        return static_cast<std::int32_t>(std::lower_bound(problem.variables.begin(), problem.variables.end(), q) -
                                         problem.variables.begin());
    };
    std::vector<IsingModel::Term> terms;
    terms.reserve(problem.values.size());
    for (const auto& [c, v] : problem.values) terms.push_back({pos(c.a), pos(c.b), v});
    return IsingModel::from_terms(problem.variables.size(), std::move(terms));
}

ExactResult solve_exact(const IsingModel& model) {
    const std::size_t n = model.num_variables;
    if (n > kMaxExactVariables) {
        fail(ErrorCode::TooLarge, "exact enumeration is capped at " + std::to_string(kMaxExactVariables) +
                                      " variables, problem has " + std::to_string(n));
    }
    // Gray-code walk: bit i set means spin i is -1.
    std::vector<std::int8_t> spins(n, 1);
    std::vector<double> field(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::int32_t k = model.offsets[v]; k < model.offsets[v + 1]; ++k) field[v] += model.weights[k];
    }
    double energy = model.energy(spins);
    ExactResult best{energy, spins, 1};
    const std::uint64_t states = std::uint64_t(1) << n;
    for (std::uint64_t step = 1; step < states; ++step) {
        const int i = std::countr_zero(step);
        energy -= 2.0 * spins[i] * field[i];
        spins[i] = static_cast<std::int8_t>(-spins[i]);
        const double change = 2.0 * spins[i];
        for (std::int32_t k = model.offsets[i]; k < model.offsets[i + 1]; ++k) {
            field[model.neighbors[k]] += change * model.weights[k];
        }
        if (energy < best.min_energy - kEnergyTolerance) {
            best.min_energy = energy;
            best.assignment = spins;
            best.optimum_count = 1;
        } else if (energy <= best.min_energy + kEnergyTolerance) {
            ++best.optimum_count;
        }
    }
    // Report the exact energy of the witness rather than the running sum.
    best.min_energy = model.energy(best.assignment);
    return best;
}

LogicalOptimum solve_exact(const Instance& instance) {
    const ExactResult r = solve_exact(logical_model(instance));
    LogicalOptimum out;
    out.energy = r.min_energy;
    out.optimum_count = r.optimum_count;
    out.spins.assign(instance.graph->spec().num_sites(), 0);
    const auto sites = instance.graph->sites();
    for (std::size_t i = 0; i < sites.size(); ++i) out.spins[sites[i]] = r.assignment[i];
    return out;
}

PhysicalOptimum solve_exact(const EmbeddedProblem& problem) {
    const ExactResult r = solve_exact(physical_model(problem));
    PhysicalOptimum out;
    out.energy = r.min_energy;
    out.optimum_count = r.optimum_count;
    out.state.assign(problem.index_space, 0);
    for (std::size_t i = 0; i < problem.variables.size(); ++i) out.state[problem.variables[i]] = r.assignment[i];
    return out;
}

const char* sampler_kind_name(SamplerKind kind) noexcept {
    switch (kind) {
        case SamplerKind::Exact: return "exact";
        case SamplerKind::SaPhysical: return "sa-physical";
        case SamplerKind::SaLogical: return "sa-logical";
    }
    return "unknown";
}

SamplerKind parse_sampler_kind(const std::string& name) {
    if (name == "exact") return SamplerKind::Exact;
    if (name == "sa-physical") return SamplerKind::SaPhysical;
    if (name == "sa-logical") return SamplerKind::SaLogical;
    fail(ErrorCode::InvalidArgument, "unknown sampler kind '" + name + "'");
}

void SamplerConfig::validate() const {
    if (effort < 1) fail(ErrorCode::InvalidArgument, "effort must be at least 1");
    if (reads < 1) fail(ErrorCode::InvalidArgument, "reads must be at least 1");
    if (!(beta_min > 0.0) || !(beta_min < beta_max)) {
        fail(ErrorCode::InvalidArgument, "beta schedule needs 0 < beta_min < beta_max");
    }
}

std::vector<double> SamplerConfig::beta_schedule() const {
    std::vector<double> betas(effort);
    if (effort == 1) {
        betas[0] = beta_max;
        return betas;
    }
    for (int i = 0; i < effort; ++i) {
        const double f = double(i) / double(effort - 1);
        betas[i] = interpolation == BetaInterpolation::Geometric ? beta_min * std::pow(beta_max / beta_min, f)
                                                                 : beta_min + (beta_max - beta_min) * f;
    }
    return betas;
}

Annealer::Annealer(const IsingModel& model, const SamplerConfig& config)
    : model_(&model), seed_(config.seed) {
    config.validate();
    betas_ = config.beta_schedule();
}

double Annealer::anneal(std::uint64_t read_index, std::span<std::int8_t> state) const {
    const IsingModel& m = *model_;
    const std::size_t n = m.num_variables;
    Rng rng(derive_seed(seed_, {purpose_tag("sa.read"), read_index}));
    for (std::size_t v = 0; v < n; ++v) state[v] = rng.spin();
    std::vector<std::int32_t> order(n);
    for (std::size_t v = 0; v < n; ++v) order[v] = static_cast<std::int32_t>(v);
    rng.shuffle(std::span<std::int32_t>(order));

    std::vector<double> field(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        double h = 0.0;
        for (std::int32_t k = m.offsets[v]; k < m.offsets[v + 1]; ++k) h += m.weights[k] * state[m.neighbors[k]];
        field[v] = h;
    }

    const std::int32_t* offsets = m.offsets.data();
    const std::int32_t* neighbors = m.neighbors.data();
    const double* weights = m.weights.data();
    // Acceptance probabilities by delta; fields take few distinct values.
    constexpr std::size_t kCacheSize = 64;
    std::array<double, kCacheSize> cached_delta;
    std::array<double, kCacheSize> cached_prob;
    for (double beta : betas_) {
        // exp(-44.4) is below the 53-bit resolution of Rng::uniform.
        const double threshold = 44.4 / beta;
        cached_delta.fill(-1.0);
        for (std::int32_t v : order) {
            const double delta = -2.0 * state[v] * field[v];
            if (delta >= threshold) continue;
            if (delta > 0.0) {
                const std::size_t slot = (std::bit_cast<std::uint64_t>(delta) * 0x9e3779b97f4a7c15ULL) >> 58;
                if (cached_delta[slot] != delta) {
                    cached_delta[slot] = delta;
                    cached_prob[slot] = std::exp(-beta * delta);
                }
                if (rng.uniform() >= cached_prob[slot]) continue;
            }
            state[v] = static_cast<std::int8_t>(-state[v]);
            const double change = 2.0 * state[v];
            for (std::int32_t k = offsets[v]; k < offsets[v + 1]; ++k) field[neighbors[k]] += change * weights[k];
        }
    }
    return m.energy(state);
}

std::vector<Sample> SampleSet::aggregate() const {
    std::vector<const Read*> sorted;
    for (const Read& r : reads) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](const Read* a, const Read* b) {
        if (a->energy != b->energy) return a->energy < b->energy;
        return a->spins < b->spins;
    });
    std::vector<Sample> out;
    for (const Read* r : sorted) {
        if (!out.empty() && out.back().spins == r->spins) {
            ++out.back().multiplicity;
        } else {
            out.push_back({r->spins, r->energy, 1});
        }
    }
    return out;
}

SampleSet sample_model(const IsingModel& model, std::vector<std::int32_t> labels, bool physical,
                       std::string problem_id, const SamplerConfig& config) {
    config.validate();
    SampleSet set;
    set.physical = physical;
    set.problem_id = std::move(problem_id);
    set.labels = std::move(labels);
    set.config = config;
    set.reads.reserve(config.reads);
    if (config.kind == SamplerKind::Exact) {
        const ExactResult r = solve_exact(model);
        for (int i = 0; i < config.reads; ++i) set.reads.push_back({r.assignment, r.min_energy});
        return set;
    }
    const Annealer annealer(model, config);
    for (int i = 0; i < config.reads; ++i) {
        Read read;
        read.spins.resize(model.num_variables);
        read.energy = annealer.anneal(static_cast<std::uint64_t>(i), read.spins);
        set.reads.push_back(std::move(read));
    }
    return set;
}

SampleSet sample_sa(const Instance& instance, const SamplerConfig& config) {
    const IsingModel model = logical_model(instance);
    std::vector<std::int32_t> labels(instance.graph->sites().begin(), instance.graph->sites().end());
    return sample_model(model, std::move(labels), false, instance.id, config);
}

SampleSet sample_sa(const EmbeddedProblem& problem, const SamplerConfig& config) {
    const IsingModel model = physical_model(problem);
    std::vector<std::int32_t> labels(problem.variables.begin(), problem.variables.end());
    return sample_model(model, std::move(labels), true, problem.instance_id, config);
}

const GroundTruthEntry* GroundTruthRegistry::find(const std::string& id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

bool GroundTruthRegistry::observe(const std::string& id, double energy, const SpinAssignment& witness,
                                  Provenance provenance) {
    auto it = entries_.find(id);
    if (it == entries_.end()) {
        entries_.emplace(id, GroundTruthEntry{energy, provenance, witness, 0});
        return true;
    }
    GroundTruthEntry& e = it->second;
    if (energy < e.energy - kEnergyTolerance) {
        e.energy = energy;
        e.witness = witness;
        e.provenance = provenance;
        ++e.revision;
        return true;
    }
    if (energy <= e.energy + kEnergyTolerance && provenance == Provenance::Exact &&
        e.provenance != Provenance::Exact) {
        e.provenance = Provenance::Exact;
        e.witness = witness;
        return true;
    }
    return false;
}

void GroundTruthRegistry::restore(const std::string& id, GroundTruthEntry entry) {
    entries_[id] = std::move(entry);
}

void GroundTruthRegistry::merge(const GroundTruthRegistry& other) {
    for (const auto& [id, e] : other.entries_) observe(id, e.energy, e.witness, e.provenance);
}

std::uint64_t unembed_tie_seed(std::uint64_t sampler_seed, std::uint64_t read_index) {
    return derive_seed(sampler_seed, {purpose_tag("unembed.tie"), read_index});
}

HitCount count_ground_hits(const SampleSet& samples, const Instance& instance, const EmbeddedProblem* problem,
                           GroundTruthRegistry& registry) {
    HitCount out;
    out.reads = samples.reads.size();
    if (samples.physical && !problem) {
        fail(ErrorCode::InvalidArgument, "physical samples need their embedded problem to unembed");
    }
    std::vector<double> energies;
    energies.reserve(samples.reads.size());
    double best = std::numeric_limits<double>::infinity();
    SpinAssignment best_spins;
    std::size_t broken = 0;
    std::size_t chains = 0;
    SpinAssignment spins;
    std::optional<ChainDecoder> decoder;
    if (samples.physical) decoder.emplace(*problem);
    for (std::size_t r = 0; r < samples.reads.size(); ++r) {
        const Read& read = samples.reads[r];
        if (samples.physical) {
            broken += decoder->decode(read.spins, unembed_tie_seed(samples.config.seed, r), spins);
            chains += decoder->num_chains();
        } else {
            spins.assign(instance.graph->spec().num_sites(), 0);
            for (std::size_t i = 0; i < samples.labels.size(); ++i) spins[samples.labels[i]] = read.spins[i];
        }
        const double e = logical_energy(instance, spins);
        energies.push_back(e);
        if (e < best) {
            best = e;
            best_spins = spins;
        }
    }
    if (!energies.empty()) {
        const GroundTruthEntry* before = registry.find(instance.id);
        const bool existed = before != nullptr;
        const bool improved = registry.observe(instance.id, best, best_spins, Provenance::BestSeen);
        out.registry_improved = existed && improved;
    }
    const GroundTruthEntry* entry = registry.find(instance.id);
    for (double e : energies) {
        if (entry && e <= entry->energy + kEnergyTolerance) ++out.hits;
    }
    out.broken_fraction = chains ? double(broken) / double(chains) : 0.0;
    return out;
}

}  // namespace glassbench
