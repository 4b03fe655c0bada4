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

// Exact enumeration oracle, simulated annealing and ground-truth bookkeeping.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "glassbench/embedding.hpp"
#include "glassbench/lattice.hpp"

namespace glassbench {

// Zero-field Ising model E(s) = sum_{i<j} w_ij s_i s_j over dense variables.
struct IsingModel {
    struct Term {
        std::int32_t i;
        std::int32_t j;
        double weight;
    };

    std::size_t num_variables = 0;
    std::vector<Term> terms;
    std::vector<std::int32_t> offsets;  // CSR adjacency
    std::vector<std::int32_t> neighbors;
    std::vector<double> weights;

    static IsingModel from_terms(std::size_t n, std::vector<Term> terms);
    double energy(std::span<const std::int8_t> spins) const;
};

// Variables are the instance's sites in ascending order.
IsingModel logical_model(const Instance& instance);
// Variables are problem.variables; energies exclude the constant offset.
IsingModel physical_model(const EmbeddedProblem& problem);

inline constexpr std::size_t kMaxExactVariables = 26;

struct ExactResult {
    double min_energy = 0.0;
    std::vector<std::int8_t> assignment;  // dense, one optimum
    std::uint64_t optimum_count = 0;
};

ExactResult solve_exact(const IsingModel& model);

struct LogicalOptimum {
    double energy = 0.0;
    SpinAssignment spins;
    std::uint64_t optimum_count = 0;
};
LogicalOptimum solve_exact(const Instance& instance);

struct PhysicalOptimum {
    double energy = 0.0;  // physical_energy, offset excluded
    PhysicalState state;
    std::uint64_t optimum_count = 0;
};
PhysicalOptimum solve_exact(const EmbeddedProblem& problem);

enum class SamplerKind { Exact, SaPhysical, SaLogical };
enum class BetaInterpolation { Geometric, Linear };

const char* sampler_kind_name(SamplerKind kind) noexcept;
SamplerKind parse_sampler_kind(const std::string& name);

struct SamplerConfig {
    SamplerKind kind = SamplerKind::SaPhysical;
    int effort = 1;  // sweeps per anneal
    int reads = 1;
    std::uint64_t seed = 0;
    double beta_min = 0.1;
    double beta_max = 10.0;
    BetaInterpolation interpolation = BetaInterpolation::Geometric;

    void validate() const;
    // Inverse temperature for each of the `effort` sweeps.
    std::vector<double> beta_schedule() const;
};

// Metropolis annealer over a fixed model. Each read starts from uniformly
// random spins and visits the variables in a per-read random order, once per
// sweep. Read r draws only from Rng(derive_seed(seed, {"sa.read", r})).
class Annealer {
public:
    Annealer(const IsingModel& model, const SamplerConfig& config);

    // Writes the final configuration into `state` and returns its energy.
    double anneal(std::uint64_t read_index, std::span<std::int8_t> state) const;

    std::size_t num_variables() const { return model_->num_variables; }

private:
    const IsingModel* model_;
    std::uint64_t seed_;
    std::vector<double> betas_;
};

struct Read {
    std::vector<std::int8_t> spins;
    double energy = 0.0;
};

struct Sample {
    std::vector<std::int8_t> spins;
    double energy = 0.0;
    std::size_t multiplicity = 0;
};

struct SampleSet {
    bool physical = false;
    std::string problem_id;
    std::vector<std::int32_t> labels;  // qubit indices or site indices
    SamplerConfig config;
    std::vector<Read> reads;  // in read order

    // Distinct configurations sorted by (energy, spins).
    std::vector<Sample> aggregate() const;
};

SampleSet sample_model(const IsingModel& model, std::vector<std::int32_t> labels, bool physical,
                       std::string problem_id, const SamplerConfig& config);
SampleSet sample_sa(const Instance& instance, const SamplerConfig& config);
SampleSet sample_sa(const EmbeddedProblem& problem, const SamplerConfig& config);

enum class Provenance { Exact, BestSeen };

struct GroundTruthEntry {
    double energy = 0.0;
    Provenance provenance = Provenance::BestSeen;
    SpinAssignment witness;
    std::uint64_t revision = 0;  // bumped whenever the energy drops
};

inline constexpr double kEnergyTolerance = 1e-9;

// Best known logical energy per instance id. Energies never increase.
class GroundTruthRegistry {
public:
    const GroundTruthEntry* find(const std::string& id) const;
    // Records an observation; returns true when the best energy dropped
    // (or an equal-energy entry was upgraded to exact provenance).
    bool observe(const std::string& id, double energy, const SpinAssignment& witness, Provenance provenance);
    void merge(const GroundTruthRegistry& other);
    // Puts back a stored entry as is, revision included.
    void restore(const std::string& id, GroundTruthEntry entry);
    const std::map<std::string, GroundTruthEntry>& entries() const { return entries_; }

private:
    std::map<std::string, GroundTruthEntry> entries_;
};

struct HitCount {
    std::size_t hits = 0;
    std::size_t reads = 0;
    double broken_fraction = 0.0;
    bool registry_improved = false;
};

// Unembeds physical reads (tie seed derived from the sampler seed and read
// index), updates the registry with the best logical energy seen and counts
// reads at the registry's best energy.
HitCount count_ground_hits(const SampleSet& samples, const Instance& instance, const EmbeddedProblem* problem,
                           GroundTruthRegistry& registry);

std::uint64_t unembed_tie_seed(std::uint64_t sampler_seed, std::uint64_t read_index);

}  // namespace glassbench
