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

// Success-probability estimation, time-to-solution and aggregate statistics.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glassbench/lattice.hpp"
#include "glassbench/sampler.hpp"

namespace glassbench {

struct SuccessEstimate {
    int effort = 0;
    std::size_t reads = 0;
    std::size_t hits = 0;
    double p = 0.0;  // hits / reads
};

SuccessEstimate make_estimate(int effort, std::size_t reads, std::size_t hits);

inline constexpr double kTtsTarget = 0.99;
inline constexpr double kMaxSuccessProbability = 1.0 - 1e-12;

// effort * ln(1 - 0.99) / ln(1 - p). nullopt means unsolved (p = 0); p is
// clamped to 1 - 1e-12 so that p = 1 yields a small positive value.
std::optional<double> tts(double effort, double p);

struct CurvePoint {
    SuccessEstimate estimate;
    std::optional<double> tts;
    std::size_t batches = 0;
    bool target_reached = false;
};

struct TTSCurve {
    std::string instance_id;
    std::vector<CurvePoint> points;  // strictly increasing effort
};

struct InstanceResult {
    std::string instance_id;
    int group = 0;  // lattice size L
    bool solved = false;
    int t_opt = 0;
    double tts = 0.0;  // meaningful only when solved
};

// Minimises TTS over the ladder; ties go to the smaller effort.
InstanceResult select_optimal(const TTSCurve& curve, int group = 0);

// Linear interpolation between order statistics ("type 7"). `sorted` must be
// non-empty and ascending.
double quantile(std::span<const double> sorted, double q);

struct AggregateStats {
    int group = 0;
    std::size_t n_instances = 0;
    std::size_t n_unsolved = 0;
    double p10 = 0.0;
    double p25 = 0.0;
    double median = 0.0;
    double p75 = 0.0;
    double p90 = 0.0;
};

// Groups by InstanceResult::group in ascending order. Unsolved instances are
// counted, not ranked. Throws EmptyGroup if a group has no solved instance.
std::vector<AggregateStats> aggregate(std::span<const InstanceResult> results);
AggregateStats aggregate_group(std::span<const InstanceResult> results, int group);

struct SpeedupEntry {
    std::string instance_id;
    std::optional<double> tts_a;
    std::optional<double> tts_b;
    std::optional<double> ratio;  // tts_a / tts_b
};

struct SpeedupReport {
    std::vector<SpeedupEntry> pairs;  // every id present in both, in the order of `a`
    std::vector<std::string> unsolved_a;
    std::vector<std::string> unsolved_b;
};

SpeedupReport speedup_pairs(std::span<const InstanceResult> a, std::span<const InstanceResult> b);

inline constexpr std::size_t kIsometryCount = 48;

struct IsometrySummary {
    std::optional<double> median;
    std::optional<double> best;
    std::optional<double> worst;
    std::optional<double> ratio;  // worst / best; undefined if any isometry is unsolved
    std::size_t unsolved = 0;
};

IsometrySummary isometry_consistency(std::span<const InstanceResult> per_isometry);

// Log-spaced histogram bins for best/worst ratios: edges 10^(i/4) for
// i = 0..16, with a final open bin above 10^4.
std::vector<double> ratio_histogram_edges();
std::vector<std::size_t> ratio_histogram(std::span<const double> ratios);

struct ProtocolConfig {
    std::vector<int> ladder{2, 4, 8, 16, 32, 64, 128, 256};
    int batch_size = 500;
    int target_hits = 50;
    int max_batches = 20;

    void validate() const;
};

struct BatchResult {
    std::vector<double> energies;  // logical energy per read
    std::size_t broken_chains = 0;
    std::size_t total_chains = 0;
    SpinAssignment best_spins;  // witness for the lowest energy, may be empty
};

// Produces one batch of `reads` anneals at `effort`.
using BatchSampler = std::function<BatchResult(int effort, int batch_index, int reads)>;

struct BatchRecord {
    int effort = 0;
    int batch = 0;
    std::size_t reads = 0;
    std::map<double, std::size_t> energy_counts;
    std::size_t broken_chains = 0;
    std::size_t total_chains = 0;
};

struct ProtocolRun {
    std::string instance_id;
    std::vector<BatchRecord> batches;
    TTSCurve curve;
};

// Per effort, draws batches until the cumulative hit count reaches the target
// or the batch budget is spent. Hits are judged against the registry's best
// energy; when it improves the whole curve is recounted from the stored
// energy histograms before returning.
struct ProtocolHooks {
    // Batches of efforts finished by an earlier run; those efforts are not resampled.
    std::vector<BatchRecord> completed;
    // Called with all batches so far whenever an effort finishes.
    std::function<void(const std::vector<BatchRecord>&)> on_effort_done;
};

ProtocolRun run_protocol(const std::string& instance_id, const BatchSampler& sampler,
                         GroundTruthRegistry& registry, const ProtocolConfig& config,
                         const ProtocolHooks& hooks = {});

std::size_t count_hits(const BatchRecord& batch, double best_energy);
TTSCurve curve_from_batches(const std::string& instance_id, std::span<const BatchRecord> batches,
                            double best_energy, const ProtocolConfig& config);
double lowest_energy(std::span<const BatchRecord> batches);

}  // namespace glassbench
