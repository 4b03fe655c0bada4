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

#include "glassbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "glassbench/error.hpp"

namespace glassbench {

SuccessEstimate make_estimate(int effort, std::size_t reads, std::size_t hits) {
    if (hits > reads) fail(ErrorCode::InvalidArgument, "hits exceed reads");
    return {effort, reads, hits, reads ? double(hits) / double(reads) : 0.0};
}

std::optional<double> tts(double effort, double p) {
    if (!(effort > 0.0)) fail(ErrorCode::DomainError, "tts needs a positive effort");
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::DomainError, "success probability outside [0, 1]");
    if (p == 0.0) return std::nullopt;
    const double clamped = std::min(p, kMaxSuccessProbability);
    return effort * std::log(1.0 - kTtsTarget) / std::log1p(-clamped);
}

InstanceResult select_optimal(const TTSCurve& curve, int group) {
    InstanceResult r;
    r.instance_id = curve.instance_id;
    r.group = group;
    for (const CurvePoint& pt : curve.points) {
        if (!pt.tts) continue;
        if (!r.solved || *pt.tts < r.tts) {
            r.solved = true;
            r.tts = *pt.tts;
            r.t_opt = pt.estimate.effort;
        }
    }
    return r;
}

double quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) fail(ErrorCode::EmptyGroup, "quantile of an empty sample");
    const double h = (double(sorted.size()) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - double(lo)) * (sorted[lo + 1] - sorted[lo]);
}

AggregateStats aggregate_group(std::span<const InstanceResult> results, int group) {
    AggregateStats s;
    s.group = group;
    std::vector<double> values;
    for (const InstanceResult& r : results) {
        if (r.group != group) continue;
        ++s.n_instances;
        if (r.solved) {
            values.push_back(r.tts);
        } else {
            ++s.n_unsolved;
        }
    }
    if (values.empty()) {
        fail(ErrorCode::EmptyGroup, "group " + std::to_string(group) + " has no solved instance");
    }
    std::sort(values.begin(), values.end());
    s.p10 = quantile(values, 0.10);
    s.p25 = quantile(values, 0.25);
    s.median = quantile(values, 0.50);
    s.p75 = quantile(values, 0.75);
    s.p90 = quantile(values, 0.90);
    return s;
}

std::vector<AggregateStats> aggregate(std::span<const InstanceResult> results) {
    std::vector<int> groups;
    for (const InstanceResult& r : results) groups.push_back(r.group);
    std::sort(groups.begin(), groups.end());
    groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    if (groups.empty()) fail(ErrorCode::EmptyGroup, "no results to aggregate");
    std::vector<AggregateStats> out;
    for (int g : groups) out.push_back(aggregate_group(results, g));
    return out;
}

SpeedupReport speedup_pairs(std::span<const InstanceResult> a, std::span<const InstanceResult> b) {
    std::unordered_map<std::string, const InstanceResult*> by_id;
    for (const InstanceResult& r : b) by_id.emplace(r.instance_id, &r);
    SpeedupReport report;
    for (const InstanceResult& ra : a) {
        auto it = by_id.find(ra.instance_id);
        if (it == by_id.end()) continue;
        const InstanceResult& rb = *it->second;
        SpeedupEntry e;
        e.instance_id = ra.instance_id;
        if (ra.solved) e.tts_a = ra.tts;
        if (rb.solved) e.tts_b = rb.tts;
        if (!ra.solved) report.unsolved_a.push_back(ra.instance_id);
        if (!rb.solved) report.unsolved_b.push_back(ra.instance_id);
        if (ra.solved && rb.solved) e.ratio = ra.tts / rb.tts;
        report.pairs.push_back(std::move(e));
    }
    return report;
}

IsometrySummary isometry_consistency(std::span<const InstanceResult> per_isometry) {
    if (per_isometry.size() != kIsometryCount) {
        fail(ErrorCode::WrongCount, "isometry consistency needs exactly 48 results, got " +
                                        std::to_string(per_isometry.size()));
    }
    IsometrySummary s;
    std::vector<double> values;
    std::optional<int> effort;
    for (const InstanceResult& r : per_isometry) {
        if (!r.solved) {
            ++s.unsolved;
            continue;
        }
        if (effort && *effort != r.t_opt) {
            fail(ErrorCode::InvalidArgument, "isometry results must share one effort level");
        }
        effort = r.t_opt;
        values.push_back(r.tts);
    }
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    s.median = quantile(values, 0.5);
    s.best = values.front();
    s.worst = values.back();
    if (s.unsolved == 0) s.ratio = values.back() / values.front();
    return s;
}

std::vector<double> ratio_histogram_edges() {
    std::vector<double> edges;
    for (int i = 0; i <= 16; ++i) edges.push_back(std::pow(10.0, i / 4.0));
    return edges;
}

std::vector<std::size_t> ratio_histogram(std::span<const double> ratios) {
    const std::vector<double> edges = ratio_histogram_edges();
    std::vector<std::size_t> counts(edges.size(), 0);  // last bin is [10^4, inf)
    for (double r : ratios) {
        auto it = std::upper_bound(edges.begin(), edges.end(), r);
        std::size_t bin = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
        ++counts[bin];
    }
    return counts;
}

void ProtocolConfig::validate() const {
    if (ladder.empty()) fail(ErrorCode::Config, "effort ladder is empty");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (ladder[i] < 1) fail(ErrorCode::Config, "efforts must be positive");
        if (i && ladder[i] <= ladder[i - 1]) fail(ErrorCode::Config, "effort ladder must be strictly increasing");
    }
    if (batch_size < 1 || target_hits < 1 || max_batches < 1) {
        fail(ErrorCode::Config, "batch size, target hits and max batches must be positive");
    }
}

std::size_t count_hits(const BatchRecord& batch, double best_energy) {
    std::size_t hits = 0;
    for (const auto& [e, n] : batch.energy_counts) {
        if (e > best_energy + kEnergyTolerance) break;
        hits += n;
    }
    return hits;
}

double lowest_energy(std::span<const BatchRecord> batches) {
    double best = std::numeric_limits<double>::infinity();
    for (const BatchRecord& b : batches) {
        if (!b.energy_counts.empty()) best = std::min(best, b.energy_counts.begin()->first);
    }
    return best;
}

TTSCurve curve_from_batches(const std::string& instance_id, std::span<const BatchRecord> batches,
                            double best_energy, const ProtocolConfig& config) {
    TTSCurve curve;
    curve.instance_id = instance_id;
    for (int effort : config.ladder) {
        std::size_t reads = 0, hits = 0, count = 0;
        for (const BatchRecord& b : batches) {
            if (b.effort != effort) continue;
            reads += b.reads;
            hits += count_hits(b, best_energy);
            ++count;
        }
        if (count == 0) continue;
        CurvePoint pt;
        pt.estimate = make_estimate(effort, reads, hits);
        pt.tts = tts(effort, pt.estimate.p);
        pt.batches = count;
        pt.target_reached = hits >= static_cast<std::size_t>(config.target_hits);
        curve.points.push_back(pt);
    }
    return curve;
}

ProtocolRun run_protocol(const std::string& instance_id, const BatchSampler& sampler,
                         GroundTruthRegistry& registry, const ProtocolConfig& config,
                         const ProtocolHooks& hooks) {
    config.validate();
    ProtocolRun run;
    run.instance_id = instance_id;
    const auto best_known = [&] {
        const GroundTruthEntry* e = registry.find(instance_id);
        return e ? e->energy : std::numeric_limits<double>::infinity();
    };
    for (int effort : config.ladder) {
        std::size_t first = run.batches.size();
        bool resumed = false;
        for (const BatchRecord& b : hooks.completed) {
            if (b.effort != effort) continue;
            run.batches.push_back(b);
            if (!b.energy_counts.empty()) {
                registry.observe(instance_id, b.energy_counts.begin()->first, {}, Provenance::BestSeen);
            }
            resumed = true;
        }
        if (resumed) continue;
        for (int batch = 0; batch < config.max_batches; ++batch) {
            BatchResult result = sampler(effort, batch, config.batch_size);
            BatchRecord record;
            record.effort = effort;
            record.batch = batch;
            record.reads = result.energies.size();
            record.broken_chains = result.broken_chains;
            record.total_chains = result.total_chains;
            double lowest = std::numeric_limits<double>::infinity();
            for (double e : result.energies) {
                ++record.energy_counts[e];
                lowest = std::min(lowest, e);
            }
            if (!result.energies.empty()) {
                registry.observe(instance_id, lowest, result.best_spins, Provenance::BestSeen);
            }
            run.batches.push_back(std::move(record));
            const double best = best_known();
            std::size_t hits = 0;
            for (std::size_t i = first; i < run.batches.size(); ++i) hits += count_hits(run.batches[i], best);
            if (hits >= static_cast<std::size_t>(config.target_hits)) break;
        }
        if (hooks.on_effort_done) hooks.on_effort_done(run.batches);
    }
    run.curve = curve_from_batches(instance_id, run.batches, best_known(), config);
    return run;
}

}  // namespace glassbench
