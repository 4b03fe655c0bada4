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

#include "glassbench/glassbench.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <limits>
#include <new>
#include <string>

#include "glassbench/embedding.hpp"
#include "glassbench/error.hpp"
#include "glassbench/experiment.hpp"
#include "glassbench/lattice.hpp"
#include "glassbench/rng.hpp"
#include "glassbench/metrics.hpp"
#include "glassbench/sampler.hpp"
#include "glassbench/serialize.hpp"
#include "glassbench/topology.hpp"
#include "glassbench/verify.hpp"

using namespace glassbench;

struct gb_graph {
    HardwareGraph graph;
};
struct gb_instance {
    Instance instance;
};
struct gb_embedding {
    EmbeddingMap map;
};
struct gb_config {
    ExperimentConfig config;
};

namespace {

thread_local std::string last_error;

template <class F>
gb_status guard(F&& body) {
    try {
        last_error.clear();
        body();
        return GB_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return static_cast<gb_status>(e.code());
    } catch (const std::filesystem::filesystem_error& e) {
        last_error = e.what();
        return GB_IO;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return GB_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return GB_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) fail(ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void give(char** out, const std::string& s) {
    if (out) *out = dup_string(s);
}

LogFn forward(gb_line_fn fn, void* user) {
    if (!fn) return {};
    return [fn, user](const std::string& line) { fn(line.c_str(), user); };
}

}  // namespace

extern "C" {

const char* gb_version(void) { return kCodeVersion; }

const char* gb_last_error(void) { return last_error.c_str(); }

const char* gb_status_name(gb_status status) {
    if (status == GB_OK) return "Ok";
    if (status == GB_INTERNAL) return "Internal";
    return error_code_name(static_cast<ErrorCode>(status));
}

void gb_string_free(char* s) { std::free(s); }

uint64_t gb_derive_seed(uint64_t master, const uint64_t* tags, size_t count) {
    if (!tags) count = 0;
    return derive_seed(master, std::span<const std::uint64_t>(tags, count));
}

gb_status gb_graph_new(const char* family, const int* shape, size_t shape_len, gb_graph** out) {
    return guard([&] {
        require(family && shape && out, "null argument");
        const Family f = parse_family(family);
        GraphShape s;
        s.family = f;
        if (f == Family::Chimera) {
            require(shape_len == 3, "chimera shape is rows, cols, shore");
            s.rows = shape[0];
            s.cols = shape[1];
            s.shore = shape[2];
        } else {
            require(shape_len == 1, "pegasus shape is m");
            s.m = shape[0];
        }
        *out = new gb_graph{HardwareGraph::ideal(s)};
    });
}

gb_status gb_graph_with_random_defects(const gb_graph* graph, size_t qubits, size_t couplers, uint64_t seed,
                                       gb_graph** out) {
    return guard([&] {
        require(graph && out, "null argument");
        const DefectMask mask = sample_defect_mask(graph->graph, qubits, couplers, seed);
        *out = new gb_graph{apply_defects(graph->graph, mask)};
    });
}

gb_status gb_graph_load(const char* path, gb_graph** out) {
    return guard([&] {
        require(path && out, "null argument");
        *out = new gb_graph{graph_from_json(read_json(path))};
    });
}

gb_status gb_graph_save(const gb_graph* graph, const char* path) {
    return guard([&] {
        require(graph && path, "null argument");
        write_json(path, graph_to_json(graph->graph));
    });
}

gb_status gb_graph_stats_json(const gb_graph* graph, char** out) {
    return guard([&] {
        require(graph && out, "null argument");
        const GraphStats s = graph_stats(graph->graph);
        Json hist = Json::object();
        for (const auto& [d, n] : s.degree_histogram) hist[std::to_string(d)] = n;
        const Json doc = {{"family", family_name(graph->graph.family())},
                          {"shape", graph->graph.shape().describe()},
                          {"qubits", s.qubits},
                          {"couplers", s.couplers},
                          {"max_degree", s.max_degree},
                          {"min_degree", s.min_degree},
                          {"bipartite", s.bipartite},
                          {"degree_histogram", hist},
                          {"defect_qubits", graph->graph.defects().qubits.size()},
                          {"defect_couplers", graph->graph.defects().couplers.size()}};
        give(out, doc.dump());
    });
}

const char* gb_graph_family(const gb_graph* graph) { return graph ? family_name(graph->graph.family()) : ""; }

void gb_graph_free(gb_graph* graph) { delete graph; }

gb_status gb_instance_generate(int l1, int l2, int l3, uint64_t seed, gb_instance** out) {
    return guard([&] {
        require(out, "null argument");
        const LatticeSpec spec{l1, l2, l3};
        spec.validate();
        *out = new gb_instance{generate_instance(std::make_shared<const LogicalGraph>(spec), seed)};
    });
}

gb_status gb_instance_generate_for(const gb_embedding* embedding, uint64_t seed, gb_instance** out) {
    return guard([&] {
        require(embedding && out, "null argument");
        *out = new gb_instance{generate_instance(std::make_shared<const LogicalGraph>(covered_graph(embedding->map)), seed)};
    });
}

gb_status gb_instance_load(const char* path, gb_instance** out) {
    return guard([&] {
        require(path && out, "null argument");
        *out = new gb_instance{instance_from_json(read_json(path))};
    });
}

gb_status gb_instance_save(const gb_instance* instance, const char* path) {
    return guard([&] {
        require(instance && path, "null argument");
        write_json(path, instance_to_json(instance->instance));
    });
}

const char* gb_instance_id(const gb_instance* instance) { return instance ? instance->instance.id.c_str() : ""; }

size_t gb_instance_num_sites(const gb_instance* instance) {
    return instance ? instance->instance.graph->sites().size() : 0;
}

size_t gb_instance_num_edges(const gb_instance* instance) {
    return instance ? instance->instance.graph->edges().size() : 0;
}

void gb_instance_free(gb_instance* instance) { delete instance; }

gb_status gb_embedding_build(const gb_graph* working, int l1, int l2, int l3, uint64_t seed, int passes,
                             gb_embedding** out, gb_yield* yield) {
    return guard([&] {
        require(working && out, "null argument");
        require(passes >= 0, "passes must be non-negative");
        const LatticeSpec spec{l1, l2, l3};
        spec.validate();
        YieldResult y = place_and_maximize(spec, working->graph, seed, passes);
        if (yield) {
            *yield = {y.report.sites_embedded, y.report.sites_total, y.report.edges_embedded, y.report.edges_total};
        }
        *out = new gb_embedding{std::move(y.embedding)};
    });
}

gb_status gb_embedding_load(const char* path, gb_embedding** out) {
    return guard([&] {
        require(path && out, "null argument");
        *out = new gb_embedding{embedding_from_json(read_json(path))};
    });
}

gb_status gb_embedding_save(const gb_embedding* embedding, const char* path) {
    return guard([&] {
        require(embedding && path, "null argument");
        write_json(path, embedding_to_json(embedding->map));
    });
}

gb_status gb_embedding_validate(const gb_embedding* embedding, const gb_graph* working, int* passed,
                                char** violations) {
    return guard([&] {
        require(embedding && passed, "null argument");
        const HardwareGraph ideal = working ? HardwareGraph() : HardwareGraph::ideal(embedding->map.target);
        const HardwareGraph& g = working ? working->graph : ideal;
        ValidationReport report;
        try {
            report = validate_embedding(embedding->map, g, covered_graph(embedding->map));
        } catch (const Error& e) {
            report.passed = false;
            report.violations.push_back(e.what());
        }
        std::string text;
        for (const std::string& v : report.violations) text += v + "\n";
        *passed = report.passed ? 1 : 0;
        give(violations, text);
    });
}

void gb_embedding_free(gb_embedding* embedding) { delete embedding; }

gb_status gb_solve(const gb_instance* instance, const gb_embedding* embedding, const gb_graph* working,
                   const char* kind, int effort, int reads, uint64_t seed, double chain_strength,
                   const char* out_path, char** summary) {
    return guard([&] {
        require(instance && kind, "null argument");
        const Instance& inst = instance->instance;
        SamplerConfig cfg;
        cfg.kind = parse_sampler_kind(kind);
        cfg.effort = effort;
        cfg.reads = reads;
        cfg.seed = seed;
        cfg.validate();
        Json doc = {{"instance_id", inst.id}, {"sampler", kind}, {"effort", effort}, {"reads", reads}, {"seed", seed}};
        SampleSet set;
        if (embedding) {
            require(cfg.kind != SamplerKind::SaLogical, "sa-logical does not take an embedding");
            if (working) {
                const ValidationReport v = validate_embedding(embedding->map, working->graph, covered_graph(embedding->map));
                if (!v.passed) fail(ErrorCode::InvalidArgument, "embedding invalid on the graph: " + v.first());
            }
            const EmbeddedProblem problem = set_parameters(inst, embedding->map, chain_strength);
            set = sample_sa(problem, cfg);
            const ChainDecoder decoder(problem);
            SpinAssignment logical;
            std::size_t broken = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < set.reads.size(); ++r) {
                broken += decoder.decode(set.reads[r].spins, unembed_tie_seed(cfg.seed, r), logical);
                best = std::min(best, logical_energy(inst, logical));
            }
            doc["physical"] = true;
            doc["qubits"] = problem.variables.size();
            doc["offset"] = problem.offset;
            doc["best_logical_energy"] = best;
            doc["broken_chain_fraction"] =
                set.reads.empty() ? 0.0 : double(broken) / double(set.reads.size() * decoder.num_chains());
        } else {
            require(cfg.kind != SamplerKind::SaPhysical, "sa-physical needs an embedding");
            set = sample_sa(inst, cfg);
            double best = std::numeric_limits<double>::infinity();
            for (const Read& r : set.reads) best = std::min(best, r.energy);
            doc["physical"] = false;
            doc["best_logical_energy"] = best;
        }
        const std::vector<Sample> distinct = set.aggregate();
        doc["distinct"] = distinct.size();
        if (!distinct.empty()) {
            doc["lowest_energy"] = distinct.front().energy;
            doc["lowest_count"] = distinct.front().multiplicity;
        }
        if (out_path) write_text_atomic(out_path, samples_to_jsonl(set));
        give(summary, doc.dump());
    });
}

gb_status gb_tts(double effort, double p, double* out, int* solved) {
    return guard([&] {
        require(out && solved, "null argument");
        const std::optional<double> v = tts(effort, p);
        *solved = v ? 1 : 0;
        *out = v ? *v : std::numeric_limits<double>::infinity();
    });
}

gb_status gb_config_new_default(gb_config** out) {
    return guard([&] {
        require(out, "null argument");
        *out = new gb_config{ExperimentConfig()};
    });
}

gb_status gb_config_load(const char* path, gb_config** out) {
    return guard([&] {
        require(path && out, "null argument");
        Json doc;
        try {
            doc = read_json(path);
        } catch (const Error& e) {
            fail(ErrorCode::Config, e.what());
        }
        *out = new gb_config{config_from_json(doc)};
    });
}

gb_status gb_config_set(gb_config* config, const char* key, const char* value) {
    return guard([&] {
        require(config && key && value, "null argument");
        ExperimentConfig copy = config->config;
        set_config_value(copy, key, value);
        config->config = copy;
    });
}

gb_status gb_config_json(const gb_config* config, char** out) {
    return guard([&] {
        require(config && out, "null argument");
        give(out, config_to_json(config->config).dump(1));
    });
}

void gb_config_free(gb_config* config) { delete config; }

gb_status gb_run_scaling(const gb_config* config, gb_line_fn log, void* user, char** summary) {
    return guard([&] {
        require(config, "null argument");
        const ScalingResult r = run_scaling(config->config, forward(log, user));
        Json skipped = Json::array();
        for (const SkippedSize& s : r.skipped) skipped.push_back({{"family", family_name(s.family)}, {"L", s.size}, {"reason", s.reason}});
        Json outputs = Json::array();
        for (const ManifestEntry& e : r.manifest.outputs) outputs.push_back(e.path);
        give(summary, Json{{"output_dir", config->config.output_dir},
                           {"skipped", skipped},
                           {"failures", r.failures},
                           {"outputs", outputs}}
                          .dump());
    });
}

gb_status gb_run_compare(const char* results_a, const char* results_b, const char* out_csv, char** summary) {
    return guard([&] {
        require(results_a && results_b && out_csv, "null argument");
        const CompareResult r = run_compare(results_a, results_b, out_csv);
        std::size_t ratios = 0;
        for (const SpeedupEntry& e : r.report.pairs) ratios += e.ratio ? 1 : 0;
        give(summary, Json{{"pairs", r.report.pairs.size()},
                           {"ratios", ratios},
                           {"unsolved_a", r.report.unsolved_a},
                           {"unsolved_b", r.report.unsolved_b},
                           {"files", r.files}}
                          .dump());
    });
}

gb_status gb_run_isometry(const gb_config* config, gb_line_fn log, void* user, char** summary) {
    return guard([&] {
        require(config, "null argument");
        const IsometryResult r = run_isometry(config->config, forward(log, user));
        Json families = Json::object();
        for (std::size_t t = 0; t < r.summaries.size(); ++t) {
            std::size_t rows = 0, unsolved = 0;
            for (const auto& per : r.results[t]) rows += per.size();
            for (const IsometrySummary& s : r.summaries[t]) unsolved += s.unsolved;
            families[family_name(config->config.topologies[t].shape.family)] = {
                {"instances", r.summaries[t].size()}, {"rows", rows}, {"unsolved_runs", unsolved}};
        }
        give(summary, Json{{"output_dir", config->config.output_dir}, {"families", families}}.dump());
    });
}

gb_status gb_run_verify(const char* embedding_path, const char* graph_path, gb_line_fn log, void* user, int* passed) {
    return guard([&] {
        require(passed, "null argument");
        VerifyOptions options;
        if (embedding_path) options.embedding = embedding_path;
        if (graph_path) options.graph = graph_path;
        const LogFn fn = forward(log, user);
        const VerifyReport report = run_verification(options, [&](const CheckResult& c) {
            if (!fn) return;
            char secs[32];
            std::snprintf(secs, sizeof secs, "%.2f", c.seconds);
            fn(std::string(c.passed ? "PASS " : "FAIL ") + c.name + " (" + secs + " s): " + c.detail);
        });
        *passed = report.passed() ? 1 : 0;
    });
}

}  // extern "C"
