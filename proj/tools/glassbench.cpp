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

// Command-line front end. Talks to the library only through glassbench.h.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "glassbench/glassbench.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Failure {
    gb_status status;
    std::string message;
};

void check(gb_status s) {
    if (s != GB_OK) throw Failure{s, gb_last_error()};
}

void usage_error(const std::string& message) { throw Failure{GB_CONFIG, message}; }

std::string take(char* s) {
    std::string out = s ? s : "";
    gb_string_free(s);
    return out;
}

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            usage_error("expected comma-separated integers, got '" + text + "'");
        }
    }
    return out;
}

std::vector<int> parse_spec(const std::string& text) {
    std::vector<int> v = parse_ints(text);
    if (v.size() == 1) v = {v[0], v[0], v[0]};
    if (v.size() != 3) usage_error("lattice size is L or L1,L2,L3");
    return v;
}

std::optional<std::uint64_t> env_seed() {
    const char* s = std::getenv("GLASSBENCH_SEED");
    if (!s || !*s) return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (*end) usage_error("GLASSBENCH_SEED must be an unsigned integer");
    return v;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
    if (flag) return *flag;
    if (auto e = env_seed()) return *e;
    return fallback;
}

template <class T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
    T** out() { return &p; }
    operator T*() const { return p; }
};

using Graph = Handle<gb_graph, gb_graph_free>;
using InstanceH = Handle<gb_instance, gb_instance_free>;
using EmbeddingH = Handle<gb_embedding, gb_embedding_free>;
using Config = Handle<gb_config, gb_config_free>;

void print_line(const char* line, void*) {
    std::cerr << line << std::endl;
}

void default_graph(const std::string& family, Graph& g) {
    if (family == "chimera") {
        const int shape[] = {16, 16, 4};
        check(gb_graph_new("chimera", shape, 3, g.out()));
    } else {
        const int shape[] = {16};
        check(gb_graph_new(family.c_str(), shape, 1, g.out()));
    }
}

struct ExperimentFlags {
    std::string config;
    std::string sizes;
    std::optional<int> instances;
    std::string families;
    std::string out;
    std::optional<int> parallelism;
    std::optional<std::uint64_t> seed;
    std::string sampler;
    std::string ladder;
    std::vector<std::string> sets;
    bool quiet = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config, "JSON config file");
        cmd->add_option("--instances", instances, "Instances per size");
        cmd->add_option("--families", families, "Comma-separated families to run");
        cmd->add_option("--out", out, "Output directory");
        cmd->add_option("-j,--parallelism", parallelism, "Worker threads");
        cmd->add_option("--seed", seed, "Master seed");
        cmd->add_option("--sampler", sampler, "sa-physical, sa-logical or exact");
        cmd->add_option("--ladder", ladder, "Comma-separated effort ladder");
        cmd->add_option("--set", sets, "Override a config key: key=value (JSON value)");
        cmd->add_flag("-q,--quiet", quiet, "No progress output");
    }

    void apply(Config& cfg) const {
        if (config.empty()) {
            check(gb_config_new_default(cfg.out()));
        } else {
            check(gb_config_load(config.c_str(), cfg.out()));
        }
        if (auto s = resolve_seed(seed, 0); seed || env_seed()) {
            check(gb_config_set(cfg, "master_seed", std::to_string(s).c_str()));
        }
        if (!sizes.empty()) check(gb_config_set(cfg, "sizes", ("[" + sizes + "]").c_str()));
        if (instances) check(gb_config_set(cfg, "instances", std::to_string(*instances).c_str()));
        if (!families.empty()) check(gb_config_set(cfg, "families", families.c_str()));
        if (!out.empty()) check(gb_config_set(cfg, "output_dir", ("\"" + out + "\"").c_str()));
        if (parallelism) check(gb_config_set(cfg, "parallelism", std::to_string(*parallelism).c_str()));
        if (!sampler.empty()) check(gb_config_set(cfg, "sampler", ("\"" + sampler + "\"").c_str()));
        if (!ladder.empty()) check(gb_config_set(cfg, "ladder", ("[" + ladder + "]").c_str()));
        for (const std::string& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) usage_error("--set expects key=value");
            check(gb_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
        }
    }
};

int run(int argc, char** argv) {
    CLI::App app{"glassbench: 3D spin-glass embedding and time-to-solution benchmarks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", gb_version());

    // topology
    auto* topo = app.add_subcommand("topology", "Build a hardware graph, optionally with random defects");
    std::string topo_family = "chimera", topo_shape, topo_out;
    std::optional<std::uint64_t> defect_seed;
    std::size_t defect_qubits = 0, defect_couplers = 0;
    topo->add_option("--family", topo_family, "chimera or pegasus")->capture_default_str();
    topo->add_option("--shape", topo_shape, "rows,cols,shore for chimera; m for pegasus");
    topo->add_option("--defect-seed", defect_seed, "Seed for the defect mask");
    topo->add_option("--defect-qubits", defect_qubits, "Qubits to remove");
    topo->add_option("--defect-couplers", defect_couplers, "Couplers to remove");
    topo->add_option("--out", topo_out, "Graph JSON to write");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate random +/-1 instances");
    std::string gen_L, gen_out = "instances", gen_emb;
    int gen_count = 1;
    std::optional<std::uint64_t> gen_seed;
    gen->add_option("--L", gen_L, "L or L1,L2,L3")->required();
    gen->add_option("--count", gen_count, "Number of instances")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Master seed");
    gen->add_option("--emb", gen_emb, "Restrict to the logical graph this embedding covers");
    gen->add_option("--out", gen_out, "Output directory")->capture_default_str();

    // embed
    auto* embed = app.add_subcommand("embed", "Embed an L1 x L2 x L3 lattice");
    std::string emb_family, emb_L, emb_graph, emb_out = "embedding.json";
    std::optional<std::uint64_t> emb_seed;
    int emb_passes = 20;
    embed->add_option("--family", emb_family, "chimera or pegasus");
    embed->add_option("--L", emb_L, "L or L1,L2,L3")->required();
    embed->add_option("--graph", emb_graph, "Working graph JSON (default: ideal graph)");
    embed->add_option("--seed", emb_seed, "Seed for yield repair");
    embed->add_option("--passes", emb_passes, "Yield improvement passes")->capture_default_str();
    embed->add_option("--out", emb_out, "Embedding JSON to write")->capture_default_str();

    // validate
    auto* validate = app.add_subcommand("validate", "Validate an embedding against a graph");
    std::string val_emb, val_graph;
    validate->add_option("--emb", val_emb, "Embedding JSON")->required();
    validate->add_option("--graph", val_graph, "Working graph JSON (default: ideal graph)");

    // solve
    auto* solve = app.add_subcommand("solve", "Sample one instance");
    std::string sol_instance, sol_emb, sol_graph, sol_kind, sol_out;
    int sol_effort = 64, sol_reads = 100;
    double sol_cs = 2.0;
    std::optional<std::uint64_t> sol_seed;
    solve->add_option("--instance", sol_instance, "Instance JSON")->required();
    solve->add_option("--emb", sol_emb, "Embedding JSON (physical sampling)");
    solve->add_option("--graph", sol_graph, "Working graph the embedding must respect");
    solve->add_option("--kind", sol_kind, "sa-physical, sa-logical or exact");
    solve->add_option("--effort", sol_effort, "Sweeps per anneal")->capture_default_str();
    solve->add_option("--reads", sol_reads, "Number of anneals")->capture_default_str();
    solve->add_option("--seed", sol_seed, "Sampler seed");
    solve->add_option("--chain-strength", sol_cs, "Chain coupling magnitude")->capture_default_str();
    solve->add_option("--out", sol_out, "JSON-lines sample file");

    // scaling
    auto* scaling = app.add_subcommand("scaling", "Time-to-solution scaling study");
    ExperimentFlags scaling_flags;
    scaling_flags.attach(scaling);
    scaling->add_option("--sizes", scaling_flags.sizes, "Comma-separated lattice sizes");

    // compare
    auto* compare = app.add_subcommand("compare", "Instance-to-instance speedup between two result files");
    std::string cmp_a, cmp_b, cmp_out = "speedup.csv";
    compare->add_option("a", cmp_a, "Per-instance results JSONL (A)")->required();
    compare->add_option("b", cmp_b, "Per-instance results JSONL (B)")->required();
    compare->add_option("--out", cmp_out, "Speedup CSV")->capture_default_str();

    // isometry
    auto* iso = app.add_subcommand("isometry", "Consistency over the 48 cube isometries");
    ExperimentFlags iso_flags;
    iso_flags.attach(iso);
    std::optional<int> iso_L, iso_effort;
    iso->add_option("--L", iso_L, "Cube side");
    iso->add_option("--effort", iso_effort, "Fixed effort");

    // verify
    auto* verify = app.add_subcommand("verify", "Run the self-check suite");
    std::string ver_emb, ver_graph;
    verify->add_option("--emb", ver_emb, "Embedding fixture to validate as well");
    verify->add_option("--graph", ver_graph, "Graph for the fixture");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (*topo) {
        Graph ideal, g;
        std::vector<int> shape = topo_shape.empty() ? (topo_family == "chimera" ? std::vector<int>{16, 16, 4}
                                                                               : std::vector<int>{16})
                                                    : parse_ints(topo_shape);
        check(gb_graph_new(topo_family.c_str(), shape.data(), shape.size(), ideal.out()));
        gb_graph* result = ideal;
        if (defect_qubits || defect_couplers) {
            check(gb_graph_with_random_defects(ideal, defect_qubits, defect_couplers, resolve_seed(defect_seed, 0),
                                               g.out()));
            result = g;
        }
        if (!topo_out.empty()) check(gb_graph_save(result, topo_out.c_str()));
        char* stats = nullptr;
        check(gb_graph_stats_json(result, &stats));
        std::cout << take(stats) << "\n";
        return kExitOk;
    }
    if (*gen) {
        const std::vector<int> spec = parse_spec(gen_L);
        if (gen_count < 1) usage_error("--count must be positive");
        const std::uint64_t master = resolve_seed(gen_seed, 0);
        EmbeddingH emb;
        if (!gen_emb.empty()) check(gb_embedding_load(gen_emb.c_str(), emb.out()));
        std::filesystem::create_directories(gen_out);
        for (int i = 0; i < gen_count; ++i) {
            const std::uint64_t tags[] = {static_cast<std::uint64_t>(i)};
            const std::uint64_t seed = gb_derive_seed(master, tags, 1);
            InstanceH inst;
            if (emb) {
                check(gb_instance_generate_for(emb, seed, inst.out()));
            } else {
                check(gb_instance_generate(spec[0], spec[1], spec[2], seed, inst.out()));
            }
            char name[64];
            std::snprintf(name, sizeof name, "L%d_%03d.json", spec[0], i);
            const std::string path = (std::filesystem::path(gen_out) / name).string();
            check(gb_instance_save(inst, path.c_str()));
            std::cout << path << " " << gb_instance_id(inst) << "\n";
        }
        return kExitOk;
    }
    if (*embed) {
        const std::vector<int> spec = parse_spec(emb_L);
        Graph g;
        if (!emb_graph.empty()) {
            check(gb_graph_load(emb_graph.c_str(), g.out()));
            if (!emb_family.empty() && emb_family != gb_graph_family(g)) {
                throw Failure{GB_WRONG_FAMILY, "graph is " + std::string(gb_graph_family(g)) + ", not " + emb_family};
            }
        } else {
            default_graph(emb_family.empty() ? "pegasus" : emb_family, g);
        }
        EmbeddingH emb;
        gb_yield y{};
        check(gb_embedding_build(g, spec[0], spec[1], spec[2], resolve_seed(emb_seed, 0), emb_passes, emb.out(), &y));
        check(gb_embedding_save(emb, emb_out.c_str()));
        std::cout << "sites " << y.sites_embedded << "/" << y.sites_total << ", edges " << y.edges_embedded << "/"
                  << y.edges_total << " -> " << emb_out << "\n";
        return kExitOk;
    }
    if (*validate) {
        EmbeddingH emb;
        Graph g;
        check(gb_embedding_load(val_emb.c_str(), emb.out()));
        if (!val_graph.empty()) check(gb_graph_load(val_graph.c_str(), g.out()));
        int passed = 0;
        char* violations = nullptr;
        check(gb_embedding_validate(emb, g, &passed, &violations));
        const std::string text = take(violations);
        if (passed) {
            std::cout << "valid\n";
            return kExitOk;
        }
        std::cout << "invalid: " << text.substr(0, text.find('\n')) << "\n";
        return kExitFailure;
    }
    if (*solve) {
        InstanceH inst;
        EmbeddingH emb;
        Graph g;
        check(gb_instance_load(sol_instance.c_str(), inst.out()));
        if (!sol_emb.empty()) check(gb_embedding_load(sol_emb.c_str(), emb.out()));
        if (!sol_graph.empty()) check(gb_graph_load(sol_graph.c_str(), g.out()));
        if (sol_kind.empty()) sol_kind = emb ? "sa-physical" : "sa-logical";
        char* summary = nullptr;
        check(gb_solve(inst, emb, g, sol_kind.c_str(), sol_effort, sol_reads, resolve_seed(sol_seed, 0), sol_cs,
                       sol_out.empty() ? nullptr : sol_out.c_str(), &summary));
        std::cout << take(summary) << "\n";
        return kExitOk;
    }
    if (*scaling) {
        Config cfg;
        scaling_flags.apply(cfg);
        char* summary = nullptr;
        check(gb_run_scaling(cfg, scaling_flags.quiet ? nullptr : print_line, nullptr, &summary));
        std::cout << take(summary) << "\n";
        return kExitOk;
    }
    if (*compare) {
        char* summary = nullptr;
        check(gb_run_compare(cmp_a.c_str(), cmp_b.c_str(), cmp_out.c_str(), &summary));
        std::cout << take(summary) << "\n";
        return kExitOk;
    }
    if (*iso) {
        Config cfg;
        iso_flags.apply(cfg);
        if (iso_L) check(gb_config_set(cfg, "isometry.L", std::to_string(*iso_L).c_str()));
        if (iso_effort) check(gb_config_set(cfg, "isometry.effort", std::to_string(*iso_effort).c_str()));
        if (iso_flags.instances) {
            check(gb_config_set(cfg, "isometry.instances", std::to_string(*iso_flags.instances).c_str()));
        }
        char* summary = nullptr;
        check(gb_run_isometry(cfg, iso_flags.quiet ? nullptr : print_line, nullptr, &summary));
        std::cout << take(summary) << "\n";
        return kExitOk;
    }
    if (*verify) {
        int passed = 0;
        check(gb_run_verify(ver_emb.empty() ? nullptr : ver_emb.c_str(), ver_graph.empty() ? nullptr : ver_graph.c_str(),
                            [](const char* line, void*) { std::cout << line << std::endl; }, nullptr, &passed));
        return passed ? kExitOk : kExitFailure;
    }
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Failure& f) {
        std::cerr << "glassbench: " << gb_status_name(f.status) << ": " << f.message << "\n";
        return f.status == GB_CONFIG || f.status == GB_INVALID_ARGUMENT ? kExitConfig : kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "glassbench: " << e.what() << "\n";
        return kExitFailure;
    }
}
