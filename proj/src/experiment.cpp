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

#include "glassbench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "glassbench/embedding.hpp"
#include "glassbench/error.hpp"
#include "glassbench/lattice.hpp"
#include "glassbench/rng.hpp"

namespace glassbench {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string padded(int value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*d", width, value);
    return buf;
}

std::string join_csv(std::initializer_list<std::string> cells) {
    std::string row;
    bool first = true;
    for (const std::string& c : cells) {
        if (!first) row += ',';
        row += c;
        first = false;
    }
    return row + "\n";
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex mu;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next++;
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
    if (count <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < count; ++i) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

class Logger {
public:
    explicit Logger(const LogFn& fn) : fn_(fn) {}
    void operator()(const std::string& line) const {
        if (!fn_) return;
        std::lock_guard<std::mutex> lock(mu_);
        fn_(line);
    }

private:
    const LogFn& fn_;
    mutable std::mutex mu_;
};

std::uint64_t family_tag(Family f) { return purpose_tag(family_name(f)); }

HardwareGraph working_graph(const ExperimentConfig& config, const TopologySetting& t) {
    HardwareGraph ideal = HardwareGraph::ideal(t.shape);
    if (t.defect_qubits == 0 && t.defect_couplers == 0) return ideal;
    const std::uint64_t seed =
        t.defect_seed ? *t.defect_seed : derive_seed(config.master_seed, {purpose_tag("defects"), family_tag(t.shape.family)});
    return apply_defects(ideal, sample_defect_mask(ideal, t.defect_qubits, t.defect_couplers, seed));
}

Json batch_to_json(const BatchRecord& b) {
    Json energies = Json::array();
    for (const auto& [e, n] : b.energy_counts) energies.push_back(Json::array({e, n}));
    return {{"effort", b.effort},     {"batch", b.batch},       {"reads", b.reads},
            {"broken", b.broken_chains}, {"total", b.total_chains}, {"energies", energies}};
}

BatchRecord batch_from_json(const Json& j) {
    BatchRecord b;
    b.effort = j.at("effort").get<int>();
    b.batch = j.at("batch").get<int>();
    b.reads = j.at("reads").get<std::size_t>();
    b.broken_chains = j.at("broken").get<std::size_t>();
    b.total_chains = j.at("total").get<std::size_t>();
    for (const Json& e : j.at("energies")) b.energy_counts[e.at(0).get<double>()] = e.at(1).get<std::size_t>();
    return b;
}

// Everything that changes what a task computes.
Json task_settings(const ExperimentConfig& c) {
    Json ladder = c.protocol.ladder;
    return {{"master_seed", c.master_seed}, {"ladder", ladder},
            {"batch_size", c.protocol.batch_size}, {"target_hits", c.protocol.target_hits},
            {"max_batches", c.protocol.max_batches}, {"sampler", sampler_kind_name(c.sampler)},
            {"beta_min", c.beta_min}, {"beta_max", c.beta_max}, {"chain_strength", c.chain_strength}};
}

// One protocol task: an instance (possibly an isometric image) on one family.
struct Task {
    std::size_t topology = 0;
    int size = 0;
    int index = 0;
    int isometry = 0;
    std::shared_ptr<const Instance> instance;  // what is sampled
    std::string registry_id;                   // base instance id
    const EmbeddingMap* embedding = nullptr;
    std::string embedding_hash;
    fs::path checkpoint;
    // filled by execution
    ProtocolRun run;
    std::string error;
};

BatchSampler make_sampler(const ExperimentConfig& config, const Task& task, Family family,
                          std::shared_ptr<void>& keepalive) {
    const Instance& inst = *task.instance;
    SamplerConfig base;
    base.kind = config.sampler;
    base.beta_min = config.beta_min;
    base.beta_max = config.beta_max;
    const std::uint64_t tags[] = {purpose_tag("anneal"), family_tag(family), static_cast<std::uint64_t>(task.size),
                                  static_cast<std::uint64_t>(task.index), static_cast<std::uint64_t>(task.isometry)};
    const std::uint64_t stream = derive_seed(config.master_seed, std::span<const std::uint64_t>(tags));

    auto batch_config = [base, stream](int effort, int batch, int reads) {
        SamplerConfig cfg = base;
        cfg.effort = effort;
        cfg.reads = reads;
        cfg.seed = derive_seed(stream, {static_cast<std::uint64_t>(effort), static_cast<std::uint64_t>(batch)});
        return cfg;
    };

    if (config.sampler == SamplerKind::SaPhysical) {
        struct State {
            EmbeddedProblem problem;
            IsingModel model;
            std::unique_ptr<ChainDecoder> decoder;
        };
        auto st = std::make_shared<State>();
        st->problem = set_parameters(inst, *task.embedding, config.chain_strength);
        st->model = physical_model(st->problem);
        st->decoder = std::make_unique<ChainDecoder>(st->problem);
        keepalive = st;
        const State* s = st.get();
        return [s, &inst, batch_config](int effort, int batch, int reads) {
            const SamplerConfig cfg = batch_config(effort, batch, reads);
            const Annealer annealer(s->model, cfg);
            BatchResult out;
            std::vector<std::int8_t> dense(s->model.num_variables);
            SpinAssignment logical;
            double best = std::numeric_limits<double>::infinity();
            for (int r = 0; r < reads; ++r) {
                annealer.anneal(static_cast<std::uint64_t>(r), dense);
                out.broken_chains += s->decoder->decode(dense, unembed_tie_seed(cfg.seed, r), logical);
                const double e = logical_energy(inst, logical);
                out.energies.push_back(e);
                if (e < best) {
                    best = e;
                    out.best_spins = logical;
                }
            }
            out.total_chains = static_cast<std::size_t>(reads) * s->decoder->num_chains();
            return out;
        };
    }

    struct LogicalState {
        IsingModel model;
        std::optional<ExactResult> exact;
    };
    auto st = std::make_shared<LogicalState>();
    st->model = logical_model(inst);
    if (config.sampler == SamplerKind::Exact) st->exact = solve_exact(st->model);
    keepalive = st;
    const LogicalState* s = st.get();
    return [s, &inst, batch_config](int effort, int batch, int reads) {
        BatchResult out;
        const std::span<const SiteIndex> sites = inst.graph->sites();
        auto to_full = [&](const std::vector<std::int8_t>& dense) {
            SpinAssignment full(static_cast<std::size_t>(inst.graph->spec().num_sites()), 0);
            for (std::size_t v = 0; v < sites.size(); ++v) full[static_cast<std::size_t>(sites[v])] = dense[v];
            return full;
        };
        if (s->exact) {
            out.energies.assign(static_cast<std::size_t>(reads), s->exact->min_energy);
            out.best_spins = to_full(s->exact->assignment);
            return out;
        }
        const SamplerConfig cfg = batch_config(effort, batch, reads);
        const Annealer annealer(s->model, cfg);
        std::vector<std::int8_t> dense(s->model.num_variables);
        double best = std::numeric_limits<double>::infinity();
        for (int r = 0; r < reads; ++r) {
            const double e = annealer.anneal(static_cast<std::uint64_t>(r), dense);
            out.energies.push_back(e);
            if (e < best) {
                best = e;
                out.best_spins = to_full(dense);
            }
        }
        return out;
    };
}

void execute_task(const ExperimentConfig& config, Task& task, Family family, const GroundTruthRegistry& initial,
                  const ProtocolConfig& protocol) {
    GroundTruthRegistry local;
    if (const GroundTruthEntry* e = initial.find(task.registry_id)) {
        local.observe(task.registry_id, e->energy, e->witness, e->provenance);
    }
    Json settings = task_settings(config);
    settings["ladder"] = protocol.ladder;
    const Json key_doc = {{"settings", settings},      {"instance", task.instance->id},
                          {"registry_id", task.registry_id}, {"family", family_name(family)},
                          {"embedding", task.embedding_hash}, {"size", task.size},
                          {"index", task.index},          {"isometry", task.isometry}};
    const std::string key = content_hash(key_doc.dump());

    ProtocolHooks hooks;
    if (fs::exists(task.checkpoint)) {
        try {
            const Json doc = read_json(task.checkpoint);
            if (doc.at("key").get<std::string>() == key) {
                for (const Json& b : doc.at("batches")) hooks.completed.push_back(batch_from_json(b));
            }
        } catch (const std::exception&) {
            hooks.completed.clear();  // unreadable checkpoint: recompute
        }
    }
    hooks.on_effort_done = [&](const std::vector<BatchRecord>& batches) {
        Json list = Json::array();
        for (const BatchRecord& b : batches) list.push_back(batch_to_json(b));
        write_json(task.checkpoint, {{"key", key}, {"instance_id", task.registry_id}, {"batches", list}});
    };
    std::shared_ptr<void> keepalive;
    const BatchSampler sampler = make_sampler(config, task, family, keepalive);
    task.run = run_protocol(task.registry_id, sampler, local, protocol, hooks);
}

// Exact ground state when small enough, otherwise a best-seen reference from logical SA.
void seed_registry(const ExperimentConfig& config, const Instance& inst, std::uint64_t seed,
                   GroundTruthRegistry& registry, std::mutex& mu) {
    if (inst.graph->sites().size() <= kMaxExactVariables) {
        const LogicalOptimum opt = solve_exact(inst);
        std::lock_guard<std::mutex> lock(mu);
        registry.observe(inst.id, opt.energy, opt.spins, Provenance::Exact);
        return;
    }
    if (config.reference_reads <= 0) return;
    SamplerConfig cfg;
    cfg.kind = SamplerKind::SaLogical;
    cfg.effort = config.reference_effort;
    cfg.reads = config.reference_reads;
    cfg.seed = seed;
    cfg.beta_min = config.beta_min;
    cfg.beta_max = config.beta_max;
    const SampleSet set = sample_sa(inst, cfg);
    const Read* best = nullptr;
    for (const Read& r : set.reads) {
        if (!best || r.energy < best->energy) best = &r;
    }
    if (!best) return;
    SpinAssignment full(static_cast<std::size_t>(inst.graph->spec().num_sites()), 0);
    for (std::size_t v = 0; v < set.labels.size(); ++v) full[static_cast<std::size_t>(set.labels[v])] = best->spins[v];
    std::lock_guard<std::mutex> lock(mu);
    registry.observe(inst.id, best->energy, full, Provenance::BestSeen);
}

double best_energy(const GroundTruthRegistry& registry, const std::string& id) {
    const GroundTruthEntry* e = registry.find(id);
    return e ? e->energy : std::numeric_limits<double>::infinity();
}

void write_manifest(const fs::path& dir, RunManifest& manifest) {
    manifest.outputs.clear();
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const fs::path rel = fs::relative(entry.path(), dir);
        if (rel == "manifest.json" || rel.extension() == ".tmp") continue;
        files.push_back(rel);
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& rel : files) {
        const std::string bytes = read_text(dir / rel);
        manifest.outputs.push_back({rel.generic_string(), content_hash(bytes), bytes.size()});
    }
    manifest.finished = utc_now();
    write_json(dir / "manifest.json", manifest_to_json(manifest));
}

std::string curve_rows(const Task& task, const TTSCurve& curve) {
    std::string out;
    for (const CurvePoint& p : curve.points) {
        out += join_csv({curve.instance_id, std::to_string(task.size), std::to_string(task.isometry),
                         std::to_string(p.estimate.effort), std::to_string(p.estimate.reads),
                         std::to_string(p.estimate.hits), format_number(p.estimate.p), format_optional(p.tts),
                         std::to_string(p.batches), p.target_reached ? "1" : "0"});
    }
    return out;
}

std::string estimate_lines(const Task& task, double best) {
    std::string out;
    for (const BatchRecord& b : task.run.batches) {
        const SuccessEstimate est = make_estimate(b.effort, b.reads, count_hits(b, best));
        Json line = {{"instance_id", task.registry_id}, {"L", task.size},     {"isometry", task.isometry},
                     {"effort", b.effort},             {"batch", b.batch},   {"reads", est.reads},
                     {"hits", est.hits},               {"p", est.p},
                     {"broken_chain_fraction",
                      b.total_chains ? double(b.broken_chains) / double(b.total_chains) : 0.0}};
        out += line.dump() + "\n";
    }
    return out;
}

const char* kCurveHeader = "instance_id,L,isometry_index,effort,reads,hits,p,tts,batches,target_reached\n";

}  // namespace

ExperimentConfig::ExperimentConfig() {
    TopologySetting chimera;
    chimera.shape = {Family::Chimera, 16, 16, 4, 0};
    chimera.defect_qubits = 7;
    TopologySetting pegasus;
    pegasus.shape = {Family::Pegasus, 0, 0, 0, 16};
    pegasus.defect_qubits = 130;
    topologies = {chimera, pegasus};
}

void ExperimentConfig::validate() const {
    if (sizes.empty()) fail(ErrorCode::Config, "no lattice sizes configured");
    for (int L : sizes) {
        if (L < 1) fail(ErrorCode::Config, "lattice sizes must be positive");
    }
    if (std::set<int>(sizes.begin(), sizes.end()).size() != sizes.size()) {
        fail(ErrorCode::Config, "lattice sizes must be distinct");
    }
    if (instances < 1) fail(ErrorCode::Config, "instances must be positive");
    if (topologies.empty()) fail(ErrorCode::Config, "no topologies configured");
    std::set<Family> families;
    for (const TopologySetting& t : topologies) {
        if (!families.insert(t.shape.family).second) fail(ErrorCode::Config, "each family may appear once");
    }
    protocol.validate();
    if (!(beta_min > 0) || !(beta_max >= beta_min)) fail(ErrorCode::Config, "need 0 < beta_min <= beta_max");
    if (!(chain_strength > 0)) fail(ErrorCode::Config, "chain strength must be positive");
    if (yield_passes < 0) fail(ErrorCode::Config, "yield passes must be non-negative");
    if (reference_reads < 0 || reference_effort < 1) fail(ErrorCode::Config, "bad reference pass settings");
    if (isometry.size < 1 || isometry.instances < 1 || isometry.effort < 1) {
        fail(ErrorCode::Config, "isometry size, instances and effort must be positive");
    }
    if (output_dir.empty()) fail(ErrorCode::Config, "output directory is empty");
    if (parallelism < 1) fail(ErrorCode::Config, "parallelism must be positive");
}

Json config_to_json(const ExperimentConfig& c) {
    Json topologies = Json::array();
    for (const TopologySetting& t : c.topologies) {
        Json j = {{"family", family_name(t.shape.family)},
                  {"shape", shape_to_json(t.shape)},
                  {"defect_qubits", t.defect_qubits},
                  {"defect_couplers", t.defect_couplers}};
        j["defect_seed"] = t.defect_seed ? Json(*t.defect_seed) : Json(nullptr);
        topologies.push_back(j);
    }
    return {{"master_seed", c.master_seed},
            {"sizes", c.sizes},
            {"instances", c.instances},
            {"topologies", topologies},
            {"ladder", c.protocol.ladder},
            {"batch_size", c.protocol.batch_size},
            {"target_hits", c.protocol.target_hits},
            {"max_batches", c.protocol.max_batches},
            {"sampler", sampler_kind_name(c.sampler)},
            {"beta_min", c.beta_min},
            {"beta_max", c.beta_max},
            {"chain_strength", c.chain_strength},
            {"yield_passes", c.yield_passes},
            {"reference_reads", c.reference_reads},
            {"reference_effort", c.reference_effort},
            {"isometry", {{"L", c.isometry.size}, {"instances", c.isometry.instances}, {"effort", c.isometry.effort}}},
            {"output_dir", c.output_dir},
            {"parallelism", c.parallelism}};
}

ExperimentConfig config_from_json(const Json& doc) {
    if (!doc.is_object()) fail(ErrorCode::Config, "config must be a JSON object");
    ExperimentConfig c;
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "master_seed") c.master_seed = v.get<std::uint64_t>();
            else if (key == "sizes") c.sizes = v.get<std::vector<int>>();
            else if (key == "instances") c.instances = v.get<int>();
            else if (key == "ladder") c.protocol.ladder = v.get<std::vector<int>>();
            else if (key == "batch_size") c.protocol.batch_size = v.get<int>();
            else if (key == "target_hits") c.protocol.target_hits = v.get<int>();
            else if (key == "max_batches") c.protocol.max_batches = v.get<int>();
            else if (key == "sampler") c.sampler = parse_sampler_kind(v.get<std::string>());
            else if (key == "beta_min") c.beta_min = v.get<double>();
            else if (key == "beta_max") c.beta_max = v.get<double>();
            else if (key == "chain_strength") c.chain_strength = v.get<double>();
            else if (key == "yield_passes") c.yield_passes = v.get<int>();
            else if (key == "reference_reads") c.reference_reads = v.get<int>();
            else if (key == "reference_effort") c.reference_effort = v.get<int>();
            else if (key == "output_dir") c.output_dir = v.get<std::string>();
            else if (key == "parallelism") c.parallelism = v.get<int>();
            else if (key == "isometry") {
                for (const auto& [k, iv] : v.items()) {
                    if (k == "L") c.isometry.size = iv.get<int>();
                    else if (k == "instances") c.isometry.instances = iv.get<int>();
                    else if (k == "effort") c.isometry.effort = iv.get<int>();
                    else fail(ErrorCode::Config, "unknown config key 'isometry." + k + "'");
                }
            } else if (key == "topologies") {
                c.topologies.clear();
                for (const Json& t : v) {
                    TopologySetting s;
                    s.shape = shape_from_json(t.at("family"), t.value("shape", Json::object()));
                    s.defect_qubits = t.value("defect_qubits", std::size_t{0});
                    s.defect_couplers = t.value("defect_couplers", std::size_t{0});
                    if (t.contains("defect_seed") && !t.at("defect_seed").is_null()) {
                        s.defect_seed = t.at("defect_seed").get<std::uint64_t>();
                    }
                    c.topologies.push_back(s);
                }
            } else {
                fail(ErrorCode::Config, "unknown config key '" + key + "'");
            }
        }
    } catch (const Json::exception& e) {
        fail(ErrorCode::Config, std::string("bad config value: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Config) throw;
        fail(ErrorCode::Config, e.what());
    }
    c.validate();
    return c;
}

void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
    Json v;
    try {
        v = Json::parse(value);
    } catch (const Json::exception&) {
        v = value;
    }
    if (key == "families") {
        std::set<Family> keep;
        std::stringstream ss(v.is_string() ? v.get<std::string>() : value);
        for (std::string name; std::getline(ss, name, ',');) {
            try {
                keep.insert(parse_family(name));
            } catch (const Error& e) {
                fail(ErrorCode::Config, e.what());
            }
        }
        std::vector<TopologySetting> kept;
        for (const TopologySetting& t : config.topologies) {
            if (keep.count(t.shape.family)) kept.push_back(t);
        }
        config.topologies = kept;
        config.validate();
        return;
    }
    if (key == "defects") {
        const bool off = (v.is_string() && (v.get<std::string>() == "none" || v.get<std::string>() == "off")) ||
                         (v.is_boolean() && !v.get<bool>());
        if (!off) fail(ErrorCode::Config, "defects accepts only \"none\"");
        for (TopologySetting& t : config.topologies) {
            t.defect_qubits = 0;
            t.defect_couplers = 0;
        }
        return;
    }
    if ((key == "sizes" || key == "ladder") && v.is_string()) {
        // "3,4,5" shorthand
        v = Json::parse("[" + value + "]", nullptr, false);
        if (v.is_discarded()) fail(ErrorCode::Config, "bad list for '" + key + "'");
    }
    if (key == "sizes" || key == "ladder") {
        if (v.is_number()) v = Json::array({v});
    }
    Json doc = config_to_json(config);
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
        if (!doc.contains(key)) fail(ErrorCode::Config, "unknown config key '" + key + "'");
        doc[key] = v;
    } else {
        const std::string head = key.substr(0, dot), tail = key.substr(dot + 1);
        if (!doc.contains(head) || !doc[head].is_object() || !doc[head].contains(tail)) {
            fail(ErrorCode::Config, "unknown config key '" + key + "'");
        }
        doc[head][tail] = v;
    }
    config = config_from_json(doc);
}

const ManifestEntry* RunManifest::find(const std::string& path) const {
    for (const ManifestEntry& e : outputs) {
        if (e.path == path) return &e;
    }
    return nullptr;
}

Json manifest_to_json(const RunManifest& m) {
    Json outputs = Json::array();
    for (const ManifestEntry& e : m.outputs) outputs.push_back({{"path", e.path}, {"fnv1a64", e.hash}, {"bytes", e.bytes}});
    return {{"command", m.command}, {"code_version", m.code_version}, {"config", m.config},
            {"started", m.started}, {"finished", m.finished},         {"outputs", outputs}};
}

ScalingResult run_scaling(const ExperimentConfig& config, const LogFn& log_fn) {
    config.validate();
    const Logger log(log_fn);
    const fs::path dir = config.output_dir;
    ScalingResult result;
    result.manifest.command = "scaling";
    result.manifest.config = config_to_json(config);
    result.manifest.started = utc_now();
    const std::size_t nt = config.topologies.size();

    std::vector<HardwareGraph> working;
    for (const TopologySetting& t : config.topologies) {
        working.push_back(working_graph(config, t));
        write_json(dir / "graphs" / (std::string(family_name(t.shape.family)) + ".json"), graph_to_json(working.back()));
        log("graph " + t.shape.describe() + ": " + std::to_string(working.back().qubits().size()) + " working qubits");
    }

    std::vector<int> sizes = config.sizes;
    std::sort(sizes.begin(), sizes.end());
    std::string yield_csv = "family,L,sites_embedded,sites_total,edges_embedded,edges_total,shared_sites,shared_edges\n";
    std::string skipped_csv = "family,L,reason\n";

    // Embeddings per (topology, size); shared logical graph per size.
    std::map<std::pair<std::size_t, int>, EmbeddingMap> embeddings;
    std::map<std::pair<std::size_t, int>, std::string> embedding_hashes;
    std::map<int, std::shared_ptr<const LogicalGraph>> shared;
    std::map<int, std::vector<std::size_t>> families_at;
    std::vector<std::string> yield_rows;
    std::map<std::pair<std::size_t, int>, YieldReport> reports;
    for (int L : sizes) {
        const LatticeSpec spec{L, L, L};
        std::optional<LogicalGraph> common;
        std::map<std::size_t, YieldResult> yields;
        for (std::size_t t = 0; t < nt; ++t) {
            const Family f = config.topologies[t].shape.family;
            try {
                YieldResult y = place_and_maximize(
                    spec, working[t],
                    derive_seed(config.master_seed, {purpose_tag("yield"), family_tag(f), static_cast<std::uint64_t>(L)}),
                    config.yield_passes);
                common = common ? intersect(*common, y.logical) : y.logical;
                yields.emplace(t, std::move(y));
            } catch (const Error& e) {
                result.skipped.push_back({f, L, error_code_name(e.code())});
                skipped_csv += join_csv({family_name(f), std::to_string(L), error_code_name(e.code())});
                log(std::string("skip ") + family_name(f) + " L=" + std::to_string(L) + ": " + e.what());
            }
        }
        if (!common) continue;
        if (common->edges().empty()) {
            for (const auto& [t, y] : yields) {
                const Family f = config.topologies[t].shape.family;
                result.skipped.push_back({f, L, "EmptyGraph"});
                skipped_csv += join_csv({family_name(f), std::to_string(L), "EmptyGraph"});
            }
            continue;
        }
        shared[L] = std::make_shared<const LogicalGraph>(*common);
        for (auto& [t, y] : yields) {
            const Family f = config.topologies[t].shape.family;
            EmbeddingMap emb = restrict_embedding(y.embedding, *common);
            const Json doc = embedding_to_json(emb);
            const std::string name = std::string(family_name(f)) + "_L" + std::to_string(L) + ".json";
            write_json(dir / "embeddings" / name, doc);
            embedding_hashes[{t, L}] = content_hash(doc.dump());
            embeddings.emplace(std::make_pair(t, L), std::move(emb));
            families_at[L].push_back(t);
            yield_csv += join_csv({family_name(f), std::to_string(L), std::to_string(y.report.sites_embedded),
                                   std::to_string(y.report.sites_total), std::to_string(y.report.edges_embedded),
                                   std::to_string(y.report.edges_total), std::to_string(common->sites().size()),
                                   std::to_string(common->edges().size())});
            log(std::string("embed ") + family_name(f) + " L=" + std::to_string(L) + ": " +
                std::to_string(common->sites().size()) + "/" + std::to_string(spec.num_sites()) + " sites, " +
                std::to_string(common->edges().size()) + "/" + std::to_string(spec.full_edge_count()) + " edges");
        }
    }
    write_text_atomic(dir / "summary" / "yield.csv", yield_csv);
    write_text_atomic(dir / "summary" / "skipped.csv", skipped_csv);

    // Instances, shared across families at each size.
    std::vector<std::pair<int, std::shared_ptr<const Instance>>> instances;
    for (const auto& [L, graph] : shared) {
        for (int i = 0; i < config.instances; ++i) {
            const std::uint64_t seed = derive_seed(
                config.master_seed, {purpose_tag("instance"), static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(i)});
            auto inst = std::make_shared<const Instance>(generate_instance(graph, seed));
            write_json(dir / "instances" / ("L" + std::to_string(L) + "_" + padded(i, 3) + ".json"),
                       instance_to_json(*inst));
            instances.emplace_back(L, inst);
        }
    }

    GroundTruthRegistry registry;
    std::mutex registry_mu;
    parallel_for(instances.size(), config.parallelism, [&](std::size_t k) {
        const auto& [L, inst] = instances[k];
        const int i = static_cast<int>(k % static_cast<std::size_t>(config.instances));
        seed_registry(config, *inst,
                      derive_seed(config.master_seed, {purpose_tag("reference"), static_cast<std::uint64_t>(L),
                                                       static_cast<std::uint64_t>(i)}),
                      registry, registry_mu);
    });
    log("registry seeded for " + std::to_string(instances.size()) + " instances");

    std::vector<Task> tasks;
    for (std::size_t k = 0; k < instances.size(); ++k) {
        const auto& [L, inst] = instances[k];
        const int i = static_cast<int>(k % static_cast<std::size_t>(config.instances));
        for (std::size_t t : families_at[L]) {
            Task task;
            task.topology = t;
            task.size = L;
            task.index = i;
            task.instance = inst;
            task.registry_id = inst->id;
            task.embedding = &embeddings.at({t, L});
            task.embedding_hash = embedding_hashes.at({t, L});
            task.checkpoint = dir / "samples" /
                              (std::string(family_name(config.topologies[t].shape.family)) + "_L" + std::to_string(L) +
                               "_" + padded(i, 3) + ".json");
            tasks.push_back(std::move(task));
        }
    }
    std::atomic<std::size_t> done{0};
    parallel_for(tasks.size(), config.parallelism, [&](std::size_t k) {
        Task& task = tasks[k];
        const Family f = config.topologies[task.topology].shape.family;
        try {
            execute_task(config, task, f, registry, config.protocol);
        } catch (const Error& e) {
            task.error = e.what();
        }
        const std::size_t n = ++done;
        log("[" + std::to_string(n) + "/" + std::to_string(tasks.size()) + "] " + family_name(f) + " L=" +
            std::to_string(task.size) + " #" + std::to_string(task.index) + (task.error.empty() ? "" : " failed: " + task.error));
    });

    for (const Task& task : tasks) {
        if (task.error.empty()) {
            registry.observe(task.registry_id, lowest_energy(task.run.batches), {}, Provenance::BestSeen);
        }
    }
    write_json(dir / "registry.json", registry_to_json(registry));

    // Recount everything against the final presumed ground states.
    result.results.assign(nt, {});
    std::vector<std::string> curves(nt, kCurveHeader), estimates(nt), per_instance(nt);
    std::string failures_csv = "family,L,instance_id,error\n";
    for (Task& task : tasks) {
        const Family f = config.topologies[task.topology].shape.family;
        if (!task.error.empty()) {
            ++result.failures;
            failures_csv += join_csv({family_name(f), std::to_string(task.size), task.registry_id, "\"" + task.error + "\""});
            continue;
        }
        const double best = best_energy(registry, task.registry_id);
        task.run.curve = curve_from_batches(task.registry_id, task.run.batches, best, config.protocol);
        const InstanceResult r = select_optimal(task.run.curve, task.size);
        result.results[task.topology].push_back(r);
        curves[task.topology] += curve_rows(task, task.run.curve);
        estimates[task.topology] += estimate_lines(task, best);
        per_instance[task.topology] += instance_result_to_json(r).dump() + "\n";
    }
    write_text_atomic(dir / "summary" / "failures.csv", failures_csv);

    const std::string quantile_note = "# tts in sweeps; quantiles by linear interpolation between order statistics (type 7)\n";
    std::map<std::size_t, std::map<int, std::optional<double>>> medians;
    for (std::size_t t = 0; t < nt; ++t) {
        const std::string fam = family_name(config.topologies[t].shape.family);
        write_text_atomic(dir / "curves" / (fam + ".csv"), curves[t]);
        write_text_atomic(dir / "summary" / ("estimates_" + fam + ".jsonl"), estimates[t]);
        write_text_atomic(dir / "summary" / ("instances_" + fam + ".jsonl"), per_instance[t]);
        std::string csv = quantile_note + "L,n_instances,n_unsolved,p10,p25,median,p75,p90\n";
        std::set<int> groups;
        for (const InstanceResult& r : result.results[t]) groups.insert(r.group);
        for (int L : groups) {
            std::size_t n = 0, unsolved = 0;
            for (const InstanceResult& r : result.results[t]) {
                if (r.group != L) continue;
                ++n;
                if (!r.solved) ++unsolved;
            }
            if (unsolved == n) {
                csv += join_csv({std::to_string(L), std::to_string(n), std::to_string(unsolved), "", "", "", "", ""});
                medians[t][L] = std::nullopt;
                continue;
            }
            const AggregateStats s = aggregate_group(result.results[t], L);
            medians[t][L] = s.median;
            csv += join_csv({std::to_string(L), std::to_string(s.n_instances), std::to_string(s.n_unsolved),
                             format_number(s.p10), format_number(s.p25), format_number(s.median),
                             format_number(s.p75), format_number(s.p90)});
        }
        write_text_atomic(dir / "summary" / ("scaling_" + fam + ".csv"), csv);
    }

    // Instance-to-instance comparison between the first two families.
    std::string findings = "check,subject,passed,detail\n";
    for (std::size_t t = 0; t < nt; ++t) {
        const std::string fam = family_name(config.topologies[t].shape.family);
        bool monotone = true;
        std::optional<double> prev;
        std::string detail;
        for (const auto& [L, m] : medians[t]) {
            detail += (detail.empty() ? "" : " ") + std::to_string(L) + ":" + (m ? format_number(*m) : "unsolved");
            if (!m) {
                monotone = false;
                continue;
            }
            if (prev && *m < *prev) monotone = false;
            prev = m;
        }
        findings += join_csv({"median_tts_nondecreasing", fam, monotone ? "1" : "0", detail});
    }
    if (nt >= 2) {
        const std::string fa = family_name(config.topologies[0].shape.family);
        const std::string fb = family_name(config.topologies[1].shape.family);
        std::optional<int> largest;
        for (const auto& [L, ts] : families_at) {
            if (std::count(ts.begin(), ts.end(), 0u) && std::count(ts.begin(), ts.end(), 1u)) {
                largest = L;
                std::vector<InstanceResult> a, b;
                for (const InstanceResult& r : result.results[0]) {
                    if (r.group == L) a.push_back(r);
                }
                for (const InstanceResult& r : result.results[1]) {
                    if (r.group == L) b.push_back(r);
                }
                const SpeedupReport rep = speedup_pairs(a, b);
                std::string csv = "instance_id,tts_a,tts_b,ratio\n";
                for (const SpeedupEntry& e : rep.pairs) {
                    csv += join_csv({e.instance_id, format_optional(e.tts_a), format_optional(e.tts_b), format_optional(e.ratio)});
                }
                write_text_atomic(dir / "summary" / ("speedup_L" + std::to_string(L) + ".csv"), csv);
            }
        }
        if (largest) {
            const auto ma = medians[0][*largest];
            const auto mb = medians[1][*largest];
            const bool ok = mb && (!ma || *mb <= *ma);
            findings += join_csv({"median_tts_" + fb + "_le_" + fa, "L=" + std::to_string(*largest), ok ? "1" : "0",
                                  fa + ":" + format_optional(ma) + " " + fb + ":" + format_optional(mb)});
        }
    }
    write_text_atomic(dir / "summary" / "findings.csv", findings);
    write_manifest(dir, result.manifest);
    return result;
}

std::vector<InstanceResult> read_instance_results(const fs::path& path) {
    std::vector<InstanceResult> out;
    std::istringstream in(read_text(path));
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        Json doc;
        try {
            doc = Json::parse(line);
        } catch (const Json::exception& e) {
            fail(ErrorCode::Parse, path.string() + ": " + e.what());
        }
        out.push_back(instance_result_from_json(doc));
    }
    return out;
}

CompareResult run_compare(const fs::path& a, const fs::path& b, const fs::path& out_csv) {
    const std::vector<InstanceResult> ra = read_instance_results(a);
    const std::vector<InstanceResult> rb = read_instance_results(b);
    CompareResult result;
    result.report = speedup_pairs(ra, rb);
    if (result.report.pairs.empty()) fail(ErrorCode::NoOverlap, "result files share no instance ids");
    std::string csv = "instance_id,tts_a,tts_b,ratio\n";
    for (const SpeedupEntry& e : result.report.pairs) {
        csv += join_csv({e.instance_id, format_optional(e.tts_a), format_optional(e.tts_b), format_optional(e.ratio)});
    }
    write_text_atomic(out_csv, csv);
    std::string unsolved = "side,instance_id\n";
    for (const std::string& id : result.report.unsolved_a) unsolved += join_csv({"a", id});
    for (const std::string& id : result.report.unsolved_b) unsolved += join_csv({"b", id});
    fs::path side = out_csv;
    side.replace_filename(out_csv.stem().string() + "_unsolved.csv");
    write_text_atomic(side, unsolved);
    result.files = {out_csv.string(), side.string()};
    return result;
}

IsometryResult run_isometry(const ExperimentConfig& config, const LogFn& log_fn) {
    config.validate();
    const Logger log(log_fn);
    const fs::path dir = config.output_dir;
    const int L = config.isometry.size;
    const LatticeSpec spec{L, L, L};
    const std::size_t nt = config.topologies.size();
    IsometryResult result;
    result.manifest.command = "isometry";
    result.manifest.config = config_to_json(config);
    result.manifest.started = utc_now();

    std::vector<EmbeddingMap> embeddings;
    std::vector<std::string> hashes;
    for (const TopologySetting& t : config.topologies) {
        const HardwareGraph work = working_graph(config, t);
        write_json(dir / "graphs" / (std::string(family_name(t.shape.family)) + ".json"), graph_to_json(work));
        YieldResult y = place_and_maximize(
            spec, work,
            derive_seed(config.master_seed, {purpose_tag("yield"), family_tag(t.shape.family), static_cast<std::uint64_t>(L)}),
            config.yield_passes);
        if (!y.report.complete()) {
            fail(ErrorCode::NotFullCube, std::string(family_name(t.shape.family)) + " embeds only " +
                                             std::to_string(y.report.sites_embedded) + "/" +
                                             std::to_string(y.report.sites_total) + " sites and " +
                                             std::to_string(y.report.edges_embedded) + "/" +
                                             std::to_string(y.report.edges_total) + " edges of " + spec.describe());
        }
        const Json doc = embedding_to_json(y.embedding);
        write_json(dir / "embeddings" / (std::string(family_name(t.shape.family)) + "_L" + std::to_string(L) + ".json"), doc);
        hashes.push_back(content_hash(doc.dump()));
        embeddings.push_back(std::move(y.embedding));
    }

    auto lattice = std::make_shared<const LogicalGraph>(spec);
    std::vector<std::shared_ptr<const Instance>> instances;
    for (int i = 0; i < config.isometry.instances; ++i) {
        const std::uint64_t seed = derive_seed(
            config.master_seed, {purpose_tag("isometry.instance"), static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(i)});
        instances.push_back(std::make_shared<const Instance>(generate_instance(lattice, seed)));
        write_json(dir / "instances" / ("iso_L" + std::to_string(L) + "_" + padded(i, 3) + ".json"),
                   instance_to_json(*instances.back()));
    }
    GroundTruthRegistry registry;
    std::mutex registry_mu;
    parallel_for(instances.size(), config.parallelism, [&](std::size_t i) {
        seed_registry(config, *instances[i],
                      derive_seed(config.master_seed, {purpose_tag("isometry.reference"), static_cast<std::uint64_t>(L),
                                                       static_cast<std::uint64_t>(i)}),
                      registry, registry_mu);
    });

    const std::vector<Isometry>& group = enumerate_isometries();
    ProtocolConfig protocol = config.protocol;
    protocol.ladder = {config.isometry.effort};
    std::vector<Task> tasks;
    for (std::size_t t = 0; t < nt; ++t) {
        const std::string fam = family_name(config.topologies[t].shape.family);
        for (std::size_t i = 0; i < instances.size(); ++i) {
            for (std::size_t g = 0; g < group.size(); ++g) {
                Task task;
                task.topology = t;
                task.size = L;
                task.index = static_cast<int>(i);
                task.isometry = static_cast<int>(g);
                task.registry_id = instances[i]->id;
                task.embedding = &embeddings[t];
                task.embedding_hash = hashes[t];
                task.checkpoint = dir / "samples" / ("iso_" + fam + "_" + padded(static_cast<int>(i), 3) + "_" +
                                                     padded(static_cast<int>(g), 2) + ".json");
                tasks.push_back(std::move(task));
            }
        }
    }
    std::atomic<std::size_t> done{0};
    parallel_for(tasks.size(), config.parallelism, [&](std::size_t k) {
        Task& task = tasks[k];
        const Family f = config.topologies[task.topology].shape.family;
        const Instance& base = *instances[static_cast<std::size_t>(task.index)];
        task.instance = std::make_shared<const Instance>(
            task.isometry == 0 ? base : apply_isometry(base, group[static_cast<std::size_t>(task.isometry)]));
        execute_task(config, task, f, registry, protocol);
        const std::size_t n = ++done;
        if (n % 48 == 0 || n == tasks.size()) {
            log("[" + std::to_string(n) + "/" + std::to_string(tasks.size()) + "] isometry runs done");
        }
    });
    for (const Task& task : tasks) {
        registry.observe(task.registry_id, lowest_energy(task.run.batches), {}, Provenance::BestSeen);
    }
    write_json(dir / "registry_isometry.json", registry_to_json(registry));

    result.results.assign(nt, std::vector<std::vector<InstanceResult>>(instances.size()));
    std::vector<std::string> curves(nt, kCurveHeader);
    for (Task& task : tasks) {
        task.run.curve = curve_from_batches(task.registry_id, task.run.batches, best_energy(registry, task.registry_id), protocol);
        result.results[task.topology][static_cast<std::size_t>(task.index)].push_back(select_optimal(task.run.curve, L));
        curves[task.topology] += curve_rows(task, task.run.curve);
    }
    const std::vector<double> edges = ratio_histogram_edges();
    result.summaries.assign(nt, {});
    for (std::size_t t = 0; t < nt; ++t) {
        const std::string fam = family_name(config.topologies[t].shape.family);
        std::string rows = "instance_id,isometry_index,tts\n";
        std::string ratios_csv = "instance_id,median,best,worst,ratio,unsolved\n";
        std::vector<double> ratios;
        for (std::size_t i = 0; i < instances.size(); ++i) {
            const auto& per = result.results[t][i];
            for (std::size_t g = 0; g < per.size(); ++g) {
                rows += join_csv({per[g].instance_id, std::to_string(g),
                                  per[g].solved ? format_number(per[g].tts) : std::string()});
            }
            const IsometrySummary s = isometry_consistency(per);
            result.summaries[t].push_back(s);
            if (s.ratio) ratios.push_back(*s.ratio);
            ratios_csv += join_csv({instances[i]->id, format_optional(s.median), format_optional(s.best),
                                    format_optional(s.worst), format_optional(s.ratio), std::to_string(s.unsolved)});
        }
        const std::vector<std::size_t> counts = ratio_histogram(ratios);
        std::string hist = "# bins: [10^(i/4), 10^((i+1)/4)), last bin open\nbin_lo,bin_hi,count\n";
        for (std::size_t b = 0; b < counts.size(); ++b) {
            hist += join_csv({format_number(edges[b]), b + 1 < edges.size() ? format_number(edges[b + 1]) : "inf",
                              std::to_string(counts[b])});
        }
        write_text_atomic(dir / "summary" / ("isometry_" + fam + ".csv"), rows);
        write_text_atomic(dir / "summary" / ("isometry_ratio_" + fam + ".csv"), ratios_csv);
        write_text_atomic(dir / "summary" / ("isometry_hist_" + fam + ".csv"), hist);
        write_text_atomic(dir / "curves" / ("isometry_" + fam + ".csv"), curves[t]);
    }
    write_manifest(dir, result.manifest);
    return result;
}

}  // namespace glassbench
