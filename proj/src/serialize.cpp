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

#include "glassbench/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "glassbench/error.hpp"
#include "glassbench/rng.hpp"

namespace glassbench {

namespace {

Json coord_json(const HardwareGraph& g, QubitIndex q) {
    const QubitCoord c = g.coord(q);
    return Json::array({c.v[0], c.v[1], c.v[2], c.v[3]});
}

QubitIndex coord_from(const HardwareGraph& g, const Json& j) {
    if (!j.is_array() || j.size() != 4) fail(ErrorCode::Parse, "qubit coordinates must be 4-element arrays");
    return g.index_or_throw({{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()}});
}

Json site_json(const LogicalGraph& g, SiteIndex s) {
    const Site p = g.site(s);
    return Json::array({p.x, p.y, p.z});
}

SiteIndex site_from(const LogicalGraph& g, const Json& j) {
    if (!j.is_array() || j.size() != 3) fail(ErrorCode::Parse, "sites must be [x, y, z]");
    const Site p{j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
    if (!g.in_bounds(p)) fail(ErrorCode::Parse, "site outside the lattice");
    return g.index(p);
}

std::string site_key(const LogicalGraph& g, SiteIndex s) {
    const Site p = g.site(s);
    return std::to_string(p.x) + "," + std::to_string(p.y) + "," + std::to_string(p.z);
}

SiteIndex site_from_key(const LogicalGraph& g, const std::string& key) {
    Site p;
    if (std::sscanf(key.c_str(), "%d,%d,%d", &p.x, &p.y, &p.z) != 3 || !g.in_bounds(p)) {
        fail(ErrorCode::Parse, "bad chain key '" + key + "'");
    }
    return g.index(p);
}

LatticeSpec spec_from(const Json& j) {
    if (!j.is_array() || j.size() != 3) fail(ErrorCode::Parse, "spec must be [L1, L2, L3]");
    LatticeSpec spec{j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
    spec.validate();
    return spec;
}

template <class F>
auto parsing(const char* what, F&& body) {
    try {
        return body();
    } catch (const Json::exception& e) {
        fail(ErrorCode::Parse, std::string("malformed ") + what + ": " + e.what());
    }
}

}  // namespace

Json shape_to_json(const GraphShape& shape) {
    if (shape.family == Family::Chimera) {
        return {{"rows", shape.rows}, {"cols", shape.cols}, {"shore", shape.shore}};
    }
    return {{"m", shape.m}};
}

GraphShape shape_from_json(const Json& family, const Json& shape) {
    return parsing("graph shape", [&] {
        GraphShape s;
        s.family = parse_family(family.get<std::string>());
        if (s.family == Family::Chimera) {
            s.rows = shape.at("rows").get<int>();
            s.cols = shape.at("cols").get<int>();
            s.shore = shape.at("shore").get<int>();
            if (s.rows < 1 || s.cols < 1 || s.shore < 1) fail(ErrorCode::Parse, "chimera shape must be positive");
        } else {
            s.m = shape.at("m").get<int>();
            if (s.m < 2) fail(ErrorCode::Parse, "pegasus size must be at least 2");
        }
        return s;
    });
}

Json graph_to_json(const HardwareGraph& graph) {
    Json qubits = Json::array();
    for (QubitIndex q : graph.defects().qubits) qubits.push_back(coord_json(graph, q));
    Json couplers = Json::array();
    for (const Coupler& c : graph.defects().couplers) {
        couplers.push_back(Json::array({coord_json(graph, c.a), coord_json(graph, c.b)}));
    }
    Json doc = {{"family", family_name(graph.family())},
                {"shape", shape_to_json(graph.shape())},
                {"defects", {{"qubits", qubits}, {"couplers", couplers}}}};
    if (!graph.defects().provenance.empty()) doc["provenance"] = graph.defects().provenance;
    return doc;
}

HardwareGraph graph_from_json(const Json& doc) {
    return parsing("graph document", [&] {
        const GraphShape shape = shape_from_json(doc.at("family"), doc.at("shape"));
        HardwareGraph ideal = HardwareGraph::ideal(shape);
        if (!doc.contains("defects")) return ideal;
        DefectMask mask;
        const Json& d = doc.at("defects");
        for (const Json& q : d.value("qubits", Json::array())) mask.qubits.push_back(coord_from(ideal, q));
        for (const Json& c : d.value("couplers", Json::array())) {
            if (!c.is_array() || c.size() != 2) fail(ErrorCode::Parse, "couplers must be pairs of coordinates");
            mask.couplers.emplace_back(coord_from(ideal, c[0]), coord_from(ideal, c[1]));
        }
        mask.provenance = doc.value("provenance", std::string());
        if (mask.empty() && mask.provenance.empty()) return ideal;
        return apply_defects(ideal, mask);
    });
}

Json instance_to_json(const Instance& instance) {
    const LogicalGraph& g = *instance.graph;
    Json sites = Json::array();
    for (SiteIndex s : g.sites()) sites.push_back(site_json(g, s));
    Json edges = Json::array();
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const LatticeEdge& e = g.edges()[i];
        edges.push_back(Json::array({site_json(g, e.a), site_json(g, e.b), std::string(1, axis_name(e.axis)),
                                     static_cast<int>(instance.couplings[i])}));
    }
    const LatticeSpec& spec = g.spec();
    return {{"spec", Json::array({spec.l1, spec.l2, spec.l3})},
            {"sites", sites},
            {"edges", edges},
            {"seed", instance.seed},
            {"id", instance.id}};
}

Instance instance_from_json(const Json& doc) {
    return parsing("instance document", [&] {
        const LatticeSpec spec = spec_from(doc.at("spec"));
        const LogicalGraph shape(spec);
        std::vector<SiteIndex> sites;
        for (const Json& s : doc.at("sites")) sites.push_back(site_from(shape, s));
        std::vector<std::pair<LatticeEdge, int>> edges;
        for (const Json& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 4) fail(ErrorCode::Parse, "edges must be [site, site, axis, J]");
            const LatticeEdge edge = make_edge(spec, site_from(shape, e[0]), site_from(shape, e[1]));
            if (edge.axis != parse_axis(e[2].get<std::string>())) fail(ErrorCode::Parse, "edge axis mismatch");
            const int j = e[3].get<int>();
            if (j != 1 && j != -1) fail(ErrorCode::Parse, "couplings must be +1 or -1");
            edges.emplace_back(edge, j);
        }
        std::sort(edges.begin(), edges.end());
        std::vector<LatticeEdge> plain;
        for (const auto& [e, j] : edges) plain.push_back(e);
        auto graph = std::make_shared<const LogicalGraph>(spec, std::move(sites), std::move(plain));
        if (graph->edges().size() != edges.size()) fail(ErrorCode::Parse, "duplicate edges in instance");
        Instance inst;
        inst.graph = graph;
        for (const auto& [e, j] : edges) inst.couplings.push_back(static_cast<std::int8_t>(j));
        inst.seed = doc.at("seed").get<std::uint64_t>();
        inst.id = instance_id(*graph, inst.couplings, inst.seed);
        if (doc.contains("id") && doc.at("id").get<std::string>() != inst.id) {
            fail(ErrorCode::Parse, "instance id does not match its contents");
        }
        return inst;
    });
}

Json embedding_to_json(const EmbeddingMap& emb) {
    const HardwareGraph ideal = HardwareGraph::ideal(emb.target);
    const LogicalGraph shape(emb.spec);
    Json chains = Json::object();
    Json chain_couplers = Json::object();
    for (const Chain& c : emb.chains) {
        Json qs = Json::array();
        for (QubitIndex q : c.qubits) qs.push_back(coord_json(ideal, q));
        Json cs = Json::array();
        for (const Coupler& cp : c.couplers) cs.push_back(Json::array({coord_json(ideal, cp.a), coord_json(ideal, cp.b)}));
        chains[site_key(shape, c.site)] = qs;
        chain_couplers[site_key(shape, c.site)] = cs;
    }
    Json edges = Json::array();
    for (const EdgeEmbedding& ee : emb.edges) {
        Json cs = Json::array();
        for (const EdgeCoupler& ec : ee.couplers) {
            cs.push_back(Json::array(
                {Json::array({coord_json(ideal, ec.coupler.a), coord_json(ideal, ec.coupler.b)}), ec.share}));
        }
        edges.push_back(Json::array({site_json(shape, ee.edge.a), site_json(shape, ee.edge.b), cs}));
    }
    return {{"target", {{"family", family_name(emb.target.family)}, {"shape", shape_to_json(emb.target)}}},
            {"spec", Json::array({emb.spec.l1, emb.spec.l2, emb.spec.l3})},
            {"origin", Json::array({emb.origin_x, emb.origin_y})},
            {"chains", chains},
            {"chain_couplers", chain_couplers},
            {"edges", edges}};
}

EmbeddingMap embedding_from_json(const Json& doc) {
    return parsing("embedding document", [&] {
        EmbeddingMap emb;
        const Json& target = doc.at("target");
        emb.target = shape_from_json(target.at("family"), target.at("shape"));
        emb.spec = spec_from(doc.at("spec"));
        if (doc.contains("origin")) {
            emb.origin_x = doc.at("origin").at(0).get<int>();
            emb.origin_y = doc.at("origin").at(1).get<int>();
        }
        const HardwareGraph ideal = HardwareGraph::ideal(emb.target);
        const LogicalGraph shape(emb.spec);
        for (const auto& [key, qs] : doc.at("chains").items()) {
            Chain c;
            c.site = site_from_key(shape, key);
            for (const Json& q : qs) c.qubits.push_back(coord_from(ideal, q));
            if (doc.contains("chain_couplers") && doc.at("chain_couplers").contains(key)) {
                for (const Json& cp : doc.at("chain_couplers").at(key)) {
                    c.couplers.emplace_back(coord_from(ideal, cp.at(0)), coord_from(ideal, cp.at(1)));
                }
            } else {
                // Spanning tree of the chain's induced subgraph in the ideal graph.
                std::vector<QubitIndex> reached{c.qubits.empty() ? 0 : c.qubits.front()};
                for (std::size_t i = 0; i < reached.size() && !c.qubits.empty(); ++i) {
                    for (QubitIndex n : ideal.neighbors(reached[i])) {
                        if (std::find(c.qubits.begin(), c.qubits.end(), n) != c.qubits.end() &&
                            std::find(reached.begin(), reached.end(), n) == reached.end()) {
                            reached.push_back(n);
                            c.couplers.emplace_back(reached[i], n);
                        }
                    }
                }
            }
            emb.chains.push_back(std::move(c));
        }
        for (const Json& e : doc.at("edges")) {
            EdgeEmbedding ee;
            ee.edge = make_edge(emb.spec, site_from(shape, e.at(0)), site_from(shape, e.at(1)));
            for (const Json& cs : e.at(2)) {
                const Json& cp = cs.at(0);
                ee.couplers.push_back(
                    {Coupler(coord_from(ideal, cp.at(0)), coord_from(ideal, cp.at(1))), cs.at(1).get<double>()});
            }
            emb.edges.push_back(std::move(ee));
        }
        std::sort(emb.chains.begin(), emb.chains.end(), [](const Chain& a, const Chain& b) { return a.site < b.site; });
        std::sort(emb.edges.begin(), emb.edges.end(),
                  [](const EdgeEmbedding& a, const EdgeEmbedding& b) { return a.edge < b.edge; });
        return emb;
    });
}

Json registry_to_json(const GroundTruthRegistry& registry) {
    Json entries = Json::object();
    for (const auto& [id, e] : registry.entries()) {
        std::string witness;
        for (std::int8_t s : e.witness) witness += s > 0 ? '+' : (s < 0 ? '-' : '0');
        entries[id] = {{"energy", e.energy},
                       {"provenance", e.provenance == Provenance::Exact ? "exact" : "best-seen"},
                       {"witness", witness},
                       {"revision", e.revision}};
    }
    return {{"entries", entries}};
}

GroundTruthRegistry registry_from_json(const Json& doc) {
    return parsing("registry document", [&] {
        GroundTruthRegistry reg;
        for (const auto& [id, e] : doc.at("entries").items()) {
            SpinAssignment witness;
            for (char c : e.at("witness").get<std::string>()) witness.push_back(c == '+' ? 1 : (c == '-' ? -1 : 0));
            const std::string prov = e.at("provenance").get<std::string>();
            if (prov != "exact" && prov != "best-seen") fail(ErrorCode::Parse, "unknown provenance '" + prov + "'");
            reg.restore(id, {e.at("energy").get<double>(), prov == "exact" ? Provenance::Exact : Provenance::BestSeen,
                             std::move(witness), e.value("revision", std::uint64_t{0})});
        }
        return reg;
    });
}

std::string samples_to_jsonl(const SampleSet& samples) {
    std::string out;
    Json header = {{"problem_id", samples.problem_id},
                   {"physical", samples.physical},
                   {"sampler", sampler_kind_name(samples.config.kind)},
                   {"effort", samples.config.effort},
                   {"reads", samples.config.reads},
                   {"seed", samples.config.seed},
                   {"labels", samples.labels}};
    out += header.dump() + "\n";
    for (std::size_t i = 0; i < samples.reads.size(); ++i) {
        const Read& r = samples.reads[i];
        std::string spins;
        spins.reserve(r.spins.size());
        for (std::int8_t s : r.spins) spins += s > 0 ? '+' : '-';
        Json line = {{"read", i}, {"energy", r.energy}, {"spins", spins}};
        out += line.dump() + "\n";
    }
    return out;
}

Json instance_result_to_json(const InstanceResult& r) {
    Json j = {{"instance_id", r.instance_id}, {"L", r.group}, {"solved", r.solved}};
    if (r.solved) {
        j["t_opt"] = r.t_opt;
        j["tts"] = r.tts;
    } else {
        j["t_opt"] = nullptr;
        j["tts"] = nullptr;
    }
    return j;
}

InstanceResult instance_result_from_json(const Json& doc) {
    return parsing("instance result", [&] {
        InstanceResult r;
        r.instance_id = doc.at("instance_id").get<std::string>();
        r.group = doc.value("L", 0);
        r.solved = doc.at("solved").get<bool>();
        if (r.solved) {
            r.t_opt = doc.at("t_opt").get<int>();
            r.tts = doc.at("tts").get<double>();
        }
        return r;
    });
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::Io, "cannot write " + tmp.string());
        out << text;
        if (!out) fail(ErrorCode::Io, "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) fail(ErrorCode::Io, "cannot replace " + path.string() + ": " + ec.message());
}

Json read_json(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        fail(ErrorCode::Parse, path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const Json& doc) { write_text_atomic(path, doc.dump(1) + "\n"); }

std::string content_hash(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string format_optional(const std::optional<double>& value) { return value ? format_number(*value) : std::string(); }

}  // namespace glassbench
