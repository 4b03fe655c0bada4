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

// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
//
//   acceptance [--only N[,M...]] [--work DIR]

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "glassbench/experiment.hpp"
#include "glassbench/metrics.hpp"
#include "glassbench/rng.hpp"
#include "glassbench/serialize.hpp"
#include "glassbench/verify.hpp"

using namespace glassbench;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fixed(double v, int digits = 2) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << v;
    return s.str();
}

struct Shell {
    int status = -1;
    std::string output;
};

Shell sh(const std::string& args) {
    const std::string cmd = std::string(GLASSBENCH_CLI) + " " + args + " 2>&1";
    Shell out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return out;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.output.append(buf.data(), n);
    const int raw = pclose(pipe);
    out.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return out;
}

std::string last_line(const std::string& text) {
    std::string t = text;
    while (!t.empty() && t.back() == '\n') t.pop_back();
    const auto nl = t.rfind('\n');
    return nl == std::string::npos ? t : t.substr(nl + 1);
}

Outcome from_check(const CheckResult& r, double budget) {
    Outcome o;
    o.passed = r.passed && r.seconds < budget;
    o.detail = r.detail + " [" + fixed(r.seconds) + " s, budget " + fixed(budget, 0) + " s]";
    return o;
}

Outcome protocol_fidelity() {
    ProtocolConfig cfg;
    cfg.ladder = {1};
    cfg.batch_size = 500;
    cfg.target_hits = 50;
    cfg.max_batches = 20;
    const int trials = 200;
    int one_batch = 0;
    std::size_t hits = 0, reads = 0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t seed = derive_seed(2020, {purpose_tag("acceptance.stub"), std::uint64_t(t)});
        BatchSampler stub = [seed](int effort, int batch, int n) {
            Rng rng(derive_seed(seed, {std::uint64_t(effort), std::uint64_t(batch)}));
            BatchResult r;
            for (int i = 0; i < n; ++i) r.energies.push_back(rng.uniform() < 0.1 ? -1.0 : 0.0);
            return r;
        };
        GroundTruthRegistry reg;
        reg.observe("stub", -1.0, {}, Provenance::Exact);
        const ProtocolRun run = run_protocol("stub", stub, reg, cfg);
        const CurvePoint& p = run.curve.points.at(0);
        if (p.batches == 1) ++one_batch;
        hits += p.estimate.hits;
        reads += p.estimate.reads;
    }
    const double rate = double(one_batch) / trials;
    const double pooled = double(hits) / double(reads);
    Outcome o;
    o.passed = rate >= 0.45 && std::abs(pooled - 0.1) <= 0.01 && reads >= 10000;
    o.detail = "one-batch stops " + std::to_string(one_batch) + "/" + std::to_string(trials) + " (" + fixed(rate, 3) +
               ", binomial 0.522); pooled p " + fixed(pooled, 4) + " over " + std::to_string(reads) + " reads";
    return o;
}

std::map<std::string, std::string> read_csv_map(const fs::path& csv, std::size_t key_col, std::size_t val_col,
                                                 std::size_t filter_col = 99, const std::string& filter = "") {
    std::map<std::string, std::string> out;
    std::ifstream in(csv);
    bool header = true;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
        if (line.back() == ',') cols.push_back("");
        if (filter_col < cols.size() && cols[filter_col] != filter) continue;
        if (key_col < cols.size() && val_col < cols.size()) out[cols[key_col]] = cols[val_col];
    }
    return out;
}

Outcome desk_scaling(const fs::path& work) {
    const fs::path out = work / "desk_scaling";
    fs::remove_all(out);
    const auto t0 = Clock::now();
    const Shell run = sh(std::string("scaling -q --config ") + DESK_CONFIG + " --out " + out.string());
    const double secs = since(t0);
    Outcome o;
    if (run.status != 0) {
        o.detail = "scaling exited " + std::to_string(run.status) + ": " + last_line(run.output);
        return o;
    }
    bool ok = secs < 1800.0;
    std::string medians;
    for (const std::string fam : {"chimera", "pegasus"}) {
        const auto m = read_csv_map(out / "summary" / ("scaling_" + fam + ".csv"), 0, 5);
        const auto unsolved = read_csv_map(out / "summary" / ("scaling_" + fam + ".csv"), 0, 2);
        if (m.size() != 4) ok = false;
        medians += " " + fam + " median";
        for (const auto& [L, v] : m) medians += " L" + L + "=" + (v.empty() ? "none" : v) + "(" + unsolved.at(L) + " unsolved)";
        medians += ";";
    }
    const auto findings = read_csv_map(out / "summary" / "findings.csv", 1, 2, 0, "median_tts_nondecreasing");
    const bool mono = findings.count("chimera") && findings.at("chimera") == "1" && findings.count("pegasus") &&
                      findings.at("pegasus") == "1";
    const auto direction = read_csv_map(out / "summary" / "findings.csv", 1, 2, 0, "median_tts_pegasus_le_chimera");
    const bool shorter_wins = direction.count("L=6") && direction.at("L=6") == "1";
    o.passed = ok && mono;
    o.detail = fixed(secs, 0) + " s (budget 1800);" + medians + " non-decreasing: " + (mono ? "yes" : "no") +
               "; pegasus <= chimera at L=6: " + (shorter_wins ? "yes" : "no (finding)");
    return o;
}

std::map<std::string, std::string> data_hashes(const fs::path& dir) {
    std::map<std::string, std::string> out;
    const Json m = read_json(dir / "manifest.json");
    for (const Json& e : m.at("outputs")) {
        const std::string p = e.at("path").get<std::string>();
        if (p.ends_with(".csv") || p.ends_with(".jsonl")) out[p] = e.at("fnv1a64").get<std::string>();
    }
    return out;
}

Outcome determinism(const fs::path& work) {
    const fs::path root = work / "determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::string scaling =
        " --sizes 3,4 --instances 4 --ladder 16,64,256 --set batch_size=50 --set target_hits=5 --set max_batches=2 -q";
    const std::string iso = " --L 3 --instances 2 --effort 64 --set defects=none --set batch_size=50 "
                            "--set target_hits=5 --set max_batches=2 -q";
    struct Pair {
        std::string label;
        std::string a, b;  // commands
        fs::path da, db;   // manifest directories, or files to compare
        bool manifest;
    };
    const auto p = [&](const char* name) { return (root / name).string(); };
    std::vector<Pair> pairs = {
        {"scaling", "scaling --out " + p("s1") + scaling, "scaling --out " + p("s2") + scaling, p("s1"), p("s2"), true},
        {"scaling -j2", "", "scaling -j 2 --out " + p("s3") + scaling, p("s1"), p("s3"), true},
        {"isometry", "isometry --out " + p("i1") + iso, "isometry --out " + p("i2") + iso, p("i1"), p("i2"), true},
        {"compare",
         "compare " + p("s1") + "/summary/instances_chimera.jsonl " + p("s1") + "/summary/instances_pegasus.jsonl --out " +
             p("c1.csv"),
         "compare " + p("s2") + "/summary/instances_chimera.jsonl " + p("s2") + "/summary/instances_pegasus.jsonl --out " +
             p("c2.csv"),
         p("c1.csv"), p("c2.csv"), false},
        {"gen", "gen --L 4 --count 3 --seed 5 --out " + p("g1"), "gen --L 4 --count 3 --seed 5 --out " + p("g2"),
         p("g1") + "/", p("g2") + "/", false},
        {"solve",
         "solve --instance " + p("s1") + "/instances/L3_000.json --emb " + p("s1") +
             "/embeddings/pegasus_L3.json --graph " + p("s1") + "/graphs/pegasus.json --effort 64 --reads 20 --seed 3 --out " +
             p("r1.jsonl"),
         "solve --instance " + p("s1") + "/instances/L3_000.json --emb " + p("s1") +
             "/embeddings/pegasus_L3.json --graph " + p("s1") + "/graphs/pegasus.json --effort 64 --reads 20 --seed 3 --out " +
             p("r2.jsonl"),
         p("r1.jsonl"), p("r2.jsonl"), false},
    };
    Outcome o;
    std::size_t compared = 0;
    for (const Pair& pr : pairs) {
        for (const std::string& cmd : {pr.a, pr.b}) {
            if (cmd.empty()) continue;
            const Shell s = sh(cmd);
            if (s.status != 0) {
                o.detail = pr.label + " exited " + std::to_string(s.status) + ": " + last_line(s.output);
                return o;
            }
        }
        if (pr.manifest) {
            const auto ha = data_hashes(pr.da), hb = data_hashes(pr.db);
            if (ha.empty() || ha != hb) {
                o.detail = pr.label + ": CSV/JSONL hashes differ (" + std::to_string(ha.size()) + " vs " +
                           std::to_string(hb.size()) + " files)";
                return o;
            }
            compared += ha.size();
        } else if (pr.da.string().ends_with("/")) {
            std::set<std::string> na, nb;
            for (const auto& e : fs::directory_iterator(pr.da)) na.insert(e.path().filename().string());
            for (const auto& e : fs::directory_iterator(pr.db)) nb.insert(e.path().filename().string());
            if (na.empty() || na != nb) {
                o.detail = pr.label + ": file sets differ";
                return o;
            }
            for (const std::string& n : na) {
                if (read_text(pr.da / n) != read_text(pr.db / n)) {
                    o.detail = pr.label + ": " + n + " differs";
                    return o;
                }
                ++compared;
            }
        } else {
            if (read_text(pr.da) != read_text(pr.db)) {
                o.detail = pr.label + ": outputs differ";
                return o;
            }
            ++compared;
        }
    }
    o.passed = true;
    o.detail = std::to_string(compared) + " outputs byte-identical across reruns (scaling, scaling -j2, isometry, "
               "compare, gen, solve)";
    return o;
}

Outcome cli_verify() {
    const auto t0 = Clock::now();
    const Shell s = sh("verify");
    const double secs = since(t0);
    Outcome o;
    o.passed = s.status == 0 && secs < 300.0;
    o.detail = "exit " + std::to_string(s.status) + " in " + fixed(secs) + " s (budget 300): " + last_line(s.output);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    fs::path work = ACCEPTANCE_WORK_DIR;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            for (std::string n; std::getline(ss, n, ',');) only.insert(std::stoi(n));
        } else if (a == "--work" && i + 1 < argc) {
            work = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--only N[,M...]] [--work DIR]\n";
            return 2;
        }
    }
    std::error_code ec;
    fs::create_directories(work, ec);
    if (ec) {
        std::cerr << "cannot create work directory " << work << ": " << ec.message() << "\n";
        return 1;
    }

    struct Criterion {
        int number;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "topology counts", [] { return from_check(check_topology_counts(), 2.0); }},
        {2, "embedding capacity", [] { return from_check(check_capacity(), 5.0); }},
        {3, "chain strength", [] { return from_check(check_chain_strength(), 120.0); }},
        {4, "coupling values", [] { return from_check(check_coupling_values(), 600.0); }},
        {5, "tts identities", [] { return from_check(check_tts_identities(), 60.0); }},
        {6, "protocol fidelity", protocol_fidelity},
        {7, "isometry suite", [] { return from_check(check_isometry_group(), 30.0); }},
        {8, "desk scaling", [&] { return desk_scaling(work); }},
        {9, "determinism", [&] { return determinism(work); }},
        {10, "verify command", cli_verify},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && !only.count(c.number)) continue;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = std::string("error: ") + e.what();
        }
        if (!o.passed) ++failed;
        std::cout << "criterion " << c.number << " " << (o.passed ? "PASS" : "FAIL") << "  " << c.name << " ("
                  << fixed(since(t0), 1) << " s): " << o.detail << std::endl;
    }
    return failed ? 1 : 0;
}
