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

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "glassbench/error.hpp"
#include "glassbench/experiment.hpp"
#include "test_util.hpp"

using namespace glassbench;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny(const fs::path& out) {
    ExperimentConfig c;
    c.sizes = {2, 3};
    c.instances = 3;
    c.protocol.ladder = {4, 16, 64};
    c.protocol.batch_size = 20;
    c.protocol.target_hits = 5;
    c.protocol.max_batches = 2;
    c.output_dir = out.string();
    return c;
}

std::map<std::string, std::string> hashes(const RunManifest& m) {
    std::map<std::string, std::string> out;
    for (const ManifestEntry& e : m.outputs) out[e.path] = e.hash;
    return out;
}

std::size_t data_rows(const fs::path& csv) {
    std::ifstream in(csv);
    std::size_t n = 0;
    bool header = false;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        ++n;
    }
    return n;
}

void write_results(const fs::path& p, const std::vector<InstanceResult>& rs) {
    std::string text;
    for (const InstanceResult& r : rs) text += instance_result_to_json(r).dump() + "\n";
    write_text_atomic(p, text);
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("defaults") {
    ExperimentConfig c;
    CHECK(c.instances == 100);
    CHECK(c.protocol.batch_size == 500);
    CHECK(c.protocol.target_hits == 50);
    CHECK(c.protocol.ladder == std::vector<int>{2, 4, 8, 16, 32, 64, 128, 256});
    CHECK(c.sizes == std::vector<int>{5, 6, 7, 8, 9, 10});
    REQUIRE(c.topologies.size() == 2);
    CHECK(c.topologies[0].shape.family == Family::Chimera);
    CHECK(c.topologies[0].defect_qubits == 7);
    CHECK(c.topologies[1].shape.m == 16);
    CHECK(c.topologies[1].defect_qubits == 130);
}

TEST_CASE("config json") {
    ExperimentConfig c;
    c.sizes = {3, 4};
    c.isometry.effort = 32;
    ExperimentConfig back = config_from_json(Json::parse(config_to_json(c).dump()));
    CHECK(config_to_json(back) == config_to_json(c));
    try {
        config_from_json(Json{{"batchsize", 5}});
        FAIL("expected Config");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
    }
    CHECK_THROWS_AS(config_from_json(Json{{"ladder", {8, 4}}}), Error);
    CHECK_THROWS_AS(config_from_json(Json{{"instances", "many"}}), Error);
}

TEST_CASE("config overrides") {
    ExperimentConfig c;
    set_config_value(c, "isometry.effort", "64");
    CHECK(c.isometry.effort == 64);
    set_config_value(c, "sizes", "3,4,5");
    CHECK(c.sizes == std::vector<int>{3, 4, 5});
    set_config_value(c, "ladder", "[8,16]");
    CHECK(c.protocol.ladder == std::vector<int>{8, 16});
    set_config_value(c, "sampler", "sa-logical");
    CHECK(c.sampler == SamplerKind::SaLogical);
    set_config_value(c, "defects", "none");
    CHECK(c.topologies[1].defect_qubits == 0);
    set_config_value(c, "families", "pegasus");
    REQUIRE(c.topologies.size() == 1);
    CHECK(c.topologies[0].shape.family == Family::Pegasus);
    CHECK_THROWS_AS(set_config_value(c, "isometry.size", "6"), Error);
    CHECK_THROWS_AS(set_config_value(c, "families", "zephyr"), Error);
    CHECK_THROWS_AS(set_config_value(c, "batch_size", "0"), Error);
}

TEST_CASE("small scaling run is reproducible and resumable") {
    test::TempDir a("scaling_a"), b("scaling_b");
    ScalingResult ra = run_scaling(tiny(a.path()));
    CHECK(ra.failures == 0);
    REQUIRE(ra.results.size() == 2);
    CHECK(ra.results[0].size() == 6);
    CHECK(ra.results[1].size() == 6);
    for (const char* f : {"summary/scaling_chimera.csv", "summary/scaling_pegasus.csv", "summary/yield.csv",
                          "summary/findings.csv", "summary/instances_pegasus.jsonl", "curves/chimera.csv",
                          "registry.json", "manifest.json"}) {
        CHECK_MESSAGE(fs::exists(a.path() / f), f);
    }
    CHECK(data_rows(a.path() / "summary/scaling_pegasus.csv") == 2);
    CHECK(fs::exists(a.path() / "summary/speedup_L3.csv"));

    ScalingResult rb = run_scaling(tiny(b.path()));
    const auto ha = hashes(ra.manifest), hb = hashes(rb.manifest);
    CHECK(ha == hb);
    CHECK(ha.size() > 20);

    // Rerun in place: checkpoints are reused and nothing changes.
    fs::remove(a.path() / "summary/scaling_chimera.csv");
    ScalingResult again = run_scaling(tiny(a.path()));
    CHECK(hashes(again.manifest) == ha);

    // Results feed the compare command.
    test::TempDir c("compare");
    CompareResult cmp = run_compare(a.path() / "summary/instances_chimera.jsonl",
                                    a.path() / "summary/instances_chimera.jsonl", c.path() / "self.csv");
    CHECK(cmp.report.pairs.size() == 6);
    for (const SpeedupEntry& e : cmp.report.pairs) {
        if (e.ratio) CHECK(*e.ratio == 1.0);
    }
}

TEST_CASE("oversized chimera cubes are skipped") {
    test::TempDir d("skip");
    ExperimentConfig c = tiny(d.path());
    c.sizes = {9};
    set_config_value(c, "families", "chimera");
    ScalingResult r = run_scaling(c);
    REQUIRE(r.skipped.size() == 1);
    CHECK(r.skipped[0].size == 9);
    CHECK(r.skipped[0].reason == "CapacityExceeded");
    CHECK(read_text(d.path() / "summary/skipped.csv").find("chimera,9,CapacityExceeded") != std::string::npos);
}

TEST_CASE("compare needs shared ids") {
    test::TempDir d("cmp");
    write_results(d.path() / "a.jsonl", {{"x", 4, true, 2, 10}, {"y", 4, false, 0, 0}});
    write_results(d.path() / "b.jsonl", {{"z", 4, true, 2, 5}});
    try {
        run_compare(d.path() / "a.jsonl", d.path() / "b.jsonl", d.path() / "out.csv");
        FAIL("expected NoOverlap");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoOverlap);
    }
    write_results(d.path() / "c.jsonl", {{"x", 4, true, 2, 5}, {"y", 4, true, 2, 1}});
    CompareResult r = run_compare(d.path() / "a.jsonl", d.path() / "c.jsonl", d.path() / "out.csv");
    CHECK(*r.report.pairs[0].ratio == 2.0);
    CHECK(r.report.unsolved_a == std::vector<std::string>{"y"});
    CHECK(data_rows(d.path() / "out.csv") == 2);
}

TEST_CASE("isometry study on an ideal pegasus") {
    test::TempDir d("iso");
    ExperimentConfig c = tiny(d.path());
    set_config_value(c, "families", "pegasus");
    set_config_value(c, "defects", "none");
    c.isometry = {4, 10, 64};
    IsometryResult r = run_isometry(c);
    REQUIRE(r.results.size() == 1);
    CHECK(r.results[0].size() == 10);
    const fs::path rows = d.path() / "summary/isometry_pegasus.csv";
    CHECK(data_rows(rows) == 480);
    CHECK(data_rows(d.path() / "summary/isometry_ratio_pegasus.csv") == 10);
    const std::string text = read_text(rows);
    for (const auto& per : r.results[0]) {
        REQUIRE(per.size() == 48);
        CHECK(text.find(per[0].instance_id + ",0,") != std::string::npos);
    }
    CHECK(read_text(d.path() / "summary/isometry_hist_pegasus.csv").find("bin_lo,bin_hi,count") != std::string::npos);
}

TEST_CASE("isometry study refuses a damaged cube") {
    test::TempDir d("iso_bad");
    ExperimentConfig c = tiny(d.path());
    set_config_value(c, "families", "pegasus");
    c.isometry = {6, 1, 16};
    try {
        run_isometry(c);
        FAIL("expected NotFullCube");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotFullCube);
    }
}

}  // TEST_SUITE
