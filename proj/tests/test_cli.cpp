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

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "glassbench/serialize.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int status = -1;
    std::string output;
};

Outcome run(const std::string& args) {
    const std::string cmd = std::string(GLASSBENCH_CLI) + " " + args + " 2>&1";
    Outcome out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.output.append(buf.data(), n);
    const int raw = pclose(pipe);
    out.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("verify passes on a clean build") {
    Outcome o = run("verify");
    CHECK_MESSAGE(o.status == 0, o.output);
}

TEST_CASE("topology summary") {
    Outcome o = run("topology --family pegasus --shape 16");
    CHECK(o.status == 0);
    CHECK(o.output.find("\"qubits\":5640") != std::string::npos);
    o = run("topology --family chimera --shape 16,16,4 --defect-qubits 7 --defect-seed 1");
    CHECK(o.output.find("\"qubits\":2041") != std::string::npos);
}

TEST_CASE("embed, validate and a corrupted fixture") {
    test::TempDir d("cli_embed");
    const std::string good = (d.path() / "good.json").string();
    const std::string bad = (d.path() / "bad.json").string();
    REQUIRE(run("embed --family chimera --L 2 --out " + good).status == 0);
    CHECK(run("validate --emb " + good).status == 0);

    glassbench::Json doc = glassbench::read_json(good);
    doc["chains"]["0,0,1"] = doc["chains"]["0,0,0"];
    glassbench::write_json(bad, doc);
    Outcome o = run("validate --emb " + bad);
    CHECK(o.status == 1);
    CHECK(o.output.find("0,0,0") != std::string::npos);

    o = run("verify --emb " + bad);
    CHECK(o.status == 1);
    CHECK(o.output.find("FAIL") != std::string::npos);
}

TEST_CASE("generate and solve") {
    test::TempDir d("cli_solve");
    const std::string dir = d.path().string();
    REQUIRE(run("gen --L 2 --count 3 --seed 4 --out " + dir + "/inst").status == 0);
    std::size_t files = 0;
    std::string first;
    for (const auto& e : fs::directory_iterator(d.path() / "inst")) {
        ++files;
        if (first.empty() || e.path().string() < first) first = e.path().string();
    }
    CHECK(files == 3);
    Outcome o = run("solve --instance " + first + " --kind exact");
    CHECK_MESSAGE(o.status == 0, o.output);
    o = run("solve --instance " + first + " --kind sa-logical --effort 64 --reads 10 --out " + dir + "/r.jsonl");
    CHECK(o.status == 0);
    CHECK(fs::exists(d.path() / "r.jsonl"));
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run("scaling --no-such-flag").status == 2);
    CHECK(run("scaling --set nonsense=1").status == 2);
    CHECK(run("solve").status == 2);
    CHECK(run("").status != 0);
}

TEST_CASE("runtime errors exit with 1") {
    test::TempDir d("cli_err");
    CHECK(run("validate --emb " + (d.path() / "missing.json").string()).status == 1);
}

TEST_CASE("scaling from the command line is deterministic") {
    test::TempDir d("cli_scaling");
    const std::string common =
        " --sizes 2 --instances 2 --ladder 8,32 --set batch_size=20 --set target_hits=5 --set max_batches=2 -q --seed 9";
    REQUIRE(run("scaling --out " + (d.path() / "a").string() + common).status == 0);
    REQUIRE(run("scaling --out " + (d.path() / "b").string() + common).status == 0);
    const glassbench::Json ma = glassbench::read_json(d.path() / "a" / "manifest.json");
    const glassbench::Json mb = glassbench::read_json(d.path() / "b" / "manifest.json");
    CHECK(ma["outputs"] == mb["outputs"]);
    CHECK(ma["outputs"].size() > 10);
}

}  // TEST_SUITE
