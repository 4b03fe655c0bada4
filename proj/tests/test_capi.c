/*
   Copyright 2026 The glassbench Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */

/* C API checks, compiled as C. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "glassbench/glassbench.h"

static int failures = 0;

#define EXPECT(cond)                                                              \
    do {                                                                          \
        if (!(cond)) {                                                            \
            fprintf(stderr, "%s:%d: expected %s (%s)\n", __FILE__, __LINE__, #cond, \
                    gb_last_error());                                             \
            ++failures;                                                           \
        }                                                                         \
    } while (0)

static void count_lines(const char* line, void* user) {
    (void)line;
    ++*(int*)user;
}

static void test_graphs(void) {
    int chimera[3] = {16, 16, 4};
    int pegasus[1] = {16};
    gb_graph* c = NULL;
    gb_graph* p = NULL;
    gb_graph* w = NULL;
    char* stats = NULL;

    EXPECT(gb_graph_new("chimera", chimera, 3, &c) == GB_OK);
    EXPECT(gb_graph_stats_json(c, &stats) == GB_OK);
    EXPECT(strstr(stats, "\"qubits\":2048") != NULL);
    EXPECT(strstr(stats, "\"couplers\":6016") != NULL);
    gb_string_free(stats);
    EXPECT(strcmp(gb_graph_family(c), "chimera") == 0);

    EXPECT(gb_graph_with_random_defects(c, 7, 0, 1, &w) == GB_OK);
    EXPECT(gb_graph_stats_json(w, &stats) == GB_OK);
    EXPECT(strstr(stats, "\"qubits\":2041") != NULL);
    gb_string_free(stats);
    gb_graph_free(w);

    EXPECT(gb_graph_new("pegasus", pegasus, 1, &p) == GB_OK);
    EXPECT(gb_graph_stats_json(p, &stats) == GB_OK);
    EXPECT(strstr(stats, "\"qubits\":5640") != NULL);
    EXPECT(strstr(stats, "\"max_degree\":15") != NULL);
    EXPECT(strstr(stats, "\"bipartite\":false") != NULL);
    gb_string_free(stats);

    w = NULL;
    EXPECT(gb_graph_new("zephyr", pegasus, 1, &w) == GB_INVALID_ARGUMENT);
    EXPECT(w == NULL);
    EXPECT(strlen(gb_last_error()) > 0);
    EXPECT(gb_graph_new("chimera", chimera, 2, &w) == GB_INVALID_ARGUMENT);
    EXPECT(gb_graph_new(NULL, chimera, 3, &w) == GB_INVALID_ARGUMENT);

    gb_graph_free(c);
    gb_graph_free(p);
    gb_graph_free(NULL);
}

static void test_embedding_and_solve(const char* dir) {
    int shape[1] = {6};
    gb_graph* g = NULL;
    gb_embedding* e = NULL;
    gb_embedding* loaded = NULL;
    gb_instance* inst = NULL;
    gb_instance* inst2 = NULL;
    gb_yield y;
    int passed = 0;
    char* violations = NULL;
    char* summary = NULL;
    char path[1024];

    EXPECT(gb_graph_new("pegasus", shape, 1, &g) == GB_OK);
    EXPECT(gb_embedding_build(g, 3, 3, 3, 1, 20, &e, &y) == GB_OK);
    EXPECT(y.sites_embedded == 27 && y.sites_total == 27);
    EXPECT(y.edges_embedded == 54 && y.edges_total == 54);
    EXPECT(gb_embedding_validate(e, g, &passed, &violations) == GB_OK);
    EXPECT(passed == 1);
    gb_string_free(violations);

    EXPECT(gb_embedding_build(g, 6, 3, 3, 1, 20, &loaded, NULL) == GB_CAPACITY_EXCEEDED);
    EXPECT(strcmp(gb_status_name(GB_CAPACITY_EXCEEDED), "CapacityExceeded") == 0);

    snprintf(path, sizeof path, "%s/emb.json", dir);
    EXPECT(gb_embedding_save(e, path) == GB_OK);
    EXPECT(gb_embedding_load(path, &loaded) == GB_OK);
    gb_embedding_free(loaded);

    EXPECT(gb_instance_generate_for(e, 42, &inst) == GB_OK);
    EXPECT(gb_instance_num_sites(inst) == 27);
    EXPECT(gb_instance_num_edges(inst) == 54);
    snprintf(path, sizeof path, "%s/inst.json", dir);
    EXPECT(gb_instance_save(inst, path) == GB_OK);
    EXPECT(gb_instance_load(path, &inst2) == GB_OK);
    EXPECT(strcmp(gb_instance_id(inst), gb_instance_id(inst2)) == 0);
    EXPECT(strlen(gb_instance_id(inst)) == 16);

    snprintf(path, sizeof path, "%s/reads.jsonl", dir);
    EXPECT(gb_solve(inst, e, g, "sa-physical", 256, 20, 3, 2.0, path, &summary) == GB_OK);
    EXPECT(summary != NULL && strstr(summary, "lowest_energy") != NULL);
    gb_string_free(summary);
    summary = NULL;
    EXPECT(gb_solve(inst, NULL, NULL, "exact", 1, 1, 0, 2.0, NULL, NULL) == GB_TOO_LARGE);
    gb_instance_free(inst2);
    inst2 = NULL;
    EXPECT(gb_instance_generate(2, 2, 2, 1, &inst2) == GB_OK);
    EXPECT(gb_solve(inst2, NULL, NULL, "exact", 1, 1, 0, 2.0, NULL, &summary) == GB_OK);
    EXPECT(summary != NULL && strstr(summary, "lowest_energy") != NULL);
    gb_string_free(summary);
    EXPECT(gb_solve(inst, e, g, "sa-physical", 16, 4, 0, 2.5, NULL, NULL) == GB_RANGE_VIOLATION);

    gb_instance_free(inst2);
    inst2 = NULL;
    EXPECT(gb_instance_load("/nonexistent/x.json", &inst2) == GB_IO);

    gb_instance_free(inst);
    gb_instance_free(inst2);
    gb_embedding_free(e);
    gb_graph_free(g);
}

static void test_metrics_and_config(void) {
    double t = 0;
    int solved = -1;
    uint64_t tags[2] = {1, 2};
    gb_config* c = NULL;
    char* json = NULL;

    EXPECT(gb_tts(2, 0.5, &t, &solved) == GB_OK);
    EXPECT(solved == 1 && fabs(t - 13.2877123795) < 1e-9);
    EXPECT(gb_tts(8, 0, &t, &solved) == GB_OK);
    EXPECT(solved == 0);
    EXPECT(gb_tts(-1, 0.5, &t, &solved) == GB_DOMAIN_ERROR);

    EXPECT(gb_derive_seed(7, tags, 2) == gb_derive_seed(7, tags, 2));
    EXPECT(gb_derive_seed(7, tags, 2) != gb_derive_seed(7, tags, 1));

    EXPECT(gb_config_new_default(&c) == GB_OK);
    EXPECT(gb_config_set(c, "instances", "5") == GB_OK);
    EXPECT(gb_config_set(c, "nonsense", "5") == GB_CONFIG);
    EXPECT(gb_config_json(c, &json) == GB_OK);
    EXPECT(strstr(json, "\"instances\": 5") != NULL);
    gb_string_free(json);
    gb_config_free(c);
    EXPECT(strncmp(gb_version(), "glassbench", 10) == 0);
}

static void test_runs(const char* dir) {
    gb_config* c = NULL;
    char value[1024];
    char* summary = NULL;
    int lines = 0;

    EXPECT(gb_config_new_default(&c) == GB_OK);
    snprintf(value, sizeof value, "\"%s/run\"", dir);
    EXPECT(gb_config_set(c, "output_dir", value) == GB_OK);
    EXPECT(gb_config_set(c, "sizes", "[2]") == GB_OK);
    EXPECT(gb_config_set(c, "instances", "2") == GB_OK);
    EXPECT(gb_config_set(c, "ladder", "[8,32]") == GB_OK);
    EXPECT(gb_config_set(c, "batch_size", "20") == GB_OK);
    EXPECT(gb_config_set(c, "target_hits", "5") == GB_OK);
    EXPECT(gb_config_set(c, "max_batches", "2") == GB_OK);
    EXPECT(gb_run_scaling(c, count_lines, &lines, &summary) == GB_OK);
    EXPECT(lines > 0);
    EXPECT(summary != NULL && strstr(summary, "\"failures\":0") != NULL);
    gb_string_free(summary);
    gb_config_free(c);
}

int main(void) {
    char dir[512];
    char cmd[600];
    const char* tmp = getenv("TMPDIR");
    snprintf(dir, sizeof dir, "%s/glassbench_capi_%ld", tmp ? tmp : "/tmp", (long)rand());
    snprintf(cmd, sizeof cmd, "mkdir -p '%s'", dir);
    if (system(cmd) != 0) return 2;

    test_graphs();
    test_embedding_and_solve(dir);
    test_metrics_and_config();
    test_runs(dir);

    snprintf(cmd, sizeof cmd, "rm -rf '%s'", dir);
    if (system(cmd) != 0) fprintf(stderr, "could not remove %s\n", dir);
    if (failures) {
        fprintf(stderr, "%d C API check(s) failed\n", failures);
        return 1;
    }
    printf("C API checks passed\n");
    return 0;
}
