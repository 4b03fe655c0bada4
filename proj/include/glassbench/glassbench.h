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

/* C interface to glassbench. Objects are opaque handles released with the
 * matching *_free function. Every call returns a gb_status; on failure
 * gb_last_error() describes the problem for the calling thread. Strings
 * returned through char** are owned by the caller (gb_string_free). */

#ifndef GLASSBENCH_H
#define GLASSBENCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(GLASSBENCH_BUILDING_LIBRARY)
#define GB_API __attribute__((visibility("default")))
#else
#define GB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gb_status {
    GB_OK = 0,
    GB_INVALID_ARGUMENT = 1,
    GB_MASK_MISMATCH = 2,
    GB_COUNT_EXCEEDED = 3,
    GB_EMPTY_GRAPH = 4,
    GB_INCOMPLETE_ASSIGNMENT = 5,
    GB_NOT_FULL_CUBE = 6,
    GB_CAPACITY_EXCEEDED = 7,
    GB_WRONG_FAMILY = 8,
    GB_RANGE_VIOLATION = 9,
    GB_TOO_LARGE = 10,
    GB_DOMAIN_ERROR = 11,
    GB_EMPTY_GROUP = 12,
    GB_WRONG_COUNT = 13,
    GB_NO_OVERLAP = 14,
    GB_IO = 15,
    GB_PARSE = 16,
    GB_CONFIG = 17,
    GB_INTERNAL = 99
} gb_status;

typedef struct gb_graph gb_graph;
typedef struct gb_instance gb_instance;
typedef struct gb_embedding gb_embedding;
typedef struct gb_config gb_config;

typedef void (*gb_line_fn)(const char* line, void* user);

typedef struct gb_yield {
    size_t sites_embedded;
    size_t sites_total;
    size_t edges_embedded;
    size_t edges_total;
} gb_yield;

GB_API const char* gb_version(void);
GB_API const char* gb_last_error(void);
GB_API const char* gb_status_name(gb_status status);
GB_API void gb_string_free(char* s);

/* Independent stream seed for (master, tags...). */
GB_API uint64_t gb_derive_seed(uint64_t master, const uint64_t* tags, size_t count);

/* Graphs. family is "chimera" (shape = rows, cols, shore) or "pegasus" (shape = m). */
GB_API gb_status gb_graph_new(const char* family, const int* shape, size_t shape_len, gb_graph** out);
GB_API gb_status gb_graph_with_random_defects(const gb_graph* graph, size_t qubits, size_t couplers,
                                              uint64_t seed, gb_graph** out);
GB_API gb_status gb_graph_load(const char* path, gb_graph** out);
GB_API gb_status gb_graph_save(const gb_graph* graph, const char* path);
/* {"qubits", "couplers", "max_degree", "min_degree", "bipartite", "degree_histogram"} */
GB_API gb_status gb_graph_stats_json(const gb_graph* graph, char** out);
GB_API const char* gb_graph_family(const gb_graph* graph);
GB_API void gb_graph_free(gb_graph* graph);

/* Instances on the full L1 x L2 x L3 lattice, or on the logical graph an
 * embedding covers. */
GB_API gb_status gb_instance_generate(int l1, int l2, int l3, uint64_t seed, gb_instance** out);
GB_API gb_status gb_instance_generate_for(const gb_embedding* embedding, uint64_t seed, gb_instance** out);
GB_API gb_status gb_instance_load(const char* path, gb_instance** out);
GB_API gb_status gb_instance_save(const gb_instance* instance, const char* path);
GB_API const char* gb_instance_id(const gb_instance* instance);
GB_API size_t gb_instance_num_sites(const gb_instance* instance);
GB_API size_t gb_instance_num_edges(const gb_instance* instance);
GB_API void gb_instance_free(gb_instance* instance);

/* Canonical embedding of an L1 x L2 x L3 lattice, adjusted to the graph's
 * defects. yield may be NULL. */
GB_API gb_status gb_embedding_build(const gb_graph* working, int l1, int l2, int l3, uint64_t seed, int passes,
                                    gb_embedding** out, gb_yield* yield);
GB_API gb_status gb_embedding_load(const char* path, gb_embedding** out);
GB_API gb_status gb_embedding_save(const gb_embedding* embedding, const char* path);
/* passed receives 1 or 0; violations (may be NULL) receives one per line. */
GB_API gb_status gb_embedding_validate(const gb_embedding* embedding, const gb_graph* working, int* passed,
                                       char** violations);
GB_API void gb_embedding_free(gb_embedding* embedding);

/* Samples an instance. With an embedding the physical problem is annealed
 * (kind "sa-physical"), otherwise the logical one ("sa-logical" or "exact").
 * Reads go to out_path as JSON lines; summary (may be NULL) receives JSON. */
GB_API gb_status gb_solve(const gb_instance* instance, const gb_embedding* embedding, const gb_graph* working,
                          const char* kind, int effort, int reads, uint64_t seed, double chain_strength,
                          const char* out_path, char** summary);

GB_API gb_status gb_tts(double effort, double p, double* out, int* solved);

/* Experiment configuration. Values passed to gb_config_set are JSON text. */
GB_API gb_status gb_config_new_default(gb_config** out);
GB_API gb_status gb_config_load(const char* path, gb_config** out);
GB_API gb_status gb_config_set(gb_config* config, const char* key, const char* value);
GB_API gb_status gb_config_json(const gb_config* config, char** out);
GB_API void gb_config_free(gb_config* config);

GB_API gb_status gb_run_scaling(const gb_config* config, gb_line_fn log, void* user, char** summary);
GB_API gb_status gb_run_compare(const char* results_a, const char* results_b, const char* out_csv, char** summary);
GB_API gb_status gb_run_isometry(const gb_config* config, gb_line_fn log, void* user, char** summary);
/* Runs the self-check suite; embedding_path and graph_path may be NULL. */
GB_API gb_status gb_run_verify(const char* embedding_path, const char* graph_path, gb_line_fn log, void* user,
                               int* passed);

#ifdef __cplusplus
}
#endif

#endif /* GLASSBENCH_H */
