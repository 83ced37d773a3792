/* Copyright 2026 The CountQA Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the count-query answering engine.
 *
 * All strings are UTF-8 and NUL-terminated. Requests and results are JSON.
 * Strings returned through `char **out` are owned by the caller and must be
 * released with countqa_string_free. On failure *out is left NULL and
 * countqa_last_error() describes the failure on the calling thread.
 *
 * An engine may be used from several threads at once.
 */

#ifndef COUNTQA_COUNTQA_H_
#define COUNTQA_COUNTQA_H_

#ifdef __cplusplus
extern "C" {
#endif

#if defined(COUNTQA_BUILDING_LIBRARY)
#define COUNTQA_API __attribute__((visibility("default")))
#else
#define COUNTQA_API
#endif

/* Status codes; also used as process exit codes by the command-line tool. */
typedef enum countqa_status {
  COUNTQA_OK = 0,
  COUNTQA_ERROR_INPUT = 2,    /* bad request, file or configuration */
  COUNTQA_ERROR_PROVIDER = 3, /* inference service unreachable or invalid */
  COUNTQA_ERROR_INTERNAL = 4
} countqa_status;

typedef enum countqa_stage {
  COUNTQA_STAGE_ANSWER = 0,        /* spans, counts, consolidation */
  COUNTQA_STAGE_CONTEXTUALIZE = 1, /* answer plus categorized noun phrases */
  COUNTQA_STAGE_EXPLAIN = 2,       /* ranked instances only */
  COUNTQA_STAGE_PIPELINE = 3       /* everything */
} countqa_stage;

typedef struct countqa_engine countqa_engine;

COUNTQA_API const char *countqa_version(void);

/* Message for the last failed call on this thread; "" if none. */
COUNTQA_API const char *countqa_last_error(void);

COUNTQA_API void countqa_string_free(char *s);

/* config_json: flat object, NULL or "" for defaults. Keys:
 *   strategy              most_confident|most_frequent|median|weighted_median
 *   alpha                 [0, 1], default 0.3
 *   similarity_threshold  [-1, 1], default 0
 *   explanation_strategy  no_consolidation|context_frequency|
 *                         summed_confidence|type_compatibility
 *   k                     instance cutoff, default 10
 *   ks                    evaluation cutoffs, default [1, 5, 10]
 *   provider              offline|remote
 *   endpoint, timeout_ms, max_in_flight, allow_degrade, cache_dir
 *   units_path, similarity_table_path
 * In remote mode the service is health-checked here. */
COUNTQA_API countqa_status countqa_engine_create(const char *config_json,
                                                 countqa_engine **engine);

COUNTQA_API void countqa_engine_destroy(countqa_engine *engine);

/* Effective configuration as JSON. */
COUNTQA_API countqa_status countqa_engine_config(const countqa_engine *engine, char **out);

/* Loads a dataset used to resolve requests that carry only a query. */
COUNTQA_API countqa_status countqa_engine_load_dataset(countqa_engine *engine,
                                                       const char *path);

/* request_json: {"query", "passages": [...]} or {"query", "passages_path"}
 * for one pretty-printed package, or {"dataset_path"} for one compact
 * package per line. */
COUNTQA_API countqa_status countqa_run(countqa_engine *engine, countqa_stage stage,
                                       const char *request_json, char **out);

/* request_json: {"dataset_path", "format": "json"|"table"}. */
COUNTQA_API countqa_status countqa_evaluate(countqa_engine *engine, const char *request_json,
                                            char **out);

/* operation: "label", "filter" or "split".
 *   label, filter  {"dataset_path", "units_path"?} -> dataset text
 *   split          {"dataset_path", "test_fraction", "seed"}
 *                  -> {"train": dataset text, "test": dataset text} */
COUNTQA_API countqa_status countqa_dataset_tool(const char *operation, const char *request_json,
                                                char **out);

/* First quantity in `text` as JSON, or "null". */
COUNTQA_API countqa_status countqa_parse_quantity(const char *text, char **out);

#ifdef __cplusplus
}
#endif

#endif /* COUNTQA_COUNTQA_H_ */
