/*
 * Copyright 2026 The isacdt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the isacdt simulator. All functions return ISACDT_OK (0)
 * or one of the error codes below; isacdt_last_error() describes the most
 * recent failure on the calling thread. Handles are opaque and must be
 * released with the matching *_free function. */

#ifndef ISACDT_ISACDT_H_
#define ISACDT_ISACDT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ISACDT_API __declspec(dllexport)
#else
#define ISACDT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  ISACDT_OK = 0,
  ISACDT_ERR_INVALID_ARGUMENT = 1,
  ISACDT_ERR_CONFIG = 2,
  ISACDT_ERR_IO = 3,
  ISACDT_ERR_NOT_FOUND = 4,
  ISACDT_ERR_DEGENERATE_GEOMETRY = 5,
  ISACDT_ERR_UNDEFINED_METRIC = 6,
  ISACDT_ERR_STALE_EVENT = 7,
  ISACDT_ERR_INVALID_PARTITION = 8,
  ISACDT_ERR_INSUFFICIENT_EVIDENCE = 9,
  ISACDT_ERR_INSUFFICIENT_PILOTS = 10,
  ISACDT_ERR_INTERNAL = 99
};

typedef struct isacdt_scenario isacdt_scenario;
typedef struct isacdt_result isacdt_result;

ISACDT_API const char* isacdt_version(void);

/* Message of the last failed call on this thread; "" when none. */
ISACDT_API const char* isacdt_last_error(void);

ISACDT_API size_t isacdt_preset_count(void);
/* NULL when index is out of range. */
ISACDT_API const char* isacdt_preset_name(size_t index);
ISACDT_API const char* isacdt_preset_description(size_t index);

ISACDT_API int isacdt_scenario_from_preset(const char* name,
                                           isacdt_scenario** out);
ISACDT_API int isacdt_scenario_from_file(const char* path,
                                         isacdt_scenario** out);
ISACDT_API int isacdt_scenario_from_string(const char* json_text,
                                           isacdt_scenario** out);
ISACDT_API void isacdt_scenario_free(isacdt_scenario* scenario);

ISACDT_API int isacdt_scenario_set_seed(isacdt_scenario* scenario,
                                        uint64_t seed);
ISACDT_API int isacdt_scenario_set_trials(isacdt_scenario* scenario,
                                          int trials);
/* ISACDT_ERR_CONFIG with one "field.path: problem" line per violation. */
ISACDT_API int isacdt_scenario_validate(const isacdt_scenario* scenario);
/* Canonical JSON of the scenario; valid until the scenario is freed or
 * modified. */
ISACDT_API const char* isacdt_scenario_json(isacdt_scenario* scenario);

/* jobs < 1 is treated as 1. */
ISACDT_API int isacdt_run(const isacdt_scenario* scenario, int jobs,
                          isacdt_result** out);
ISACDT_API void isacdt_result_free(isacdt_result* result);

/* One-line summary; valid for the lifetime of the result. */
ISACDT_API const char* isacdt_result_summary(const isacdt_result* result);
/* Contents of metrics.csv; valid for the lifetime of the result. */
ISACDT_API const char* isacdt_result_metrics_csv(const isacdt_result* result);

/* Writes metrics.csv plus experiment artifacts into `directory`, creating
 * it if needed. Each file is written to a temporary name and renamed. */
ISACDT_API int isacdt_result_write(const isacdt_result* result,
                                   const char* directory);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // ISACDT_ISACDT_H_
