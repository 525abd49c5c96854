/*
 * Copyright 2026 The twosided Authors.
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

/*
 * C interface of libtwosided.
 *
 * Objects are opaque handles created by the _generate, _load and _run calls and
 * released with the matching _free. Every fallible call returns a twosided_status;
 * on failure twosided_last_error() describes the problem (the message is
 * thread-local and valid until the next failing call on the same thread).
 * Strings returned through char** out-parameters are heap copies owned by the
 * caller and must be released with twosided_string_free.
 *
 * Assignments are int arrays of length n_players holding the arm index of
 * each player, or -1 for unmatched.
 */

#ifndef TWOSIDED_TWOSIDED_H_
#define TWOSIDED_TWOSIDED_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TWOSIDED_BUILDING_LIBRARY)
#    define TWOSIDED_API __declspec(dllexport)
#  else
#    define TWOSIDED_API __declspec(dllimport)
#  endif
#else
#  define TWOSIDED_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum twosided_status {
  TWOSIDED_OK = 0,
  TWOSIDED_ERR_INPUT = 1,    /* bad argument or precondition */
  TWOSIDED_ERR_CONFIG = 2,   /* malformed or inconsistent configuration */
  TWOSIDED_ERR_IO = 3,       /* file access or parse failure */
  TWOSIDED_ERR_INTERNAL = 4  /* unexpected failure */
} twosided_status;

typedef struct twosided_profile twosided_profile;
typedef struct twosided_experiment twosided_experiment;
typedef struct twosided_results twosided_results;

TWOSIDED_API const char* twosided_version(void);
TWOSIDED_API const char* twosided_last_error(void);
TWOSIDED_API void twosided_string_free(char* s);

/* ---- preference profiles ---- */

/* Generates from a GeneratorSpec JSON document, e.g.
 * {"kind":"uniform","n_players":5,"n_arms":5,"seed":7}. */
TWOSIDED_API twosided_status twosided_profile_generate(const char* generator_json,
                                                       twosided_profile** out);
TWOSIDED_API twosided_status twosided_profile_from_json(const char* profile_json,
                                                        twosided_profile** out);
TWOSIDED_API twosided_status twosided_profile_load(const char* path, twosided_profile** out);
TWOSIDED_API twosided_status twosided_profile_to_json(const twosided_profile* profile,
                                                      char** out_json);
TWOSIDED_API twosided_status twosided_profile_dims(const twosided_profile* profile,
                                                   int* n_players, int* n_arms);
TWOSIDED_API void twosided_profile_free(twosided_profile* profile);

/* ---- market oracles ---- */

/* arms_propose != 0 yields the player-pessimal stable matching. */
TWOSIDED_API twosided_status twosided_gale_shapley(const twosided_profile* profile,
                                                   int arms_propose, int* out_assignment);
TWOSIDED_API twosided_status twosided_blocking_pair_count(const twosided_profile* profile,
                                                          const int* assignment,
                                                          size_t* out_count);
TWOSIDED_API twosided_status twosided_max_player_regret(const twosided_profile* profile,
                                                        const int* assignment,
                                                        double* out_regret);
/* Writes up to `capacity` stable matchings (each n_players ints) into
 * out_assignments and the total number found into out_count. Pass capacity 0
 * to query the count only. At most 6 players. */
TWOSIDED_API twosided_status twosided_stable_matchings(const twosided_profile* profile,
                                                       int* out_assignments, size_t capacity,
                                                       size_t* out_count);

/* ---- experiments ---- */

TWOSIDED_API twosided_status twosided_experiment_load(const char* path,
                                                      twosided_experiment** out);
TWOSIDED_API twosided_status twosided_experiment_from_json(const char* spec_json,
                                                           twosided_experiment** out);
/* workers > 0 overrides the experiment's worker count. */
TWOSIDED_API twosided_status twosided_experiment_run(const twosided_experiment* experiment,
                                                     int workers, twosided_results** out);
TWOSIDED_API void twosided_experiment_free(twosided_experiment* experiment);

/* Number of batches (1, or one per sweep entry). */
TWOSIDED_API twosided_status twosided_results_batch_count(const twosided_results* results,
                                                          size_t* out_count);
/* Aggregate series of one batch as aggregate.csv text. */
TWOSIDED_API twosided_status twosided_results_aggregate_csv(const twosided_results* results,
                                                            size_t batch, char** out_csv);
/* runs.csv, aggregate.csv, config.json (per batch) and experiment.json. */
TWOSIDED_API twosided_status twosided_results_write(const twosided_results* results,
                                                    const char* out_dir);
TWOSIDED_API void twosided_results_free(twosided_results* results);

/* ---- persisted CSV processing ---- */

/* runs.csv -> aggregate.csv */
TWOSIDED_API twosided_status twosided_aggregate_file(const char* runs_csv_path,
                                                     const char* aggregate_csv_path);
/* aggregate.csv -> proxy.csv. window_snapshots counts snapshot rounds;
 * threshold is a fraction in [0, 1]. */
TWOSIDED_API twosided_status twosided_proxy_file(const char* aggregate_csv_path,
                                                 const char* proxy_csv_path,
                                                 int window_snapshots, double threshold);
/* Spacing between consecutive snapshot rounds in an aggregate.csv file. */
TWOSIDED_API twosided_status twosided_aggregate_file_cadence(const char* aggregate_csv_path,
                                                             int* out_snapshot_every);

#ifdef __cplusplus
}
#endif

#endif /* TWOSIDED_TWOSIDED_H_ */
