#ifndef ORBITQ_H
#define ORBITQ_H

/*
 * C interface to the orbit workbench: exact symplectic models of nilpotent
 * matrix orbits, their polynomial reductions, randomized dimension checks,
 * Weyl-algebra quantization, and the invariant quotient algebra.
 *
 * Conventions:
 *  - Every function that can fail returns an int status: 0 on success,
 *    otherwise one of the ORBITQ_ERR_* codes below.  The thread-local
 *    message for the most recent failure is available through
 *    orbitq_last_error_message().
 *  - Report getters write a heap-allocated JSON document into *out.
 *    The caller owns it and releases it with orbitq_string_free().
 *  - A session is bound to one orbit (group, n, partition) and owns lazily
 *    built computation engines; it is not thread-safe, but distinct
 *    sessions may be used concurrently.  The on-disk cache shared between
 *    sessions uses advisory file locking and is concurrency-safe.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct orbitq_session orbitq_session;

typedef enum orbitq_status {
  ORBITQ_OK = 0,
  ORBITQ_ERR_NOT_HERMITIAN = 1,
  ORBITQ_ERR_REGISTRY_MISMATCH = 2,
  ORBITQ_ERR_INVALID_ORBIT = 3,
  ORBITQ_ERR_MODEL_INCONSISTENCY = 4,
  ORBITQ_ERR_DEGREE_TOO_SMALL = 5,
  ORBITQ_ERR_INVOLUTION_INCONSISTENCY = 6,
  ORBITQ_ERR_SPLIT_FAILURE = 7,
  ORBITQ_ERR_NOT_SCALAR = 8,
  ORBITQ_ERR_SINGULAR_CAYLEY = 9,
  ORBITQ_ERR_RANK_UNSTABLE = 10,
  ORBITQ_ERR_CACHE = 11,
  ORBITQ_ERR_INVALID_INPUT = 12,
  ORBITQ_ERR_INTERNAL = 13,
  ORBITQ_ERR_BAD_ARGUMENT = 14
} orbitq_status;

/* Library version string, e.g. "0.1.0". */
const char* orbitq_version(void);

/* Stable name for a status code ("ok", "invalid_input", ...). */
const char* orbitq_error_name(int code);

/* Thread-local details of the most recent failure in this thread. */
const char* orbitq_last_error_message(void);
int orbitq_last_error_code(void);

/*
 * Creates a session for the orbit of the given Jordan type.  group is
 * "gl", "o", or "sp"; partition is a non-increasing list of positive part
 * sizes summing to n.  Returns NULL on failure (consult
 * orbitq_last_error_*).
 */
orbitq_session* orbitq_session_new(const char* group, int n,
                                   const int* partition, int partition_len);
void orbitq_session_free(orbitq_session* session);

/*
 * Session options, as textual key/value pairs.  Keys: hilbert_jmax,
 * koszul_nmax, kp_pmax, dixmier_dmax, slack, seed, height, count,
 * cache_dir, workers.
 */
int orbitq_set_option(orbitq_session* session, const char* key,
                      const char* value);
/* Loads "key = value" lines from a config file ('#' comments allowed). */
int orbitq_load_config(orbitq_session* session, const char* path);
/* stable != 0 omits timing and cache statistics from reports, making
 * reruns with identical inputs byte-identical. */
void orbitq_set_stable(orbitq_session* session, int stable);

/* Catalog listing for one group and size; no session required. */
int orbitq_orbits_list(const char* group, int n, int stable, char** out);

/* Report getters.  Each writes a JSON document into *out. */
int orbitq_orbits_info(orbitq_session* session, char** out);
int orbitq_model(orbitq_session* session, char** out);
int orbitq_hilbert(orbitq_session* session, int jmax, char** out);
int orbitq_koszul(orbitq_session* session, int nmax, char** out);
int orbitq_oracle(orbitq_session* session, int pmax, char** out);
int orbitq_verify_kp(orbitq_session* session, int pmax, char** out);
int orbitq_verify_dixmier(orbitq_session* session, int dmax, char** out);
int orbitq_form(orbitq_session* session, int d, char** out);
int orbitq_casimir(orbitq_session* session, char** out);

/*
 * Runs every job in a batch file (one "GROUP N PARTITION [key=value ...]"
 * job per line; keys pmax, dmax, seed, slack) on a worker pool and writes
 * a summary report.  config_path may be NULL.  cache_dir may be NULL or
 * empty for the default directory.
 */
int orbitq_batch(const char* batch_path, const char* config_path,
                 const char* cache_dir, int stable, char** out);

/* Report post-processing (input: a JSON document from a getter above). */
int orbitq_report_csv(const char* report_json, char** out);
int orbitq_report_human(const char* report_json, char** out);
/* 1 if the report's "pass" field is true, 0 if false or absent,
 * negative on parse failure. */
int orbitq_report_passed(const char* report_json);

/* Releases a string returned through any char** out parameter. */
void orbitq_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ORBITQ_H */
