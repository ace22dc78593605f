// Exercises the C interface end to end through the shared library:
// lifecycle, option plumbing, report getters, renderers, and the
// thread-local error channel.

#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <unistd.h>

#include "orbitq.h"

static int failures = 0;

#define EXPECT(cond)                                                     \
  do {                                                                   \
    if (!(cond)) {                                                       \
      fprintf(stderr, "FAILED %s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                        \
    }                                                                    \
  } while (0)

static void test_lifecycle_and_errors(void) {
  int parts_bad[] = {9};
  orbitq_session* s = orbitq_session_new("xx", 2, parts_bad, 1);
  EXPECT(s == NULL);
  EXPECT(orbitq_last_error_code() == ORBITQ_ERR_INVALID_INPUT);
  EXPECT(strlen(orbitq_last_error_message()) > 0);

  int parts_odd[] = {3, 1};
  s = orbitq_session_new("sp", 4, parts_odd, 2);
  EXPECT(s == NULL);
  EXPECT(orbitq_last_error_code() == ORBITQ_ERR_INVALID_ORBIT);

  EXPECT(orbitq_session_new(NULL, 2, parts_bad, 1) == NULL);
  EXPECT(orbitq_last_error_code() == ORBITQ_ERR_BAD_ARGUMENT);

  int parts[] = {2};
  s = orbitq_session_new("gl", 2, parts, 1);
  EXPECT(s != NULL);
  EXPECT(orbitq_set_option(s, "seed", "123") == ORBITQ_OK);
  EXPECT(orbitq_set_option(s, "no_such", "1") == ORBITQ_ERR_INVALID_INPUT);
  orbitq_session_free(s);
  orbitq_session_free(NULL); /* must be a no-op */
}

static void test_reports(const char* cache_dir) {
  int parts[] = {2};
  orbitq_session* s = orbitq_session_new("gl", 2, parts, 1);
  EXPECT(s != NULL);
  orbitq_set_stable(s, 1);
  EXPECT(orbitq_set_option(s, "cache_dir", cache_dir) == ORBITQ_OK);

  char* rep = NULL;
  EXPECT(orbitq_model(s, &rep) == ORBITQ_OK);
  EXPECT(rep != NULL && strstr(rep, "\"pass\":true") != NULL);
  orbitq_string_free(rep);
  rep = NULL;

  EXPECT(orbitq_verify_kp(s, 1, &rep) == ORBITQ_OK);
  EXPECT(orbitq_report_passed(rep) == 1);
  char* csv = NULL;
  EXPECT(orbitq_report_csv(rep, &csv) == ORBITQ_OK);
  EXPECT(csv != NULL && strncmp(csv, "j,classical,oracle", 18) == 0);
  orbitq_string_free(csv);
  char* human = NULL;
  EXPECT(orbitq_report_human(rep, &human) == ORBITQ_OK);
  EXPECT(human != NULL && strstr(human, "PASS") != NULL);
  orbitq_string_free(human);
  orbitq_string_free(rep);
  rep = NULL;

  EXPECT(orbitq_verify_dixmier(s, 2, &rep) == ORBITQ_OK);
  EXPECT(orbitq_report_passed(rep) == 1);
  EXPECT(strstr(rep, "\"dim_b\":9") != NULL);
  orbitq_string_free(rep);
  rep = NULL;

  EXPECT(orbitq_casimir(s, &rep) == ORBITQ_OK);
  EXPECT(strstr(rep, "\"scalar\":\"-1/2\"") != NULL);
  orbitq_string_free(rep);
  rep = NULL;

  EXPECT(orbitq_form(s, 1, &rep) == ORBITQ_OK);
  EXPECT(strstr(rep, "\"positive_definite\":true") != NULL);
  orbitq_string_free(rep);
  rep = NULL;

  EXPECT(orbitq_hilbert(s, 2, &rep) == ORBITQ_OK);
  EXPECT(strstr(rep, "\"dim_quotient\":5") != NULL);
  orbitq_string_free(rep);
  rep = NULL;

  EXPECT(orbitq_koszul(s, 3, &rep) == ORBITQ_OK);
  EXPECT(orbitq_report_passed(rep) == 1);
  orbitq_string_free(rep);
  rep = NULL;

  EXPECT(orbitq_oracle(s, 1, &rep) == ORBITQ_OK);
  EXPECT(strstr(rep, "\"dim\":3") != NULL);
  orbitq_string_free(rep);
  rep = NULL;

  EXPECT(orbitq_orbits_info(s, &rep) == ORBITQ_OK);
  EXPECT(strstr(rep, "\"orbit_dim\":2") != NULL);
  orbitq_string_free(rep);

  orbitq_session_free(s);
}

static void test_orbits_list(void) {
  char* rep = NULL;
  EXPECT(orbitq_orbits_list("o", 4, 1, &rep) == ORBITQ_OK);
  EXPECT(rep != NULL && strstr(rep, "\"very_even\":true") != NULL);
  orbitq_string_free(rep);
  EXPECT(orbitq_orbits_list("zz", 4, 1, &rep) == ORBITQ_ERR_INVALID_INPUT);
}

static void test_batch(const char* cache_dir) {
  char path[256];
  snprintf(path, sizeof path, "%s/jobs.txt", cache_dir);
  FILE* f = fopen(path, "w");
  EXPECT(f != NULL);
  fprintf(f, "gl 2 2 pmax=1 dmax=1\nsp 2 2 pmax=1 dmax=1\n");
  fclose(f);
  char* rep = NULL;
  EXPECT(orbitq_batch(path, NULL, cache_dir, 1, &rep) == ORBITQ_OK);
  EXPECT(orbitq_report_passed(rep) == 1);
  orbitq_string_free(rep);
  rep = NULL;

  snprintf(path, sizeof path, "%s/bad.txt", cache_dir);
  f = fopen(path, "w");
  EXPECT(f != NULL);
  fprintf(f, "gl 2 2\nqq 2 2\n");
  fclose(f);
  EXPECT(orbitq_batch(path, NULL, cache_dir, 1, &rep) ==
         ORBITQ_ERR_INVALID_INPUT);
  EXPECT(strstr(orbitq_last_error_message(), "line 2") != NULL);
}

static void test_version_and_names(void) {
  EXPECT(orbitq_version() != NULL && orbitq_version()[0] != '\0');
  EXPECT(strcmp(orbitq_error_name(ORBITQ_OK), "ok") == 0);
  EXPECT(orbitq_error_name(ORBITQ_ERR_INVALID_INPUT) != NULL);
  EXPECT(orbitq_report_passed("{not json") < 0);
  EXPECT(orbitq_report_passed("{\"pass\":false}") == 0);
  EXPECT(orbitq_report_passed("{\"pass\":true}") == 1);
}

int main(void) {
  char cache_dir[128];
  snprintf(cache_dir, sizeof cache_dir, "/tmp/orbitq-capi-%ld", (long)getpid());
  char cmd[160];
  snprintf(cmd, sizeof cmd, "mkdir -p %s", cache_dir);
  EXPECT(system(cmd) == 0);

  test_lifecycle_and_errors();
  test_reports(cache_dir);
  test_orbits_list();
  test_batch(cache_dir);
  test_version_and_names();

  snprintf(cmd, sizeof cmd, "rm -rf %s", cache_dir);
  EXPECT(system(cmd) == 0);

  if (failures == 0) {
    printf("capi: all checks passed\n");
    return 0;
  }
  fprintf(stderr, "capi: %d check(s) failed\n", failures);
  return 1;
}
