#ifndef FEWNOMIAL_FEWNOMIAL_H
#define FEWNOMIAL_FEWNOMIAL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Error codes.  FNM_OK is 0; the rest mirror the library's error kinds. */
typedef enum fnm_status {
  FNM_OK = 0,
  FNM_ZERO_POLYNOMIAL = 1,
  FNM_NEEDS_S_FIRST = 2,
  FNM_NOT_PRIMITIVE = 3,
  FNM_WRONG_ARITY = 4,
  FNM_INDETERMINATE = 5,
  FNM_PRECISION_EXHAUSTED = 6,
  FNM_SINGULAR_POINT = 7,
  FNM_ALPHA_UNKNOWN = 8,
  FNM_NOT_DAMPENED = 9,
  FNM_INVALID_REQUEST = 10,
  FNM_DEGREE_TOO_LARGE = 11,
  FNM_PARSE_ERROR = 12,
  FNM_INVARIANT_VIOLATION = 13,
  FNM_INTERNAL = 14,
  FNM_NULL_ARGUMENT = 15
} fnm_status;

typedef enum fnm_backend { FNM_BACKEND_EXACT = 0, FNM_BACKEND_FLOAT = 1 } fnm_backend;

typedef struct fnm_poly fnm_poly;

/* Parse "c,e;c,e;..." into a new handle.  Free with fnm_poly_free. */
int fnm_poly_parse(const char* text, fnm_poly** out);
void fnm_poly_free(fnm_poly* poly);

int fnm_poly_degree(const fnm_poly* poly, uint64_t* out);
int fnm_poly_terms(const fnm_poly* poly, uint64_t* out);
/* Canonical text form; free with fnm_string_free. */
int fnm_poly_format(const fnm_poly* poly, char** out);

/* Distinct real roots in the interval with endpoints given as rational
   text ("3/4", "-1.5", "1e-3"). */
int fnm_count(const fnm_poly* poly, const char* a, const char* b, int a_open, int b_open,
              int backend, uint64_t* out);

/* Solve report as JSON, the same document the solve job returns. */
int fnm_solve(const fnm_poly* poly, const char* a, const char* b, const char* eps, int backend,
              char** report_json);

/* Run one JSON job.  Returns the process exit status (0, 2, 3 or 4) and
   always stores a report or an error record in *report_json. */
int fnm_run_job(const char* job_json, char** report_json);

/* JSON-lines batch: one output line per non-blank input line, in order.
   Failed lines become error records; the call itself fails only on null
   arguments.  threads == 0 means one per hardware thread. */
int fnm_run_batch(const char* jsonl, unsigned threads, char** out_jsonl);

void fnm_string_free(char* s);

/* Message for the calling thread's most recent failure, "" if none. */
const char* fnm_last_error(void);
const char* fnm_status_name(int status);

#ifdef __cplusplus
}
#endif

#endif
