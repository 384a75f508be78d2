/* SPDX-License-Identifier: MIT
 *
 * facta - exact Banzhaf / Shapley attribution over query lineage.
 *
 * C surface of the engine: load a lineage file (JSON or plain-text DNF),
 * run attribution or compilation, and serialize results. All functions
 * return a status code; on failure, facta_last_error() describes the
 * problem (the message is thread-local and valid until the next failing
 * call on the same thread).
 */

#ifndef FACTA_H
#define FACTA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; the CLI reuses them as exit codes. */
#define FACTA_OK 0
#define FACTA_ERR_INPUT 2    /* malformed or out-of-contract input */
#define FACTA_ERR_TIMEOUT 3  /* cooperative deadline expired */
#define FACTA_ERR_INTERNAL 4 /* engine invariant violation (a bug) */

typedef struct facta_instance facta_instance;
typedef struct facta_result facta_result;

/* Library version string, e.g. "0.1.0". */
const char* facta_version(void);

/* Message of the last failure on this thread ("" when none). */
const char* facta_last_error(void);

/* ------------------------------------------------------------------ */
/* Instances                                                           */
/* ------------------------------------------------------------------ */

/* Loads a lineage file. Extension ".dnf" selects the plain-text clause
 * format; anything else is parsed as JSON. */
int facta_load_file(const char* path, facta_instance** out);

/* Loads from a buffer; format is "json" or "dnf". */
int facta_load_string(const char* text, const char* format,
                      facta_instance** out);

void facta_instance_free(facta_instance* inst);

/* Number of universe variables. */
size_t facta_instance_variables(const facta_instance* inst);

/* "dnf" for boolean lineage, otherwise the monoid name
 * ("sum" | "count" | "min" | "max"). */
const char* facta_instance_kind(const facta_instance* inst);

/* ------------------------------------------------------------------ */
/* Attribution                                                         */
/* ------------------------------------------------------------------ */

typedef struct facta_run_options {
  /* 0: Banzhaf column only; nonzero: Banzhaf + Shapley (Shapley runs are
   * also checked for efficiency: values must sum to the query delta). */
  int shapley;
  /* "gradient" (default when NULL/empty), "counts" (MIN/MAX only),
   * or "oracle" (exhaustive, <= 24 variables). */
  const char* method;
  /* Nonzero disables the lifting pre-pass (results are identical;
   * compiled trees may be larger). */
  int no_lift;
  /* <= 0: no deadline. */
  double timeout_secs;
} facta_run_options;

/* Runs attribution; *out receives a result handle. opts may be NULL
 * (defaults: Banzhaf, gradient, lifting on, no deadline). */
int facta_attribution(const facta_instance* inst,
                      const facta_run_options* opts, facta_result** out);

/* Compiles to a d-tree without attribution (boolean lineage and MIN/MAX
 * aggregates; SUM/COUNT has no single-tree form and is rejected). The
 * result carries tree statistics; boolean trees also carry probability
 * and gradient annotations for DOT export. */
int facta_compile(const facta_instance* inst, int no_lift,
                  double timeout_secs, facta_result** out);

/* ------------------------------------------------------------------ */
/* Results                                                             */
/* ------------------------------------------------------------------ */

/* CSV: variable,banzhaf,shapley_num,shapley_den,shapley_float.
 * Exact integers/rationals; the float column is display-only. */
int facta_result_csv(const facta_result* res, char** out_text);

/* JSON mirror: metadata, tree statistics, timings, exact row values. */
int facta_result_json(const facta_result* res, char** out_text);

/* DOT digraph of the compiled tree; FACTA_ERR_INPUT when the result does
 * not carry a tree (attribution results do not; facta_compile ones do). */
int facta_result_dot(const facta_result* res, char** out_text);

void facta_result_free(facta_result* res);

/* Frees strings returned through out_text parameters. */
void facta_free_text(char* text);

/* ------------------------------------------------------------------ */
/* Instance generator                                                  */
/* ------------------------------------------------------------------ */

typedef struct facta_generate_params {
  int vars;            /* base variables, >= 1 */
  int clauses;         /* base clauses, >= 1 */
  int width;           /* base variables per clause, 1 <= width <= vars */
  int duplication;     /* symmetric copies per base variable, >= 1 */
  const char* monoid;  /* NULL/"" = boolean DNF; else sum|count|min|max */
  long long value_min; /* aggregate term value range; both 0 = default 1..9 */
  long long value_max;
  uint64_t seed;       /* same params + seed = byte-identical output */
} facta_generate_params;

/* Produces a lineage file as JSON text (free with facta_free_text). */
int facta_generate(const facta_generate_params* params, char** out_text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FACTA_H */
