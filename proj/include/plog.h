/* plog.h -- C interface to the plog library.
 *
 * Opaque handles plus integer status codes. All returned strings are
 * heap-allocated by the library and must be released with plog_string_free().
 * On any failure the thread-local message from plog_last_error() describes
 * what went wrong. Handles are not thread-safe; use one per thread.
 */
#ifndef PLOG_H
#define PLOG_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32
#define PLOG_API __declspec(dllexport)
#else
#define PLOG_API __attribute__((visibility("default")))
#endif

typedef enum plog_status {
  PLOG_OK = 0,
  PLOG_ERR_SYNTAX = 1,      /* malformed program, literal, formula or JSON */
  PLOG_ERR_SORT = 2,        /* undeclared names, ill-sorted terms, bad declarations */
  PLOG_ERR_RANGE = 3,       /* probability outside [0,1] */
  PLOG_ERR_INCONSISTENT = 4,/* no possible worlds */
  PLOG_ERR_UNDEFINED = 5,   /* no world with nonzero unnormalized measure */
  PLOG_ERR_CONDITION = 6,   /* unique-selection / unique-assignment / range conditions */
  PLOG_ERR_BUDGET = 7,      /* grounding or search cap exceeded */
  PLOG_ERR_INVALID = 8,     /* null arguments and similar misuse */
  PLOG_ERR_INTERNAL = 9
} plog_status_t;

typedef struct plog_program plog_program_t;

PLOG_API const char* plog_version(void);

/* Thread-local message for the most recent failing call. */
PLOG_API const char* plog_last_error(void);

PLOG_API void plog_string_free(char* s);

/* --- programs ------------------------------------------------------------ */

PLOG_API plog_status_t plog_program_parse(const char* text, plog_program_t** out);
PLOG_API plog_status_t plog_program_parse_file(const char* path, plog_program_t** out);
PLOG_API void plog_program_free(plog_program_t* p);

/* Parse further statements in the program's declaration context and merge
 * them (updates by program union). */
PLOG_API plog_status_t plog_program_add_statements(plog_program_t* p, const char* text);
/* obs(literal): literal syntax as in rule bodies, e.g. "roll(d1)=4", "~found(p1,1)". */
PLOG_API plog_status_t plog_program_observe(plog_program_t* p, const char* literal);
/* do(atom): e.g. "death", "drug=false", "look(1)=p1". */
PLOG_API plog_status_t plog_program_do(plog_program_t* p, const char* atom);

/* Cap on the number of ground statements (default 1000000). */
PLOG_API plog_status_t plog_program_set_ground_cap(plog_program_t* p, uint64_t cap);

/* Canonical text of the program, one statement per line. */
PLOG_API plog_status_t plog_program_print(plog_program_t* p, char** out);

/* --- queries --------------------------------------------------------------- */

/* Probability of a formula ("prize=3", "roll(d1)=6 & even(d2)", "a | not b")
 * as an exact rational: numerator and denominator as decimal strings. */
PLOG_API plog_status_t plog_query_prob(plog_program_t* p, const char* formula, char** num,
                                       char** den);

/* World table as JSON: worlds with their literals, unnormalized and
 * normalized measures as "num/den" strings. */
PLOG_API plog_status_t plog_worlds_json(plog_program_t* p, char** out);

/* Coherency analysis as JSON: leveling witness, causal-order and unitary
 * verdicts, the overall verdict, and optionally the tableau. */
PLOG_API plog_status_t plog_check_json(plog_program_t* p, int with_tableau, char** out);

/* Ground translation to Answer Set Prolog, one rule per line. */
PLOG_API plog_status_t plog_ground_dump(plog_program_t* p, char** out);

/* --- Bayesian networks ------------------------------------------------------ */

/* JSON network in, program text out. */
PLOG_API plog_status_t plog_bn_to_program(const char* net_json, char** out);

/* Checks that the truncated-product interventional probabilities equal the
 * probabilities of the do-extended program. interventions_json: an array of
 * objects mapping variable to value, e.g. [{"arsenic":"true"},{}]; null means
 * every intervention. Returns a JSON report. */
PLOG_API plog_status_t plog_bn_check(const char* net_json, const char* interventions_json,
                                     char** out);

#ifdef __cplusplus
}
#endif

#endif /* PLOG_H */
