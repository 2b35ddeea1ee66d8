/*
 * sigtime - temporal analysis of component-based real-time software.
 *
 * Computes signal properties (data age, synchronicity, sampling rate,
 * band limit, aliasing) from event traces, transforms signal-level
 * requirements into timing constraints on causal chains, and verifies
 * traces against both forms.
 *
 * All handles are opaque; every function returns SIGTIME_OK or an error
 * code, with a detail message available from sigtime_last_error(). All
 * documents are JSON text; durations and timestamps are integer
 * nanoseconds.
 */

#ifndef SIGTIME_H
#define SIGTIME_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Error codes. */
#define SIGTIME_OK 0
#define SIGTIME_E_PARSE 1      /* malformed document */
#define SIGTIME_E_VALIDATION 2 /* invariant violation */
#define SIGTIME_E_REFERENCE 3  /* dangling component/port/path reference */
#define SIGTIME_E_DATA 4       /* missing measurement or declaration */
#define SIGTIME_E_ARGUMENT 5   /* bad argument (null handle, bad kind, ...) */
#define SIGTIME_E_INTERNAL 6

/* Outcome of a check run (sigtime_result_outcome on a check result). */
#define SIGTIME_CHECK_PASS 0
#define SIGTIME_CHECK_FAIL 1
#define SIGTIME_CHECK_INCONCLUSIVE 2

typedef struct sigtime_model sigtime_model;
typedef struct sigtime_trace sigtime_trace;
typedef struct sigtime_requirements sigtime_requirements;
typedef struct sigtime_result sigtime_result;

/* Library version, "major.minor.patch". */
const char* sigtime_version(void);

/* Message for the most recent failure on this thread. Valid until the
 * next sigtime call on the same thread. */
const char* sigtime_last_error(void);

/* ---- documents ----------------------------------------------------- */

/* Parses a model document. On success *out owns the model; release with
 * sigtime_model_free. */
int sigtime_model_parse(const char* json_text, sigtime_model** out);
void sigtime_model_free(sigtime_model* model);

/* Validates every model invariant. *out carries a diagnostics document;
 * outcome is 0 when the model is clean, 1 otherwise. */
int sigtime_model_validate(const sigtime_model* model, sigtime_result** out);

int sigtime_trace_parse(const char* json_text, sigtime_trace** out);
void sigtime_trace_free(sigtime_trace* trace);
int sigtime_trace_validate(const sigtime_trace* trace, sigtime_result** out);

int sigtime_requirements_parse(const char* json_text, sigtime_requirements** out);
void sigtime_requirements_free(sigtime_requirements* requirements);

/* ---- analyses ------------------------------------------------------ */

/* Measures latency, tag distance, data age and logical sampling rate of
 * the subject interface, plus synchronicity against a second interface
 * when pair_component is non-NULL. epsilon_ns widens the equal-tag
 * pairing rule. */
int sigtime_measure(const sigtime_model* model, const sigtime_trace* trace,
                    const char* subject_component, int subject_port,
                    const char* pair_component, int pair_port, int64_t epsilon_ns,
                    sigtime_result** out);

/* Transforms every requirement into timing constraints. Outcome is 0
 * when no error diagnostics were produced, 1 otherwise. */
int sigtime_transform(const sigtime_model* model,
                      const sigtime_requirements* requirements, sigtime_result** out);

/* Checks the trace against every requirement directly and against the
 * transformed constraints; reports verdicts plus per-requirement
 * agreement. Outcome is SIGTIME_CHECK_*. */
int sigtime_check(const sigtime_model* model, const sigtime_trace* trace,
                  const sigtime_requirements* requirements, int64_t epsilon_ns,
                  sigtime_result** out);

/* Generates a trace from a generation-spec document. When seed_override
 * is non-NULL it replaces the spec's seed. The result's main document is
 * the trace, the auxiliary document the ground-truth sidecar. */
int sigtime_generate(const sigtime_model* model, const char* genspec_json,
                     const uint64_t* seed_override, sigtime_result** out);

/* ---- results ------------------------------------------------------- */

/* Main JSON document of a result. Owned by the result. */
const char* sigtime_result_json(const sigtime_result* result);

/* Auxiliary document (generate: the sidecar), NULL when absent. */
const char* sigtime_result_aux_json(const sigtime_result* result);

/* Human-readable rendering of the result. */
const char* sigtime_result_text(const sigtime_result* result);

/* Check outcome / diagnostic summary, see the constants above. */
int sigtime_result_outcome(const sigtime_result* result);

void sigtime_result_free(sigtime_result* result);

#ifdef __cplusplus
}
#endif

#endif /* SIGTIME_H */
