/* C interface to the platbook pipeline.
 *
 * Fallible calls return a status code; on failure the per-thread message
 * from pb_last_error_message() describes what went wrong. Strings returned
 * through out-parameters must be released with pb_string_free().
 */

#ifndef PLATBOOK_H
#define PLATBOOK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    PB_OK = 0,
    PB_ERR_NULL = 1,
    PB_ERR_UTF8 = 2,
    PB_ERR_PARSE = 3,
    PB_ERR_CERTIFICATE = 4,
    PB_ERR_TOPOLOGY = 5,
    PB_ERR_CAPACITY = 6
};

/* Opaque pipeline result handle. */
typedef struct pb_run pb_run;

/* Last error message for this thread; valid until the next failing call. */
const char *pb_last_error_message(void);

/* Runs the whole pipeline on a braid word (whitespace-separated signed
 * generator indices, plat closure taken). strands == 0 infers the count.
 * ambient may be NULL; otherwise it points to ambient_len framings, each
 * +1 or -1. On success writes a handle to out. */
int32_t pb_run_pipeline(const char *word,
                        size_t strands,
                        int32_t positive_monodromy,
                        const int64_t *ambient,
                        size_t ambient_len,
                        pb_run **out);

void pb_run_free(pb_run *run);

/* 1 if every certificate in the run passed, 0 otherwise (or on NULL). */
int32_t pb_run_all_pass(const pb_run *run);

/* Number of bindings of the resulting open book (0 on NULL). */
size_t pb_run_binding_count(const pb_run *run);

/* The open book in its text format. Free with pb_string_free. */
char *pb_run_render_book(const pb_run *run);

/* The certificate report text. Free with pb_string_free. */
char *pb_run_render_report(const pb_run *run);

void pb_string_free(char *s);

/* d3 = (c2 - 3 sigma - 2 chi)/4 + q as an exact fraction. */
int32_t pb_d3(int64_t sigma,
              int64_t chi,
              int64_t c_squared,
              int64_t plus_one_surgeries,
              int64_t *numer,
              int64_t *denom);

/* Expands p/q < 0: writes the entries (all <= -2) into entries and their
 * count into len. Fails with PB_ERR_CAPACITY if cap is too small. */
int32_t pb_negative_expansion(int64_t p,
                              int64_t q,
                              int64_t *entries,
                              size_t cap,
                              size_t *len);

/* Plans moves from (tb0, rot0) to (tb1, rot1); writes the plan text.
 * Free with pb_string_free. */
int32_t pb_realize_pair(int64_t tb0,
                        int64_t rot0,
                        int64_t tb1,
                        int64_t rot1,
                        char **plan);

#ifdef __cplusplus
}
#endif

#endif /* PLATBOOK_H */
