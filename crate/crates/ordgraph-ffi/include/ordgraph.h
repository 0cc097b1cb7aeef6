/* C ABI for the ordgraph toolkit.
 *
 * Maintained alongside crates/ordgraph-ffi/src/lib.rs; regenerate with
 * `cbindgen --config cbindgen.toml --crate ordgraph-ffi --output
 * include/ordgraph.h` where cbindgen is available.
 *
 * Strings are UTF-8 and NUL-terminated in both directions. Results are
 * written into caller buffers and truncated (still NUL-terminated) when
 * the buffer is too small, which the status reports. After any non-Ok
 * status, og_last_error() describes what happened for this thread.
 */

#ifndef ORDGRAPH_H
#define ORDGRAPH_H

#include <stdint.h>
#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum OgStatus {
  OG_STATUS_OK = 0,
  OG_STATUS_INVALID_ARGUMENT = 1,
  OG_STATUS_PARSE_ERROR = 2,
  OG_STATUS_VALIDATION_ERROR = 3,
  /* The requested check ran and found a violation or witness. */
  OG_STATUS_CHECK_FAILED = 4,
  OG_STATUS_BUFFER_TOO_SMALL = 5,
} OgStatus;

/* Opaque handle to a validated presentation. */
typedef struct OgPresentation OgPresentation;

/* Copy the last error message for this thread; returns its full length. */
size_t og_last_error(char *buf, size_t cap);

/* Copy the library version string; returns its full length. */
size_t og_version(char *buf, size_t cap);

/* Parse and validate a presentation document. On success *out owns the
 * handle; release it with og_presentation_free. */
OgStatus og_presentation_load(const char *json, OgPresentation **out);

/* Release a presentation handle. Null is a no-op. */
void og_presentation_free(OgPresentation *p);

/* Ordinal arithmetic on expressions. op is one of "add", "mul", "sub",
 * "cmp"; the canonical result (or "less"/"equal"/"greater") is written to
 * buf. */
OgStatus og_ordinal_eval(const char *op, const char *a, const char *b,
                         char *buf, size_t cap);

/* Path operations. op is one of "normalize", "compose", "head", "tail",
 * "divides"; a is a path literal, b the second literal or ordinal position
 * (ignored for "normalize", may be null there). */
OgStatus og_path_eval(const OgPresentation *p, const char *op, const char *a,
                      const char *b, char *buf, size_t cap);

/* Condition (C). OG_STATUS_OK means the condition holds;
 * OG_STATUS_CHECK_FAILED means a witness was found and written as
 * "level <k> atom <a> word <w>". */
OgStatus og_check_condition_c(const OgPresentation *p, char *buf, size_t cap);

/* Bounded condition (S) search. OG_STATUS_OK writes "verified_up_to(n)";
 * OG_STATUS_CHECK_FAILED writes the violating level/component/n triple. */
OgStatus og_check_condition_s(const OgPresentation *p, int max_n, char *buf,
                              size_t cap);

/* Enumerate boundary star paths from a vertex, newline-joined. */
OgStatus og_boundary(const OgPresentation *p, const char *vertex, int prefix,
                     int cycle, char *buf, size_t cap);

/* Cancellativity and shift value at a level. OG_STATUS_OK sets *value;
 * OG_STATUS_CHECK_FAILED means non-cancellative, with the witness
 * written. */
OgStatus og_shift(const OgPresentation *p, const char *star, int level,
                  int64_t *value, char *buf, size_t cap);

/* Verify the Cuntz-Krieger relations of a representation document.
 * OG_STATUS_OK means every relation instance holds exactly;
 * OG_STATUS_CHECK_FAILED writes the newline-joined failure list. */
OgStatus og_rep_verify(const OgPresentation *p, const char *rep_json,
                       char *buf, size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* ORDGRAPH_H */
