#ifndef PRELAB_H
#define PRELAB_H

/* Generated by cbindgen from the prelab-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum PrelabStatus {
  /**
   * The call succeeded.
   */
  PRELAB_STATUS_OK = 0,
  /**
   * The input could not be parsed or has the wrong shape.
   */
  PRELAB_STATUS_FORMAT_ERROR = 1,
  /**
   * The input parsed but an axiom or replay check failed.
   */
  PRELAB_STATUS_AXIOM_ERROR = 2,
  /**
   * A required pointer argument was null.
   */
  PRELAB_STATUS_NULL_POINTER = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  PRELAB_STATUS_INVALID_UTF8 = 4,
  /**
   * The requested operation is not defined for this structure kind.
   */
  PRELAB_STATUS_UNSUPPORTED = 5,
} PrelabStatus;

/**
 * Opaque handle to a decoded structure document.
 */
typedef struct PrelabStructure PrelabStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the interchange format this library reads and writes.
 */
uint32_t prelab_format_version(void);

/**
 * The most recent error message on this thread, or null if the last call
 * succeeded. The caller owns the returned string.
 */
char *prelab_last_error(void);

/**
 * Releases a string returned by this library. Null is accepted.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library and not yet
 * freed.
 */
void prelab_string_free(char *s);

/**
 * Decodes an interchange document into a structure handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum PrelabStatus prelab_load(const char *json, struct PrelabStructure **out);

/**
 * Releases a structure handle. Null is accepted.
 *
 * # Safety
 * `handle` must come from this library and not be freed twice.
 */
void prelab_structure_free(struct PrelabStructure *handle);

/**
 * The document kind of a handle ("pretopology", "preuniformity-basis",
 * "pseudometric", "entourage-chain", "preproximity", or "pretopgroup").
 * Returns null on a null handle.
 *
 * # Safety
 * `handle` must be a live handle from this library or null.
 */
char *prelab_kind(const struct PrelabStructure *handle);

/**
 * Number of carrier points. Returns 0 on a null handle.
 *
 * # Safety
 * `handle` must be a live handle from this library or null.
 */
size_t prelab_carrier_size(const struct PrelabStructure *handle);

/**
 * Serializes a handle back to its canonical interchange document.
 * Returns null on a null handle.
 *
 * # Safety
 * `handle` must be a live handle from this library or null.
 */
char *prelab_save(const struct PrelabStructure *handle);

/**
 * Checks every axiom of the structure. Returns `Ok` when all pass and
 * `AxiomError` when some fail; either way `report_out` (if non-null)
 * receives a JSON report naming the failed axioms.
 *
 * # Safety
 * `handle` must be a live handle; `report_out` may be null.
 */
enum PrelabStatus prelab_verify(const struct PrelabStructure *handle, char **report_out);

/**
 * Applies a unary construction (tau, delta, mu_delta, coreflection,
 * chain-pseudometric) and returns a new handle carrying the same labels.
 *
 * # Safety
 * `handle` must be a live handle; `construction` a NUL-terminated string;
 * `out` a valid pointer.
 */
enum PrelabStatus prelab_derive(const struct PrelabStructure *handle,
                                const char *construction,
                                struct PrelabStructure **out);

/**
 * Writes the separation profile of the structure's (induced)
 * pre-topology as a JSON object.
 *
 * # Safety
 * `handle` must be a live handle; `out` a valid pointer.
 */
enum PrelabStatus prelab_separation_profile(const struct PrelabStructure *handle, char **out);

/**
 * Runs a hunt from a JSON spec `{"kind", "carrier_bound", "size_bound",
 * "target"}` and writes the canonical certificate or exhaustion record.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string; `outcome_out` a valid
 * pointer.
 */
enum PrelabStatus prelab_search(const char *spec_json, char **outcome_out);

/**
 * Replays a certificate document from its bytes alone. On success writes
 * 1 to `ok_out` when the replay matches and 0 when it does not (the call
 * itself returns `Ok` in both cases).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `ok_out` a valid pointer.
 */
enum PrelabStatus prelab_verify_certificate(const char *json, uint8_t *ok_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRELAB_H */
