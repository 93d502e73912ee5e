#ifndef FIL_H
#define FIL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FilStatus {
  FIL_STATUS_OK = 0,
  /**
   * The kernel rejected a derivation.
   */
  FIL_STATUS_REJECTED = 1,
  /**
   * The search finished its budget without a countermodel.
   */
  FIL_STATUS_NOT_FOUND = 2,
  FIL_STATUS_BUDGET_EXCEEDED = 3,
  FIL_STATUS_NULL_POINTER = 4,
  FIL_STATUS_INVALID_UTF8 = 5,
  FIL_STATUS_PARSE_ERROR = 6,
  FIL_STATUS_INVALID_ARGUMENT = 7,
  /**
   * A bug inside the library; the message says where.
   */
  FIL_STATUS_INTERNAL = 8,
} FilStatus;

typedef enum FilTarget {
  FIL_TARGET_W = 0,
  FIL_TARGET_M0 = 1,
  FIL_TARGET_R = 2,
  /**
   * Needs `n`.
   */
  FIL_TARGET_SLIM = 3,
  /**
   * Needs `n`; 0 gives R.
   */
  FIL_TARGET_BROAD = 4,
} FilTarget;

/**
 * A parsed derivation.
 */
typedef struct FilDerivation FilDerivation;

/**
 * A countermodel together with the world where the formula fails.
 */
typedef struct FilModel FilModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses derivation text into a new handle.
 */
enum FilStatus fil_derivation_parse(const char *text, struct FilDerivation **out);

/**
 * `FIL_STATUS_OK` if the kernel accepts every line, `FIL_STATUS_REJECTED`
 * otherwise, with the first error as the message.
 */
enum FilStatus fil_derivation_check(const struct FilDerivation *d);

/**
 * Number of lines; 0 for a null handle.
 */
size_t fil_derivation_line_count(const struct FilDerivation *d);

/**
 * The theorem of an accepted derivation, as `Γ |- C` text.
 */
enum FilStatus fil_derivation_theorem(const struct FilDerivation *d, char **out);

/**
 * The derivation in the text format.
 */
enum FilStatus fil_derivation_print(const struct FilDerivation *d, char **out);

/**
 * Erases all labels, giving a derivation in ILP mode.
 */
enum FilStatus fil_derivation_erase(const struct FilDerivation *d, struct FilDerivation **out);

/**
 * Releases a derivation handle. Null is ignored.
 */
void fil_derivation_free(struct FilDerivation *d);

/**
 * Synthesizes a checked derivation. `n` is used by the series targets only.
 */
enum FilStatus fil_prove(enum FilTarget target, size_t n, struct FilDerivation **out);

/**
 * Looks for the least model with at most `max_worlds` worlds falsifying a
 * label-free formula. `FIL_STATUS_OK` with a model, `FIL_STATUS_NOT_FOUND`
 * when the formula holds throughout the budget, `FIL_STATUS_BUDGET_EXCEEDED`
 * when the budget cannot be searched.
 */
enum FilStatus fil_search(const char *formula,
                          uint32_t max_worlds,
                          uint32_t max_letters,
                          struct FilModel **out);

/**
 * The world where the formula fails; 0 for a null handle.
 */
uint32_t fil_model_world(const struct FilModel *m);

/**
 * Number of worlds; 0 for a null handle.
 */
uint32_t fil_model_worlds(const struct FilModel *m);

/**
 * The model in the plain-text model format.
 */
enum FilStatus fil_model_print(const struct FilModel *m, char **out);

/**
 * Releases a model handle. Null is ignored.
 */
void fil_model_free(struct FilModel *m);

/**
 * Releases a string returned by this library. Null is ignored.
 */
void fil_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library from the same thread.
 */
const char *fil_last_error(void);

/**
 * Static name of a status, such as `"rejected"`.
 */
const char *fil_status_name(enum FilStatus status);

/**
 * Library version, static.
 */
const char *fil_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FIL_H */
