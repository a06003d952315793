#ifndef CUBAL_H
#define CUBAL_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>

/**
 * Result codes. Zero is success.
 */
typedef enum CubalStatus {
  CUBAL_STATUS_OK = 0,
  CUBAL_STATUS_NULL_ARGUMENT = 1,
  CUBAL_STATUS_INVALID_UTF8 = 2,
  CUBAL_STATUS_PARSE_ERROR = 3,
  /**
   * The model or morphism was read but fails at least one axiom.
   */
  CUBAL_STATUS_AXIOM_VIOLATION = 4,
  CUBAL_STATUS_BUDGET_EXCEEDED = 5,
  CUBAL_STATUS_INPUT_MISMATCH = 6,
  CUBAL_STATUS_PANIC = 7,
} CubalStatus;

/**
 * A finite double groupoid with connections.
 */
typedef struct CubalModel CubalModel;

/**
 * A morphism between two models.
 */
typedef struct CubalMorphism CubalMorphism;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library from the same thread.
 */
const char *cubal_last_error(void);

/**
 * Parses a model document into `*out`.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CubalStatus cubal_model_parse(const char *src, struct CubalModel **out);

/**
 * Builds a model from a generator spec such as `square:Z2` or `sphere:3`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CubalStatus cubal_model_generate(const char *spec, struct CubalModel **out);

/**
 * # Safety
 * `m` must be null or a handle from this library that has not been freed.
 */
void cubal_model_free(struct CubalModel *m);

/**
 * Writes the numbers of objects, edges and squares.
 *
 * # Safety
 * `m` must be a live handle; the output pointers must be writable.
 */
enum CubalStatus cubal_model_counts(const struct CubalModel *m,
                                    size_t *objects,
                                    size_t *edges,
                                    size_t *squares);

/**
 * Renders the model in the text format. Free the result with
 * [`cubal_string_free`].
 *
 * # Safety
 * `m` must be a live handle.
 */
char *cubal_model_write(const struct CubalModel *m);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void cubal_string_free(char *s);

/**
 * Checks every axiom. Writes the number of violations to `violations` and
 * returns `AxiomViolation` when it is nonzero.
 *
 * # Safety
 * `m` must be a live handle; `violations` must be writable.
 */
enum CubalStatus cubal_validate(const struct CubalModel *m, size_t *violations);

/**
 * Checks the thin-structure axioms; `failures` receives the failure count.
 *
 * # Safety
 * `m` must be a live handle; `failures` must be writable.
 */
enum CubalStatus cubal_check_thin(const struct CubalModel *m, size_t *failures);

/**
 * Writes whether the two models are isomorphic.
 *
 * # Safety
 * Both handles must be live; `iso` must be writable.
 */
enum CubalStatus cubal_isomorphic(const struct CubalModel *a,
                                  const struct CubalModel *b,
                                  bool *iso);

/**
 * Parses a morphism document between two models.
 *
 * # Safety
 * `src` and `tgt` must be live handles, `doc` a NUL-terminated string and
 * `out` writable.
 */
enum CubalStatus cubal_morphism_parse(const char *doc,
                                      const struct CubalModel *src,
                                      const struct CubalModel *tgt,
                                      struct CubalMorphism **out);

/**
 * # Safety
 * `f` must be null or a live morphism handle.
 */
void cubal_morphism_free(struct CubalMorphism *f);

/**
 * Coequaliser of two parallel morphisms. On success `*out` receives the
 * quotient; `BudgetExceeded` leaves it untouched.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
enum CubalStatus cubal_coequalise(const struct CubalMorphism *a,
                                  const struct CubalMorphism *b,
                                  size_t budget,
                                  struct CubalModel **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUBAL_H */
