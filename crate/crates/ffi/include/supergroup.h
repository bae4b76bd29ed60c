#ifndef SUPERGROUP_H
#define SUPERGROUP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every entry point.
typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_ARGUMENT = 1,
  SG_STATUS_INVALID_UTF8 = 2,
  SG_STATUS_PARSE = 3,
  SG_STATUS_PRECONDITION = 4,
  SG_STATUS_MISMATCH = 5,
  SG_STATUS_ARITHMETIC = 6,
  // A check ran to completion and found failures.
  SG_STATUS_CHECK_FAILED = 7,
  SG_STATUS_INTERNAL = 8,
} SgStatus;

// A point of the supergroup with values in the fixture's Grassmann algebra.
typedef struct SgElement SgElement;

// A loaded fixture together with its supergroup and working Grassmann algebra.
typedef struct SgFixture SgFixture;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the next call.
const char *sg_last_error(void);

// Loads a fixture from a file path or a bundled name. `grassmann_n` of 0 keeps the fixture's
// own generator count.
//
// # Safety
// `source` must be a NUL-terminated string and `out` a writable pointer.
enum SgStatus sg_fixture_load(const char *source, uint32_t grassmann_n, struct SgFixture **out);

// # Safety
// `fx` must be null or a handle from [`sg_fixture_load`] not yet freed.
void sg_fixture_free(struct SgFixture *fx);

// Writes the even dimension, odd dimension and matrix size of the fixture.
//
// # Safety
// `fx` must be a live handle; each out-pointer may be null to skip it.
enum SgStatus sg_fixture_dims(const struct SgFixture *fx,
                              uintptr_t *even_dim,
                              uintptr_t *odd_dim,
                              uintptr_t *matrix_size);

// Runs the structural condition suites and a seeded group-law sample. Returns
// [`SgStatus::CheckFailed`] when any condition fails; the count goes to `failures`.
//
// # Safety
// `fx` must be a live handle; `failures` may be null.
enum SgStatus sg_fixture_check(const struct SgFixture *fx,
                               uint64_t seed,
                               uintptr_t triples,
                               uintptr_t *failures);

// The identity element.
//
// # Safety
// `fx` must be a live handle and `out` writable.
enum SgStatus sg_element_identity(const struct SgFixture *fx, struct SgElement **out);

// Parses an element from `{"g": [[..]], "a": [..]}` with Grassmann entries such as `"t1*t2"`.
//
// # Safety
// `fx` must be a live handle, `json` NUL-terminated, `out` writable.
enum SgStatus sg_element_from_json(const struct SgFixture *fx,
                                   const char *json,
                                   struct SgElement **out);

// Serializes an element to a newly allocated JSON string; release it with [`sg_string_free`].
//
// # Safety
// `el` must be a live handle; `out` writable.
enum SgStatus sg_element_to_json(const struct SgElement *el, char **out);

// # Safety
// `fx`, `left` and `right` must be live handles; `out` writable.
enum SgStatus sg_element_mul(const struct SgFixture *fx,
                             const struct SgElement *left,
                             const struct SgElement *right,
                             struct SgElement **out);

// # Safety
// `fx` and `el` must be live handles; `out` writable.
enum SgStatus sg_element_inv(const struct SgFixture *fx,
                             const struct SgElement *el,
                             struct SgElement **out);

// Writes 1 to `result` when the two elements are equal, 0 otherwise.
//
// # Safety
// Both handles must be live; `result` writable.
enum SgStatus sg_element_equal(const struct SgElement *a,
                               const struct SgElement *b,
                               int32_t *result);

// # Safety
// `el` must be null or a handle not yet freed.
void sg_element_free(struct SgElement *el);

// # Safety
// `s` must be null or a string returned by this library.
void sg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERGROUP_H */
