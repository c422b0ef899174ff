#ifndef CDGL_H
#define CDGL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CdglFormat {
  CDGL_FORMAT_CANONICAL = 0,
  CDGL_FORMAT_TABLE = 1,
} CdglFormat;

typedef enum CdglStatus {
  CDGL_STATUS_OK = 0,
  // Bad input: parse or elaboration diagnostics, unknown names, degree errors.
  CDGL_STATUS_DIAGNOSTICS = 1,
  // `CDGL_RESOURCE_LIMIT` was exceeded.
  CDGL_STATUS_RESOURCE_LIMIT = 2,
  // The computation ran and the verdict is negative.
  CDGL_STATUS_FAIL = 3,
  CDGL_STATUS_NULL_POINTER = 4,
  CDGL_STATUS_INVALID_UTF8 = 5,
  // A mathematical precondition failed (not MC, not nilpotent, ...).
  CDGL_STATUS_MATH = 6,
  CDGL_STATUS_PANIC = 7,
} CdglStatus;

// A dgl presentation.
typedef struct CdglModel CdglModel;

// A task under construction.
typedef struct CdglTask CdglTask;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *cdgl_last_error(void);

// # Safety
// `s` must come from this library and not have been freed.
void cdgl_string_free(char *s);

// Built-in model by name (`L0`, `L1`, `S1`, `sphere`, `wedge`) and integer parameters.
//
// # Safety
// `name` is a C string, `params` points to `n_params` integers (or is null when
// `n_params` is 0), and `out` is writable.
enum CdglStatus cdgl_model_builtin(const char *name,
                                   const int64_t *params,
                                   size_t n_params,
                                   size_t cap,
                                   struct CdglModel **out);

// Model `name` of a model file, or a built-in reference when `source` is null.
// `cap` 0 keeps the truncations declared in the file.
//
// # Safety
// `source` is null or a C string, `name` is a C string, `out` is writable.
enum CdglStatus cdgl_model_parse(const char *source,
                                 const char *name,
                                 size_t cap,
                                 struct CdglModel **out);

// # Safety
// `m` is null or a live handle from this library.
void cdgl_model_free(struct CdglModel *m);

// # Safety
// `m` is a live handle.
size_t cdgl_model_generator_count(const struct CdglModel *m);

// # Safety
// `m` is a live handle.
size_t cdgl_model_cap(const struct CdglModel *m);

// Homology dimensions in degrees `lo..=hi`, written to `dims[0..=hi-lo]`.
//
// # Safety
// `m` is a live handle and `dims` has room for `hi - lo + 1` entries.
enum CdglStatus cdgl_homology_dims(const struct CdglModel *m, int64_t lo, int64_t hi, size_t *dims);

// `log(e^x e^y)` of two degree-0 bracket expressions.
//
// # Safety
// `m` is a live handle, `x` and `y` are C strings, `out` is writable.
enum CdglStatus cdgl_bch(const struct CdglModel *m, const char *x, const char *y, char **out);

// Gauge action `x𝒢a` on an MC element.
//
// # Safety
// `m` is a live handle, `x` and `a` are C strings, `out` is writable.
enum CdglStatus cdgl_gauge(const struct CdglModel *m, const char *x, const char *a, char **out);

// A task for a CLI command name such as `baut`; null if the name is unknown.
//
// # Safety
// `command` is a C string.
struct CdglTask *cdgl_task_new(const char *command);

// Sets a parameter by flag name (`model`, `range`, `truncate`, `gspec`, `expr`, `source`, ...).
//
// # Safety
// `t` is a live task, `key` and `value` are C strings.
enum CdglStatus cdgl_task_set(struct CdglTask *t, const char *key, const char *value);

// Runs the task and writes its report; the report is produced for every status but `NullPointer`.
//
// # Safety
// `t` is a live task and `report` is writable.
enum CdglStatus cdgl_task_run(const struct CdglTask *t, enum CdglFormat format, char **report);

// # Safety
// `t` is null or a live task.
void cdgl_task_free(struct CdglTask *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CDGL_H */
