#ifndef SPLITSYNC_H
#define SPLITSYNC_H

/* This file is generated by cbindgen from splitsync-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum SxStatus {
  // Success.
  SX_STATUS_OK = 0,
  // The automaton admits no directing word (not an error).
  SX_STATUS_NOT_DIRECTING = 1,
  // Malformed input text; see the line/column out-parameters of
  // `sx_automaton_parse`.
  SX_STATUS_PARSE_ERROR = 2,
  // A configured resource budget was exceeded.
  SX_STATUS_BUDGET_EXCEEDED = 3,
  // A catalog data file is missing or failed verification.
  SX_STATUS_MISSING_DATA = 4,
  // A null pointer or otherwise invalid argument was passed.
  SX_STATUS_INVALID_ARGUMENT = 5,
  // The operation is defined but not supported for this input size.
  SX_STATUS_UNSUPPORTED = 6,
  // Internal error (a bug in the library).
  SX_STATUS_INTERNAL_ERROR = 7,
} SxStatus;

// Directing-word engines.
typedef enum SxEngine {
  // Subset walk with on-the-fly choice expansion (the default).
  SX_ENGINE_IMPLICIT = 0,
  // Materialize the split DFA first.
  SX_ENGINE_SPLIT = 1,
  // Definition-level check, at most 4 states.
  SX_ENGINE_ORACLE = 2,
} SxEngine;

// Opaque automaton handle.
typedef struct SxAutomaton SxAutomaton;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parse an automaton from the text format.
//
// On success `*out` receives a new handle that must be freed with
// [`sx_automaton_free`]. On a parse error, `*error_line` and `*error_col`
// (when non-null) receive the 1-based position of the diagnostic.
//
// # Safety
// `text` must be a valid NUL-terminated string; `out`, `error_line` and
// `error_col` must each be null or valid for writes.
enum SxStatus sx_automaton_parse(const char *text,
                                 struct SxAutomaton **out,
                                 size_t *error_line,
                                 size_t *error_col);

// Release a handle returned by this library. Null is a no-op.
//
// # Safety
// `a` must be null or a pointer previously returned by this library that
// has not been freed yet.
void sx_automaton_free(struct SxAutomaton *a);

// Serialize an automaton to the text format. Returns a newly allocated
// string (free with [`sx_string_free`]), or null on invalid input.
//
// # Safety
// `a` must be a valid handle.
char *sx_automaton_serialize(const struct SxAutomaton *a);

// Release a string returned by this library. Null is a no-op.
//
// # Safety
// `s` must be null or a string previously returned by this library that
// has not been freed yet.
void sx_string_free(char *s);

// Number of states.
//
// # Safety
// `a` must be a valid handle.
size_t sx_automaton_states(const struct SxAutomaton *a);

// Number of symbols.
//
// # Safety
// `a` must be a valid handle.
size_t sx_automaton_symbols(const struct SxAutomaton *a);

// True iff every symbol is deterministic.
//
// # Safety
// `a` must be a valid handle.
bool sx_automaton_is_deterministic(const struct SxAutomaton *a);

// Shortest directing word length. On success `*out_length` receives the
// length and `*out_sync_state` a synchronizing state (1-based). Returns
// `SX_STATUS_NOT_DIRECTING` when no directing word exists.
//
// # Safety
// `a` must be a valid handle; out-pointers must be null or valid writes.
enum SxStatus sx_shortest_directing(const struct SxAutomaton *a,
                                    enum SxEngine engine,
                                    size_t *out_length,
                                    size_t *out_sync_state);

// Verify a candidate directing word given as 0-based symbol indices.
// `SX_STATUS_OK` means the word directs the automaton and
// `*out_sync_state` receives a synchronizing state;
// `SX_STATUS_NOT_DIRECTING` means it does not.
//
// # Safety
// `a` must be a valid handle; `letters` must point to `length` readable
// values (may be null when `length` is 0); `out_sync_state` null or valid.
enum SxStatus sx_verify_word(const struct SxAutomaton *a,
                             const size_t *letters,
                             size_t length,
                             size_t *out_sync_state);

// Fully split the automaton into the equivalent DFA. On success `*out`
// receives a new handle.
//
// # Safety
// `a` must be a valid handle; `out` must be valid for writes.
enum SxStatus sx_split(const struct SxAutomaton *a, struct SxAutomaton **out);

// Tightest known directing-length bound across all detected classes.
//
// # Safety
// `a` must be a valid handle; `out_bound` must be null or valid for writes.
enum SxStatus sx_best_bound(const struct SxAutomaton *a, uint64_t *out_bound);

// Look up a catalog automaton by name (`cerny`, `cerny-cnfa`, `a3`, `a4`,
// `c4`, `t42`, `roman`, `kari`). `n` selects the size for the parametric
// families and must be 0 for the fixed ones.
//
// # Safety
// `name` must be a valid NUL-terminated string; `out` valid for writes.
enum SxStatus sx_catalog(const char *name, size_t n, struct SxAutomaton **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPLITSYNC_H */
