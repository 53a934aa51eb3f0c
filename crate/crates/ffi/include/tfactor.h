#ifndef TFACTOR_H
#define TFACTOR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TfStatus {
  TF_STATUS_OK = 0,
  TF_STATUS_NULL_POINTER = 1,
  TF_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON or unsupported format version.
  TF_STATUS_PARSE = 3,
  // Well-formed input that breaks a structural law.
  TF_STATUS_VALIDATION = 4,
  TF_STATUS_NOT_FOUND = 5,
  // Objects over different categories, or a buffer of the wrong length.
  TF_STATUS_MISMATCH = 6,
  TF_STATUS_CONFIG = 7,
  TF_STATUS_PANIC = 8,
} TfStatus;

// A chain map between bounded complexes.
typedef struct TfChainMap TfChainMap;

// A bounded complex.
typedef struct TfComplex TfComplex;

// A parsed document: category plus named reps, complexes and maps.
typedef struct TfDocument TfDocument;

// The six normality conditions for one object.
typedef struct TfNormality {
  bool k_in_torsion;
  bool q_in_torsion_free;
  bool normal;
  bool q_is_reflection;
  bool k_is_coreflection;
  bool fiber_sequence;
} TfNormality;

// Boundedness window `[a, b)` and stage count of a Postnikov tower.
// `has_window` is false for quasi-isomorphisms, whose tower is empty.
typedef struct TfTowerShape {
  bool has_window;
  int32_t a;
  int32_t b;
  size_t stages;
} TfTowerShape;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *tf_last_error(void);

// Library version as a static string.
const char *tf_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void tf_string_free(char *s);

// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum TfStatus tf_document_parse(const char *json, struct TfDocument **out);

// # Safety
// `doc` must be null or a live handle from [`tf_document_parse`].
void tf_document_free(struct TfDocument *doc);

// Canonical JSON for `doc`; free with [`tf_string_free`].
//
// # Safety
// `doc` must be a live handle; `out` must be writable.
enum TfStatus tf_document_to_json(const struct TfDocument *doc, char **out);

// # Safety
// `doc` must be a live handle; `out` must be writable.
enum TfStatus tf_document_prime(const struct TfDocument *doc, uint32_t *out);

// Copies the named complex into a new handle.
//
// # Safety
// `doc` must be a live handle, `name` NUL-terminated, `out` writable.
enum TfStatus tf_document_complex(const struct TfDocument *doc,
                                  const char *name,
                                  struct TfComplex **out);

// Copies the named map into a new handle.
//
// # Safety
// `doc` must be a live handle, `name` NUL-terminated, `out` writable.
enum TfStatus tf_document_map(const struct TfDocument *doc,
                              const char *name,
                              struct TfChainMap **out);

// # Safety
// `x` must be null or a live complex handle.
void tf_complex_free(struct TfComplex *x);

// # Safety
// `f` must be null or a live map handle.
void tf_chain_map_free(struct TfChainMap *f);

// Number of quiver vertices, the length expected by
// [`tf_complex_homology_dims`].
//
// # Safety
// `x` must be a live handle; `out` must be writable.
enum TfStatus tf_complex_vertex_count(const struct TfComplex *x, size_t *out);

// Dimension vector of `H_n`, one entry per vertex. `len` must equal the
// vertex count.
//
// # Safety
// `x` must be a live handle; `out` must point to `len` writable entries.
enum TfStatus tf_complex_homology_dims(const struct TfComplex *x,
                                       int32_t n,
                                       size_t *out,
                                       size_t len);

// Whether `H_k(x) = 0` for all `k ≥ n`.
//
// # Safety
// `x` must be a live handle; `out` must be writable.
enum TfStatus tf_complex_in_aisle(const struct TfComplex *x, int32_t n, bool *out);

// Whether `H_k(x) = 0` for all `k < n`.
//
// # Safety
// `x` must be a live handle; `out` must be writable.
enum TfStatus tf_complex_in_coaisle(const struct TfComplex *x, int32_t n, bool *out);

// # Safety
// `x` must be a live handle; `out` must be writable.
enum TfStatus tf_normality(const struct TfComplex *x, int32_t n, struct TfNormality *out);

// Copies the source complex of `f` into a new handle.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum TfStatus tf_chain_map_source(const struct TfChainMap *f, struct TfComplex **out);

// Copies the target complex of `f` into a new handle.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum TfStatus tf_chain_map_target(const struct TfChainMap *f, struct TfComplex **out);

// # Safety
// `f` must be a live handle; `out` must be writable.
enum TfStatus tf_chain_map_is_quasi_iso(const struct TfChainMap *f, bool *out);

// Membership in the left class `E` for the t-structure at `n`.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum TfStatus tf_chain_map_in_e(const struct TfChainMap *f, int32_t n, bool *out);

// Membership in the right class `M` for the t-structure at `n`.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum TfStatus tf_chain_map_in_m(const struct TfChainMap *f, int32_t n, bool *out);

// Composite `g∘f`.
//
// # Safety
// `g` and `f` must be live handles; `out` must be writable.
enum TfStatus tf_chain_map_compose(const struct TfChainMap *g,
                                   const struct TfChainMap *f,
                                   struct TfChainMap **out);

// # Safety
// `f` and `g` must be live handles; `out` must be writable.
enum TfStatus tf_chain_map_equal(const struct TfChainMap *f, const struct TfChainMap *g, bool *out);

// Factors `f = m∘e` with `e ∈ E` and `m ∈ M` for the t-structure at `n`.
//
// # Safety
// `f` must be a live handle; `e_out` and `m_out` must be writable.
enum TfStatus tf_factor(const struct TfChainMap *f,
                        int32_t n,
                        struct TfChainMap **e_out,
                        struct TfChainMap **m_out);

// # Safety
// `f` must be a live handle; `out` must be writable.
enum TfStatus tf_postnikov_shape(const struct TfChainMap *f, struct TfTowerShape *out);

// Runs the property suite on a JSON configuration (an empty string means
// defaults) and writes the JSON report to `report_out`, to be freed with
// [`tf_string_free`]. Failing properties are not an error; read `passed`.
//
// # Safety
// `config` must be NUL-terminated; the out-pointers must be writable.
enum TfStatus tf_run_suite(const char *config, char **report_out, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TFACTOR_H */
