/* C interface to etatheta. Link with -letatheta_ffi -lmpfr -lgmp. */

#ifndef ETATHETA_H
#define ETATHETA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. Zero is success.
typedef enum EtStatus {
  ET_STATUS_OK = 0,
  ET_STATUS_NULL_POINTER = 1,
  ET_STATUS_INVALID_ARGUMENT = 2,
  ET_STATUS_NOT_UPPER_HALF_PLANE = 3,
  ET_STATUS_Q_TOO_LARGE = 4,
  ET_STATUS_PRECISION_UNDERFLOW = 5,
  ET_STATUS_NOT_A_MEMBER = 6,
  ET_STATUS_UNSUPPORTED_KIND = 7,
  ET_STATUS_EMPTY_TABLE = 8,
  ET_STATUS_PARSE = 9,
  // An arithmetic statement failed, e.g. a sequence did not validate.
  ET_STATUS_FAILED = 10,
  // A bug in the library; the message carries the panic payload.
  ET_STATUS_INTERNAL = 99,
} EtStatus;

typedef enum EtFunction {
  ET_FUNCTION_ETA = 0,
  ET_FUNCTION_THETA0 = 1,
  ET_FUNCTION_THETA1 = 2,
  ET_FUNCTION_THETA2 = 3,
  // theta0, theta1 and theta2 together.
  ET_FUNCTION_THETA_ALL = 4,
} EtFunction;

typedef enum EtMethod {
  ET_METHOD_CLASSICAL = 0,
  ET_METHOD_OPTIMIZED = 1,
  ET_METHOD_BSGS = 2,
  ET_METHOD_AUTO = 3,
} EtMethod;

typedef enum EtKind {
  ET_KIND_PENTAGONAL = 0,
  ET_KIND_TRIGONAL = 1,
  ET_KIND_SQUARE = 2,
  ET_KIND_ALMOST_SQUARE = 3,
  ET_KIND_QUARTER_SQUARE = 4,
  ET_KIND_A182568 = 5,
} EtKind;

typedef enum EtAlgorithm {
  ET_ALGORITHM_CLASSICAL = 0,
  ET_ALGORITHM_GENERIC = 1,
  ET_ALGORITHM_OPTIMIZED = 2,
} EtAlgorithm;

typedef enum EtCostModel {
  ET_COST_MODEL_FFT = 0,
  ET_COST_MODEL_SCHOOLBOOK = 1,
} EtCostModel;

// An addition sequence.
typedef struct EtAddSeq EtAddSeq;

// Result of an evaluation: one or three named complex values plus the
// truncation and operation counts.
typedef struct EtEvalResult EtEvalResult;

// Multiplication counts of one evaluation.
typedef struct EtOpCounts {
  uint64_t complex_mul;
  uint64_t complex_sqr;
  uint64_t complex_cube;
  uint64_t real_mul;
  uint64_t real_sqr;
} EtOpCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after success.
// The pointer stays valid until the next call into the library on this thread.
const char *et_last_error(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must be null or a pointer returned by this library and not yet freed.
void et_string_free(char *s);

// Library version as a static string.
const char *et_version(void);

// Evaluates `function` at `tau = re + i im` to `prec` bits. The decimal
// strings are parsed exactly.
//
// # Safety
// `re` and `im` must be valid nul-terminated strings and `out` a valid
// pointer; on success `*out` receives a handle to free with [`et_result_free`].
enum EtStatus et_eval_tau(enum EtFunction function,
                          const char *re,
                          const char *im,
                          uint32_t prec,
                          enum EtMethod method,
                          struct EtEvalResult **out);

// As [`et_eval_tau`] but from `q` directly: `q = e^(2 pi i tau)` for eta and
// `q = e^(pi i tau)` for the theta functions.
//
// # Safety
// As for [`et_eval_tau`].
enum EtStatus et_eval_q(enum EtFunction function,
                        const char *re,
                        const char *im,
                        uint32_t prec,
                        enum EtMethod method,
                        struct EtEvalResult **out);

// Number of values in the result: 3 for `ThetaAll`, otherwise 1.
//
// # Safety
// `r` must be null or a live handle.
size_t et_result_count(const struct EtEvalResult *r);

// Name of value `i` (`"eta"`, `"theta0"`, ...), owned by the handle.
// Null if `i` is out of range.
//
// # Safety
// `r` must be null or a live handle.
const char *et_result_name(const struct EtEvalResult *r, size_t i);

// Value `i` as decimal strings (`hex == 0`) or exact hexadecimal floats
// (`hex != 0`). Both strings are released with [`et_string_free`].
//
// # Safety
// `r` must be a live handle; `re_out` and `im_out` valid pointers.
enum EtStatus et_result_value(const struct EtEvalResult *r,
                              size_t i,
                              int32_t hex,
                              char **re_out,
                              char **im_out);

// Truncation order used (largest exponent allowed by the error bound).
//
// # Safety
// `r` must be null or a live handle.
uint64_t et_result_truncation(const struct EtEvalResult *r);

// Operation counts of the evaluation; zeros for a null handle.
//
// # Safety
// `r` must be null or a live handle.
struct EtOpCounts et_result_counts(const struct EtEvalResult *r);

// Method actually used; `Auto` is resolved.
//
// # Safety
// `r` must be a live handle.
enum EtMethod et_result_method(const struct EtEvalResult *r);

// The full report as JSON, released with [`et_string_free`]. Null for a
// null handle.
//
// # Safety
// `r` must be null or a live handle.
char *et_result_json(const struct EtEvalResult *r);

// # Safety
// `r` must be null or a handle not yet freed.
void et_result_free(struct EtEvalResult *r);

// Builds an addition sequence covering the first `n` exponents of `kind`.
//
// # Safety
// `out` must be a valid pointer; on success `*out` receives a handle to
// free with [`et_addseq_free`].
enum EtStatus et_addseq_build(enum EtKind kind,
                              uint64_t n,
                              enum EtAlgorithm algo,
                              struct EtAddSeq **out);

// Parses the text form (`target kind a [b]` per line) or the JSON form.
//
// # Safety
// `text` must be a valid nul-terminated string and `out` a valid pointer.
enum EtStatus et_addseq_parse(const char *text, struct EtAddSeq **out);

// Number of elements, including the leaf 1.
//
// # Safety
// `s` must be null or a live handle.
size_t et_addseq_len(const struct EtAddSeq *s);

// Cost in real multiplications under `model`; NaN for a null handle.
//
// # Safety
// `s` must be null or a live handle.
double et_addseq_cost(const struct EtAddSeq *s, enum EtCostModel model);

// Checks every step and target. Returns `Failed` with a message if the
// sequence is not valid.
//
// # Safety
// `s` must be a live handle.
enum EtStatus et_addseq_validate(const struct EtAddSeq *s);

// Text form, released with [`et_string_free`]. Null for a null handle.
//
// # Safety
// `s` must be null or a live handle.
char *et_addseq_to_text(const struct EtAddSeq *s);

// # Safety
// `s` must be null or a handle not yet freed.
void et_addseq_free(struct EtAddSeq *s);

// Number of distinct values of the sequence modulo `m`.
uint64_t et_count_values(enum EtKind kind, uint64_t m);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ETATHETA_H */
