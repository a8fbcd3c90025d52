#ifndef TRACECODES_H
#define TRACECODES_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_POINTER = 1,
  TC_STATUS_INVALID_ARGUMENT = 2,
  TC_STATUS_INVALID_SUBFIELD = 3,
  TC_STATUS_BUDGET_EXCEEDED = 4,
  TC_STATUS_BUFFER_TOO_SMALL = 5,
  TC_STATUS_INTERNAL = 6,
  TC_STATUS_PANIC = 7,
} TcStatus;

// Code families selectable through `tc_code_new`.
typedef enum TcVariant {
  TC_VARIANT_D0 = 0,
  TC_VARIANT_D1 = 1,
  TC_VARIANT_FULL = 2,
  TC_VARIANT_PUNCTURED = 3,
} TcVariant;

// Opaque binary linear code.
typedef struct TcCode TcCode;

// Opaque finite field GF(2^m).
typedef struct TcField TcField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message on this thread into `buf` as a NUL-terminated
// string, truncating if needed. Returns the full message length in bytes
// (excluding the terminator). `buf` may be null when `len` is 0.
//
// # Safety
// `buf` must point to at least `len` writable bytes.
size_t tc_last_error_message(char *buf, size_t len);

// Creates GF(2^m). `modulus` 0 selects the default irreducible polynomial.
//
// # Safety
// `out_field` must be a valid pointer.
enum TcStatus tc_field_new(uint32_t m, uint64_t modulus, struct TcField **out_field);

// Releases a field. Null is ignored. Codes built from it stay valid.
//
// # Safety
// `field` must come from `tc_field_new` and not be freed twice.
void tc_field_free(struct TcField *field);

// Extension degree m, or 0 for a null handle.
//
// # Safety
// `field` must be null or a live handle.
uint32_t tc_field_degree(const struct TcField *field);

// Modulus polynomial (bit i = coefficient of x^i), or 0 for a null handle.
//
// # Safety
// `field` must be null or a live handle.
uint64_t tc_field_modulus(const struct TcField *field);

// Product of two elements given by their coordinates.
//
// # Safety
// `field` must be a live handle and `out_product` a valid pointer.
enum TcStatus tc_field_mul(const struct TcField *field,
                           uint64_t a,
                           uint64_t b,
                           uint64_t *out_product);

// Absolute trace of an element, 0 or 1.
//
// # Safety
// `field` must be a live handle and `out_trace` a valid pointer.
enum TcStatus tc_field_trace(const struct TcField *field, uint64_t a, uint8_t *out_trace);

// S_h(a, b) by summing over the whole field.
//
// # Safety
// `field` must be a live handle and `out_value` a valid pointer.
enum TcStatus tc_weil_direct(const struct TcField *field,
                             uint32_t h,
                             uint64_t a,
                             uint64_t b,
                             int64_t *out_value);

// S_h(a, b) in closed form. When only the magnitude is determined,
// `out_exact` is 0 and `out_value` holds the magnitude.
//
// # Safety
// `field` must be a live handle; `out_value` and `out_exact` valid pointers.
enum TcStatus tc_weil_closed(const struct TcField *field,
                             uint32_t h,
                             uint64_t a,
                             uint64_t b,
                             int64_t *out_value,
                             uint8_t *out_exact);

// Builds a code over `field`.
//
// # Safety
// `field` must be a live handle and `out_code` a valid pointer.
enum TcStatus tc_code_new(const struct TcField *field,
                          enum TcVariant variant,
                          uint32_t h,
                          struct TcCode **out_code);

// Releases a code. Null is ignored.
//
// # Safety
// `code` must come from `tc_code_new` and not be freed twice.
void tc_code_free(struct TcCode *code);

// Code length n, or 0 for a null handle.
//
// # Safety
// `code` must be null or a live handle.
size_t tc_code_length(const struct TcCode *code);

// Code dimension k, or 0 for a null handle.
//
// # Safety
// `code` must be null or a live handle.
size_t tc_code_dimension(const struct TcCode *code);

// Writes A_0..A_n into `counts` (needs n + 1 slots). `budget` 0 selects the
// default enumeration budget. On `TcStatus::BufferTooSmall` the required
// length is still stored in `out_len`.
//
// # Safety
// `code` must be a live handle, `counts` must hold `len` writable values and
// `out_len` must be a valid pointer.
enum TcStatus tc_code_weight_distribution(const struct TcCode *code,
                                          uint64_t budget,
                                          uint64_t *counts,
                                          size_t len,
                                          size_t *out_len);

// Writes the k x n generator matrix row-major as bytes 0/1 into `bits`
// (needs k * n bytes). On `TcStatus::BufferTooSmall` the required length
// is still stored in `out_len`.
//
// # Safety
// `code` must be a live handle, `bits` must hold `len` writable bytes and
// `out_len` must be a valid pointer.
enum TcStatus tc_code_generator_matrix(const struct TcCode *code,
                                       uint8_t *bits,
                                       size_t len,
                                       size_t *out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRACECODES_H */
