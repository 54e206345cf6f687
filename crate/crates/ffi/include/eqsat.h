#ifndef EQSAT_H
#define EQSAT_H

/* Generated by cbindgen from the eqsat-ffi crate. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. Anything other than `Ok` means the out-pointers were
 * left untouched.
 */
typedef enum {
  /**
   * The call succeeded.
   */
  EQSAT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  EQSAT_STATUS_NULL_ARGUMENT = 1,
  /**
   * The parameter set is inconsistent or out of range.
   */
  EQSAT_STATUS_INVALID_PARAMS = 2,
  /**
   * Key generation exhausted its retry budget.
   */
  EQSAT_STATUS_GENERATION_FAILED = 3,
  /**
   * Encryption exhausted its resample budget.
   */
  EQSAT_STATUS_ENCRYPTION_FAILED = 4,
  /**
   * The ciphertext decodes to an out-of-range value.
   */
  EQSAT_STATUS_CORRUPT_CIPHERTEXT = 5,
  /**
   * Serialized bytes are malformed, truncated, or non-canonical.
   */
  EQSAT_STATUS_INVALID_ENCODING = 6,
  /**
   * Object dimensions disagree (e.g. key length vs. ciphertext width).
   */
  EQSAT_STATUS_SHAPE_MISMATCH = 7,
} EqsatStatus;

/**
 * Opaque ciphertext handle.
 */
typedef struct EqsatCiphertext EqsatCiphertext;

/**
 * Opaque private key handle. Carries the parameter set it was generated
 * under so it can be serialized on its own.
 */
typedef struct EqsatPrivateKey EqsatPrivateKey;

/**
 * Opaque public key handle.
 */
typedef struct EqsatPublicKey EqsatPublicKey;

/**
 * Cryptosystem parameters in C layout. `mode` is the numeric method tag:
 * 2, 3, or 4.
 */
typedef struct {
  uint8_t mode;
  uint32_t k;
  uint32_t n;
  uint32_t m;
  uint32_t b;
  uint32_t e;
  uint32_t q;
} EqsatParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Generates a fresh key pair from the operating-system entropy source.
 *
 * # Safety
 * `params` must point to a valid [`EqsatParams`]; `pk_out` and `sk_out`
 * must be valid for writes.
 */
EqsatStatus eqsat_keygen(const EqsatParams *params,
                         EqsatPublicKey **pk_out,
                         EqsatPrivateKey **sk_out);

/**
 * Generates a key pair from a fixed seed. Deterministic; intended for
 * tests and reproducible fixtures, not for production keys.
 *
 * # Safety
 * Same contract as [`eqsat_keygen`].
 */
EqsatStatus eqsat_keygen_seeded(const EqsatParams *params,
                                uint64_t seed,
                                EqsatPublicKey **pk_out,
                                EqsatPrivateKey **sk_out);

/**
 * Checks that `sk` actually satisfies the equilibrium structure of `pk`.
 * Writes `true` to `ok_out` when every clause checks out.
 *
 * # Safety
 * All three pointers must be valid; the handles must have come from this
 * library.
 */
EqsatStatus eqsat_keypair_verify(const EqsatPublicKey *pk, const EqsatPrivateKey *sk, bool *ok_out);

/**
 * Copies the parameter set embedded in a public key.
 *
 * # Safety
 * `pk` must be a live handle from this library; `params_out` must be
 * valid for writes.
 */
EqsatStatus eqsat_public_key_params(const EqsatPublicKey *pk, EqsatParams *params_out);

/**
 * Encrypts a byte string under `pk`. Pass null for `params` to use the
 * parameter set embedded in the key; pass an override to encrypt under a
 * different method or extraction size (the key material permitting).
 * `msg` may be null when `msg_len` is zero.
 *
 * # Safety
 * `pk` must be a live handle; `msg` must point to `msg_len` readable
 * bytes (or be null with `msg_len == 0`); `ct_out` must be valid for
 * writes.
 */
EqsatStatus eqsat_encrypt(const EqsatPublicKey *pk,
                          const EqsatParams *params,
                          const uint8_t *msg,
                          size_t msg_len,
                          EqsatCiphertext **ct_out);

/**
 * Deterministic variant of [`eqsat_encrypt`] for tests and fixtures.
 *
 * # Safety
 * Same contract as [`eqsat_encrypt`].
 */
EqsatStatus eqsat_encrypt_seeded(const EqsatPublicKey *pk,
                                 const EqsatParams *params,
                                 const uint8_t *msg,
                                 size_t msg_len,
                                 uint64_t seed,
                                 EqsatCiphertext **ct_out);

/**
 * Decrypts a ciphertext. On success `msg_out` receives a buffer of
 * exactly `msg_len_out` bytes; release it with [`eqsat_bytes_free`].
 *
 * # Safety
 * `sk` and `ct` must be live handles; `msg_out` and `msg_len_out` must be
 * valid for writes.
 */
EqsatStatus eqsat_decrypt(const EqsatPrivateKey *sk,
                          const EqsatCiphertext *ct,
                          uint8_t **msg_out,
                          size_t *msg_len_out);

/**
 * Serializes a public key into the container format.
 *
 * # Safety
 * `pk` must be a live handle; `out` and `len_out` must be valid for
 * writes.
 */
EqsatStatus eqsat_public_key_to_bytes(const EqsatPublicKey *pk, uint8_t **out, size_t *len_out);

/**
 * Parses a public key from the container format. Validation is strict:
 * non-canonical encodings are rejected, not repaired.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out` must be valid for
 * writes.
 */
EqsatStatus eqsat_public_key_from_bytes(const uint8_t *data, size_t len, EqsatPublicKey **out);

/**
 * Serializes a private key into the container format.
 *
 * # Safety
 * Same contract as [`eqsat_public_key_to_bytes`].
 */
EqsatStatus eqsat_private_key_to_bytes(const EqsatPrivateKey *sk, uint8_t **out, size_t *len_out);

/**
 * Parses a private key from the container format.
 *
 * # Safety
 * Same contract as [`eqsat_public_key_from_bytes`].
 */
EqsatStatus eqsat_private_key_from_bytes(const uint8_t *data, size_t len, EqsatPrivateKey **out);

/**
 * Serializes a ciphertext into the container format.
 *
 * # Safety
 * Same contract as [`eqsat_public_key_to_bytes`].
 */
EqsatStatus eqsat_ciphertext_to_bytes(const EqsatCiphertext *ct, uint8_t **out, size_t *len_out);

/**
 * Parses a ciphertext from the container format.
 *
 * # Safety
 * Same contract as [`eqsat_public_key_from_bytes`].
 */
EqsatStatus eqsat_ciphertext_from_bytes(const uint8_t *data, size_t len, EqsatCiphertext **out);

/**
 * Renders a public key as DIMACS CNF text. The buffer is UTF-8 and not
 * NUL-terminated; release it with [`eqsat_bytes_free`].
 *
 * # Safety
 * Same contract as [`eqsat_public_key_to_bytes`].
 */
EqsatStatus eqsat_public_key_to_dimacs(const EqsatPublicKey *pk, uint8_t **out, size_t *len_out);

/**
 * Releases a public key handle. Null is a no-op.
 *
 * # Safety
 * `pk` must be null or a handle returned by this library that has not
 * already been freed.
 */
void eqsat_public_key_free(EqsatPublicKey *pk);

/**
 * Releases a private key handle. Null is a no-op.
 *
 * # Safety
 * Same contract as [`eqsat_public_key_free`].
 */
void eqsat_private_key_free(EqsatPrivateKey *sk);

/**
 * Releases a ciphertext handle. Null is a no-op.
 *
 * # Safety
 * Same contract as [`eqsat_public_key_free`].
 */
void eqsat_ciphertext_free(EqsatCiphertext *ct);

/**
 * Releases a byte buffer produced by this library. `len` must be the
 * length that was written alongside the pointer. Null is a no-op.
 *
 * # Safety
 * `(ptr, len)` must be exactly a pair returned by one of the `*_to_bytes`,
 * `eqsat_decrypt`, or `eqsat_public_key_to_dimacs` calls, unfreed.
 */
void eqsat_bytes_free(uint8_t *ptr, size_t len);

/**
 * Returns a static, NUL-terminated name for a status code.
 */
const char *eqsat_status_name(EqsatStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EQSAT_H */
