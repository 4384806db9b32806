#ifndef AES_LAB_H
#define AES_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum AesStatus {
  AES_STATUS_OK = 0,
  AES_STATUS_NULL_POINTER = 1,
  AES_STATUS_INVALID_INPUT = 2,
  AES_STATUS_NO_SOLUTION = 3,
  AES_STATUS_TRUNCATION_CAP = 4,
  AES_STATUS_SHAPE_MISMATCH = 5,
  AES_STATUS_NON_HERMITIAN = 6,
  AES_STATUS_OVERFLOW = 7,
  AES_STATUS_NUMERICAL = 8,
  AES_STATUS_INVALID_UTF8 = 9,
  AES_STATUS_PANIC = 10,
} AesStatus;

/**
 * Opaque state handle.
 */
typedef struct AesLabState AesLabState;

typedef struct AesComplex {
  double re;
  double im;
} AesComplex;

/**
 * Coefficients of `α₋a + α₊a† + α₃I + β₋J₊ + β₊J₋ + β₃J₃`.
 */
typedef struct AesElement {
  struct AesComplex alpha_minus;
  struct AesComplex alpha_plus;
  struct AesComplex alpha_3;
  struct AesComplex beta_minus;
  struct AesComplex beta_plus;
  struct AesComplex beta_3;
} AesElement;

typedef struct AesDispersions {
  double var_a;
  double var_b;
  double delta;
  double mean_f;
  double mean_c;
} AesDispersions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * cut to `cap`). Returns the full message length plus one, or 0 when no
 * error has been recorded.
 *
 * # Safety
 * `buf` must be null or point to `cap` writable bytes.
 */
size_t aes_last_error(char *buf, size_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *aes_version(void);

/**
 * `P_n^{(α,β)}(x)` by the finite hypergeometric sum.
 *
 * # Safety
 * `out` must point to a writable `AesComplex`.
 */
enum AesStatus aes_jacobi_p(int64_t n,
                            double alpha,
                            double beta,
                            struct AesComplex x,
                            struct AesComplex *out);

/**
 * Eigenstate of `x + iλp` with eigenvalue `beta`, `λ` given by `(δ, φ)`.
 *
 * # Safety
 * `out` must point to a writable handle slot.
 */
enum AesStatus aes_state_oscillator(double delta,
                                    double phi,
                                    struct AesComplex beta,
                                    struct AesLabState **out);

/**
 * Spin eigenstate of `J₁ + iλJ₂` with label `m = two_m/2`.
 *
 * # Safety
 * `out` must point to a writable handle slot.
 */
enum AesStatus aes_state_angular(double delta,
                                 double phi,
                                 uint32_t two_j,
                                 int32_t two_m,
                                 struct AesLabState **out);

/**
 * Eigenstate of a general element; the eigenvalue is `rho + m·b`.
 *
 * # Safety
 * `elem` must point to a readable `AesElement`, `out` to a writable handle slot.
 */
enum AesStatus aes_state_element(const struct AesElement *elem,
                                 uint32_t two_j,
                                 int32_t two_m,
                                 struct AesComplex rho,
                                 struct AesLabState **out);

/**
 * Eigenstate of `X + iλP` for the supersymmetric quadratures built from `mu, tau`.
 *
 * # Safety
 * `out` must point to a writable handle slot.
 */
enum AesStatus aes_state_super_xp(struct AesComplex mu,
                                  struct AesComplex tau,
                                  double delta,
                                  double phi,
                                  struct AesComplex z,
                                  uint32_t two_j,
                                  int32_t two_m,
                                  struct AesLabState **out);

/**
 * Closed-form dispersions of `X, P` in the state of `aes_state_super_xp`.
 *
 * # Safety
 * `out` must point to a writable `AesDispersions`.
 */
enum AesStatus aes_super_xp_dispersions(struct AesComplex mu,
                                        struct AesComplex tau,
                                        double delta,
                                        double phi,
                                        uint32_t two_j,
                                        int32_t two_m,
                                        struct AesDispersions *out);

/**
 * # Safety
 * `h` must be null or a handle from this library not yet freed.
 */
void aes_state_free(struct AesLabState *h);

/**
 * Number of Fock levels kept; 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t aes_state_fock_dim(const struct AesLabState *h);

/**
 * Doubled spin `2j`; 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
uint32_t aes_state_two_j(const struct AesLabState *h);

/**
 * Total number of coefficients, `fock_dim·(2j+1)`.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t aes_state_len(const struct AesLabState *h);

/**
 * Probability mass estimated beyond the kept levels.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
double aes_state_tail_mass(const struct AesLabState *h);

/**
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum AesStatus aes_state_eigenvalue(const struct AesLabState *h, struct AesComplex *out);

/**
 * Copies the coefficients, index `n·(2j+1) + (m+j)`, into `out`.
 *
 * # Safety
 * `h` must be a live handle and `out` must hold `cap` entries.
 */
enum AesStatus aes_state_coeffs(const struct AesLabState *h, struct AesComplex *out, size_t cap);

/**
 * `‖(A − z)ψ‖` over the levels below the top one.
 *
 * # Safety
 * `h` must be a live handle, `elem` readable and `out` writable.
 */
enum AesStatus aes_state_residual(const struct AesLabState *h,
                                  const struct AesElement *elem,
                                  struct AesComplex z,
                                  double *out);

/**
 * Runs a figure sweep from a JSON config and returns the CSV text, to be
 * released with `aes_string_free`.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` writable.
 */
enum AesStatus aes_sweep_csv(const char *config_json, bool verify, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void aes_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AES_LAB_H */
