#ifndef MODENT_H
#define MODENT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum ModentStatus {
  MODENT_STATUS_OK = 0,
  MODENT_STATUS_INVALID_ARGUMENT = 1,
  MODENT_STATUS_NULL_POINTER = 2,
  MODENT_STATUS_COMPUTATION_FAILED = 3,
  MODENT_STATUS_PANIC = 4,
} ModentStatus;

/**
 * Opaque handle to a validated two-qubit density matrix.
 */
typedef struct ModentTwoQubitState ModentTwoQubitState;

/**
 * A complex number passed by value.
 */
typedef struct ModentComplex {
  double re;
  double im;
} ModentComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *modent_version(void);

/**
 * Message describing the last failed call on this thread, or NULL after a
 * successful call. The pointer stays valid until the next call into the
 * library from the same thread.
 */
const char *modent_last_error_message(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void modent_string_free(char *s);

/**
 * The target-pair state with coherence `gamma` in [0, 1].
 *
 * # Safety
 * `out_state` must be NULL or valid for writes.
 */
enum ModentStatus modent_state_rho_tp(double gamma, struct ModentTwoQubitState **out_state);

/**
 * Builds a state from 32 doubles (row-major, interleaved re/im). The matrix
 * must be Hermitian, positive semidefinite and of unit trace.
 *
 * # Safety
 * `re_im` must be NULL or point to 32 readable doubles; `out_state` must be
 * NULL or valid for writes.
 */
enum ModentStatus modent_state_from_matrix(const double *re_im,
                                           struct ModentTwoQubitState **out_state);

/**
 * Releases a state handle. NULL is ignored.
 *
 * # Safety
 * `state` must come from this library and not have been freed already.
 */
void modent_state_free(struct ModentTwoQubitState *state);

/**
 * Wootters concurrence of the state.
 *
 * # Safety
 * `state` must be NULL or a live handle; `out_value` NULL or writable.
 */
enum ModentStatus modent_state_concurrence(const struct ModentTwoQubitState *state,
                                           double *out_value);

/**
 * Sum of the two largest eigenvalues of TᵀT; CHSH is violated when it
 * exceeds 1.
 *
 * # Safety
 * `state` must be NULL or a live handle; the out-pointers NULL or writable.
 */
enum ModentStatus modent_state_horodecki_m(const struct ModentTwoQubitState *state,
                                           double *out_value,
                                           bool *out_violated);

/**
 * Correlation tensor Tᵢⱼ = Tr[ρ σᵢ⊗σⱼ] as 9 doubles, row-major.
 *
 * # Safety
 * `state` must be NULL or a live handle; `out_tensor` NULL or 9 writable
 * doubles.
 */
enum ModentStatus modent_state_correlation_tensor(const struct ModentTwoQubitState *state,
                                                  double *out_tensor);

/**
 * Copies the density matrix into 32 doubles (row-major, interleaved).
 *
 * # Safety
 * `state` must be NULL or a live handle; `out_re_im` NULL or 32 writable
 * doubles.
 */
enum ModentStatus modent_state_matrix(const struct ModentTwoQubitState *state, double *out_re_im);

/**
 * Absorbs one flying particle shared between two modes into the targets
 * and returns the target-pair state. The flying modes are fermionic when
 * `fermionic` is true and bosonic otherwise.
 *
 * # Safety
 * `out_state` must be NULL or valid for writes.
 */
enum ModentStatus modent_absorption(bool fermionic, struct ModentTwoQubitState **out_state);

/**
 * Target concurrence of the massive-fermion ancilla-pair protocol for
 * `n_pairs` mixing angles in [0, π].
 *
 * # Safety
 * `thetas` must be NULL or point to `n_pairs` doubles; `out_value` NULL or
 * writable.
 */
enum ModentStatus modent_fermion_concurrence(const double *thetas,
                                             size_t n_pairs,
                                             double *out_value);

/**
 * Grid search plus local refinement over the mixing angles. Writes
 * `n_pairs` angles and the best concurrence.
 *
 * # Safety
 * `out_angles` must be NULL or hold `n_pairs` writable doubles;
 * `out_concurrence` NULL or writable.
 */
enum ModentStatus modent_optimize_angles(size_t n_pairs,
                                         size_t grid_points,
                                         size_t refine_rounds,
                                         double *out_angles,
                                         double *out_concurrence);

/**
 * Fidelity of the target after `n_ancillas` sequential couplings. A NULL
 * `per_step_duration` selects the default step π/(4JN).
 *
 * # Safety
 * `per_step_duration` must be NULL or readable; `out_fidelity` NULL or
 * writable.
 */
enum ModentStatus modent_sequential_fidelity(struct ModentComplex alpha,
                                             struct ModentComplex beta,
                                             size_t n_ancillas,
                                             const double *per_step_duration,
                                             double *out_fidelity);

/**
 * One ancilla in |+⟩ for t = π/(4J): writes the simulated 2×2 target
 * state (8 doubles) and its fidelity to the ideal rotated state.
 *
 * # Safety
 * `out_re_im` must be NULL or hold 8 writable doubles; `out_fidelity` NULL
 * or writable.
 */
enum ModentStatus modent_single_ancilla_rotation(struct ModentComplex alpha,
                                                 struct ModentComplex beta,
                                                 double *out_re_im,
                                                 double *out_fidelity);

/**
 * Rotation by a coherent field of amplitude `eta`. `cutoff` 0 picks the
 * Fock cutoff automatically.
 *
 * # Safety
 * `out_fidelity` must be NULL or writable.
 */
enum ModentStatus modent_coherent_fidelity(struct ModentComplex alpha,
                                           struct ModentComplex beta,
                                           struct ModentComplex eta,
                                           size_t cutoff,
                                           double *out_fidelity);

/**
 * Compares simultaneous coupling to `n_modes` ancillas against a single
 * collective mode. Writes the trace distance of the target states and the
 * fidelity gain.
 *
 * # Safety
 * The out-pointers must be NULL or writable.
 */
enum ModentStatus modent_collective_check(size_t n_modes,
                                          struct ModentComplex alpha,
                                          struct ModentComplex beta,
                                          double *out_trace_distance,
                                          double *out_fidelity_gain);

/**
 * Runs an experiment described by a JSON config (the same document the
 * command line accepts with `--config`) and returns its JSON result.
 * Output paths in the config are ignored. Free the result with
 * [`modent_string_free`].
 *
 * # Safety
 * `config_json` must be NULL or a NUL-terminated string; `out_json` NULL or
 * writable.
 */
enum ModentStatus modent_run_json(const char *config_json, char **out_json);

/**
 * JSON summary table for `n_ancilla` ancillas. Free the result with
 * [`modent_string_free`].
 *
 * # Safety
 * `out_json` must be NULL or writable.
 */
enum ModentStatus modent_table1_json(size_t n_ancilla, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODENT_H */
