#ifndef EITSIM_H
#define EITSIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Dephasing model selector for spectrum functions.
#define EIT_MODEL_OFFDIAG 0

// Population-exchange (flawed) model selector.
#define EIT_MODEL_POPEXCH 1

// Status codes returned by every `eit_*` function.
typedef enum EitStatus {
  // Success.
  EIT_STATUS_OK = 0,
  // A pointer was null or an argument was out of range.
  EIT_STATUS_INVALID_ARGUMENT = 1,
  // The parameter set is degenerate for the requested quantity.
  EIT_STATUS_DEGENERATE = 2,
  // An iterative solver failed to converge.
  EIT_STATUS_NO_CONVERGENCE = 3,
  // A root search found no crossing.
  EIT_STATUS_NO_ROOT = 4,
  // The rate scales are too stiff for the integrator.
  EIT_STATUS_STIFF = 5,
  // An unexpected internal failure (panic).
  EIT_STATUS_INTERNAL = 6,
} EitStatus;

// Opaque parameter handle.
typedef struct EitParams EitParams;

// Plain parameter block used to construct an [`EitParams`] handle.
// Field meanings match the library documentation; rates are in rad/s
// in any single consistent unit system.
typedef struct EitParamsConfig {
  double g;
  double density;
  double omega_c_re;
  double omega_c_im;
  double gamma_b;
  double gamma_c;
  double gamma_ba;
  double gamma_ac;
  double gamma_bc_prime;
  double gamma_bc_popexch;
  double gamma_total;
  double length;
  double c_light;
} EitParamsConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a parameter handle from a config block. On success writes the
// new handle to `out`; the caller owns it and must free it with
// `eit_params_free`.
enum EitStatus eit_params_create(const struct EitParamsConfig *config, struct EitParams **out);

// Creates a parameter handle from a named preset (see the CLI
// documentation for the available names).
enum EitStatus eit_params_preset(const char *name, struct EitParams **out);

// Releases a handle created by `eit_params_create` or
// `eit_params_preset`. Null is accepted and ignored.
void eit_params_free(struct EitParams *params);

// Complex propagation exponent Lambda(omega) of the chosen model.
enum EitStatus eit_propagation_exponent(const struct EitParams *params,
                                        int32_t model,
                                        double omega,
                                        double *out_re,
                                        double *out_im);

// Power transmission e^{-2 Re Lambda L} of the corrected model.
enum EitStatus eit_power_transmission(const struct EitParams *params,
                                      double omega,
                                      double length,
                                      double *out);

// Slow-light group delay in seconds (co-moving convention: the vacuum
// transit L/c is not included).
enum EitStatus eit_group_delay(const struct EitParams *params, double *out);

// Half-width of the transparency window (2 Re Lambda L = 1 crossing).
enum EitStatus eit_transparency_width(const struct EitParams *params, double length, double *out);

// Steady state of the corrected Bloch equations for a constant probe.
// Writes 8 values: sigma_bb, sigma_cc, Re/Im sigma_ba, Re/Im sigma_bc,
// Re/Im sigma_ac.
enum EitStatus eit_steady_state(const struct EitParams *params,
                                double probe_re,
                                double probe_im,
                                double *out_state);

// Output quadrature variance (shot-noise units) for input variance
// `s_in` at sideband `omega` after length `length`, for either model.
enum EitStatus eit_output_spectrum_value(const struct EitParams *params,
                                         int32_t model,
                                         double s_in,
                                         double omega,
                                         double length,
                                         double *out);

// The flawed model's added-noise factor at sideband `omega`.
enum EitStatus eit_added_noise_factor(const struct EitParams *params, double omega, double *out);

// Line-center squeezing preservation ratio (1 - S_out) / (1 - S_in)
// for a flat squeezed input of parameter `r`.
enum EitStatus eit_squeezing_preservation(const struct EitParams *params,
                                          double r,
                                          double length,
                                          double *out);

// Duan inseparability sum for an r-squeezed EPR pair after arm B
// crosses the medium at sideband `omega`, with arm A phase-compensated
// against the channel rotation. Values below 4 mean the pair is still
// entangled.
enum EitStatus eit_duan_after_channel(const struct EitParams *params,
                                      double r,
                                      double omega,
                                      double length,
                                      double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EITSIM_H */
