//! C ABI surface for the eitsim library.
//!
//! Conventions: every function returns an [`EitStatus`] code and writes
//! results through out-pointers; parameter sets live behind the opaque
//! [`EitParams`] handle created by `eit_params_create` /
//! `eit_params_preset` and released with `eit_params_free`. All entry
//! points are panic-safe (panics are converted to `EIT_STATUS_INTERNAL`).

use std::ffi::CStr;
use std::panic::{catch_unwind, AssertUnwindSafe};

use libc::c_char;

use eitsim::entanglement_cv::{
    apply_loss_rotation, channel_at, duan_criterion, epr_pair_from_squeezers, rotate_arm, Arm,
};
use eitsim::lambda_system::{steady_state, AtomicParams, NoiseModel};
use eitsim::linear_response::{
    group_delay, propagation_exponent_for_model, transparency_width,
};
use eitsim::noise_spectra::{
    added_noise_factor_population_exchange, output_value, squeezing_delay_report, SqueezingSource,
};
use eitsim::presets::preset;
use eitsim::EitError;

/// Status codes returned by every `eit_*` function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[allow(non_camel_case_types)] // C-style constant names end up in the header verbatim
pub enum EitStatus {
    /// Success.
    EIT_STATUS_OK = 0,
    /// A pointer was null or an argument was out of range.
    EIT_STATUS_INVALID_ARGUMENT = 1,
    /// The parameter set is degenerate for the requested quantity.
    EIT_STATUS_DEGENERATE = 2,
    /// An iterative solver failed to converge.
    EIT_STATUS_NO_CONVERGENCE = 3,
    /// A root search found no crossing.
    EIT_STATUS_NO_ROOT = 4,
    /// The rate scales are too stiff for the integrator.
    EIT_STATUS_STIFF = 5,
    /// An unexpected internal failure (panic).
    EIT_STATUS_INTERNAL = 6,
}

use EitStatus::*;

/// Plain parameter block used to construct an [`EitParams`] handle.
/// Field meanings match the library documentation; rates are in rad/s
/// in any single consistent unit system.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EitParamsConfig {
    pub g: f64,
    pub density: f64,
    pub omega_c_re: f64,
    pub omega_c_im: f64,
    pub gamma_b: f64,
    pub gamma_c: f64,
    pub gamma_ba: f64,
    pub gamma_ac: f64,
    pub gamma_bc_prime: f64,
    pub gamma_bc_popexch: f64,
    pub gamma_total: f64,
    pub length: f64,
    pub c_light: f64,
}

/// Opaque parameter handle.
pub struct EitParams {
    inner: AtomicParams,
}

/// Dephasing model selector for spectrum functions.
pub const EIT_MODEL_OFFDIAG: i32 = 0;
/// Population-exchange (flawed) model selector.
pub const EIT_MODEL_POPEXCH: i32 = 1;

fn status_of(err: &EitError) -> EitStatus {
    match err {
        EitError::InvalidParams(_) | EitError::GridMismatch(_) => EIT_STATUS_INVALID_ARGUMENT,
        EitError::Degenerate(_)
        | EitError::DegenerateDenominator { .. }
        | EitError::DegenerateConditioning => EIT_STATUS_DEGENERATE,
        EitError::NoConvergence { .. } | EitError::StepUnderflow { .. } => {
            EIT_STATUS_NO_CONVERGENCE
        }
        EitError::NoRoot(_) => EIT_STATUS_NO_ROOT,
        EitError::StiffnessExceeded { .. } => EIT_STATUS_STIFF,
    }
}

fn guarded(body: impl FnOnce() -> EitStatus) -> EitStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(EIT_STATUS_INTERNAL)
}

fn model_of(model: i32) -> Option<NoiseModel> {
    match model {
        EIT_MODEL_OFFDIAG => Some(NoiseModel::OffDiagonal),
        EIT_MODEL_POPEXCH => Some(NoiseModel::PopulationExchange),
        _ => None,
    }
}

unsafe fn params_ref<'a>(handle: *const EitParams) -> Option<&'a AtomicParams> {
    handle.as_ref().map(|h| &h.inner)
}

/// Creates a parameter handle from a config block. On success writes the
/// new handle to `out`; the caller owns it and must free it with
/// `eit_params_free`.
#[no_mangle]
pub unsafe extern "C" fn eit_params_create(
    config: *const EitParamsConfig,
    out: *mut *mut EitParams,
) -> EitStatus {
    guarded(|| {
        let (Some(cfg), Some(out)) = (config.as_ref(), out.as_mut()) else {
            return EIT_STATUS_INVALID_ARGUMENT;
        };
        let inner = AtomicParams {
            g: cfg.g,
            density: cfg.density,
            omega_c: eitsim::C64::new(cfg.omega_c_re, cfg.omega_c_im),
            gamma_b: cfg.gamma_b,
            gamma_c: cfg.gamma_c,
            gamma_ba: cfg.gamma_ba,
            gamma_ac: cfg.gamma_ac,
            gamma_bc_prime: cfg.gamma_bc_prime,
            gamma_bc_popexch: cfg.gamma_bc_popexch,
            gamma_total: cfg.gamma_total,
            length: cfg.length,
            c_light: cfg.c_light,
        };
        if let Err(e) = inner.validate() {
            return status_of(&e);
        }
        *out = Box::into_raw(Box::new(EitParams { inner }));
        EIT_STATUS_OK
    })
}

/// Creates a parameter handle from a named preset (see the CLI
/// documentation for the available names).
#[no_mangle]
pub unsafe extern "C" fn eit_params_preset(
    name: *const c_char,
    out: *mut *mut EitParams,
) -> EitStatus {
    guarded(|| {
        let (false, Some(out)) = (name.is_null(), out.as_mut()) else {
            return EIT_STATUS_INVALID_ARGUMENT;
        };
        let Ok(name) = CStr::from_ptr(name).to_str() else {
            return EIT_STATUS_INVALID_ARGUMENT;
        };
        let Some(cfg) = preset(name) else {
            return EIT_STATUS_INVALID_ARGUMENT;
        };
        *out = Box::into_raw(Box::new(EitParams { inner: cfg.params }));
        EIT_STATUS_OK
    })
}

/// Releases a handle created by `eit_params_create` or
/// `eit_params_preset`. Null is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn eit_params_free(params: *mut EitParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Complex propagation exponent Lambda(omega) of the chosen model.
#[no_mangle]
pub unsafe extern "C" fn eit_propagation_exponent(
    params: *const EitParams,
    model: i32,
    omega: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> EitStatus {
    guarded(|| {
        let (Some(p), Some(model)) = (params_ref(params), model_of(model)) else {
            return EIT_STATUS_INVALID_ARGUMENT;
        };
        if out_re.is_null() || out_im.is_null() {
            return EIT_STATUS_INVALID_ARGUMENT;
        }
        match propagation_exponent_for_model(p, omega, model) {
            Ok(l) => {
                *out_re = l.re;
                *out_im = l.im;
                EIT_STATUS_OK
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Power transmission e^{-2 Re Lambda L} of the corrected model.
#[no_mangle]
pub unsafe extern "C" fn eit_power_transmission(
    params: *const EitParams,
    omega: f64,
    length: f64,
    out: *mut f64,
) -> EitStatus {
    guarded(|| {
        let Some(p) = params_ref(params) else {
            return EIT_STATUS_INVALID_ARGUMENT;
        };
        if out.is_null() || !(length >= 0.0) {
            return EIT_STATUS_INVALID_ARGUMENT;
        }
        match propagation_exponent_for_model(p, omega, NoiseModel::OffDiagonal) {
            Ok(l) => {
                *out = (-2.0 * l.re * length).exp();
                EIT_STATUS_OK
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Slow-light group delay in seconds (co-moving convention: the vacuum
/// transit L/c is not included).
#[no_mangle]
pub unsafe extern "C" fn eit_group_delay(params: *const EitParams, out: *mut f64) -> EitStatus {
    guarded(|| {
        let Some(p) = params_ref(params) else {
            return EIT_STATUS_INVALID_ARGUMENT;
        };
        if out.is_null() {
            return EIT_STATUS_INVALID_ARGUMENT;
        }
        match group_delay(p) {
            Ok(tau) => {
                *out = tau;
                EIT_STATUS_OK
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Half-width of the transparency window (2 Re Lambda L = 1 crossing).
#[no_mangle]
pub unsafe extern "C" fn eit_transparency_width(
    params: *const EitParams,
    length: f64,
    out: *mut f64,
) -> EitStatus {
    guarded(|| {
        let Some(p) = params_ref(params) else {
            return EIT_STATUS_INVALID_ARGUMENT;
        };
        if out.is_null() {
            return EIT_STATUS_INVALID_ARGUMENT;
        }
        match transparency_width(p, length) {
            Ok(w) => {
                *out = w;
                EIT_STATUS_OK
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Steady state of the corrected Bloch equations for a constant probe.
/// Writes 8 values: sigma_bb, sigma_cc, Re/Im sigma_ba, Re/Im sigma_bc,
/// Re/Im sigma_ac.
#[no_mangle]
pub unsafe extern "C" fn eit_steady_state(
    params: *const EitParams,
    probe_re: f64,
    probe_im: f64,
    out_state: *mut f64,
) -> EitStatus {
    guarded(|| {
        let Some(p) = params_ref(params) else {
            return EIT_STATUS_INVALID_ARGUMENT;
        };
        if out_state.is_null() {
            return EIT_STATUS_INVALID_ARGUMENT;
        }
        match steady_state(p, eitsim::C64::new(probe_re, probe_im)) {
            Ok(ss) => {
                let v = ss.to_vector();
                for (i, x) in v.iter().enumerate() {
                    *out_state.add(i) = *x;
                }
                EIT_STATUS_OK
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Output quadrature variance (shot-noise units) for input variance
/// `s_in` at sideband `omega` after length `length`, for either model.
#[no_mangle]
pub unsafe extern "C" fn eit_output_spectrum_value(
    params: *const EitParams,
    model: i32,
    s_in: f64,
    omega: f64,
    length: f64,
    out: *mut f64,
) -> EitStatus {
    guarded(|| {
        let (Some(p), Some(model)) = (params_ref(params), model_of(model)) else {
            return EIT_STATUS_INVALID_ARGUMENT;
        };
        if out.is_null() || !(s_in >= 0.0) || !(length >= 0.0) {
            return EIT_STATUS_INVALID_ARGUMENT;
        }
        match output_value(model, s_in, p, omega, length) {
            Ok(v) => {
                *out = v;
                EIT_STATUS_OK
            }
            Err(e) => status_of(&e),
        }
    })
}

/// The flawed model's added-noise factor at sideband `omega`.
#[no_mangle]
pub unsafe extern "C" fn eit_added_noise_factor(
    params: *const EitParams,
    omega: f64,
    out: *mut f64,
) -> EitStatus {
    guarded(|| {
        let Some(p) = params_ref(params) else {
            return EIT_STATUS_INVALID_ARGUMENT;
        };
        if out.is_null() {
            return EIT_STATUS_INVALID_ARGUMENT;
        }
        match added_noise_factor_population_exchange(p, omega) {
            Ok(v) => {
                *out = v;
                EIT_STATUS_OK
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Line-center squeezing preservation ratio (1 - S_out) / (1 - S_in)
/// for a flat squeezed input of parameter `r`.
#[no_mangle]
pub unsafe extern "C" fn eit_squeezing_preservation(
    params: *const EitParams,
    r: f64,
    length: f64,
    out: *mut f64,
) -> EitStatus {
    guarded(|| {
        let Some(p) = params_ref(params) else {
            return EIT_STATUS_INVALID_ARGUMENT;
        };
        if out.is_null() || !(r >= 0.0) || !(length >= 0.0) {
            return EIT_STATUS_INVALID_ARGUMENT;
        }
        let grid = [-1.0, 0.0, 1.0];
        match squeezing_delay_report(r, p, length, &grid, SqueezingSource::Flat) {
            Ok(rep) => {
                *out = rep.preservation_ratio;
                EIT_STATUS_OK
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Duan inseparability sum for an r-squeezed EPR pair after arm B
/// crosses the medium at sideband `omega`, with arm A phase-compensated
/// against the channel rotation. Values below 4 mean the pair is still
/// entangled.
#[no_mangle]
pub unsafe extern "C" fn eit_duan_after_channel(
    params: *const EitParams,
    r: f64,
    omega: f64,
    length: f64,
    out: *mut f64,
) -> EitStatus {
    guarded(|| {
        let Some(p) = params_ref(params) else {
            return EIT_STATUS_INVALID_ARGUMENT;
        };
        if out.is_null() || !(r > 0.0) || !(length >= 0.0) {
            return EIT_STATUS_INVALID_ARGUMENT;
        }
        let (t, phi) = match channel_at(p, omega, length) {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        };
        let cm = epr_pair_from_squeezers(r, omega);
        let lossy = apply_loss_rotation(&cm, Arm::B, t, phi);
        let compensated = rotate_arm(&lossy, Arm::A, -phi);
        *out = duan_criterion(&compensated);
        EIT_STATUS_OK
    })
}
