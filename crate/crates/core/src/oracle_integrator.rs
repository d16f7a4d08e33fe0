//! Independent time-domain integration of the mean-field Bloch
//! equations, used as the brute-force oracle for the algebraic steady
//! state and for the closed-form propagation exponent.
//!
//! The stepper is an explicit Dormand–Prince 5(4) embedded pair with
//! PI-free step control. Parameter sets whose rate scales span more
//! than six decades are rejected up front instead of being ground
//! through with vanishing steps.

use nalgebra::SVector;
use num_complex::Complex64 as C64;

use crate::error::{EitError, Result};
use crate::lambda_system::{bloch_rhs, AtomicParams, BlochState};

/// Recorded time evolution of the atomic state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<BlochState>,
    pub params_snapshot: AtomicParams,
    pub probe: C64,
}

impl Trajectory {
    pub fn final_state(&self) -> BlochState {
        *self.states.last().expect("trajectory is never empty")
    }
}

const STIFFNESS_BUDGET: f64 = 1e6;

fn stiffness_check(params: &AtomicParams, probe: C64) -> Result<()> {
    let rates: Vec<f64> = [
        params.gamma_b,
        params.gamma_c,
        params.gamma_ba,
        params.gamma_ac,
        params.gamma_bc_prime,
        params.omega_c.norm(),
        params.g * probe.norm(),
    ]
    .into_iter()
    .filter(|&r| r > 0.0)
    .collect();
    if rates.is_empty() {
        return Ok(());
    }
    let max = rates.iter().cloned().fold(f64::MIN, f64::max);
    let min = rates.iter().cloned().fold(f64::MAX, f64::min);
    let ratio = max / min;
    if ratio > STIFFNESS_BUDGET {
        return Err(EitError::StiffnessExceeded { ratio });
    }
    Ok(())
}

/// Dormand–Prince 5(4) step on an N-vector. Returns (y5, error_estimate).
fn dp45_step<const N: usize, F>(
    f: &F,
    t: f64,
    y: &SVector<f64, N>,
    h: f64,
) -> (SVector<f64, N>, f64)
where
    F: Fn(f64, &SVector<f64, N>) -> SVector<f64, N>,
{
    let k1 = f(t, y);
    let k2 = f(t + h / 5.0, &(y + h * (k1 / 5.0)));
    let k3 = f(t + 3.0 * h / 10.0, &(y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2)));
    let k4 = f(
        t + 4.0 * h / 5.0,
        &(y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3)),
    );
    let k5 = f(
        t + 8.0 * h / 9.0,
        &(y + h
            * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 + 64448.0 / 6561.0 * k3
                - 212.0 / 729.0 * k4)),
    );
    let k6 = f(
        t + h,
        &(y + h
            * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 + 46732.0 / 5247.0 * k3
                + 49.0 / 176.0 * k4
                - 5103.0 / 18656.0 * k5)),
    );
    let y5 = y + h
        * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5
            + 11.0 / 84.0 * k6);
    let k7 = f(t + h, &y5);
    let y4 = y + h
        * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 + 393.0 / 640.0 * k4
            - 92097.0 / 339200.0 * k5
            + 187.0 / 2100.0 * k6
            + 1.0 / 40.0 * k7);
    ((y5), (y5 - y4).amax())
}

/// Adaptive integration of y' = f(t, y) from t0 to t1 with local error
/// tolerance `tol`, calling `record` after every accepted step.
pub(crate) fn integrate_adaptive<const N: usize, F, R>(
    f: F,
    y0: SVector<f64, N>,
    t0: f64,
    t1: f64,
    tol: f64,
    mut record: R,
) -> Result<SVector<f64, N>>
where
    F: Fn(f64, &SVector<f64, N>) -> SVector<f64, N>,
    R: FnMut(f64, &SVector<f64, N>),
{
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut h = span * 1e-3;
    let h_floor = span * 1e-14;

    while t < t1 {
        if h < h_floor {
            return Err(EitError::StepUnderflow { t, h });
        }
        if t + h > t1 {
            h = t1 - t;
        }
        let (y_new, err) = dp45_step(&f, t, &y, h);
        let scale = tol * (1.0 + y.amax());
        if err <= scale {
            t += h;
            y = y_new;
            record(t, &y);
            let grow = if err > 0.0 {
                0.9 * (scale / err).powf(0.2)
            } else {
                5.0
            };
            h *= grow.clamp(0.2, 5.0);
        } else {
            h *= (0.9 * (scale / err).powf(0.2)).clamp(0.1, 0.9);
        }
    }
    Ok(y)
}

/// Integrates the Bloch equations with a constant probe, recording the
/// full trajectory.
pub fn integrate(
    params: &AtomicParams,
    probe: C64,
    initial: &BlochState,
    t_final: f64,
    tol: f64,
) -> Result<Trajectory> {
    params.validate()?;
    if !(t_final > 0.0) {
        return Err(EitError::InvalidParams(format!("t_final must be positive, got {t_final}")));
    }
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(EitError::InvalidParams(format!("tol must lie in (0, 1e-3], got {tol}")));
    }
    stiffness_check(params, probe)?;

    let mut times = vec![0.0];
    let mut states = vec![*initial];
    let f = |_t: f64, y: &SVector<f64, 8>| {
        bloch_rhs(&BlochState::from_vector(y), params, probe).to_vector()
    };
    integrate_adaptive(f, initial.to_vector(), 0.0, t_final, tol, |t, y| {
        times.push(t);
        states.push(BlochState::from_vector(y));
    })?;
    Ok(Trajectory {
        times,
        states,
        params_snapshot: params.clone(),
        probe,
    })
}

/// Slowest relaxation rate estimate used to size settling times: the
/// individual spontaneous channels γ_b and γ_c, and the EIT pumping
/// rate γ_bc′ + |Ω_c|²/γ_ba of the ground-state coherence. Settling
/// horizons are sized with generous multiples of 1/slow_rate because
/// this is an estimate, not the exact slowest Liouvillian eigenvalue.
pub fn slow_rate(params: &AtomicParams) -> f64 {
    let ground = if params.gamma_ba > 0.0 {
        params.gamma_bc_prime + params.omega_c.norm_sqr() / params.gamma_ba
    } else {
        params.gamma_bc_prime
    };
    [params.gamma_b, params.gamma_c, ground]
        .into_iter()
        .filter(|&r| r > 0.0)
        .fold(f64::INFINITY, f64::min)
}

/// Number of modulation periods in the demodulation window.
const DEMOD_PERIODS: usize = 20;

/// Complex per-unit-field sideband response of σ_ba to a weakly
/// modulated probe E(t) = E₀(1 + m·e^{−iωt}), extracted by quadrature
/// demodulation over an integer number of periods after settling.
/// At ω = 0 the modulation degenerates to a static offset and the
/// response is taken as a finite difference of long-time integrations.
///
/// Multiplying the result by −i·g·N/c reproduces the co-moving
/// propagation exponent −Λ(ω)·(−1); see `lambda_from_susceptibility`.
pub fn step_response_susceptibility(
    params: &AtomicParams,
    probe_amplitude: f64,
    modulation_freq: f64,
) -> Result<C64> {
    params.validate()?;
    let slow = slow_rate(params);
    if !slow.is_finite() || slow <= 0.0 {
        return Err(EitError::Degenerate(
            "no relaxation channel: settling time is unbounded".into(),
        ));
    }
    // Modulation depth: large enough that the demodulated signal sits
    // far above the integrator's error floor, small enough that the
    // sideband stays in the linear regime (corrections are O(m·ε²)).
    let m = 1e-2;
    let e0 = C64::new(probe_amplitude, 0.0);
    let tol = 1e-12;

    if modulation_freq == 0.0 {
        // Static response: central difference of the settled sigma_ba.
        // The offset must dominate the accumulated integration error of
        // the two runs, so it is a fraction of the probe itself rather
        // than of order m; the response is linear to O(ε²) anyway.
        let settle = 50.0 / slow;
        let delta = 0.1 * probe_amplitude;
        let settled = |amp: f64| -> Result<C64> {
            let tr = integrate(params, C64::new(amp, 0.0), &BlochState::dark(), settle, tol)?;
            Ok(tr.final_state().sigma_ba)
        };
        let plus = settled(probe_amplitude + delta)?;
        let minus = settled(probe_amplitude - delta)?;
        return Ok((plus - minus) / (2.0 * delta));
    }

    let omega = modulation_freq;
    let period = 2.0 * std::f64::consts::PI / omega.abs();
    let settle = 40.0 / slow; // reach the modulated periodic steady state
    let window = DEMOD_PERIODS as f64 * period;

    let probe_fn = |t: f64| e0 * (1.0 + m * (C64::new(0.0, -omega * t)).exp());
    let f = |t: f64, y: &SVector<f64, 10>| {
        let state = BlochState::from_vector(&y.fixed_rows::<8>(0).into_owned());
        let d = bloch_rhs(&state, params, probe_fn(t)).to_vector();
        let mut out = SVector::<f64, 10>::zeros();
        out.fixed_rows_mut::<8>(0).copy_from(&d);
        // Demodulation accumulators integrate sigma_ba e^{+i omega t}
        // but only once the window opens.
        if t >= settle {
            let z = state.sigma_ba * (C64::new(0.0, omega * t)).exp();
            out[8] = z.re;
            out[9] = z.im;
        }
        out
    };

    let mut y0 = SVector::<f64, 10>::zeros();
    y0.fixed_rows_mut::<8>(0)
        .copy_from(&BlochState::dark().to_vector());
    let y_end = integrate_adaptive(f, y0, 0.0, settle + window, tol, |_, _| {})?;

    let integral = C64::new(y_end[8], y_end[9]);
    Ok(integral / window / (m * e0))
}

/// Converts a sideband susceptibility into the co-moving propagation
/// exponent it implies: Λ = −(i·g·N/c)·χ.
pub fn lambda_from_susceptibility(params: &AtomicParams, chi: C64) -> C64 {
    -C64::i() * params.g * params.density / params.c_light * chi
}
