//! Weak-probe linear response: the complex propagation exponent Λ(ω)
//! and the slow-light quantities built on it.
//!
//! Linearizing the Bloch equations around the dark state (σ_bb → 1,
//! σ_aa, σ_cc → 0) and Fourier transforming gives two closed equations
//! for the σ_ba and σ_bc sidebands; eliminating σ_bc yields
//!
//! ```text
//! Λ(ω) = (g²N/c) (γ_bc′ − iω) / [ (γ_ba − iω)(γ_bc′ − iω) + |Ω_c|² ]
//! ```
//!
//! in the co-moving frame (the free-space phase iω/c is dropped; see
//! [`group_delay`] for the sign convention).

use num_complex::Complex64 as C64;

use crate::error::{EitError, Result};
use crate::lambda_system::{AtomicParams, NoiseModel};

/// Λ(ω) sampled on a frequency grid.
#[derive(Debug, Clone)]
pub struct TransferFunction {
    pub omega_grid: Vec<f64>,
    pub lambda_values: Vec<C64>,
    pub params_snapshot: AtomicParams,
}

impl TransferFunction {
    /// Samples the closed-form exponent on `omega_grid`.
    pub fn sample(params: &AtomicParams, omega_grid: &[f64]) -> Result<Self> {
        if omega_grid.len() < 2 {
            return Err(EitError::GridMismatch("grid needs at least 2 points".into()));
        }
        if !omega_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(EitError::GridMismatch("grid must be strictly increasing".into()));
        }
        let lambda_values = omega_grid
            .iter()
            .map(|&w| propagation_exponent(params, w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            omega_grid: omega_grid.to_vec(),
            lambda_values,
            params_snapshot: params.clone(),
        })
    }
}

/// Λ(ω) with an explicit ground-coherence decay rate in place of γ_bc′.
/// The flawed model reuses this form with the population-exchange rate.
pub fn propagation_exponent_with_ground_rate(
    params: &AtomicParams,
    omega: f64,
    ground_rate: f64,
) -> Result<C64> {
    let numerator = C64::new(ground_rate, -omega);
    let denom = C64::new(params.gamma_ba, -omega) * numerator + params.omega_c.norm_sqr();
    if denom.norm() == 0.0 {
        return Err(EitError::DegenerateDenominator { omega });
    }
    Ok(params.coupling_per_length() * numerator / denom)
}

/// The closed-form propagation exponent of the corrected model.
pub fn propagation_exponent(params: &AtomicParams, omega: f64) -> Result<C64> {
    propagation_exponent_with_ground_rate(params, omega, params.gamma_bc_prime)
}

/// Λ(ω) for either dephasing model.
pub fn propagation_exponent_for_model(
    params: &AtomicParams,
    omega: f64,
    model: NoiseModel,
) -> Result<C64> {
    propagation_exponent_with_ground_rate(params, omega, params.ground_coherence_rate(model))
}

/// Redundant numerical route to Λ(ω): solve the 2×2 linear sideband
/// system in (σ̃_ba, σ̃_bc) for a unit probe instead of using the
/// eliminated closed form. Used by `verify` and by tests as an
/// independent cross-check.
pub fn propagation_exponent_linear_solve(params: &AtomicParams, omega: f64) -> Result<C64> {
    let i = C64::i();
    let oc = params.omega_c;
    // (gamma_ba - i w) s_ba - i Oc s_bc = i g
    // -i conj(Oc) s_ba + (gamma_bc' - i w) s_bc = 0
    let a11 = C64::new(params.gamma_ba, -omega);
    let a12 = -i * oc;
    let a21 = -i * oc.conj();
    let a22 = C64::new(params.gamma_bc_prime, -omega);
    let det = a11 * a22 - a12 * a21;
    if det.norm() == 0.0 {
        return Err(EitError::DegenerateDenominator { omega });
    }
    let rhs = i * params.g;
    let s_ba = a22 * rhs / det;
    // Field equation in the co-moving frame: dE/dz = (i g N / c) s_ba = -Lambda E.
    Ok(-(i * params.g * params.density / params.c_light) * s_ba / params.g)
}

/// Power transmission e^{−2 Re Λ(ω) L} of the corrected model.
pub fn power_transmission(params: &AtomicParams, omega: f64, length: f64) -> Result<f64> {
    let lambda = propagation_exponent(params, omega)?;
    Ok((-2.0 * lambda.re * length).exp())
}

/// Slow-light group delay relative to vacuum propagation, in seconds.
///
/// Evaluated as −L·d(Im Λ)/dω at ω = 0 by a Richardson-extrapolated
/// central difference with step h = 1e−6·max(γ_ba, |Ω_c|). With the
/// e^{−iωt} sideband convention used for Λ here, the physical delay of
/// a pure-delay channel e^{iωτ} carries the minus sign; the result is
/// positive for physical parameters and reduces to g²NL/(c|Ω_c|²) in
/// the ideal-EIT limit γ_bc′ = 0.
pub fn group_delay(params: &AtomicParams) -> Result<f64> {
    if params.g == 0.0 {
        return Ok(0.0);
    }
    if params.omega_c.norm() == 0.0 {
        return Err(EitError::Degenerate(
            "group delay requires a nonzero control field".into(),
        ));
    }
    let h = 1e-6 * params.gamma_ba.max(params.omega_c.norm());
    let slope = |h: f64| -> Result<f64> {
        let p = propagation_exponent(params, h)?;
        let m = propagation_exponent(params, -h)?;
        Ok((p.im - m.im) / (2.0 * h))
    };
    let d_h = slope(h)?;
    let d_h2 = slope(h / 2.0)?;
    let d = (4.0 * d_h2 - d_h) / 3.0;
    Ok(-params.length * d)
}

/// Half-width of the transparency window: the ω > 0 where the
/// absorption reaches 2·Re Λ(ω)·L = 1 (transmission e⁻¹), found by
/// bracketing on a geometric grid and bisection.
pub fn transparency_width(params: &AtomicParams, length: f64) -> Result<f64> {
    if params.g == 0.0 || params.density == 0.0 || length == 0.0 {
        return Err(EitError::NoRoot("medium is transparent at all frequencies".into()));
    }
    let f = |w: f64| -> Result<f64> {
        Ok(2.0 * propagation_exponent(params, w)?.re * length - 1.0)
    };
    let scale = params.rate_scale();
    let mut lo = 1e-9 * scale;
    let mut f_lo = f(lo)?;
    let mut hi = lo;
    let mut bracket = None;
    while hi < 1e9 * scale {
        hi = hi * 1.5;
        let f_hi = f(hi)?;
        if f_lo.signum() != f_hi.signum() {
            bracket = Some((lo, hi));
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| {
        EitError::NoRoot("2 Re Lambda L never crosses 1 in the search bracket".into())
    })?;
    let mut f_lo = f(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_system::AtomicParams;

    fn params(gamma_bc_prime: f64) -> AtomicParams {
        let mut p = AtomicParams::dimensionless(1.0, 1.0, C64::new(1.0, 0.0), gamma_bc_prime);
        p.gamma_ba = 1.0;
        p.gamma_ac = 1.0;
        p
    }

    #[test]
    fn perfect_transparency_at_line_center() {
        let p = params(0.0);
        let l = propagation_exponent(&p, 0.0).unwrap();
        assert_eq!(l, C64::new(0.0, 0.0));
        assert_eq!(power_transmission(&p, 0.0, 123.0).unwrap(), 1.0);
    }

    #[test]
    fn two_level_lorentzian_limit() {
        let mut p = params(0.25);
        p.omega_c = C64::new(0.0, 0.0);
        for w in [-2.0, 0.0, 0.7] {
            let l = propagation_exponent(&p, w).unwrap();
            let lorentzian = p.coupling_per_length() / C64::new(p.gamma_ba, -w);
            assert!((l - lorentzian).norm() < 1e-14);
        }
        // and the limit is approached continuously
        p.omega_c = C64::new(1e-8, 0.0);
        let l = propagation_exponent(&p, 0.4).unwrap();
        let lorentzian = p.coupling_per_length() / C64::new(p.gamma_ba, -0.4);
        assert!((l - lorentzian).norm() / lorentzian.norm() < 1e-10);
    }

    #[test]
    fn line_center_value() {
        let p = params(0.01);
        let l = propagation_exponent(&p, 0.0).unwrap();
        assert!((l.re - 0.01 / 1.01).abs() < 1e-15);
        assert!(l.im.abs() < 1e-15);
        let t = power_transmission(&p, 0.0, 100.0).unwrap();
        assert!((t - (-2.0_f64 * (0.01 / 1.01) * 100.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn conjugate_symmetry() {
        let p = params(0.03);
        for w in [0.1, 1.0, 7.5] {
            let plus = propagation_exponent(&p, w).unwrap();
            let minus = propagation_exponent(&p, -w).unwrap();
            assert!((plus.conj() - minus).norm() < 1e-14);
        }
    }

    #[test]
    fn linear_solve_matches_closed_form() {
        let p = params(0.02);
        for w in [-3.0, -0.4, 0.0, 0.9, 12.0] {
            let a = propagation_exponent(&p, w).unwrap();
            let b = propagation_exponent_linear_solve(&p, w).unwrap();
            assert!((a - b).norm() <= 1e-13 * (1.0 + a.norm()), "w={w}: {a} vs {b}");
        }
    }

    #[test]
    fn ideal_delay_closed_form() {
        let p = params(0.0);
        let tau = group_delay(&p).unwrap();
        let expected = p.coupling_per_length() * p.length / p.omega_c.norm_sqr();
        assert!((tau - expected).abs() < 1e-6 * expected);
        assert!(tau > 0.0);

        // doubling the control field quarters the delay
        let mut p2 = params(0.0);
        p2.omega_c = C64::new(2.0, 0.0);
        let tau2 = group_delay(&p2).unwrap();
        assert!((tau / tau2 - 4.0).abs() < 1e-4);
    }

    #[test]
    fn zero_coupling_zero_delay() {
        let mut p = params(0.0);
        p.g = 0.0;
        assert_eq!(group_delay(&p).unwrap(), 0.0);
    }

    #[test]
    fn transparency_width_behaviour() {
        let mut p = params(0.0);
        p.density = 10.0;
        let w1 = transparency_width(&p, 1.0).unwrap();
        let w2 = transparency_width(&p, 4.0).unwrap();
        assert!(w2 < w1, "width must shrink with length: {w1} vs {w2}");

        let mut pg = p.clone();
        pg.g = 0.0;
        assert!(matches!(
            transparency_width(&pg, 1.0),
            Err(EitError::NoRoot(_))
        ));
    }

    #[test]
    fn width_scales_with_control_power_in_deep_medium() {
        let mut p = params(0.0);
        p.density = 1e4; // deep medium
        let w1 = transparency_width(&p, 1.0).unwrap();
        let mut p2 = p.clone();
        p2.omega_c = C64::new(2.0, 0.0);
        let w2 = transparency_width(&p2, 1.0).unwrap();
        assert!((w2 / w1 - 4.0).abs() < 0.05 * 4.0, "ratio {}", w2 / w1);
    }
}
