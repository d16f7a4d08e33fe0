//! Two-mode Gaussian treatment of an EPR beam pair with one arm sent
//! through the EIT medium, and the continuous-variable entanglement
//! criteria evaluated per sideband.
//!
//! Quadrature ordering is (X_A, P_A, X_B, P_B) with vacuum variance 1,
//! so the Duan separability bound is 4 and the Reid EPR boundary is 1.

use nalgebra::{Matrix2, Matrix4};

use crate::error::{EitError, Result};
use crate::lambda_system::AtomicParams;
use crate::linear_response::{group_delay, propagation_exponent};

/// Which beam of the pair an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    A,
    B,
}

/// 4×4 two-mode covariance matrix at one sideband frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    pub entries: Matrix4<f64>,
    /// Sideband frequency this matrix refers to, rad/s.
    pub sideband: f64,
}

impl CovarianceMatrix {
    pub fn new(entries: Matrix4<f64>, sideband: f64) -> Result<Self> {
        if (entries - entries.transpose()).amax() > 1e-12 {
            return Err(EitError::InvalidParams("covariance matrix must be symmetric".into()));
        }
        Ok(Self { entries, sideband })
    }

    /// Symplectic eigenvalues (ν₋, ν₊), from the two-mode invariants.
    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        let m = &self.entries;
        let a = m.fixed_view::<2, 2>(0, 0).into_owned();
        let b = m.fixed_view::<2, 2>(2, 2).into_owned();
        let c = m.fixed_view::<2, 2>(0, 2).into_owned();
        let delta = a.determinant() + b.determinant() + 2.0 * c.determinant();
        let det = m.determinant();
        let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
        let nu_minus = ((delta - disc) / 2.0).max(0.0).sqrt();
        let nu_plus = ((delta + disc) / 2.0).max(0.0).sqrt();
        (nu_minus, nu_plus)
    }

    /// Bona-fide uncertainty condition: both symplectic eigenvalues ≥ 1.
    pub fn is_physical(&self, tol: f64) -> bool {
        let (nu_minus, _) = self.symplectic_eigenvalues();
        nu_minus >= 1.0 - tol
    }
}

fn rotation(phi: f64) -> Matrix2<f64> {
    Matrix2::new(phi.cos(), -phi.sin(), phi.sin(), phi.cos())
}

fn arm_offset(arm: Arm) -> usize {
    match arm {
        Arm::A => 0,
        Arm::B => 2,
    }
}

/// Two-mode squeezed vacuum from two orthogonally squeezed vacua on a
/// balanced beamsplitter: diagonal blocks cosh(2r)·I, off-diagonal
/// blocks sinh(2r)·diag(1, −1).
pub fn epr_pair_from_squeezers(r: f64, sideband: f64) -> CovarianceMatrix {
    let ch = (2.0 * r).cosh();
    let sh = (2.0 * r).sinh();
    #[rustfmt::skip]
    let entries = Matrix4::new(
        ch,  0.0, sh,  0.0,
        0.0, ch,  0.0, -sh,
        sh,  0.0, ch,  0.0,
        0.0, -sh, 0.0, ch,
    );
    CovarianceMatrix { entries, sideband }
}

/// Applies a pure quadrature rotation (e.g. a delay phase) to one arm.
pub fn rotate_arm(cm: &CovarianceMatrix, arm: Arm, phi: f64) -> CovarianceMatrix {
    let mut s = Matrix4::identity();
    let o = arm_offset(arm);
    s.fixed_view_mut::<2, 2>(o, o).copy_from(&rotation(phi));
    CovarianceMatrix {
        entries: s * cm.entries * s.transpose(),
        sideband: cm.sideband,
    }
}

/// The medium's transmission and quadrature rotation at one sideband.
pub fn channel_at(params: &AtomicParams, omega: f64, length: f64) -> Result<(f64, f64)> {
    let lambda = propagation_exponent(params, omega)?;
    let t = (-2.0 * lambda.re * length).exp();
    let phi = -lambda.im * length;
    Ok((t, phi))
}

/// Sends one arm through the corrected EIT medium as a one-mode
/// Gaussian channel: X → √T·R(φ)·X on that arm plus (1 − T)·I of
/// replaced vacuum, with T = e^{−2ReΛL} and φ = −ImΛ·L.
pub fn apply_eit_channel(
    cm: &CovarianceMatrix,
    params: &AtomicParams,
    length: f64,
    arm: Arm,
) -> Result<CovarianceMatrix> {
    let (t, phi) = channel_at(params, cm.sideband, length)?;
    Ok(apply_loss_rotation(cm, arm, t, phi))
}

/// The same channel with explicit (T, φ); used by oracles and tests.
pub fn apply_loss_rotation(cm: &CovarianceMatrix, arm: Arm, t: f64, phi: f64) -> CovarianceMatrix {
    let mut s = Matrix4::identity();
    let o = arm_offset(arm);
    s.fixed_view_mut::<2, 2>(o, o).copy_from(&(t.sqrt() * rotation(phi)));
    let mut entries = s * cm.entries * s.transpose();
    entries[(o, o)] += 1.0 - t;
    entries[(o + 1, o + 1)] += 1.0 - t;
    CovarianceMatrix {
        entries,
        sideband: cm.sideband,
    }
}

/// Duan inseparability sum V(X_A − X_B) + V(P_A + P_B). Separable
/// states satisfy ≥ 4 in this convention; smaller means entangled.
pub fn duan_criterion(cm: &CovarianceMatrix) -> f64 {
    let m = &cm.entries;
    let v_x = m[(0, 0)] + m[(2, 2)] - 2.0 * m[(0, 2)];
    let v_p = m[(1, 1)] + m[(3, 3)] + 2.0 * m[(1, 3)];
    v_x + v_p
}

/// Reid EPR product V(X_A|X_B)·V(P_A|P_B) of conditional variances;
/// below 1 demonstrates the EPR paradox.
pub fn reid_epr_criterion(cm: &CovarianceMatrix) -> Result<f64> {
    let m = &cm.entries;
    let v_xb = m[(2, 2)];
    let v_pb = m[(3, 3)];
    if v_xb == 0.0 || v_pb == 0.0 {
        return Err(EitError::DegenerateConditioning);
    }
    let v_x_cond = m[(0, 0)] - m[(0, 2)] * m[(0, 2)] / v_xb;
    let v_p_cond = m[(1, 1)] - m[(1, 3)] * m[(1, 3)] / v_pb;
    Ok(v_x_cond * v_p_cond)
}

/// How the un-delayed arm is re-synchronized with the delayed one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseCompensation {
    /// No compensation; raw channel output.
    None,
    /// Pure delay phase on arm A: rotate by −ωτ.
    Delay(f64),
    /// Cancel the channel's rotation exactly at each sideband.
    Exact,
}

/// Result of [`entanglement_delay_report`].
#[derive(Debug, Clone)]
pub struct EntanglementDelayReport {
    pub omega_grid: Vec<f64>,
    pub duan: Vec<f64>,
    pub reid: Vec<f64>,
    pub delay_s: f64,
    /// Largest ω ≥ 0 such that every grid point in [0, ω] stays below
    /// the Duan separability bound (half-width of the entangled band);
    /// 0 if the line center itself is separable.
    pub entangled_bandwidth: f64,
}

/// Sweeps the sideband grid, sending arm B of an EPR pair through the
/// medium, compensating arm A's phase, and evaluating both criteria.
pub fn entanglement_delay_report(
    r: f64,
    params: &AtomicParams,
    length: f64,
    omega_grid: &[f64],
    compensation: PhaseCompensation,
) -> Result<EntanglementDelayReport> {
    if r <= 0.0 {
        return Err(EitError::InvalidParams(format!("squeezing r must be positive, got {r}")));
    }
    let delay_s = group_delay(params)?;
    let mut duan = Vec::with_capacity(omega_grid.len());
    let mut reid = Vec::with_capacity(omega_grid.len());
    for &w in omega_grid {
        let cm = epr_pair_from_squeezers(r, w);
        let out = apply_eit_channel(&cm, params, length, Arm::B)?;
        let out = match compensation {
            PhaseCompensation::None => out,
            PhaseCompensation::Delay(tau) => rotate_arm(&out, Arm::A, -w * tau),
            PhaseCompensation::Exact => {
                let (_, phi) = channel_at(params, w, length)?;
                rotate_arm(&out, Arm::A, -phi)
            }
        };
        duan.push(duan_criterion(&out));
        reid.push(reid_epr_criterion(&out)?);
    }

    // Contiguous entangled band around line center.
    let center = omega_grid
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.abs().total_cmp(&b.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut entangled_bandwidth = 0.0;
    if duan.get(center).is_some_and(|&d| d < 4.0) {
        for (i, &d) in duan.iter().enumerate().skip(center) {
            if d < 4.0 {
                entangled_bandwidth = omega_grid[i].abs();
            } else {
                break;
            }
        }
    }

    Ok(EntanglementDelayReport {
        omega_grid: omega_grid.to_vec(),
        duan,
        reid,
        delay_s,
        entangled_bandwidth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    #[test]
    fn epr_pair_shape() {
        let cm = epr_pair_from_squeezers(0.0, 0.0);
        assert_eq!(cm.entries, Matrix4::identity());

        let cm = epr_pair_from_squeezers(0.5, 0.0);
        assert!((cm.entries[(0, 0)] - 1.0_f64.cosh()).abs() < 1e-12);
        assert!((cm.entries[(0, 2)] - 1.0_f64.sinh()).abs() < 1e-12);
        assert!((cm.entries[(1, 3)] + 1.0_f64.sinh()).abs() < 1e-12);
        // Pure states sit exactly on the uncertainty boundary; the
        // discriminant square root turns ~1e-15 roundoff into ~1e-8.
        assert!(cm.is_physical(1e-7));
    }

    #[test]
    fn partial_transpose_symplectic_spectrum() {
        // Partially transposing arm B flips the sign of P_B; the
        // smaller symplectic eigenvalue of the result is e^{-2r}.
        let r = 0.5;
        let cm = epr_pair_from_squeezers(r, 0.0);
        let mut flip = Matrix4::identity();
        flip[(3, 3)] = -1.0;
        let pt = CovarianceMatrix {
            entries: flip * cm.entries * flip,
            sideband: 0.0,
        };
        let (nu_minus, nu_plus) = pt.symplectic_eigenvalues();
        assert!((nu_minus - (-2.0 * r).exp()).abs() < 1e-12);
        assert!((nu_plus - (2.0 * r).exp()).abs() < 1e-12);
    }

    #[test]
    fn duan_closed_forms() {
        let id = CovarianceMatrix {
            entries: Matrix4::identity(),
            sideband: 0.0,
        };
        assert_eq!(duan_criterion(&id), 4.0);

        for r in [0.1, 0.5, 1.2] {
            let cm = epr_pair_from_squeezers(r, 0.0);
            assert!((duan_criterion(&cm) - 4.0 * (-2.0 * r).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn reid_closed_forms() {
        let id = CovarianceMatrix {
            entries: Matrix4::identity(),
            sideband: 0.0,
        };
        assert_eq!(reid_epr_criterion(&id).unwrap(), 1.0);

        for r in [0.1, 0.5, 1.2] {
            let cm = epr_pair_from_squeezers(r, 0.0);
            let expect = (2.0 * r).cosh().powi(-2);
            assert!((reid_epr_criterion(&cm).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_channel_is_identity() {
        let cm = epr_pair_from_squeezers(0.7, 0.3);
        let out = apply_loss_rotation(&cm, Arm::B, 1.0, 0.0);
        assert_eq!(out.entries, cm.entries);
    }

    #[test]
    fn full_absorption_replaces_arm_with_vacuum() {
        let cm = epr_pair_from_squeezers(0.5, 0.0);
        let out = apply_loss_rotation(&cm, Arm::B, 0.0, 0.0);
        let b = out.entries.fixed_view::<2, 2>(2, 2).into_owned();
        assert_eq!(b, Matrix2::identity());
        assert_eq!(out.entries[(0, 2)], 0.0);
        assert_eq!(out.entries[(1, 3)], 0.0);
        // Arm A stays thermal, so the pair is separable but not two vacua.
        let duan = duan_criterion(&out);
        assert!(duan >= 4.0);
        assert!((duan - 2.0 * (1.0 + 1.0_f64.cosh())).abs() < 1e-12);
    }

    #[test]
    fn lossy_channel_example() {
        // Brute-force matrix algebra for r = 0.5, T = 0.98, phi = 0.
        let r: f64 = 0.5;
        let t: f64 = 0.98;
        let cm = epr_pair_from_squeezers(r, 0.0);
        let out = apply_loss_rotation(&cm, Arm::B, t, 0.0);
        let expect =
            2.0 * ((2.0 * r).cosh() * (1.0 + t) + (1.0 - t) - 2.0 * t.sqrt() * (2.0 * r).sinh());
        assert!((duan_criterion(&out) - expect).abs() < 1e-12);
        // Mild loss degrades but does not destroy the entanglement.
        assert!(duan_criterion(&out) > 4.0 * (-2.0 * r).exp());
        assert!(duan_criterion(&out) < 4.0);
    }

    #[test]
    fn channel_preserves_physicality() {
        let cm = epr_pair_from_squeezers(1.0, 0.0);
        for (t, phi) in [(0.3, 0.7), (0.9, -1.2), (0.01, 3.0)] {
            let out = apply_loss_rotation(&cm, Arm::B, t, phi);
            assert!(out.is_physical(1e-10), "T={t} phi={phi}");
        }
    }

    #[test]
    fn phase_compensation_never_hurts() {
        let cm = epr_pair_from_squeezers(0.5, 0.0);
        for phi in [0.1, 0.8, 2.0] {
            let out = apply_loss_rotation(&cm, Arm::B, 0.9, phi);
            let raw = duan_criterion(&out);
            let comp = duan_criterion(&rotate_arm(&out, Arm::A, -phi));
            assert!(comp <= raw + 1e-12, "phi={phi}: comp {comp} raw {raw}");
        }
    }

    #[test]
    fn report_sweep() {
        let mut p = AtomicParams::dimensionless(1.0, 10.0, C64::new(1.0, 0.0), 0.0);
        p.gamma_ba = 1.0;
        p.gamma_ac = 1.0;
        let grid: Vec<f64> = (-40..=40).map(|k| k as f64 * 0.05).collect();
        let rep =
            entanglement_delay_report(0.5, &p, 1.0, &grid, PhaseCompensation::Exact).unwrap();
        // Perfect transparency at line center: source value survives.
        let center = grid.iter().position(|&w| w == 0.0).unwrap();
        assert!((rep.duan[center] - 4.0 * (-1.0_f64).exp()).abs() < 1e-10);
        assert!(rep.entangled_bandwidth > 0.0);
        assert!(rep.delay_s > 0.0);
    }

    #[test]
    fn duan_degrades_with_dephasing() {
        let mut last = 0.0;
        for (i, gbc) in (0..10).map(|k| (k, k as f64 * 2e-3)) {
            let mut p = AtomicParams::dimensionless(1.0, 10.0, C64::new(1.0, 0.0), gbc);
            p.gamma_ba = 1.0;
            p.gamma_ac = 1.0;
            let cm = epr_pair_from_squeezers(0.5, 0.0);
            let out = apply_eit_channel(&cm, &p, 1.0, Arm::B).unwrap();
            let d = duan_criterion(&out);
            if i > 0 {
                assert!(d > last, "duan must grow with dephasing: {d} vs {last}");
            }
            last = d;
        }
    }
}
