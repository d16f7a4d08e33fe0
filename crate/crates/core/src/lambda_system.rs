//! The Λ-type atomic model: parameters, mean-field Bloch equations,
//! steady states, and the weak-probe consistency diagnostic.
//!
//! Level labels: |a⟩ excited, |b⟩ and |c⟩ ground. The probe couples
//! b↔a, the control field couples c↔a. The excited-state population
//! σ_aa is eliminated by the trace condition, leaving five independent
//! density-matrix elements.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64 as C64;

use crate::error::{EitError, Result};

/// Threshold constant for the second-order consistency verdict:
/// the corrected model is called consistent when 1 − σ_bb ≤ K·ε².
/// An order-of-magnitude guard, not a sharp physical bound.
pub const CONSISTENCY_K: f64 = 10.0;

/// Which ground-state decoherence mechanism a calculation assumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseModel {
    /// Dephasing of the b–c coherence only (elastic collisions); the
    /// corrected, commutation-preserving model.
    OffDiagonal,
    /// Population transfer between the ground states (inelastic
    /// collisions); the flawed model kept for contrast.
    PopulationExchange,
}

/// All rates and couplings of the Λ medium.
///
/// Rates are in rad/s (or any single consistent unit; the presets use a
/// dimensionless system with γ_ba = 1). The coupling enters observables
/// only through g²·density/c_light, which has units of rate per meter.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicParams {
    /// Probe coupling strength g, taken real and nonnegative; any phase
    /// of a complex coupling is absorbed into the probe amplitude.
    pub g: f64,
    /// Atomic number-density coupling factor N.
    pub density: f64,
    /// Control Rabi frequency Ω_c.
    pub omega_c: C64,
    /// Decay rate of |a⟩ → |b⟩.
    pub gamma_b: f64,
    /// Decay rate of |a⟩ → |c⟩.
    pub gamma_c: f64,
    /// Optical coherence decay rate of σ_ba.
    pub gamma_ba: f64,
    /// Optical coherence decay rate of σ_ac.
    pub gamma_ac: f64,
    /// Off-diagonal ground-state dephasing γ_bc′ (corrected model).
    pub gamma_bc_prime: f64,
    /// Population-exchange ground-state rate γ_bc; used only by the
    /// flawed model's closed forms.
    pub gamma_bc_popexch: f64,
    /// The rate γ appearing in the flawed output spectrum. Not defined
    /// by the model itself; defaults to γ_b + γ_c.
    pub gamma_total: f64,
    /// Medium length L in meters.
    pub length: f64,
    /// Speed of light (set to 1 in the dimensionless presets).
    pub c_light: f64,
}

impl AtomicParams {
    /// A dimensionless parameter set with γ_ba = 1 setting the scale.
    ///
    /// The optical coherence rates default to (γ_b + γ_c)/2 + γ_bc′/2
    /// unless overridden afterwards; the population decays are split
    /// evenly. `gamma_total` defaults to γ_b + γ_c.
    pub fn dimensionless(g: f64, density: f64, omega_c: C64, gamma_bc_prime: f64) -> Self {
        let gamma_b = 0.5;
        let gamma_c = 0.5;
        let gamma_opt = (gamma_b + gamma_c) / 2.0 + gamma_bc_prime / 2.0;
        Self {
            g,
            density,
            omega_c,
            gamma_b,
            gamma_c,
            gamma_ba: gamma_opt,
            gamma_ac: gamma_opt,
            gamma_bc_prime,
            gamma_bc_popexch: 0.0,
            gamma_total: gamma_b + gamma_c,
            length: 1.0,
            c_light: 1.0,
        }
    }

    /// Checks the sign invariants on all fields.
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("g", self.g),
            ("density", self.density),
            ("gamma_b", self.gamma_b),
            ("gamma_c", self.gamma_c),
            ("gamma_ba", self.gamma_ba),
            ("gamma_ac", self.gamma_ac),
            ("gamma_bc_prime", self.gamma_bc_prime),
            ("gamma_bc_popexch", self.gamma_bc_popexch),
            ("gamma_total", self.gamma_total),
            ("length", self.length),
        ];
        for (name, v) in named {
            if !v.is_finite() || v < 0.0 {
                return Err(EitError::InvalidParams(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        if !self.c_light.is_finite() || self.c_light <= 0.0 {
            return Err(EitError::InvalidParams(format!(
                "c_light must be positive, got {}",
                self.c_light
            )));
        }
        if !self.omega_c.re.is_finite() || !self.omega_c.im.is_finite() {
            return Err(EitError::InvalidParams("omega_c must be finite".into()));
        }
        Ok(())
    }

    /// g²N / c, the strength prefactor of the propagation exponent.
    pub fn coupling_per_length(&self) -> f64 {
        self.g * self.g * self.density / self.c_light
    }

    /// The ground-coherence decay rate a given model substitutes into
    /// the propagation exponent.
    pub fn ground_coherence_rate(&self, model: NoiseModel) -> f64 {
        match model {
            NoiseModel::OffDiagonal => self.gamma_bc_prime,
            NoiseModel::PopulationExchange => self.gamma_bc_popexch,
        }
    }

    /// Largest rate scale in the problem, used for relative tolerances.
    pub fn rate_scale(&self) -> f64 {
        [
            self.gamma_b,
            self.gamma_c,
            self.gamma_ba,
            self.gamma_ac,
            self.gamma_bc_prime,
            self.omega_c.norm(),
        ]
        .into_iter()
        .fold(1.0_f64, f64::max)
    }
}

/// Mean values of the five independent density-matrix elements.
/// σ_aa = 1 − σ_bb − σ_cc; the remaining coherences are conjugates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub sigma_bb: f64,
    pub sigma_cc: f64,
    pub sigma_ba: C64,
    pub sigma_bc: C64,
    pub sigma_ac: C64,
}

impl BlochState {
    /// All population in |b⟩, no coherences: the dark state at zero probe.
    pub fn dark() -> Self {
        Self {
            sigma_bb: 1.0,
            sigma_cc: 0.0,
            sigma_ba: C64::new(0.0, 0.0),
            sigma_bc: C64::new(0.0, 0.0),
            sigma_ac: C64::new(0.0, 0.0),
        }
    }

    /// Excited-state population implied by the trace.
    pub fn sigma_aa(&self) -> f64 {
        1.0 - self.sigma_bb - self.sigma_cc
    }

    /// Population and positivity invariants, within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        let pops_ok = self.sigma_bb >= -tol
            && self.sigma_bb <= 1.0 + tol
            && self.sigma_cc >= -tol
            && self.sigma_cc <= 1.0 + tol
            && self.sigma_bb + self.sigma_cc <= 1.0 + tol;
        let pos = |cij: C64, pi: f64, pj: f64| cij.norm_sqr() <= pi.max(0.0) * pj.max(0.0) + tol;
        pops_ok
            && pos(self.sigma_ba, self.sigma_bb, self.sigma_aa())
            && pos(self.sigma_bc, self.sigma_bb, self.sigma_cc)
            && pos(self.sigma_ac, self.sigma_aa(), self.sigma_cc)
    }

    /// Packs into the real 8-vector used by the solver and integrator.
    pub fn to_vector(&self) -> SVector<f64, 8> {
        SVector::<f64, 8>::from([
            self.sigma_bb,
            self.sigma_cc,
            self.sigma_ba.re,
            self.sigma_ba.im,
            self.sigma_bc.re,
            self.sigma_bc.im,
            self.sigma_ac.re,
            self.sigma_ac.im,
        ])
    }

    pub fn from_vector(v: &SVector<f64, 8>) -> Self {
        Self {
            sigma_bb: v[0],
            sigma_cc: v[1],
            sigma_ba: C64::new(v[2], v[3]),
            sigma_bc: C64::new(v[4], v[5]),
            sigma_ac: C64::new(v[6], v[7]),
        }
    }
}

/// Time derivative of a [`BlochState`]. Population derivatives are real
/// by the conjugate structure of the equations.
#[derive(Debug, Clone, Copy)]
pub struct BlochDeriv {
    pub d_sigma_bb: f64,
    pub d_sigma_cc: f64,
    pub d_sigma_ba: C64,
    pub d_sigma_bc: C64,
    pub d_sigma_ac: C64,
}

impl BlochDeriv {
    pub fn to_vector(&self) -> SVector<f64, 8> {
        SVector::<f64, 8>::from([
            self.d_sigma_bb,
            self.d_sigma_cc,
            self.d_sigma_ba.re,
            self.d_sigma_ba.im,
            self.d_sigma_bc.re,
            self.d_sigma_bc.im,
            self.d_sigma_ac.re,
            self.d_sigma_ac.im,
        ])
    }

    pub fn max_norm(&self) -> f64 {
        [
            self.d_sigma_bb.abs(),
            self.d_sigma_cc.abs(),
            self.d_sigma_ba.norm(),
            self.d_sigma_bc.norm(),
            self.d_sigma_ac.norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Mean-field right-hand side of the corrected Bloch equations, with
/// σ_aa eliminated by the trace and the lower-triangle coherences taken
/// as conjugates.
pub fn bloch_rhs(state: &BlochState, params: &AtomicParams, probe: C64) -> BlochDeriv {
    let i = C64::i();
    let g = params.g;
    let oc = params.omega_c;
    let e = probe;

    let s_aa = state.sigma_aa();
    let s_ab = state.sigma_ba.conj();
    let s_ca = state.sigma_ac.conj();

    // Population derivatives: imaginary parts cancel identically, keep .re.
    let d_bb = params.gamma_b * s_aa + (-i * g * e * s_ab + i * g * e.conj() * state.sigma_ba).re;
    let d_cc = params.gamma_c * s_aa + (-i * oc * state.sigma_ac + i * oc.conj() * s_ca).re;

    let d_ba = -params.gamma_ba * state.sigma_ba
        + i * g * e * (state.sigma_bb - s_aa)
        + i * oc * state.sigma_bc;
    let d_bc = -params.gamma_bc_prime * state.sigma_bc - i * g * e * state.sigma_ac
        + i * oc.conj() * state.sigma_ba;
    let d_ac = -params.gamma_ac * state.sigma_ac - i * g * e.conj() * state.sigma_bc
        + i * oc.conj() * C64::new(s_aa - state.sigma_cc, 0.0);

    BlochDeriv {
        d_sigma_bb: d_bb,
        d_sigma_cc: d_cc,
        d_sigma_ba: d_ba,
        d_sigma_bc: d_bc,
        d_sigma_ac: d_ac,
    }
}

/// The σ_aa equation eliminated by the trace; used by tests to assert
/// trace conservation. Its implied decay is γ_b + γ_c.
pub fn implied_sigma_aa_rhs(state: &BlochState, params: &AtomicParams, probe: C64) -> f64 {
    let i = C64::i();
    let g = params.g;
    let oc = params.omega_c;
    let s_aa = state.sigma_aa();
    let s_ab = state.sigma_ba.conj();
    let s_ca = state.sigma_ac.conj();
    (-(params.gamma_b + params.gamma_c) * s_aa)
        + (i * g * probe * s_ab - i * g * probe.conj() * state.sigma_ba).re
        + (i * oc * state.sigma_ac - i * oc.conj() * s_ca).re
}

fn rhs_vector(v: &SVector<f64, 8>, params: &AtomicParams, probe: C64) -> SVector<f64, 8> {
    bloch_rhs(&BlochState::from_vector(v), params, probe).to_vector()
}

/// Finds the steady state of the corrected model by damped Newton
/// iteration on the 8 real unknowns, initialized at the dark state.
///
/// Fails with [`EitError::Degenerate`] when both the control field and
/// the probe vanish (the b/c manifold decouples and the steady state is
/// not unique).
pub fn steady_state(params: &AtomicParams, probe: C64) -> Result<BlochState> {
    params.validate()?;
    if params.omega_c.norm() == 0.0 && (params.g * probe.norm()) == 0.0 {
        return Err(EitError::Degenerate(
            "omega_c = 0 and probe = 0: ground-state manifold is decoupled, steady state not unique"
                .into(),
        ));
    }

    let scale = params.rate_scale();
    let tol = 1e-12 * scale;
    let max_iter = 200;

    let mut x = BlochState::dark().to_vector();
    let mut f = rhs_vector(&x, params, probe);
    let mut residual = f.amax();

    for iter in 0..max_iter {
        if residual <= tol {
            return Ok(BlochState::from_vector(&x));
        }

        // Central-difference Jacobian; the RHS is bilinear so this is
        // accurate to the difference step itself.
        let mut jac = SMatrix::<f64, 8, 8>::zeros();
        for j in 0..8 {
            let h = 1e-7 * (1.0 + x[j].abs());
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let fp = rhs_vector(&xp, params, probe);
            let fm = rhs_vector(&xm, params, probe);
            jac.set_column(j, &((fp - fm) / (2.0 * h)));
        }

        let lu = jac.lu();
        let step = lu.solve(&(-f)).ok_or(EitError::NoConvergence {
            residual,
            iterations: iter,
        })?;

        // Damped line search: halve until the residual decreases.
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial = x + lambda * step;
            let ft = rhs_vector(&trial, params, probe);
            let rt = ft.amax();
            if rt < residual || rt <= tol {
                x = trial;
                f = ft;
                residual = rt;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(EitError::NoConvergence {
                residual,
                iterations: iter,
            });
        }
    }

    if residual <= tol {
        Ok(BlochState::from_vector(&x))
    } else {
        Err(EitError::NoConvergence {
            residual,
            iterations: max_iter,
        })
    }
}

/// The flawed model's closed-form steady-state population of |b⟩:
/// −2g²|E|² / (γ_ba·γ_bc + |Ω_c|²). Strictly negative for any nonzero
/// probe, which is the inconsistency this library demonstrates.
pub fn population_exchange_steady_bb(params: &AtomicParams, probe: C64) -> Result<f64> {
    params.validate()?;
    let denom = params.gamma_ba * params.gamma_bc_popexch + params.omega_c.norm_sqr();
    if denom <= 0.0 {
        return Err(EitError::DegenerateDenominator { omega: 0.0 });
    }
    Ok(-2.0 * params.g * params.g * probe.norm_sqr() / denom)
}

/// Verdict of the weak-probe self-consistency check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsistencyVerdict {
    /// The steady population deficit is second order in the probe.
    ConsistentSecondOrder,
    /// The model contradicts its own weak-probe assumption.
    Inconsistent,
}

/// Result of [`weak_probe_consistency`].
#[derive(Debug, Clone, Copy)]
pub struct ConsistencyReport {
    /// Weak-probe small parameter ε = |g·E / Ω_c|.
    pub epsilon: f64,
    /// 1 − σ_bb at the steady state the verdict refers to.
    pub population_deficit: f64,
    pub verdict: ConsistencyVerdict,
}

/// Checks whether a model's steady state honors the weak-probe
/// approximation (nearly all population in |b⟩).
///
/// The corrected model is consistent when 1 − σ_bb ≤ [`CONSISTENCY_K`]·ε².
/// The population-exchange model is inconsistent for every nonzero
/// probe: its closed-form σ_bb is negative.
pub fn weak_probe_consistency(
    params: &AtomicParams,
    probe: C64,
    model: NoiseModel,
) -> Result<ConsistencyReport> {
    params.validate()?;
    let oc = params.omega_c.norm();
    if oc == 0.0 {
        return Err(EitError::Degenerate(
            "weak_probe_consistency requires a nonzero control field".into(),
        ));
    }
    let epsilon = params.g * probe.norm() / oc;
    if epsilon >= 1.0 {
        return Err(EitError::InvalidParams(format!(
            "probe is not weak: |g E / omega_c| = {epsilon}"
        )));
    }

    match model {
        NoiseModel::OffDiagonal => {
            let ss = steady_state(params, probe)?;
            let deficit = 1.0 - ss.sigma_bb;
            let verdict = if deficit <= CONSISTENCY_K * epsilon * epsilon {
                ConsistencyVerdict::ConsistentSecondOrder
            } else {
                ConsistencyVerdict::Inconsistent
            };
            Ok(ConsistencyReport {
                epsilon,
                population_deficit: deficit,
                verdict,
            })
        }
        NoiseModel::PopulationExchange => {
            if probe.norm() == 0.0 {
                // At zero probe the flawed model trivially keeps all
                // population in |b>.
                return Ok(ConsistencyReport {
                    epsilon,
                    population_deficit: 0.0,
                    verdict: ConsistencyVerdict::ConsistentSecondOrder,
                });
            }
            let bb = population_exchange_steady_bb(params, probe)?;
            Ok(ConsistencyReport {
                epsilon,
                population_deficit: 1.0 - bb,
                verdict: ConsistencyVerdict::Inconsistent,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_params() -> AtomicParams {
        let mut p = AtomicParams::dimensionless(1.0, 1.0, C64::new(1.0, 0.0), 0.01);
        p.gamma_ba = 0.5;
        p.gamma_ac = 0.5;
        p
    }

    #[test]
    fn dark_state_is_stationary() {
        let p = test_params();
        let d = bloch_rhs(&BlochState::dark(), &p, C64::new(0.0, 0.0));
        assert_eq!(d.max_norm(), 0.0);
    }

    #[test]
    fn empty_ground_manifold_rhs() {
        // sigma_aa = 1: populations refill at gamma_b, gamma_c, and the
        // control field drives sigma_ac at i*conj(omega_c).
        let p = test_params();
        let state = BlochState {
            sigma_bb: 0.0,
            sigma_cc: 0.0,
            sigma_ba: C64::new(0.0, 0.0),
            sigma_bc: C64::new(0.0, 0.0),
            sigma_ac: C64::new(0.0, 0.0),
        };
        let d = bloch_rhs(&state, &p, C64::new(0.0, 0.0));
        assert_eq!(d.d_sigma_bb, p.gamma_b);
        assert_eq!(d.d_sigma_cc, p.gamma_c);
        let expect = C64::i() * p.omega_c.conj();
        assert!((d.d_sigma_ac - expect).norm() < 1e-15);
        assert!(d.d_sigma_ba.norm() < 1e-15);
        assert!(d.d_sigma_bc.norm() < 1e-15);
    }

    #[test]
    fn trace_is_conserved() {
        let p = test_params();
        let state = BlochState {
            sigma_bb: 0.4,
            sigma_cc: 0.3,
            sigma_ba: C64::new(0.05, -0.02),
            sigma_bc: C64::new(-0.03, 0.04),
            sigma_ac: C64::new(0.01, 0.06),
        };
        let e = C64::new(0.07, 0.02);
        let d = bloch_rhs(&state, &p, e);
        let d_aa = implied_sigma_aa_rhs(&state, &p, e);
        assert!((d.d_sigma_bb + d.d_sigma_cc + d_aa).abs() < 1e-14);
    }

    #[test]
    fn hermiticity_closure() {
        // With the lower-triangle coherences taken as conjugates, the
        // complex population derivatives must come out exactly real.
        let mut p = test_params();
        p.omega_c = C64::new(0.8, 0.3);
        let state = BlochState {
            sigma_bb: 0.5,
            sigma_cc: 0.2,
            sigma_ba: C64::new(0.02, 0.03),
            sigma_bc: C64::new(-0.01, 0.02),
            sigma_ac: C64::new(0.04, -0.01),
        };
        let e = C64::new(0.05, -0.01);
        let i = C64::i();

        let full_d_bb = p.gamma_b * state.sigma_aa()
            + (-i * p.g * e * state.sigma_ba.conj() + i * p.g * e.conj() * state.sigma_ba);
        let full_d_cc = p.gamma_c * state.sigma_aa()
            + (-i * p.omega_c * state.sigma_ac + i * p.omega_c.conj() * state.sigma_ac.conj());
        assert!(full_d_bb.im.abs() < 1e-14);
        assert!(full_d_cc.im.abs() < 1e-14);

        let d = bloch_rhs(&state, &p, e);
        assert!((d.d_sigma_bb - full_d_bb.re).abs() < 1e-14);
        assert!((d.d_sigma_cc - full_d_cc.re).abs() < 1e-14);
    }

    #[test]
    fn steady_state_zero_probe_is_dark() {
        let p = test_params();
        let ss = steady_state(&p, C64::new(0.0, 0.0)).unwrap();
        assert!((ss.sigma_bb - 1.0).abs() < 1e-12);
        assert!(ss.sigma_ba.norm() < 1e-12);
    }

    #[test]
    fn steady_state_is_fixed_point() {
        let p = test_params();
        let e = C64::new(0.01, 0.0);
        let ss = steady_state(&p, e).unwrap();
        let d = bloch_rhs(&ss, &p, e);
        assert!(d.max_norm() < 1e-10, "residual {}", d.max_norm());
        assert!(ss.is_valid(1e-9));
        // Deficit is second order: epsilon = 0.01 so 1 - sigma_bb = O(1e-4).
        let deficit = 1.0 - ss.sigma_bb;
        assert!(deficit > 0.0 && deficit < 1e-3, "deficit {deficit}");
    }

    #[test]
    fn steady_state_degenerate_when_fully_decoupled() {
        let mut p = test_params();
        p.omega_c = C64::new(0.0, 0.0);
        let err = steady_state(&p, C64::new(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, EitError::Degenerate(_)));
    }

    #[test]
    fn eq1_population_is_negative_for_any_probe() {
        let mut p = test_params();
        p.gamma_ba = 1.0;
        p.gamma_bc_popexch = 0.1;
        let bb = population_exchange_steady_bb(&p, C64::new(0.1, 0.0)).unwrap();
        assert!((bb - (-2.0 * 0.01 / 1.1)).abs() < 1e-14);
        assert!(bb < 0.0);
        let zero = population_exchange_steady_bb(&p, C64::new(0.0, 0.0)).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn consistency_verdicts() {
        let p = test_params();
        let zero = C64::new(0.0, 0.0);
        for model in [NoiseModel::OffDiagonal, NoiseModel::PopulationExchange] {
            let r = weak_probe_consistency(&p, zero, model).unwrap();
            assert_eq!(r.verdict, ConsistencyVerdict::ConsistentSecondOrder);
            assert_eq!(r.population_deficit, 0.0);
        }

        let e = C64::new(0.01, 0.0);
        let off = weak_probe_consistency(&p, e, NoiseModel::OffDiagonal).unwrap();
        assert_eq!(off.verdict, ConsistencyVerdict::ConsistentSecondOrder);
        assert!(off.population_deficit <= CONSISTENCY_K * 1e-4);

        let mut pf = p.clone();
        pf.gamma_bc_popexch = 0.1;
        let pop = weak_probe_consistency(&pf, e, NoiseModel::PopulationExchange).unwrap();
        assert_eq!(pop.verdict, ConsistencyVerdict::Inconsistent);
        assert!(pop.population_deficit > 1.0);
    }

    #[test]
    fn strong_probe_rejected() {
        let p = test_params();
        let err = weak_probe_consistency(&p, C64::new(2.0, 0.0), NoiseModel::OffDiagonal);
        assert!(err.is_err());
    }
}
