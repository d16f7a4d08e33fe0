//! Quadrature noise spectra of the output field for both dephasing
//! models, plus the commutation diagnostic and the squeezing-delay
//! report.
//!
//! Spectra are shot-noise normalized: vacuum = 1. The corrected model
//! acts as a frequency-dependent beamsplitter,
//! S_out = S_in·T + (1 − T), so vacuum input is a fixed point. The
//! population-exchange model multiplies the replaced-vacuum term by an
//! added-noise factor that drops below 1, pushing vacuum input below
//! shot noise — the commutation violation.

use crate::error::{EitError, Result};
use crate::lambda_system::{AtomicParams, NoiseModel};
use crate::linear_response::{group_delay, propagation_exponent_for_model};

/// Which quadrature a spectrum refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quadrature {
    Amplitude,
    Phase,
    /// A general quadrature at angle θ from the amplitude axis.
    Angle(f64),
}

/// A variance spectrum S(ω) in shot-noise units on a frequency grid.
#[derive(Debug, Clone)]
pub struct SpectrumSeries {
    pub omega_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub quadrature_label: Quadrature,
}

impl SpectrumSeries {
    pub fn new(omega_grid: Vec<f64>, values: Vec<f64>, quadrature_label: Quadrature) -> Result<Self> {
        if omega_grid.len() != values.len() {
            return Err(EitError::GridMismatch(format!(
                "grid has {} points but values has {}",
                omega_grid.len(),
                values.len()
            )));
        }
        if !omega_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(EitError::GridMismatch("grid must be strictly increasing".into()));
        }
        if values.iter().any(|&v| !(v >= 0.0)) {
            return Err(EitError::GridMismatch("variances must be nonnegative".into()));
        }
        Ok(Self {
            omega_grid,
            values,
            quadrature_label,
        })
    }

    /// A flat spectrum with the given value on the grid.
    pub fn flat(omega_grid: &[f64], value: f64, quadrature_label: Quadrature) -> Result<Self> {
        Self::new(omega_grid.to_vec(), vec![value; omega_grid.len()], quadrature_label)
    }

    /// Vacuum (shot-noise) input.
    pub fn vacuum(omega_grid: &[f64], quadrature_label: Quadrature) -> Result<Self> {
        Self::flat(omega_grid, 1.0, quadrature_label)
    }
}

/// Spectral profile of the squeezed source feeding the medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SqueezingSource {
    /// Frequency-flat minimum-uncertainty squeezing, S∓ = e^{∓2r}.
    Flat,
    /// Single-pole source: squeezing rolls off with a Lorentzian of the
    /// given bandwidth, S(ω) = 1 ∓ (1 − e^{∓2r})·B²/(ω² + B²).
    Lorentzian { bandwidth: f64 },
}

/// Input spectrum of the squeezed (`anti` = false) or anti-squeezed
/// quadrature at one frequency.
pub fn source_spectrum_at(r: f64, source: SqueezingSource, omega: f64, anti: bool) -> f64 {
    let target = if anti { (2.0 * r).exp() } else { (-2.0 * r).exp() };
    match source {
        SqueezingSource::Flat => target,
        SqueezingSource::Lorentzian { bandwidth } => {
            let weight = bandwidth * bandwidth / (omega * omega + bandwidth * bandwidth);
            1.0 + (target - 1.0) * weight
        }
    }
}

/// The bracketed factor of the flawed output spectrum:
/// 1 − γ_bc(ω² + γ_bc²) / [γ(ω² + γ_bc²) + γ_bc|Ω_c|²],
/// with γ = `gamma_total` and γ_bc = `gamma_bc_popexch`.
pub fn added_noise_factor_population_exchange(params: &AtomicParams, omega: f64) -> Result<f64> {
    let gbc = params.gamma_bc_popexch;
    let w2 = omega * omega + gbc * gbc;
    let denom = params.gamma_total * w2 + gbc * params.omega_c.norm_sqr();
    if gbc == 0.0 {
        return Ok(1.0);
    }
    if denom <= 0.0 {
        return Err(EitError::DegenerateDenominator { omega });
    }
    Ok(1.0 - gbc * w2 / denom)
}

/// Power transmission through the medium under the model's own Λ(ω).
/// The flawed model substitutes γ_bc for γ_bc′ in the exponent.
pub fn model_transmission(
    model: NoiseModel,
    params: &AtomicParams,
    omega: f64,
    length: f64,
) -> Result<f64> {
    let lambda = propagation_exponent_for_model(params, omega, model)?;
    Ok((-2.0 * lambda.re * length).exp())
}

/// Output spectrum at a single frequency.
pub fn output_value(
    model: NoiseModel,
    s_in: f64,
    params: &AtomicParams,
    omega: f64,
    length: f64,
) -> Result<f64> {
    let t = model_transmission(model, params, omega, length)?;
    match model {
        NoiseModel::OffDiagonal => Ok(s_in * t + (1.0 - t)),
        NoiseModel::PopulationExchange => {
            let factor = added_noise_factor_population_exchange(params, omega)?;
            Ok(s_in * t + (1.0 - t) * factor)
        }
    }
}

/// Propagates an input spectrum through the medium.
pub fn output_spectrum(
    model: NoiseModel,
    s_in: &SpectrumSeries,
    params: &AtomicParams,
    length: f64,
) -> Result<SpectrumSeries> {
    let values = s_in
        .omega_grid
        .iter()
        .zip(&s_in.values)
        .map(|(&w, &s)| output_value(model, s, params, w, length))
        .collect::<Result<Vec<_>>>()?;
    SpectrumSeries::new(s_in.omega_grid.clone(), values, s_in.quadrature_label)
}

/// Result of [`commutation_check`].
#[derive(Debug, Clone, Copy)]
pub struct CommutationReport {
    /// max(0, 1 − min_ω S_out) for vacuum input.
    pub max_violation: f64,
    pub passes: bool,
}

/// Feeds vacuum into both conjugate quadratures and checks that the
/// output never drops below shot noise and that the uncertainty product
/// stays at or above 1. A passive channel that fails this violates the
/// canonical commutation relation.
pub fn commutation_check(
    model: NoiseModel,
    params: &AtomicParams,
    length: f64,
    omega_grid: &[f64],
) -> Result<CommutationReport> {
    let vac_x = SpectrumSeries::vacuum(omega_grid, Quadrature::Amplitude)?;
    let vac_p = SpectrumSeries::vacuum(omega_grid, Quadrature::Phase)?;
    let out_x = output_spectrum(model, &vac_x, params, length)?;
    let out_p = output_spectrum(model, &vac_p, params, length)?;

    let tol = 1e-12;
    let mut min_out = f64::INFINITY;
    let mut min_product = f64::INFINITY;
    for ((x, p), _) in out_x.values.iter().zip(&out_p.values).zip(omega_grid) {
        min_out = min_out.min(*x).min(*p);
        min_product = min_product.min(x * p);
    }
    let passes = min_out >= 1.0 - tol && min_product >= 1.0 - tol;
    Ok(CommutationReport {
        max_violation: (1.0 - min_out).max(0.0),
        passes,
    })
}

/// Result of [`squeezing_delay_report`].
#[derive(Debug, Clone)]
pub struct SqueezingDelayReport {
    pub s_out_squeezed: SpectrumSeries,
    pub s_out_antisqueezed: SpectrumSeries,
    /// Slow-light group delay of the medium, seconds.
    pub delay_s: f64,
    /// (1 − S_out(0)) / (1 − S_in(0)) for the squeezed quadrature;
    /// 1 by convention at r = 0.
    pub preservation_ratio: f64,
}

/// Pushes a squeezed/anti-squeezed pair through the corrected medium
/// and reports how much squeezing survives at line center together with
/// the group delay.
pub fn squeezing_delay_report(
    r: f64,
    params: &AtomicParams,
    length: f64,
    omega_grid: &[f64],
    source: SqueezingSource,
) -> Result<SqueezingDelayReport> {
    if r < 0.0 {
        return Err(EitError::InvalidParams(format!("squeezing r must be nonnegative, got {r}")));
    }
    let sq_values: Vec<f64> = omega_grid
        .iter()
        .map(|&w| source_spectrum_at(r, source, w, false))
        .collect();
    let anti_values: Vec<f64> = omega_grid
        .iter()
        .map(|&w| source_spectrum_at(r, source, w, true))
        .collect();
    let s_in_sq = SpectrumSeries::new(omega_grid.to_vec(), sq_values, Quadrature::Amplitude)?;
    let s_in_anti = SpectrumSeries::new(omega_grid.to_vec(), anti_values, Quadrature::Phase)?;

    let s_out_squeezed = output_spectrum(NoiseModel::OffDiagonal, &s_in_sq, params, length)?;
    let s_out_antisqueezed = output_spectrum(NoiseModel::OffDiagonal, &s_in_anti, params, length)?;

    let s_in_0 = source_spectrum_at(r, source, 0.0, false);
    let s_out_0 = output_value(NoiseModel::OffDiagonal, s_in_0, params, 0.0, length)?;
    let preservation_ratio = if r == 0.0 {
        1.0
    } else {
        (1.0 - s_out_0) / (1.0 - s_in_0)
    };

    Ok(SqueezingDelayReport {
        s_out_squeezed,
        s_out_antisqueezed,
        delay_s: group_delay(params)?,
        preservation_ratio,
    })
}

/// Squeezing in decibels relative to shot noise: −10·log₁₀(S).
pub fn squeezing_db(s: f64) -> f64 {
    -10.0 * s.log10()
}
