//! Simulation of a weak probe field propagating through a three-level
//! Λ-type medium under electromagnetically induced transparency (EIT).
//!
//! The library models two variants of ground-state decoherence:
//!
//! * [`NoiseModel::OffDiagonal`] — dephasing acts only on the ground-state
//!   coherence (elastic collisions). This is the physically consistent
//!   model: vacuum noise passes through unchanged and the output field
//!   keeps its canonical commutation relation.
//! * [`NoiseModel::PopulationExchange`] — dephasing exchanges population
//!   between the ground states (inelastic collisions). Under the weak
//!   probe approximation this model predicts a negative steady-state
//!   population and an output spectrum that dips below shot noise for
//!   vacuum input, both unphysical.
//!
//! On top of the atomic model the crate provides the weak-probe
//! propagation exponent Λ(ω), quadrature noise spectra, slow-light group
//! delay, a two-mode Gaussian treatment of EPR entanglement through the
//! medium, and an independent time-domain integrator used as a numerical
//! oracle for the closed forms.

pub mod config;
pub mod entanglement_cv;
pub mod error;
pub mod lambda_system;
pub mod linear_response;
pub mod noise_spectra;
pub mod oracle_integrator;
pub mod output;
pub mod presets;

pub use error::EitError;
pub use lambda_system::{AtomicParams, BlochState, ConsistencyReport, NoiseModel};
pub use linear_response::TransferFunction;
pub use noise_spectra::SpectrumSeries;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
