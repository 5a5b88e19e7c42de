//! Independent ground truths the series results are validated against:
//! real-axis quadrature of the action integral, the hypergeometric closed
//! form of the period, direct quadrature of the period integral, and a
//! dynamical simulation of Hamilton's equations.
//!
//! None of these touch the series machinery, so agreement between them and
//! the `action`/`frequency` pipelines is a genuine cross-check, not a
//! tautology.

pub mod hypergeometric;
pub mod ode;
pub mod quadrature;

use thiserror::Error;

pub use hypergeometric::{hypergeometric_2f1, period_closed_form};
pub use ode::{simulate_period, simulate_period_detailed, OdeConfig, SimulatedPeriod};
pub use quadrature::{
    action_quadrature, action_quadrature_nonrel, period_direct, QuadratureConfig,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("quadrature failed to reach relative tolerance {target:e} (best {achieved:e} after {panels} panels)")]
    QuadratureConvergence {
        target: f64,
        achieved: f64,
        panels: usize,
    },
    #[error("hypergeometric series did not converge at z = {z} (partial sum {partial})")]
    HypergeometricConvergence { z: f64, partial: f64 },
    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: String },
    #[error("ODE energy drift {drift:e} exceeded limit {limit:e}")]
    EnergyDrift { drift: f64, limit: f64 },
    #[error("period detection found {found} of {wanted} zero crossings")]
    PeriodDetection { found: usize, wanted: usize },
    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },
}
