//! Action variable, frequency, and period of the one-dimensional
//! relativistic harmonic oscillator.
//!
//! The oscillator with Hamiltonian `H = sqrt(p^2 c^2 + m^2 c^4) + k x^2 / 2`
//! has an energy-dependent frequency. This crate computes its action
//! variable `J(E)` two independent ways — as the residue of the momentum
//! Laurent series in the coordinate plane (`pdx` form) and as the residue of
//! the coordinate Laurent series in the momentum plane (`xdp` form) — with
//! exact rational series coefficients, derives the frequency from
//! `1/omega = dJ/dE`, and validates everything against quadrature, a
//! hypergeometric closed form, and direct dynamical simulation.
//!
//! Modules:
//! - [`model`]: physical parameters, energy conversions, turning points.
//! - [`fps`]: truncated formal power series over exact rationals.
//! - [`action`]: the two series constructions of `J` plus the closed
//!   non-relativistic form.
//! - [`frequency`]: the relativistic factor `eta(eps)` and `omega_R`.
//! - [`oracle`]: quadrature, hypergeometric period, and ODE ground truths.
//! - [`method`]: a name-keyed registry putting every evaluation strategy
//!   behind one trait for the CLI and cross-method comparisons.

pub mod action;
pub mod fps;
pub mod frequency;
pub mod method;
pub mod model;
pub mod oracle;

use serde::Serialize;
use std::fmt;

/// Tag identifying which construction produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodKind {
    /// Closed-form non-relativistic action `J = E / omega0`.
    NonRelClosed,
    /// Residue series of the momentum in the coordinate plane, in powers of
    /// `eps/(2+eps)`; converges for every positive energy.
    PdxSeries,
    /// Residue series of the coordinate in the momentum plane, in powers of
    /// `eps`; the underlying annulus collapses at `eps = sqrt(2) - 1`.
    XdpSeries,
    /// Real-axis Gauss-Legendre quadrature of the action/period integrals.
    Quadrature,
    /// Hypergeometric closed form of the period.
    ClosedForm,
    /// Direct integration of Hamilton's equations with zero-crossing
    /// period detection.
    Ode,
}

impl MethodKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodKind::NonRelClosed => "nonrel-closed",
            MethodKind::PdxSeries => "pdx-series",
            MethodKind::XdpSeries => "xdp-series",
            MethodKind::Quadrature => "quadrature",
            MethodKind::ClosedForm => "closed-form",
            MethodKind::Ode => "ode",
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Warning flags a result can carry. Closed enumeration: renderers may rely
/// on these being the only values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResultFlag {
    /// The xdp series was evaluated beyond its convergence guard
    /// (`eps >= 0.4`, just below the annulus collapse at `sqrt(2) - 1`).
    Diverging,
    /// `eps > 10`: outside the envelope the oracles were validated on.
    UnvalidatedRegime,
    /// A numerical oracle failed to reach its target tolerance.
    ConvergenceFailure,
    /// The ODE run exceeded the allowed relative energy drift.
    EnergyDrift,
}

impl ResultFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            ResultFlag::Diverging => "diverging",
            ResultFlag::UnvalidatedRegime => "unvalidated-regime",
            ResultFlag::ConvergenceFailure => "convergence-failure",
            ResultFlag::EnergyDrift => "energy-drift",
        }
    }
}

impl fmt::Display for ResultFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Energies above this are flagged [`ResultFlag::UnvalidatedRegime`].
pub const UNVALIDATED_EPSILON: f64 = 10.0;

pub use action::{ActionResult, BracketSeries};
pub use fps::FormalSeries;
pub use frequency::{FrequencyResult, SeriesForm};
pub use method::{EvalContext, EvalMethod, MethodRegistry, OutputRecord};
pub use model::{EnergySpec, OscillatorParams, TurningPointsP, TurningPointsX};
pub use oracle::{OdeConfig, QuadratureConfig};
