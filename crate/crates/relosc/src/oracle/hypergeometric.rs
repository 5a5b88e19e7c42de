//! Gauss hypergeometric series and the closed-form period.
//!
//! The period of the relativistic oscillator integrates to
//!
//! ```text
//! tau = (2 pi / c) sqrt(2/k) [ sqrt(Etilde + 2 m c^2) 2F1(-1/2, 1/2; 1; k2)
//!                              - m c^2 / sqrt(Etilde + 2 m c^2) 2F1(1/2, 1/2; 1; k2) ]
//! ```
//!
//! with modulus `k2 = Etilde / (Etilde + 2 m c^2) = eps / (eps + 2)`, which
//! stays below 1 at every energy. The first bracket is the hypergeometric
//! series whose opening terms are `1 - k2/4 - 3 k2^2/64`.

use crate::model::{EnergySpec, OscillatorParams};
use crate::oracle::OracleError;

const MAX_TERMS: usize = 1_000_000;
const TERM_TOLERANCE: f64 = 1e-16;

/// Gauss series `2F1(a, b; c; z)` for `0 <= z < 1`, summed with the term
/// recurrence `t_{n+1} = t_n (a+n)(b+n) z / ((c+n)(n+1))` until the next
/// term drops below `1e-16` of the partial sum.
pub fn hypergeometric_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64, OracleError> {
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(OracleError::InvalidArgument {
            reason: format!("c = {c} is a non-positive integer"),
        });
    }
    if !(0.0..1.0).contains(&z) {
        return Err(OracleError::InvalidArgument {
            reason: format!("z = {z} outside [0, 1)"),
        });
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.abs() < TERM_TOLERANCE * sum.abs() {
            return Ok(sum);
        }
    }
    Err(OracleError::HypergeometricConvergence { z, partial: sum })
}

/// Closed-form period via the two hypergeometric brackets.
pub fn period_closed_form(
    params: &OscillatorParams,
    energy: &EnergySpec,
) -> Result<f64, OracleError> {
    let eps = energy.epsilon();
    let modulus_sq = eps / (eps + 2.0);
    let shifted = energy.excess_energy() + 2.0 * params.rest_energy();
    let outer = hypergeometric_2f1(-0.5, 0.5, 1.0, modulus_sq)?;
    let inner = hypergeometric_2f1(0.5, 0.5, 1.0, modulus_sq)?;
    let prefactor =
        2.0 * std::f64::consts::PI / params.light_speed() * (2.0 / params.spring_constant()).sqrt();
    Ok(prefactor * (shifted.sqrt() * outer - params.rest_energy() / shifted.sqrt() * inner))
}
