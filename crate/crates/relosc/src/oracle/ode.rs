//! Dynamical oracle: integrate Hamilton's equations and time the period.
//!
//! The equations of motion are `xdot = p c^2 / sqrt(p^2 c^2 + m^2 c^4)`,
//! `pdot = -k x`. The run starts at `(x, p) = (0, p_2R)` and times upward
//! zero crossings of `x`, which are transversal there (extrema detection
//! would be ill-conditioned). Crossing times are refined with cubic Hermite
//! interpolation on the bracketing step using the exact derivatives.
//!
//! The integrator is fixed-step classical RK4 with the step derived from the
//! closed-form period estimate; a second run at half the step supplies a
//! Richardson error bound. The Hamiltonian is monitored over the whole run
//! and a drift beyond [`ENERGY_DRIFT_LIMIT`] is an error, not a warning.

use crate::model::{self, EnergySpec, OscillatorParams};
use crate::oracle::hypergeometric::period_closed_form;
use crate::oracle::OracleError;

/// Relative energy drift allowed over the full simulation.
pub const ENERGY_DRIFT_LIMIT: f64 = 1e-9;

/// Fixed-step RK4 settings. The step size is the closed-form period estimate
/// divided by `steps_per_period`; crossing interpolation is cubic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OdeConfig {
    pub steps_per_period: usize,
    pub max_periods: usize,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self {
            steps_per_period: 10_000,
            max_periods: 4,
        }
    }
}

impl OdeConfig {
    fn validate(&self) -> Result<(), OracleError> {
        if self.steps_per_period < 16 {
            return Err(OracleError::InvalidConfig {
                reason: format!(
                    "steps_per_period must be >= 16, got {}",
                    self.steps_per_period
                ),
            });
        }
        if self.max_periods < 1 {
            return Err(OracleError::InvalidConfig {
                reason: "max_periods must be >= 1".into(),
            });
        }
        Ok(())
    }
}

/// Simulated period with its Richardson error bound and observed drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulatedPeriod {
    pub period: f64,
    pub error_estimate: f64,
    pub max_energy_drift: f64,
}

#[derive(Clone, Copy)]
struct State {
    x: f64,
    p: f64,
}

fn derivatives(params: &OscillatorParams, s: State) -> State {
    let c = params.light_speed();
    let mc2 = params.rest_energy();
    let kinetic = ((s.p * c) * (s.p * c) + mc2 * mc2).sqrt();
    State {
        x: s.p * c * c / kinetic,
        p: -params.spring_constant() * s.x,
    }
}

fn hamiltonian(params: &OscillatorParams, s: State) -> f64 {
    let c = params.light_speed();
    let mc2 = params.rest_energy();
    ((s.p * c) * (s.p * c) + mc2 * mc2).sqrt() + 0.5 * params.spring_constant() * s.x * s.x
}

fn rk4_step(params: &OscillatorParams, s: State, h: f64) -> State {
    let k1 = derivatives(params, s);
    let k2 = derivatives(
        params,
        State {
            x: s.x + 0.5 * h * k1.x,
            p: s.p + 0.5 * h * k1.p,
        },
    );
    let k3 = derivatives(
        params,
        State {
            x: s.x + 0.5 * h * k2.x,
            p: s.p + 0.5 * h * k2.p,
        },
    );
    let k4 = derivatives(
        params,
        State {
            x: s.x + h * k3.x,
            p: s.p + h * k3.p,
        },
    );
    State {
        x: s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
        p: s.p + h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p),
    }
}

/// Root of the cubic Hermite interpolant through `(x0, v0)` at `t0` and
/// `(x1, v1)` at `t0 + h`, for a bracketed upward crossing (`x0 < 0 <= x1`).
fn hermite_crossing(t0: f64, h: f64, x0: f64, v0: f64, x1: f64, v1: f64) -> f64 {
    let eval = |s: f64| {
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let value = h00 * x0 + h10 * h * v0 + h01 * x1 + h11 * h * v1;
        let slope = (6.0 * s2 - 6.0 * s) * x0
            + (3.0 * s2 - 4.0 * s + 1.0) * h * v0
            + (6.0 * s - 6.0 * s2) * x1
            + (3.0 * s2 - 2.0 * s) * h * v1;
        (value, slope)
    };
    // Newton from the secant guess, clamped to the bracket
    let mut s = x0 / (x0 - x1);
    for _ in 0..16 {
        let (value, slope) = eval(s);
        if slope == 0.0 {
            break;
        }
        let next = (s - value / slope).clamp(0.0, 1.0);
        if (next - s).abs() < 1e-16 {
            s = next;
            break;
        }
        s = next;
    }
    t0 + s * h
}

fn run_fixed_step(
    params: &OscillatorParams,
    energy: &EnergySpec,
    h: f64,
    wanted_crossings: usize,
    max_steps: usize,
) -> Result<(f64, f64), OracleError> {
    let mut s = State {
        x: 0.0,
        p: model::turning_points_p(params, energy).inner(),
    };
    let total_energy = energy.total_energy();
    let mut max_drift = 0.0f64;
    let mut crossings = 0usize;
    let mut t = 0.0;
    for step in 0..max_steps {
        let next = rk4_step(params, s, h);
        let t_next = (step + 1) as f64 * h;
        let drift = (hamiltonian(params, next) - total_energy).abs() / total_energy;
        max_drift = max_drift.max(drift);
        if s.x < 0.0 && next.x >= 0.0 && next.p > 0.0 {
            crossings += 1;
            if crossings == wanted_crossings {
                let v0 = derivatives(params, s).x;
                let v1 = derivatives(params, next).x;
                let tc = hermite_crossing(t, h, s.x, v0, next.x, v1);
                return Ok((tc / wanted_crossings as f64, max_drift));
            }
        }
        s = next;
        t = t_next;
    }
    Err(OracleError::PeriodDetection {
        found: crossings,
        wanted: wanted_crossings,
    })
}

/// Full-detail simulation: period, Richardson error bound from step halving,
/// and the observed energy drift of the fine run.
pub fn simulate_period_detailed(
    params: &OscillatorParams,
    energy: &EnergySpec,
    cfg: &OdeConfig,
) -> Result<SimulatedPeriod, OracleError> {
    cfg.validate()?;
    let estimate = period_closed_form(params, energy)?;
    let h = estimate / cfg.steps_per_period as f64;
    let max_steps = cfg.steps_per_period * cfg.max_periods * 6 / 5 + 64;
    let (coarse, _) = run_fixed_step(params, energy, h, cfg.max_periods, max_steps)?;
    let (fine, drift) = run_fixed_step(params, energy, h / 2.0, cfg.max_periods, 2 * max_steps)?;
    if drift > ENERGY_DRIFT_LIMIT {
        return Err(OracleError::EnergyDrift {
            drift,
            limit: ENERGY_DRIFT_LIMIT,
        });
    }
    Ok(SimulatedPeriod {
        period: fine,
        // RK4 is fourth order: halving the step leaves |tau_h - tau_h/2|/15
        error_estimate: (coarse - fine).abs() / 15.0,
        max_energy_drift: drift,
    })
}

/// Period from direct integration of Hamilton's equations.
pub fn simulate_period(
    params: &OscillatorParams,
    energy: &EnergySpec,
    cfg: &OdeConfig,
) -> Result<f64, OracleError> {
    Ok(simulate_period_detailed(params, energy, cfg)?.period)
}
