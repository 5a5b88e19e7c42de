//! Gauss-Legendre quadrature of the action and period integrals.
//!
//! Both integrands have inverse-square-root endpoint behaviour at the
//! turning point. The substitution `x = x_2R sin(theta)` removes it exactly:
//!
//! - action: `p(x) = (k/2c) sqrt((x_2R^2-x^2)(x_4R^2-x^2))` becomes
//!   `(k/2c) x_2R^2 cos^2(theta) sqrt(x_4R^2 - x_2R^2 sin^2(theta))`,
//! - period: `[E-V] / sqrt([E-V]^2 - m^2 c^4)` picks up the factor
//!   `cos(theta)` from `dx` that cancels the vanishing square root, leaving
//!   `(m c^2 + Etilde cos^2) / sqrt(2 m c^2 + Etilde cos^2)`.
//!
//! Either way the transformed integrand is analytic, so plain Gauss-Legendre
//! converges geometrically; the error estimate comes from node-count
//! doubling and refinement doubles the panel count.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::action::ActionResult;
use crate::model::{self, EnergySpec, OscillatorParams};
use crate::oracle::OracleError;
use crate::{MethodKind, ResultFlag, UNVALIDATED_EPSILON};

/// Gauss-Legendre settings: `node_count` points per panel, error estimated
/// by node doubling, panels doubled until `target_rel_tol` is met.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub node_count: usize,
    pub panel_count: usize,
    pub target_rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            node_count: 64,
            panel_count: 1,
            target_rel_tol: 1e-13,
        }
    }
}

impl QuadratureConfig {
    fn validate(&self) -> Result<(), OracleError> {
        if self.node_count < 8 {
            return Err(OracleError::InvalidConfig {
                reason: format!("node_count must be >= 8, got {}", self.node_count),
            });
        }
        if self.panel_count < 1 {
            return Err(OracleError::InvalidConfig {
                reason: "panel_count must be >= 1".into(),
            });
        }
        if self.target_rel_tol < 1e-14 || self.target_rel_tol.is_nan() {
            return Err(OracleError::InvalidConfig {
                reason: format!(
                    "target_rel_tol must be >= 1e-14, got {:e}",
                    self.target_rel_tol
                ),
            });
        }
        Ok(())
    }
}

/// A quadrature value with its node-doubling error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error_estimate: f64,
}

/// Nodes and weights of the `n`-point rule on [-1, 1], by Newton iteration
/// on the Legendre recurrence.
fn gauss_legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..64 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((x, w));
        if x != 0.0 {
            rule.push((-x, w));
        }
    }
    rule
}

/// `(P_n(x), P_n'(x))` via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Fixed-rule integral over [a, b] with `panels` equal panels of `nodes`
/// points each.
pub(crate) fn gauss_legendre_panels<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    nodes: usize,
    panels: usize,
) -> f64 {
    let rule = gauss_legendre_rule(nodes);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for panel in 0..panels {
        let lo = a + panel as f64 * width;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        let mut acc = 0.0;
        for &(x, w) in &rule {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

/// Integrates to the configured relative tolerance, doubling the panel count
/// until the node-doubling error estimate passes.
pub(crate) fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureEstimate, OracleError> {
    cfg.validate()?;
    const MAX_REFINEMENTS: usize = 7;
    let mut panels = cfg.panel_count;
    let mut best = f64::INFINITY;
    for _ in 0..=MAX_REFINEMENTS {
        let coarse = gauss_legendre_panels(f, a, b, cfg.node_count, panels);
        let fine = gauss_legendre_panels(f, a, b, cfg.node_count * 2, panels);
        let err = (fine - coarse).abs();
        if err <= cfg.target_rel_tol * fine.abs().max(f64::MIN_POSITIVE) {
            return Ok(QuadratureEstimate {
                value: fine,
                error_estimate: err,
            });
        }
        best = best.min(err);
        panels *= 2;
    }
    Err(OracleError::QuadratureConvergence {
        target: cfg.target_rel_tol,
        achieved: best,
        panels: panels / 2,
    })
}

/// Relativistic action `J = (2/pi) ∫_0^{x_2R} p(x) dx` by quadrature of the
/// exact real-axis factorization.
pub fn action_quadrature(
    params: &OscillatorParams,
    energy: &EnergySpec,
    cfg: &QuadratureConfig,
) -> Result<ActionResult, OracleError> {
    let tp = model::turning_points_x(params, energy);
    let (x2, x4) = (tp.inner(), tp.outer());
    let scale = params.spring_constant() / (2.0 * params.light_speed());
    let f = move |theta: f64| {
        let (s, c) = theta.sin_cos();
        scale * x2 * x2 * c * c * (x4 * x4 - x2 * x2 * s * s).sqrt()
    };
    let est = integrate(&f, 0.0, FRAC_PI_2, cfg)?;
    let mut flags = Vec::new();
    if energy.epsilon() > UNVALIDATED_EPSILON {
        flags.push(ResultFlag::UnvalidatedRegime);
    }
    Ok(ActionResult {
        value: 2.0 / PI * est.value,
        method: MethodKind::Quadrature,
        order: 0,
        error_estimate: 2.0 / PI * est.error_estimate,
        flags,
    })
}

/// Non-relativistic reduction: drops the relativistic branch-point factor,
/// integrating `sqrt(mk) sqrt(x_2^2 - x^2)` with `x_2 = sqrt(2E/k)`.
/// Recovers `J = E / omega0`.
pub fn action_quadrature_nonrel(
    params: &OscillatorParams,
    total_energy: f64,
    cfg: &QuadratureConfig,
) -> Result<ActionResult, OracleError> {
    assert!(total_energy > 0.0, "total energy must be positive");
    let x2 = (2.0 * total_energy / params.spring_constant()).sqrt();
    let scale = (params.mass() * params.spring_constant()).sqrt() * x2 * x2;
    let f = move |theta: f64| {
        let c = theta.cos();
        scale * c * c
    };
    let est = integrate(&f, 0.0, FRAC_PI_2, cfg)?;
    Ok(ActionResult {
        value: 2.0 / PI * est.value,
        method: MethodKind::Quadrature,
        order: 0,
        error_estimate: 2.0 / PI * est.error_estimate,
        flags: Vec::new(),
    })
}

/// Period by direct quadrature of
/// `tau = (4/c) ∫_0^{x_2R} [E-V] / sqrt([E-V]^2 - m^2 c^4) dx`.
pub fn period_direct(
    params: &OscillatorParams,
    energy: &EnergySpec,
    cfg: &QuadratureConfig,
) -> Result<f64, OracleError> {
    let rest = params.rest_energy();
    let excess = energy.excess_energy();
    let x2 = model::turning_points_x(params, energy).inner();
    let f = move |theta: f64| {
        let c2 = theta.cos().powi(2);
        (rest + excess * c2) / (2.0 * rest + excess * c2).sqrt()
    };
    let est = integrate(&f, 0.0, FRAC_PI_2, cfg)?;
    Ok(4.0 * x2 / (params.light_speed() * excess.sqrt()) * est.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action;
    use approx::assert_relative_eq;

    fn natural() -> OscillatorParams {
        OscillatorParams::natural()
    }

    #[test]
    fn nonrel_reduction_recovers_linear_action() {
        let cfg = QuadratureConfig::default();
        for (m, k, e_total) in [(1.0, 1.0, 1.0), (1.0, 4.0, 2.0), (3.0, 0.5, 0.37)] {
            let p = OscillatorParams::new(m, k, 1.0).unwrap();
            let j = action_quadrature_nonrel(&p, e_total, &cfg).unwrap();
            assert_relative_eq!(j.value, e_total / p.omega0(), max_relative = 1e-12);
        }
    }

    #[test]
    fn matches_pdx_series_at_order_32() {
        let p = natural();
        let cfg = QuadratureConfig::default();
        let e = EnergySpec::from_epsilon(&p, 0.1).unwrap();
        let quad = action_quadrature(&p, &e, &cfg).unwrap();
        let series = action::action_pdx(&p, &e, 32);
        assert_relative_eq!(quad.value, series.value, max_relative = 1e-10);
    }

    #[test]
    fn full_range_is_twice_half_range() {
        // the theta integrand is even, so [-pi/2, pi/2] doubles [0, pi/2]
        let p = natural();
        let e = EnergySpec::from_epsilon(&p, 0.2).unwrap();
        let tp = model::turning_points_x(&p, &e);
        let (x2, x4) = (tp.inner(), tp.outer());
        let f = move |theta: f64| {
            let (s, c) = theta.sin_cos();
            0.5 * x2 * x2 * c * c * (x4 * x4 - x2 * x2 * s * s).sqrt()
        };
        let half = gauss_legendre_panels(&f, 0.0, FRAC_PI_2, 64, 2);
        let full = gauss_legendre_panels(&f, -FRAC_PI_2, FRAC_PI_2, 64, 2);
        assert_relative_eq!(full, 2.0 * half, max_relative = 1e-14);
    }

    #[test]
    fn period_direct_limits() {
        let cfg = QuadratureConfig::default();
        for (m, k) in [(1.0, 1.0), (2.0, 3.0)] {
            let p = OscillatorParams::new(m, k, 1.0).unwrap();
            let e = EnergySpec::from_epsilon(&p, 1e-6).unwrap();
            let tau = period_direct(&p, &e, &cfg).unwrap();
            assert_relative_eq!(tau, 2.0 * PI * (m / k).sqrt(), max_relative = 1e-6);
        }

        // weak-relativistic slope: tau ~ 2 pi sqrt(m/k) (1 + 3 eps / 8)
        let p = natural();
        let e = EnergySpec::from_epsilon(&p, 0.01).unwrap();
        let tau = period_direct(&p, &e, &cfg).unwrap();
        let weak = 2.0 * PI * (1.0 + 3.0 * 0.01 / 8.0);
        assert!((tau / weak - 1.0).abs() < 1e-4);
    }

    #[test]
    fn period_direct_is_monotone_in_epsilon() {
        let p = natural();
        let cfg = QuadratureConfig::default();
        let mut prev = 0.0;
        for i in 1..=40 {
            let eps = 0.01 * i as f64;
            let e = EnergySpec::from_epsilon(&p, eps).unwrap();
            let tau = period_direct(&p, &e, &cfg).unwrap();
            assert!(tau > prev, "tau must increase with eps");
            prev = tau;
        }
    }

    #[test]
    fn node_doubling_shrinks_error_on_smooth_integrands() {
        // sanity check on the substitution: the transformed action integrand
        // is smooth, so doubling the node count must cut the error by far
        // more than 4x until it hits the floating-point floor
        let p = natural();
        let e = EnergySpec::from_epsilon(&p, 5.0).unwrap();
        let tp = model::turning_points_x(&p, &e);
        let (x2, x4) = (tp.inner(), tp.outer());
        let f = move |theta: f64| {
            let (s, c) = theta.sin_cos();
            0.5 * x2 * x2 * c * c * (x4 * x4 - x2 * x2 * s * s).sqrt()
        };
        let reference = gauss_legendre_panels(&f, 0.0, FRAC_PI_2, 192, 1);
        let err8 = (gauss_legendre_panels(&f, 0.0, FRAC_PI_2, 8, 1) - reference).abs();
        let err16 = (gauss_legendre_panels(&f, 0.0, FRAC_PI_2, 16, 1) - reference).abs();
        let err32 = (gauss_legendre_panels(&f, 0.0, FRAC_PI_2, 32, 1) - reference).abs();
        assert!(err8 > 4.0 * err16, "err8 = {err8:e}, err16 = {err16:e}");
        if err32 > 1e-13 * reference.abs() {
            assert!(err16 > 4.0 * err32, "err16 = {err16:e}, err32 = {err32:e}");
        }
    }

    #[test]
    fn config_validation() {
        let p = natural();
        let e = EnergySpec::from_epsilon(&p, 0.1).unwrap();
        let bad_nodes = QuadratureConfig {
            node_count: 4,
            ..Default::default()
        };
        assert!(matches!(
            action_quadrature(&p, &e, &bad_nodes),
            Err(OracleError::InvalidConfig { .. })
        ));
        let bad_tol = QuadratureConfig {
            target_rel_tol: 1e-16,
            ..Default::default()
        };
        assert!(matches!(
            action_quadrature(&p, &e, &bad_tol),
            Err(OracleError::InvalidConfig { .. })
        ));
    }

    #[test]
    fn unvalidated_regime_is_flagged() {
        let p = natural();
        let cfg = QuadratureConfig::default();
        let e = EnergySpec::from_epsilon(&p, 20.0).unwrap();
        let j = action_quadrature(&p, &e, &cfg).unwrap();
        assert_eq!(j.flags, vec![ResultFlag::UnvalidatedRegime]);
        let e = EnergySpec::from_epsilon(&p, 0.1).unwrap();
        assert!(action_quadrature(&p, &e, &cfg).unwrap().flags.is_empty());
    }

    #[test]
    fn reports_convergence_failure_on_hostile_integrands() {
        // sqrt of a kink has an interior singular derivative that panel
        // doubling cannot push to 1e-13
        let f = |x: f64| (x - 0.3).abs().sqrt();
        let cfg = QuadratureConfig::default();
        assert!(matches!(
            integrate(&f, 0.0, 1.0, &cfg),
            Err(OracleError::QuadratureConvergence { .. })
        ));
    }

    #[test]
    fn gauss_rule_integrates_polynomials_exactly() {
        // n-point rule is exact through degree 2n-1
        let f = |x: f64| 7.0 * x.powi(9) - 3.0 * x.powi(4) + x + 2.0;
        let got = gauss_legendre_panels(&f, -1.0, 1.0, 8, 1);
        // odd powers vanish; int of -3x^4 is -6/5, constant gives 4
        assert_relative_eq!(got, 4.0 - 6.0 / 5.0, max_relative = 1e-14);
    }
}
