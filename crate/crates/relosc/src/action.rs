//! The action variable `J(E)` of the oscillator.
//!
//! Non-relativistically `J = E / omega0` exactly. Relativistically `J` is a
//! contour integral around the branch cut between the turning points, and
//! this module realizes its residue algebraically in two independent ways:
//!
//! - **pdx form**: expand the momentum `p(x)` in a Laurent series in the
//!   coordinate annulus `x_2R < |x| < x_4R`. The residue is a series in
//!   `r = (x_2R/x_4R)^2 = eps/(2+eps)`, which is below 1 for every energy.
//! - **xdp form**: expand the coordinate `x(p)` in the momentum annulus
//!   `p_2R < |p| < m c`. The residue is a series in `eps` itself; the
//!   annulus collapses at `eps = sqrt(2) - 1`, so evaluation past
//!   [`XDP_CONVERGENCE_GUARD`] carries a warning flag.
//!
//! Both series share the prefactor `(Etilde/omega0) sqrt(1 + eps/2)`, and
//! substituting `r(eps)` into the pdx bracket reproduces the xdp bracket
//! coefficient-for-coefficient — the strongest internal consistency check in
//! the crate. All bracket coefficients are exact rationals.

use std::sync::OnceLock;

use num::bigint::BigInt;
use num::One;

use crate::fps::{binomial_half, ratio, FormalSeries, Rational};
use crate::model::{EnergySpec, OscillatorParams};
use crate::{MethodKind, ResultFlag};

/// Variable tags used by the series in this crate.
pub(crate) const VAR_EPS: &str = "eps";
pub(crate) const VAR_R: &str = "r";
const VAR_U: &str = "u";

/// Default truncation order for series work; far beyond what any validated
/// energy needs (the order-32 tail at `eps = 0.4` is below 1e-22).
pub const DEFAULT_ORDER: usize = 32;

/// The xdp series result is flagged [`ResultFlag::Diverging`] from this
/// `eps` on; the underlying annulus collapses at `sqrt(2) - 1 ≈ 0.4142`.
pub const XDP_CONVERGENCE_GUARD: f64 = 0.4;

/// An action value with its provenance and a crude error estimate
/// (last retained series term scaled by the physical prefactor, or the
/// quadrature error estimate).
#[derive(Debug, Clone, PartialEq)]
pub struct ActionResult {
    pub value: f64,
    pub method: MethodKind,
    /// Truncation order used; 0 for closed forms and quadrature.
    pub order: usize,
    pub error_estimate: f64,
    pub flags: Vec<ResultFlag>,
}

/// `sqrt(1 - u)` as a formal series; its coefficients are the descending
/// binomial coefficients `(-1)^j C(1/2, j)` used by both residue extractions.
fn sqrt_one_minus_series(order: usize) -> FormalSeries {
    FormalSeries::one(VAR_U, order)
        .sub(&FormalSeries::identity(VAR_U, order))
        .expect("same variable")
        .sqrt()
        .expect("constant term is 1")
}

/// `sqrt(1 + eps/2)` as a formal series, the shared prefactor of both
/// bracket forms.
pub(crate) fn sqrt_one_plus_half_epsilon(order: usize) -> FormalSeries {
    let mut base = FormalSeries::one(VAR_EPS, order);
    if order >= 1 {
        base = base
            .add(&FormalSeries::identity(VAR_EPS, order).scale(&ratio(1, 2)))
            .expect("same variable");
    }
    base.sqrt().expect("constant term is 1")
}

/// The expansion ratio `r(eps) = eps / (2 + eps)` as a series in `eps`,
/// computed as `(eps/2) / (1 + eps/2)`. Its constant term vanishes, so it
/// can be substituted into the pdx bracket.
pub fn expansion_ratio_series(order: usize) -> FormalSeries {
    if order == 0 {
        return FormalSeries::zero(VAR_EPS, 0);
    }
    let denom = FormalSeries::one(VAR_EPS, order)
        .add(&FormalSeries::identity(VAR_EPS, order).scale(&ratio(1, 2)))
        .expect("same variable");
    FormalSeries::identity(VAR_EPS, order)
        .scale(&ratio(1, 2))
        .mul(&denom.reciprocal().expect("constant term is 1"))
        .expect("same variable")
}

/// pdx bracket `B(r)` via the formal-series product route.
///
/// In the coordinate annulus the momentum factors as
/// `p ∝ x sqrt(1 - (x_2R/x)^2) sqrt(1 - (x/x_4R)^2)`. Writing both roots as
/// binomial series, a term `u^j v^l` (with `u = (x_2R/x)^2`,
/// `v = (x/x_4R)^2`) carries the power `x^(1-2j+2l)`, so the `x^{-1}`
/// residue pairs `j = l + 1` and picks up `x_2R^2 r^l`. Normalizing by
/// `2 Etilde / omega0` and fixing the overall sign from the non-relativistic
/// limit leaves `B(r) = -2 sum_l s_{l+1} s_l r^l` where `s_j` are the
/// `sqrt(1-u)` coefficients.
pub fn pdx_bracket_series(order: usize) -> FormalSeries {
    let s = sqrt_one_minus_series(order + 1);
    let coeffs = (0..=order)
        .map(|l| {
            let prod = s.coeff(l + 1).unwrap() * s.coeff(l).unwrap();
            prod * ratio(-2, 1)
        })
        .collect();
    FormalSeries::from_coeffs(VAR_R, coeffs)
}

/// Closed-form pdx residue coefficient `c_b = 2 C(1/2, b+1) C(1/2, b)`.
///
/// Independent of the series route above; the two are cross-asserted in
/// tests to guard against sign and branch slips.
pub fn pdx_coefficient_closed_form(b: usize) -> Rational {
    binomial_half(b + 1) * binomial_half(b) * ratio(2, 1)
}

/// pdx bracket built entirely from the closed-form coefficients.
pub fn pdx_bracket_closed_form(order: usize) -> FormalSeries {
    FormalSeries::from_coeffs(VAR_R, (0..=order).map(pdx_coefficient_closed_form).collect())
}

/// The shape factor `f(p^2, eps)` of the xdp construction, expanded in
/// `w = (p/p_2R)^2`; entry `l` is the `w^l` coefficient as a series in `eps`.
///
/// `f` satisfies `f^2 = [(1+eps) - sqrt(1 - p^2/p_4R^2)] / [eps (1 - p^2/p_2R^2)]`
/// and equals 1 at `p = 0`. In the `w` variable every coefficient is a
/// polynomial in `eps`: the numerator's `w^n` coefficient is
/// `-C(1/2,n) 2^n eps^(n-1) (1+eps/2)^n` (with `p_4R^2 = -(m c)^2` and
/// `p_2R^2 = 2 eps (1+eps/2) (m c)^2`), the `1/(1-w)` denominator turns into
/// prefix sums, and the square root divides only by 2.
pub(crate) fn momentum_shape_factor(order: usize) -> Vec<FormalSeries> {
    let one = FormalSeries::one(VAR_EPS, order);
    let base = if order == 0 {
        one.clone()
    } else {
        FormalSeries::one(VAR_EPS, order)
            .add(&FormalSeries::identity(VAR_EPS, order).scale(&ratio(1, 2)))
            .expect("same variable")
    };

    // numerator-over-eps coefficients h_l in w
    let mut h = Vec::with_capacity(order + 1);
    h.push(one.clone());
    let mut base_pow = one.clone();
    for l in 1..=order {
        base_pow = base_pow.mul(&base).expect("same variable");
        let two_pow = Rational::from_integer(BigInt::one() << l);
        let factor = -binomial_half(l) * two_pow;
        h.push(base_pow.scale(&factor).shift_up(l - 1).truncated(order));
    }

    // divide by (1 - w): prefix sums
    let mut g = Vec::with_capacity(order + 1);
    g.push(h[0].clone());
    for l in 1..=order {
        let next = g[l - 1].add(&h[l]).expect("same variable");
        g.push(next);
    }

    // sqrt in w; the w^0 coefficient is exactly 1, so the recurrence only
    // ever divides by 2
    let mut phi: Vec<FormalSeries> = Vec::with_capacity(order + 1);
    phi.push(one);
    for l in 1..=order {
        let mut acc = g[l].clone();
        for i in 1..l {
            acc = acc
                .sub(&phi[i].mul(&phi[l - i]).expect("same variable"))
                .expect("same variable");
        }
        phi.push(acc.scale(&ratio(1, 2)));
    }
    phi
}

/// xdp bracket `X(eps)`: the `p^{-1}` residue of
/// `x(p) ∝ p sqrt(1 - (p_2R/p)^2) f(p^2, eps)`, normalized so `X(0) = 1`.
///
/// The same diagonal pairing as in the pdx case applies: `u^j w^l` (with
/// `u = (p_2R/p)^2`) carries `p^(1-2j+2l)`, so the residue takes `j = l+1`,
/// i.e. `X = -2 sum_l s_{l+1} phi_l` with the sign fixed by the
/// non-relativistic limit.
pub fn xdp_bracket_series(order: usize) -> FormalSeries {
    let s = sqrt_one_minus_series(order + 1);
    let phi = momentum_shape_factor(order);
    let mut x = FormalSeries::zero(VAR_EPS, order);
    for (l, phi_l) in phi.iter().enumerate() {
        let mult = s.coeff(l + 1).unwrap() * ratio(-2, 1);
        x = x.add(&phi_l.scale(&mult)).expect("same variable");
    }
    x
}

/// The two bracket series and the composed form that ties them together.
#[derive(Debug, Clone)]
pub struct BracketSeries {
    /// `B(r)`, constant term 1.
    pub pdx: FormalSeries,
    /// `X(eps)`, constant term 1.
    pub xdp: FormalSeries,
    /// `B(r(eps))` — equal to `xdp` coefficient-for-coefficient.
    pub pdx_in_epsilon: FormalSeries,
}

impl BracketSeries {
    pub fn compute(order: usize) -> Self {
        let pdx = pdx_bracket_series(order);
        let xdp = xdp_bracket_series(order);
        let pdx_in_epsilon = pdx
            .compose(&expansion_ratio_series(order))
            .expect("ratio series vanishes at zero");
        Self {
            pdx,
            xdp,
            pdx_in_epsilon,
        }
    }

    /// The default-order brackets, computed once and shared; safe for
    /// concurrent readers.
    pub fn shared() -> &'static Self {
        static SHARED: OnceLock<BracketSeries> = OnceLock::new();
        SHARED.get_or_init(|| Self::compute(DEFAULT_ORDER))
    }
}

fn bracket_at(order: usize, pick: fn(&BracketSeries) -> &FormalSeries) -> FormalSeries {
    if order <= DEFAULT_ORDER {
        pick(BracketSeries::shared()).truncated(order)
    } else {
        pick(&BracketSeries::compute(order)).clone()
    }
}

/// Non-relativistic action `J = E / omega0`, exact.
///
/// `total_energy` must be positive (type-level invariant of the callers).
pub fn action_nonrel(params: &OscillatorParams, total_energy: f64) -> ActionResult {
    assert!(total_energy > 0.0, "total energy must be positive");
    ActionResult {
        value: total_energy / params.omega0(),
        method: MethodKind::NonRelClosed,
        order: 0,
        error_estimate: 0.0,
        flags: Vec::new(),
    }
}

/// Relativistic action via the pdx residue series,
/// `J = (Etilde/omega0) sqrt(1+eps/2) B(eps/(2+eps))`; converges for every
/// `eps > 0`.
pub fn action_pdx(params: &OscillatorParams, energy: &EnergySpec, order: usize) -> ActionResult {
    let eps = energy.epsilon();
    let bracket = bracket_at(order, |b| &b.pdx);
    let eval = bracket.eval(eps / (2.0 + eps));
    let prefactor = energy.excess_energy() / params.omega0() * (1.0 + eps / 2.0).sqrt();
    ActionResult {
        value: prefactor * eval.value,
        method: MethodKind::PdxSeries,
        order,
        error_estimate: prefactor * eval.last_term,
        flags: Vec::new(),
    }
}

/// Relativistic action via the xdp residue series,
/// `J = (Etilde/omega0) sqrt(1+eps/2) X(eps)`. Past the convergence guard
/// the value is still computed but flagged.
pub fn action_xdp(params: &OscillatorParams, energy: &EnergySpec, order: usize) -> ActionResult {
    let eps = energy.epsilon();
    let bracket = bracket_at(order, |b| &b.xdp);
    let eval = bracket.eval(eps);
    let prefactor = energy.excess_energy() / params.omega0() * (1.0 + eps / 2.0).sqrt();
    let mut flags = Vec::new();
    if eps >= XDP_CONVERGENCE_GUARD {
        flags.push(ResultFlag::Diverging);
    }
    ActionResult {
        value: prefactor * eval.value,
        method: MethodKind::XdpSeries,
        order,
        error_estimate: prefactor * eval.last_term,
        flags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model;
    use approx::assert_relative_eq;

    #[test]
    fn pdx_bracket_printed_coefficients() {
        let b = pdx_bracket_series(3);
        assert_eq!(b.coeff(0).unwrap(), &ratio(1, 1));
        assert_eq!(b.coeff(1).unwrap(), &ratio(-1, 8));
        assert_eq!(b.coeff(2).unwrap(), &ratio(-1, 64));
        assert_eq!(b.coeff(3).unwrap(), &ratio(-5, 1024));
    }

    #[test]
    fn pdx_closed_form_matches_series_route() {
        let series = pdx_bracket_series(32);
        let closed = pdx_bracket_closed_form(32);
        assert_eq!(series, closed);
    }

    #[test]
    fn pdx_coefficients_negative_past_constant() {
        use num::Signed;
        let b = pdx_bracket_series(32);
        for l in 1..=32 {
            assert!(b.coeff(l).unwrap().is_negative(), "c_{l} should be < 0");
        }
    }

    #[test]
    fn xdp_bracket_low_order_coefficients() {
        // the eps^0..eps^2 values match the published bracket; eps^3 onward
        // are pinned by the composition identity and the quadrature oracle
        // (the printed eps^3 value 1/128 drops the third-order shape-factor
        // term; the full residue gives -101/8192)
        let x = xdp_bracket_series(4);
        assert_eq!(x.coeff(0).unwrap(), &ratio(1, 1));
        assert_eq!(x.coeff(1).unwrap(), &ratio(-1, 16));
        assert_eq!(x.coeff(2).unwrap(), &ratio(7, 256));
        assert_eq!(x.coeff(3).unwrap(), &ratio(-101, 8192));
        assert_eq!(x.coeff(4).unwrap(), &ratio(1485, 262144));
    }

    #[test]
    fn shape_factor_is_one_at_zero_momentum() {
        // f(p^2 = 0) = 1 exactly
        let phi = momentum_shape_factor(6);
        assert_eq!(phi[0], FormalSeries::one(VAR_EPS, 6));
        // and the first w coefficient is -eps/4
        let expected = FormalSeries::identity(VAR_EPS, 6).scale(&ratio(-1, 4));
        assert_eq!(phi[1], expected);
    }

    #[test]
    fn composition_identity_ties_the_two_forms() {
        let b = BracketSeries::compute(24);
        assert_eq!(b.pdx_in_epsilon, b.xdp);
    }

    #[test]
    fn sqrt_factorization_identity() {
        // sqrt(1+eps) = (1+eps/2) sqrt(1-r) sqrt(1+r) with r = eps/(2+eps)
        let order = 16;
        let one = FormalSeries::one(VAR_U, order);
        let u = FormalSeries::identity(VAR_U, order);
        let product = one
            .sub(&u)
            .unwrap()
            .sqrt()
            .unwrap()
            .mul(&one.add(&u).unwrap().sqrt().unwrap())
            .unwrap();
        let r = expansion_ratio_series(order);
        let lhs = FormalSeries::one(VAR_EPS, order)
            .add(&FormalSeries::identity(VAR_EPS, order))
            .unwrap()
            .sqrt()
            .unwrap();
        let one_plus_half = FormalSeries::one(VAR_EPS, order)
            .add(&FormalSeries::identity(VAR_EPS, order).scale(&ratio(1, 2)))
            .unwrap();
        let rhs = one_plus_half.mul(&product.compose(&r).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn low_energy_slope_is_three_sixteenths() {
        // d/deps [sqrt(1+eps/2) B(r(eps))] at eps = 0 is exactly 3/16
        let b = BracketSeries::compute(8);
        let dimensionless = sqrt_one_plus_half_epsilon(8)
            .mul(&b.pdx_in_epsilon)
            .unwrap();
        assert_eq!(dimensionless.coeff(1).unwrap(), &ratio(3, 16));
    }

    #[test]
    fn action_nonrel_examples() {
        let p = OscillatorParams::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(action_nonrel(&p, 1.0).value, 1.0);
        assert_eq!(action_nonrel(&p, 0.37).value, 0.37);
        let p = OscillatorParams::new(1.0, 4.0, 1.0).unwrap();
        assert_eq!(action_nonrel(&p, 2.0).value, 1.0);
    }

    #[test]
    fn action_pdx_has_nonrelativistic_limit() {
        let p = OscillatorParams::natural();
        let e = EnergySpec::from_epsilon(&p, 1e-10).unwrap();
        let j = action_pdx(&p, &e, 16);
        assert_relative_eq!(
            j.value * p.omega0() / e.excess_energy(),
            1.0,
            max_relative = 1e-10
        );
        assert!(j.flags.is_empty());
    }

    #[test]
    fn action_xdp_matches_action_pdx_well_inside_annulus() {
        let p = OscillatorParams::natural();
        let e = EnergySpec::from_epsilon(&p, 0.1).unwrap();
        let a = action_pdx(&p, &e, 24);
        let b = action_xdp(&p, &e, 24);
        assert_relative_eq!(a.value, b.value, max_relative = 1e-12);
    }

    #[test]
    fn action_xdp_partial_sum_check() {
        // eps = 0.05: the three printed terms approximate the bracket to
        // better than the first dropped term (~2e-6)
        let p = OscillatorParams::natural();
        let e = EnergySpec::from_epsilon(&p, 0.05).unwrap();
        let j = action_xdp(&p, &e, 32);
        let eps = 0.05f64;
        let partial = (1.0 + eps / 2.0).sqrt()
            * (1.0 - eps / 16.0 + 7.0 * eps * eps / 256.0);
        assert!((j.value * p.omega0() / e.excess_energy() - partial).abs() < 1e-5);
    }

    #[test]
    fn action_xdp_flags_past_the_guard() {
        let p = OscillatorParams::natural();
        let inside = EnergySpec::from_epsilon(&p, 0.39).unwrap();
        assert!(action_xdp(&p, &inside, 8).flags.is_empty());
        let at_guard = EnergySpec::from_epsilon(&p, 0.40).unwrap();
        assert_eq!(action_xdp(&p, &at_guard, 8).flags, vec![ResultFlag::Diverging]);
        let outside = EnergySpec::from_epsilon(&p, 0.5).unwrap();
        assert_eq!(action_xdp(&p, &outside, 8).flags, vec![ResultFlag::Diverging]);
    }

    #[test]
    fn dimensionless_ratio_invariant_under_rescaling() {
        let eps = 0.2;
        let reference = {
            let p = OscillatorParams::natural();
            let e = EnergySpec::from_epsilon(&p, eps).unwrap();
            action_pdx(&p, &e, 32).value * p.omega0() / e.excess_energy()
        };
        for (m, k, c) in [(2.0, 8.0, 3.0), (0.5, 0.1, 10.0), (7.0, 0.3, 0.2)] {
            let p = OscillatorParams::new(m, k, c).unwrap();
            let e = EnergySpec::from_epsilon(&p, eps).unwrap();
            let ratio = action_pdx(&p, &e, 32).value * p.omega0() / e.excess_energy();
            assert_relative_eq!(ratio, reference, max_relative = 1e-14);
        }
    }

    #[test]
    fn order_zero_brackets_are_the_constant_one() {
        let b = BracketSeries::compute(0);
        assert_eq!(b.pdx, FormalSeries::one(VAR_R, 0));
        assert_eq!(b.xdp, FormalSeries::one(VAR_EPS, 0));
        assert_eq!(b.pdx_in_epsilon, FormalSeries::one(VAR_EPS, 0));
    }

    #[test]
    fn shared_brackets_are_consistent() {
        let shared = BracketSeries::shared();
        assert_eq!(shared.pdx.order(), DEFAULT_ORDER);
        assert_eq!(shared.pdx_in_epsilon, shared.xdp);
        // truncation path agrees with a fresh computation
        assert_eq!(shared.pdx.truncated(8), pdx_bracket_series(8));
    }

    #[test]
    fn turning_point_ratio_matches_expansion_variable() {
        // the series variable r really is (x_2R/x_4R)^2
        let p = OscillatorParams::natural();
        let e = EnergySpec::from_epsilon(&p, 0.1).unwrap();
        let tp = model::turning_points_x(&p, &e);
        assert_relative_eq!(tp.ratio_sq(), 0.1 / 2.1, max_relative = 1e-14);
    }
}
