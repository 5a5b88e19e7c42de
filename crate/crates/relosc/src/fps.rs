//! Truncated formal power series over exact rational coefficients.
//!
//! Every Laurent/binomial expansion in the crate is produced by this engine,
//! so coefficients like `-1/8` or `-101/8192` come out as exact fractions
//! rather than floats. A series carries its truncation order explicitly and
//! a variable tag; mixing series in different variables is an error, not a
//! silent bug.
//!
//! Arithmetic follows the usual truncated-ring rules: binary operations
//! return the minimum of the two orders, `shift_up` (multiplication by the
//! variable) extends the order because no information is lost, and
//! `differentiate` drops it by one.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact coefficient type: arbitrary-precision rational.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series variable mismatch: `{left}` vs `{right}`")]
    VariableMismatch { left: &'static str, right: &'static str },
    #[error("series sqrt needs a positive constant term, got {got} (branch ambiguity)")]
    NonPositiveConstantTerm { got: String },
    #[error("series sqrt needs a constant term with a rational square root, got {got}")]
    IrrationalConstantTerm { got: String },
    #[error("series reciprocal needs a nonzero constant term")]
    ZeroConstantTerm,
    #[error("series composition needs an inner series with zero constant term, got {got}")]
    NonzeroInnerConstantTerm { got: String },
}

/// A power series truncated after `order` (inclusive): `c_0 + c_1 v + ... + c_order v^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSeries {
    coeffs: Vec<Rational>,
    var: &'static str,
}

/// Result of a floating-point series evaluation.
///
/// `last_term` is the magnitude of the highest retained term, a crude but
/// monotone-conservative truncation indicator for the alternating-sign tails
/// that show up here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    pub last_term: f64,
}

impl FormalSeries {
    /// Builds a series from ascending coefficients; the order is `coeffs.len() - 1`.
    ///
    /// Panics on an empty coefficient list (a series always knows at least
    /// its constant term).
    pub fn from_coeffs(var: &'static str, coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        Self { coeffs, var }
    }

    pub fn constant(var: &'static str, value: Rational, order: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[0] = value;
        Self { coeffs, var }
    }

    pub fn zero(var: &'static str, order: usize) -> Self {
        Self::constant(var, Rational::zero(), order)
    }

    pub fn one(var: &'static str, order: usize) -> Self {
        Self::constant(var, Rational::one(), order)
    }

    /// The series `v` itself, truncated at `order` (which must be >= 1).
    pub fn identity(var: &'static str, order: usize) -> Self {
        assert!(order >= 1, "identity needs order >= 1");
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[1] = Rational::one();
        Self { coeffs, var }
    }

    pub fn var(&self) -> &'static str {
        self.var
    }

    /// Truncation degree, inclusive: coefficients for `v^0..=v^order` are known.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `v^k`, or `None` beyond the truncation order
    /// (past the order the coefficient is unknown, not zero).
    pub fn coeff(&self, k: usize) -> Option<&Rational> {
        self.coeffs.get(k)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Drops coefficients above `order`. Truncating above the current order
    /// is a contract violation: the extra coefficients are unknown.
    pub fn truncated(&self, order: usize) -> Self {
        assert!(
            order <= self.order(),
            "cannot extend a series from order {} to {}",
            self.order(),
            order
        );
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
            var: self.var,
        }
    }

    fn check_var(&self, other: &Self) -> Result<(), SeriesError> {
        if self.var != other.var {
            return Err(SeriesError::VariableMismatch {
                left: self.var,
                right: other.var,
            });
        }
        Ok(())
    }

    /// Coefficientwise sum, truncated to the smaller order.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] + &other.coeffs[i])
            .collect();
        Ok(Self { coeffs, var: self.var })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            var: self.var,
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            var: self.var,
        }
    }

    /// Cauchy product, truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        let order = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Ok(Self { coeffs, var: self.var })
    }

    /// `self^n` by repeated multiplication at the current order.
    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.var, self.order());
        for _ in 0..n {
            out = out.mul(self).expect("same variable");
        }
        out
    }

    /// Multiplies by `v^k`. All known coefficients stay known, so the order
    /// grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs, var: self.var }
    }

    /// Principal square root: the series `s` with `s*s == self` through the
    /// truncation order and `s(0) > 0`.
    ///
    /// The constant term must be positive and a perfect rational square.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if !c0.is_positive() {
            return Err(SeriesError::NonPositiveConstantTerm { got: c0.to_string() });
        }
        let s0 = rational_sqrt(c0)
            .ok_or_else(|| SeriesError::IrrationalConstantTerm { got: c0.to_string() })?;
        let order = self.order();
        let mut s = Vec::with_capacity(order + 1);
        s.push(s0);
        let two_s0 = &s[0] * Rational::from_integer(BigInt::from(2));
        for n in 1..=order {
            // c_n = 2 s_0 s_n + sum_{i=1}^{n-1} s_i s_{n-i}
            let mut acc = self.coeffs[n].clone();
            for i in 1..n {
                acc -= &s[i] * &s[n - i];
            }
            s.push(acc / &two_s0);
        }
        Ok(Self { coeffs: s, var: self.var })
    }

    /// Multiplicative inverse through the truncation order; the constant term
    /// must be nonzero.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let order = self.order();
        let mut b = Vec::with_capacity(order + 1);
        b.push(c0.recip());
        for n in 1..=order {
            let mut acc = Rational::zero();
            for i in 1..=n {
                acc += &self.coeffs[i] * &b[n - i];
            }
            b.push(-(acc / c0));
        }
        Ok(Self { coeffs: b, var: self.var })
    }

    /// Substitutes `inner` for this series' variable. `inner` must vanish at
    /// zero so the composition is a well-defined truncated series; the result
    /// lives in `inner`'s variable at `inner`'s order.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        let i0 = &inner.coeffs[0];
        if !i0.is_zero() {
            return Err(SeriesError::NonzeroInnerConstantTerm { got: i0.to_string() });
        }
        // Horner in the outer variable: (((c_N) inner + c_{N-1}) inner + ...) + c_0
        let mut acc = FormalSeries::constant(
            inner.var,
            self.coeffs[self.order()].clone(),
            inner.order(),
        );
        for k in (0..self.order()).rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Termwise derivative; the order drops by one. Differentiating a
    /// constant-only series yields the zero series of order 0.
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(self.var, 0);
        }
        let coeffs = (1..=self.order())
            .map(|k| &self.coeffs[k] * Rational::from_integer(BigInt::from(k)))
            .collect();
        Self { coeffs, var: self.var }
    }

    /// Horner evaluation in floating point.
    pub fn eval(&self, x: f64) -> SeriesEval {
        let mut value = 0.0;
        for c in self.coeffs.iter().rev() {
            value = value * x + rational_to_f64(c);
        }
        let last = rational_to_f64(&self.coeffs[self.order()]);
        SeriesEval {
            value,
            last_term: (last * x.powi(self.order() as i32)).abs(),
        }
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                first = false;
                if k == 0 {
                    write!(f, "{c}")?;
                } else {
                    write!(f, "{c}*{}^{k}", self.var)?;
                }
            } else if k == 0 {
                write!(f, " + {c}")?;
            } else if c.is_negative() {
                write!(f, " - {}*{}^{k}", -c, self.var)?;
            } else {
                write!(f, " + {c}*{}^{k}", self.var)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}

/// Generalized binomial coefficient `C(1/2, n)`, the engine behind every
/// square-root expansion here: `sqrt(1+u) = sum_n C(1/2,n) u^n`.
///
/// Uses the falling-factorial recurrence `C(1/2,n+1) = C(1/2,n) (1/2-n)/(n+1)`.
pub fn binomial_half(n: usize) -> Rational {
    let mut c = Rational::one();
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    for i in 0..n {
        let i_r = Rational::from_integer(BigInt::from(i));
        let ip1 = Rational::from_integer(BigInt::from(i + 1));
        c = c * (&half - &i_r) / ip1;
    }
    c
}

/// Exact rational square root, if one exists.
fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Lossy conversion to `f64`, robust to numerators/denominators that each
/// overflow the double range.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() || q.numer().bits() > 1000 || q.denom().bits() > 1000 {
            return v;
        }
    }
    // Fall back to shifting both parts into range; exactness loss is far
    // below f64 resolution.
    let bits = q.numer().bits().max(q.denom().bits());
    let shift = bits.saturating_sub(512);
    let n = q.numer() >> shift;
    let d = q.denom() >> shift;
    n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
}

/// Convenience constructor for small rationals in tests and series setup.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}
