//! Coefficient rings for every series in the crate.
//!
//! A computation runs entirely in one mode: exact rationals ([`Rational`]) or
//! complex doubles ([`Complex64`]). Exact mode compares with `==`; complex mode
//! compares with a relative tolerance.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

pub use crate::rational::Rational;

/// Relative tolerance used by complex-mode equality.
pub const COMPLEX_REL_TOL: f64 = 1e-9;
/// Absolute floor below which a complex coefficient counts as zero.
pub const COMPLEX_ABS_ZERO: f64 = 1e-12;
/// Relative size under which a complex coefficient is treated as cancelled.
pub const COMPLEX_CANCEL_REL: f64 = 1e-10;

/// Which arithmetic a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Rational,
    Complex,
}

impl Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Rational => f.write_str("rational"),
            Mode::Complex => f.write_str("complex"),
        }
    }
}

/// Field operations plus the comparison policy of one arithmetic mode.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const MODE: Mode;

    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;

    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn div_ref(&self, rhs: &Self) -> Self;

    /// `self += a * b`
    fn add_product(&mut self, a: &Self, b: &Self);

    /// Euclidean magnitude as a double (for reports and tolerances).
    fn magnitude(&self) -> f64;

    /// Exact zero in rational mode, `|c| <= 1e-12` in complex mode.
    fn is_negligible(&self) -> bool;

    /// Zero after cancellation against terms of size `scale`.
    fn is_cancelled(&self, scale: f64) -> bool;

    /// Equality under the mode's policy: exact, or relative `tol` (absolute
    /// `1e-12` near zero).
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// `p/q` for rationals, `re+imi` for complex numbers.
    fn render(&self) -> String;

    fn to_json(&self) -> serde_json::Value;

    /// Real part as a double, used for sign checks on real data.
    fn real_part(&self) -> f64;

    /// Complex conjugate (identity on rationals).
    fn conj(&self) -> Self;

    /// Embeds a complex double; `None` when the mode cannot represent it.
    fn from_complex(c: Complex64) -> Option<Self>;
}

impl Coefficient for Rational {
    const MODE: Mode = Mode::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_i64s(v, 1)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self += a * b;
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn is_cancelled(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }

    fn real_part(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_complex(_c: Complex64) -> Option<Self> {
        None
    }
}

impl Coefficient for Complex64 {
    const MODE: Mode = Mode::Complex;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_rational(r: &Rational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self) -> bool {
        self.norm() <= COMPLEX_ABS_ZERO
    }

    fn is_cancelled(&self, scale: f64) -> bool {
        self.norm() <= COMPLEX_CANCEL_REL * scale.max(1.0)
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let diff = (self - other).norm();
        let scale = self.norm().max(other.norm());
        diff <= COMPLEX_ABS_ZERO || diff <= tol * scale
    }

    fn render(&self) -> String {
        if self.im == 0.0 {
            format!("{}", self.re)
        } else if self.im < 0.0 {
            format!("{}-{}i", self.re, -self.im)
        } else {
            format!("{}+{}i", self.re, self.im)
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "re": self.re, "im": self.im })
    }

    fn real_part(&self) -> f64 {
        self.re
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn from_complex(c: Complex64) -> Option<Self> {
        Some(c)
    }
}

/// Shorthand for a rational `num/den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::from_i64s(num, den)
}

/// Largest magnitude among `values` (0 for an empty slice).
pub fn max_magnitude<'a, C: Coefficient>(values: impl IntoIterator<Item = &'a C>) -> f64 {
    values
        .into_iter()
        .map(|c| c.magnitude())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_render_is_p_over_q() {
        assert_eq!(ratio(6, 8).render(), "3/4");
        assert_eq!(ratio(-4, 2).render(), "-2");
    }

    #[test]
    fn complex_tolerance_is_relative() {
        let a = Complex64::new(1e6, 0.0);
        let b = Complex64::new(1e6 + 1e-4, 0.0);
        assert!(a.approx_eq(&b, COMPLEX_REL_TOL));
        assert!(
            !Complex64::new(1.0, 0.0).approx_eq(&Complex64::new(1.0 + 1e-6, 0.0), COMPLEX_REL_TOL)
        );
        assert!(Complex64::new(1e-13, 0.0).approx_eq(&Complex64::new(0.0, 0.0), COMPLEX_REL_TOL));
    }

    #[test]
    fn negligible_policy() {
        assert!(Complex64::new(5e-13, 0.0).is_negligible());
        assert!(!Complex64::new(1e-11, 0.0).is_negligible());
        assert!(!ratio(1, 1_000_000_000).is_negligible());
    }
}
