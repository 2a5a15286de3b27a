use crate::coeff::Coefficient;
use crate::error::{Error, Result};

use super::series2::Series2;

/// Upper-triangular matrix function `[[d1, ζ·off], [0, d2]]` of
/// `Γ = [[z, ζ], [0, w]]`.
///
/// Only the `ζ`-linear slice is stored. That is exact rather than a
/// truncation: in a product of two such matrices the two off-diagonal
/// entries never meet, so no `ζ²` term can arise.
#[derive(Clone, PartialEq)]
pub struct UTGammaSeries<C> {
    pub d1: Series2<C>,
    pub off: Series2<C>,
    pub d2: Series2<C>,
}

impl<C: Coefficient> std::fmt::Debug for UTGammaSeries<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UTGammaSeries")
            .field("d1", &self.d1)
            .field("off", &self.off)
            .field("d2", &self.d2)
            .finish()
    }
}

impl<C: Coefficient> UTGammaSeries<C> {
    pub fn new(d1: Series2<C>, off: Series2<C>, d2: Series2<C>) -> Self {
        UTGammaSeries { d1, off, d2 }
    }

    pub fn identity(order: usize) -> Self {
        UTGammaSeries {
            d1: Series2::one(order),
            off: Series2::zero(order),
            d2: Series2::one(order),
        }
    }

    /// `Γ` itself: `d1 = z`, `off = 1`, `d2 = w`.
    pub fn gamma(order: usize) -> Self {
        UTGammaSeries {
            d1: Series2::var_z(order),
            off: Series2::one(order),
            d2: Series2::var_w(order),
        }
    }

    /// Common precision of the three entries.
    pub fn order(&self) -> usize {
        self.d1.order().min(self.off.order()).min(self.d2.order())
    }

    pub fn truncate(&self, order: usize) -> Self {
        UTGammaSeries {
            d1: self.d1.truncate(order),
            off: self.off.truncate(order),
            d2: self.d2.truncate(order),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.order() != rhs.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: rhs.order(),
            });
        }
        Ok(UTGammaSeries {
            d1: &self.d1 * &rhs.d1,
            off: &(&self.d1 * &rhs.off) + &(&self.off * &rhs.d2),
            d2: &self.d2 * &rhs.d2,
        })
    }

    /// `[[1/d1, −off/(d1 d2)], [0, 1/d2]]`.
    pub fn inverse(&self) -> Result<Self> {
        let i1 = self.d1.reciprocal()?;
        let i2 = self.d2.reciprocal()?;
        let off = -&(&(&self.off * &i1) * &i2);
        Ok(UTGammaSeries {
            d1: i1,
            off,
            d2: i2,
        })
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.d1.approx_eq(&other.d1, tol)
            && self.off.approx_eq(&other.off, tol)
            && self.d2.approx_eq(&other.d2, tol)
    }

    /// Largest entrywise coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.d1
            .max_abs_diff(&other.d1)
            .max(self.off.max_abs_diff(&other.off))
            .max(self.d2.max_abs_diff(&other.d2))
    }
}

pub fn ut_mul<C: Coefficient>(
    a: &UTGammaSeries<C>,
    b: &UTGammaSeries<C>,
) -> Result<UTGammaSeries<C>> {
    a.mul(b)
}

pub fn ut_inverse<C: Coefficient>(a: &UTGammaSeries<C>) -> Result<UTGammaSeries<C>> {
    a.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{ratio, Rational};

    #[test]
    fn gamma_squared() {
        let g = UTGammaSeries::<Rational>::gamma(4);
        let sq = ut_mul(&g, &g).unwrap();
        assert_eq!(sq.d1, &Series2::var_z(4) * &Series2::var_z(4));
        assert_eq!(sq.off, &Series2::var_z(4) + &Series2::var_w(4));
        assert_eq!(sq.d2, &Series2::var_w(4) * &Series2::var_w(4));
    }

    #[test]
    fn constant_inverse() {
        let n = 2;
        let rho = ratio(5, 3);
        let a = UTGammaSeries::new(
            Series2::constant(ratio(2, 1), n),
            Series2::constant(rho.clone(), n),
            Series2::constant(ratio(2, 1), n),
        );
        let inv = ut_inverse(&a).unwrap();
        assert_eq!(inv.d1, Series2::constant(ratio(1, 2), n));
        assert_eq!(inv.off, Series2::constant(-rho / ratio(4, 1), n));
        assert_eq!(ut_mul(&a, &inv).unwrap(), UTGammaSeries::identity(n));
        assert_eq!(
            ut_inverse(&UTGammaSeries::<Rational>::identity(n)).unwrap(),
            UTGammaSeries::identity(n)
        );
    }

    #[test]
    fn singular_diagonal_is_rejected() {
        assert!(ut_inverse(&UTGammaSeries::<Rational>::gamma(3)).is_err());
    }
}
