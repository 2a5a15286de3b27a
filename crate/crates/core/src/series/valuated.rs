use crate::coeff::Coefficient;
use crate::error::{Error, Result};

use super::series2::Series2;

/// `z^p w^q · u(z, w)` with `u` a truncated series.
///
/// Used for reciprocals of series that vanish at the origin. The unit `u` of
/// order `n` makes the value known for `z`-degree `≤ p + n` and `w`-degree
/// `≤ q + n`. Every constructor strips leading zero rows and columns of `u`,
/// so the valuation is maximal; after an addition `u(0,0)` can still vanish
/// (e.g. `z + w`), in which case [`ValuatedSeries2::recip`] refuses.
#[derive(Clone, PartialEq)]
pub struct ValuatedSeries2<C> {
    valuation: (i64, i64),
    unit: Series2<C>,
    zero: bool,
}

/// Operation selector for [`v2_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValuatedOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl<C: Coefficient> std::fmt::Debug for ValuatedSeries2<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ValuatedSeries2")
            .field("valuation", &self.valuation)
            .field("zero", &self.zero)
            .field("unit", &self.unit)
            .finish()
    }
}

impl<C: Coefficient> ValuatedSeries2<C> {
    fn normalize(p: i64, q: i64, grid: Series2<C>, scale: f64) -> Self {
        let n = grid.order();
        let row_zero = |j: usize| (0..=n).all(|k| grid.coeff(j, k).is_cancelled(scale));
        let col_zero = |k: usize| (0..=n).all(|j| grid.coeff(j, k).is_cancelled(scale));
        let s = (0..=n).take_while(|&j| row_zero(j)).count();
        if s == n + 1 {
            return ValuatedSeries2 {
                valuation: (p, q),
                unit: Series2::zero(n),
                zero: true,
            };
        }
        let t = (0..=n).take_while(|&k| col_zero(k)).count();
        let m = n - s.max(t);
        let unit = Series2::from_fn(m, |j, k| grid.coeff(j + s, k + t).clone());
        ValuatedSeries2 {
            valuation: (p + s as i64, q + t as i64),
            unit,
            zero: false,
        }
    }

    /// Canonical form of an ordinary series.
    pub fn from_series(f: &Series2<C>) -> Self {
        Self::normalize(0, 0, f.clone(), f.scale_hint())
    }

    /// `z^p w^q · f`, normalized.
    pub fn from_parts(valuation: (i64, i64), f: &Series2<C>) -> Self {
        Self::normalize(valuation.0, valuation.1, f.clone(), f.scale_hint())
    }

    pub fn valuation(&self) -> (i64, i64) {
        self.valuation
    }

    pub fn unit(&self) -> &Series2<C> {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// Highest `z`- and `w`-degrees at which the value is known.
    pub fn precision(&self) -> (i64, i64) {
        let n = self.unit.order() as i64;
        (self.valuation.0 + n, self.valuation.1 + n)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.valuation.0 + rhs.valuation.0;
        let q = self.valuation.1 + rhs.valuation.1;
        let unit = &self.unit * &rhs.unit;
        if self.zero || rhs.zero {
            return ValuatedSeries2 {
                valuation: (p, q),
                unit: Series2::zero(unit.order()),
                zero: true,
            };
        }
        let scale = self.unit.scale_hint() * rhs.unit.scale_hint();
        Self::normalize(p, q, unit, scale)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.zero {
            return Err(Error::DivisionByZero);
        }
        if self.unit.coeff(0, 0).is_negligible() {
            return Err(Error::ZeroConstantTerm);
        }
        Ok(ValuatedSeries2 {
            valuation: (-self.valuation.0, -self.valuation.1),
            unit: self.unit.reciprocal()?,
            zero: false,
        })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.recip()?))
    }

    pub fn neg(&self) -> Self {
        ValuatedSeries2 {
            valuation: self.valuation,
            unit: -&self.unit,
            zero: self.zero,
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        let p = self.valuation.0.min(rhs.valuation.0);
        let q = self.valuation.1.min(rhs.valuation.1);
        let (za, wa) = self.precision();
        let (zb, wb) = rhs.precision();
        let rel = (za.min(zb) - p).min(wa.min(wb) - q);
        if rel < 0 {
            return Err(Error::InsufficientPrecision {
                needed: 0,
                available: rel,
            });
        }
        let n = rel as usize;
        let mut grid = Series2::zero(n);
        let scale = self.unit.scale_hint().max(rhs.unit.scale_hint());
        let place = |grid: &Series2<C>, src: &Self| -> Series2<C> {
            if src.zero {
                return grid.clone();
            }
            let dj = (src.valuation.0 - p) as usize;
            let dk = (src.valuation.1 - q) as usize;
            let m = src.unit.order();
            Series2::from_fn(n, |j, k| {
                let base = grid.coeff(j, k);
                if j >= dj && k >= dk && j - dj <= m && k - dk <= m {
                    base.add_ref(src.unit.coeff(j - dj, k - dk))
                } else {
                    base.clone()
                }
            })
        };
        grid = place(&grid, self);
        grid = place(&grid, rhs);
        Ok(Self::normalize(p, q, grid, scale))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    /// The value as an ordinary series; fails when the valuation is negative.
    pub fn to_series(&self) -> Result<Series2<C>> {
        let (p, q) = self.valuation;
        if p < 0 || q < 0 {
            return Err(Error::NotDivisible {
                what: "valuated series has a pole",
                monomial: format!("z^{p} w^{q}"),
                residue: f64::INFINITY,
            });
        }
        let n = self.unit.order() + p.min(q) as usize;
        if self.zero {
            return Ok(Series2::zero(n));
        }
        let (p, q) = (p as usize, q as usize);
        let m = self.unit.order();
        Ok(Series2::from_fn(n, |j, k| {
            if j >= p && k >= q && j - p <= m && k - q <= m {
                self.unit.coeff(j - p, k - q).clone()
            } else {
                C::zero()
            }
        }))
    }

    /// Like [`to_series`](Self::to_series) but truncated to `order`, failing
    /// if the value is not known that far.
    pub fn to_series_at(&self, order: usize) -> Result<Series2<C>> {
        let s = self.to_series()?;
        if s.order() < order {
            return Err(Error::InsufficientPrecision {
                needed: order,
                available: s.order() as i64,
            });
        }
        Ok(s.truncate(order))
    }
}

/// Arithmetic on valuated series.
pub fn v2_arith<C: Coefficient>(
    lhs: &ValuatedSeries2<C>,
    rhs: &ValuatedSeries2<C>,
    op: ValuatedOp,
) -> Result<ValuatedSeries2<C>> {
    match op {
        ValuatedOp::Add => lhs.add(rhs),
        ValuatedOp::Sub => lhs.sub(rhs),
        ValuatedOp::Mul => Ok(lhs.mul(rhs)),
        ValuatedOp::Div => lhs.div(rhs),
    }
}
