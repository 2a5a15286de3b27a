use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::{max_magnitude, Coefficient};
use crate::error::{Error, Result};

use super::series1::{mul_trunc, Series1};
use super::ArithOp;

/// Truncated bivariate series `Σ c_{j,k} z^j w^k`, known for `j, k ≤ N`.
///
/// Truncation is rectangular: each variable is cut at degree `N`
/// independently, so the per-variable substitutions used throughout the crate
/// never lose coefficients they need.
#[derive(Clone, PartialEq)]
pub struct Series2<C> {
    order: usize,
    /// Row-major: `coeffs[j * (N + 1) + k]` is the coefficient of `z^j w^k`.
    coeffs: Vec<C>,
}

impl<C: Coefficient> fmt::Debug for Series2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Series2(order {}) [", self.order)?;
        for j in 0..=self.order {
            let row: Vec<String> = (0..=self.order)
                .map(|k| self.coeff(j, k).render())
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<C: Coefficient> Series2<C> {
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut coeffs = Vec::with_capacity((order + 1) * (order + 1));
        for j in 0..=order {
            for k in 0..=order {
                coeffs.push(f(j, k));
            }
        }
        Series2 { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series2 {
            order,
            coeffs: vec![C::zero(); (order + 1) * (order + 1)],
        }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    /// The series `z`.
    pub fn var_z(order: usize) -> Self {
        Self::embed_z(&Series1::variable(order))
    }

    /// The series `w`.
    pub fn var_w(order: usize) -> Self {
        Self::embed_w(&Series1::variable(order))
    }

    /// `f(z)` viewed as a function of `(z, w)`.
    pub fn embed_z(f: &Series1<C>) -> Self {
        let n = f.order();
        Self::from_fn(n, |j, k| {
            if k == 0 {
                f.coeff(j).clone()
            } else {
                C::zero()
            }
        })
    }

    /// `f(w)` viewed as a function of `(z, w)`.
    pub fn embed_w(f: &Series1<C>) -> Self {
        let n = f.order();
        Self::from_fn(n, |j, k| {
            if j == 0 {
                f.coeff(k).clone()
            } else {
                C::zero()
            }
        })
    }

    /// `f(z) g(w)`.
    pub fn outer(f: &Series1<C>, g: &Series1<C>) -> Self {
        let n = f.order().min(g.order());
        Self::from_fn(n, |j, k| f.coeff(j).mul_ref(g.coeff(k)))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    fn idx(&self, j: usize, k: usize) -> usize {
        j * (self.order + 1) + k
    }

    /// Coefficient of `z^j w^k`.
    ///
    /// # Panics
    /// If either index exceeds the order.
    pub fn coeff(&self, j: usize, k: usize) -> &C {
        assert!(
            j <= self.order && k <= self.order,
            "index beyond truncation order"
        );
        &self.coeffs[self.idx(j, k)]
    }

    pub fn coeffs(&self) -> impl Iterator<Item = ((usize, usize), &C)> {
        let n = self.order + 1;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| ((i / n, i % n), c))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self::from_fn(order, |j, k| self.coeff(j, k).clone())
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &C) -> Self {
        Series2 {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x.mul_ref(c)).collect(),
        }
    }

    pub fn add_constant(&self, c: &C) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].add_ref(c);
        out
    }

    /// Largest coefficient magnitude.
    pub fn scale_hint(&self) -> f64 {
        max_magnitude(&self.coeffs)
    }

    pub fn is_zero_series(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible())
    }

    /// True when every coefficient equals that of the constant `c`.
    pub fn is_constant(&self, c: &C, tol: f64) -> bool {
        self.coeffs().all(|((j, k), x)| {
            if j == 0 && k == 0 {
                x.approx_eq(c, tol)
            } else {
                x.approx_eq(&C::zero(), tol)
            }
        })
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let n = self.order.min(other.order);
        (0..=n).all(|j| (0..=n).all(|k| self.coeff(j, k).approx_eq(other.coeff(j, k), tol)))
    }

    /// First monomial (by total degree, then `z`-degree) where the two
    /// series disagree, over their common order.
    pub fn first_difference(&self, other: &Self, tol: f64) -> Option<(usize, usize)> {
        let n = self.order.min(other.order);
        for total in 0..=2 * n {
            for j in total.saturating_sub(n)..=total.min(n) {
                let k = total - j;
                if !self.coeff(j, k).approx_eq(other.coeff(j, k), tol) {
                    return Some((j, k));
                }
            }
        }
        None
    }

    /// Largest `|self − other|` coefficient over the common order.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.order.min(other.order);
        let mut m: f64 = 0.0;
        for j in 0..=n {
            for k in 0..=n {
                m = m.max(self.coeff(j, k).sub_ref(other.coeff(j, k)).magnitude());
            }
        }
        m
    }

    /// The series as a function of `z` alone, if it has no `w` dependence.
    pub fn as_z_only(&self) -> Option<Series1<C>> {
        let scale = self.scale_hint();
        for j in 0..=self.order {
            for k in 1..=self.order {
                if !self.coeff(j, k).is_cancelled(scale) {
                    return None;
                }
            }
        }
        Some(Series1::from_fn(self.order, |j| self.coeff(j, 0).clone()))
    }

    /// The series as a function of `w` alone, if it has no `z` dependence.
    pub fn as_w_only(&self) -> Option<Series1<C>> {
        let scale = self.scale_hint();
        for j in 1..=self.order {
            for k in 0..=self.order {
                if !self.coeff(j, k).is_cancelled(scale) {
                    return None;
                }
            }
        }
        Some(Series1::from_fn(self.order, |k| self.coeff(0, k).clone()))
    }

    /// Multiplicative inverse by solving `Σ f_{i,j} r_{p-i,q-j} = δ` in
    /// lexicographic order.
    pub fn reciprocal(&self) -> Result<Self> {
        let f00 = self.coeff(0, 0);
        if f00.is_negligible() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order;
        let inv0 = C::one().div_ref(f00);
        let mut r = Self::zero(n);
        r.coeffs[0] = inv0.clone();
        for p in 0..=n {
            for q in 0..=n {
                if p == 0 && q == 0 {
                    continue;
                }
                let mut acc = C::zero();
                for i in 0..=p {
                    for j in 0..=q {
                        if i == 0 && j == 0 {
                            continue;
                        }
                        acc.add_product(self.coeff(i, j), r.coeff(p - i, q - j));
                    }
                }
                let at = r.idx(p, q);
                r.coeffs[at] = -(acc.mul_ref(&inv0));
            }
        }
        Ok(r)
    }

    /// `F(g(z), h(w))`; both substituted series must vanish at the origin.
    pub fn compose_slots(&self, g: &Series1<C>, h: &Series1<C>) -> Result<Self> {
        if !g.coeff(0).is_negligible() || !h.coeff(0).is_negligible() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order.min(g.order()).min(h.order());
        let powers = |s: &Series1<C>| {
            let mut base: Vec<C> = s.coeffs()[..=n].to_vec();
            base[0] = C::zero();
            let mut out = Vec::with_capacity(n + 1);
            let mut cur = vec![C::zero(); n + 1];
            cur[0] = C::one();
            for _ in 0..=n {
                out.push(cur.clone());
                cur = mul_trunc(&cur, &base, n);
            }
            out
        };
        let gp = powers(g);
        let hp = powers(h);
        // t[j][q] = Σ_k F[j][k] h^k[q]
        let mut t = vec![vec![C::zero(); n + 1]; n + 1];
        for (j, row) in t.iter_mut().enumerate() {
            for k in 0..=n {
                let f = self.coeff(j, k);
                if f.is_zero() {
                    continue;
                }
                for (q, slot) in row.iter_mut().enumerate() {
                    slot.add_product(f, &hp[k][q]);
                }
            }
        }
        let mut out = Self::zero(n);
        for p in 0..=n {
            for q in 0..=n {
                let mut acc = C::zero();
                for j in 0..=n {
                    acc.add_product(&gp[j][p], &t[j][q]);
                }
                let at = out.idx(p, q);
                out.coeffs[at] = acc;
            }
        }
        Ok(out)
    }

    fn check_vanishing(
        &self,
        what: &'static str,
        cells: impl Iterator<Item = (usize, usize)>,
    ) -> Result<()> {
        let scale = self.scale_hint();
        for (j, k) in cells {
            let c = self.coeff(j, k);
            if !c.is_cancelled(scale) {
                return Err(Error::NotDivisible {
                    what,
                    monomial: format!("z^{j} w^{k}"),
                    residue: c.magnitude(),
                });
            }
        }
        Ok(())
    }

    fn need_positive_order(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::InsufficientPrecision {
                needed: 0,
                available: -1,
            });
        }
        Ok(())
    }

    /// Exact division by `z`: row 0 must vanish. Precision drops by one.
    pub fn div_z(&self) -> Result<Self> {
        self.need_positive_order()?;
        self.check_vanishing("division by z", (0..=self.order).map(|k| (0, k)))?;
        Ok(Self::from_fn(self.order - 1, |j, k| {
            self.coeff(j + 1, k).clone()
        }))
    }

    /// Exact division by `w`: column 0 must vanish.
    pub fn div_w(&self) -> Result<Self> {
        self.need_positive_order()?;
        self.check_vanishing("division by w", (0..=self.order).map(|j| (j, 0)))?;
        Ok(Self::from_fn(self.order - 1, |j, k| {
            self.coeff(j, k + 1).clone()
        }))
    }

    /// Exact division by `zw`: row 0 and column 0 must vanish.
    pub fn div_zw(&self) -> Result<Self> {
        self.need_positive_order()?;
        let n = self.order;
        self.check_vanishing(
            "division by zw",
            (0..=n).map(|k| (0, k)).chain((1..=n).map(|j| (j, 0))),
        )?;
        Ok(Self::from_fn(n - 1, |j, k| {
            self.coeff(j + 1, k + 1).clone()
        }))
    }

    /// Multiplication by `z`; the top row falls outside the truncation.
    pub fn mul_z(&self) -> Self {
        Self::from_fn(self.order, |j, k| {
            if j == 0 {
                C::zero()
            } else {
                self.coeff(j - 1, k).clone()
            }
        })
    }

    /// Multiplication by `w`.
    pub fn mul_w(&self) -> Self {
        Self::from_fn(self.order, |j, k| {
            if k == 0 {
                C::zero()
            } else {
                self.coeff(j, k - 1).clone()
            }
        })
    }

    /// Rebuild with every coefficient passed through `f`.
    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        Series2 {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl<C: Coefficient> Add for &Series2<C> {
    type Output = Series2<C>;
    fn add(self, rhs: &Series2<C>) -> Series2<C> {
        let n = self.order.min(rhs.order);
        Series2::from_fn(n, |j, k| self.coeff(j, k).add_ref(rhs.coeff(j, k)))
    }
}

impl<C: Coefficient> Sub for &Series2<C> {
    type Output = Series2<C>;
    fn sub(self, rhs: &Series2<C>) -> Series2<C> {
        let n = self.order.min(rhs.order);
        Series2::from_fn(n, |j, k| self.coeff(j, k).sub_ref(rhs.coeff(j, k)))
    }
}

impl<C: Coefficient> Mul for &Series2<C> {
    type Output = Series2<C>;
    fn mul(self, rhs: &Series2<C>) -> Series2<C> {
        let n = self.order.min(rhs.order);
        let mut out = Series2::<C>::zero(n);
        for i1 in 0..=n {
            for i2 in 0..=n {
                let a = self.coeff(i1, i2);
                if a.is_zero() {
                    continue;
                }
                for j1 in 0..=n - i1 {
                    for j2 in 0..=n - i2 {
                        let at = out.idx(i1 + j1, i2 + j2);
                        out.coeffs[at].add_product(a, rhs.coeff(j1, j2));
                    }
                }
            }
        }
        out
    }
}

impl<C: Coefficient> Neg for &Series2<C> {
    type Output = Series2<C>;
    fn neg(self) -> Series2<C> {
        self.map(|c| -c.clone())
    }
}

/// Strict arithmetic on equal-order bivariate series.
pub fn s2_arith<C: Coefficient>(f: &Series2<C>, g: &Series2<C>, op: ArithOp) -> Result<Series2<C>> {
    match op {
        ArithOp::Add => f.checked_add(g),
        ArithOp::Sub => f.checked_sub(g),
        ArithOp::Mul => f.checked_mul(g),
    }
}
