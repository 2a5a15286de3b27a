use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};

/// Truncated power series `Σ_{k≤N} c_k z^k + O(z^{N+1})`.
///
/// The order `N` is the precision: every coefficient up to `z^N` is exact
/// and nothing beyond it is known. Operator arithmetic (`&a + &b`, `&a * &b`)
/// returns a result at the smaller of the two orders, which is the precision
/// the result actually has. The `checked_*` methods instead insist on equal
/// orders.
#[derive(Clone, Debug, PartialEq)]
pub struct Series1<C> {
    coeffs: Vec<C>,
}

pub(crate) fn mul_trunc<C: Coefficient>(a: &[C], b: &[C], order: usize) -> Vec<C> {
    let mut out = vec![C::zero(); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j].add_product(ai, bj);
        }
    }
    out
}

/// `f(g)` modulo `z^{order+1}` by Horner's rule; `g[0]` must be zero.
pub(crate) fn compose_trunc<C: Coefficient>(f: &[C], g: &[C], order: usize) -> Vec<C> {
    let top = f.len().min(order + 1);
    let mut acc = vec![C::zero(); order + 1];
    for k in (0..top).rev() {
        acc = mul_trunc(&acc, g, order);
        acc[0] = acc[0].add_ref(&f[k]);
    }
    acc
}

fn padded<C: Coefficient>(c: &[C], order: usize) -> Vec<C> {
    let mut v: Vec<C> = c.iter().take(order + 1).cloned().collect();
    v.resize(order + 1, C::zero());
    v
}

impl<C: Coefficient> Series1<C> {
    /// Series from its coefficients `c_0..c_N`; the order is `len - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least a constant term"
        );
        Series1 { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> C) -> Self {
        Series1 {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        Series1 {
            coeffs: vec![C::zero(); order + 1],
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
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = C::one();
        }
        s
    }

    /// `1/(1-z) = 1 + z + z² + …`
    pub fn geometric(order: usize) -> Self {
        Self::from_fn(order, |_| C::one())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `z^k`.
    ///
    /// # Panics
    /// If `k` exceeds the order.
    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    /// Drops precision down to `order` (no-op if already lower).
    pub fn truncate(&self, order: usize) -> Self {
        Series1 {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
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
        Series1 {
            coeffs: self.coeffs.iter().map(|x| x.mul_ref(c)).collect(),
        }
    }

    /// Adds a constant to `c_0`.
    pub fn add_constant(&self, c: &C) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].add_ref(c);
        out
    }

    /// Multiplication by `z`; the precision grows by one.
    pub fn mul_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Series1 { coeffs }
    }

    /// Exact division by `z`; the precision drops by one.
    pub fn div_z(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !c0.is_negligible() {
            return Err(Error::NotDivisible {
                what: "division by z",
                monomial: "z^0".into(),
                residue: c0.magnitude(),
            });
        }
        if self.order() == 0 {
            return Err(Error::InsufficientPrecision {
                needed: 0,
                available: -1,
            });
        }
        Ok(Series1 {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Formal derivative; the precision drops by one.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Series1 {
            coeffs: (1..=self.order())
                .map(|k| self.coeffs[k].mul_ref(&C::from_i64(k as i64)))
                .collect(),
        }
    }

    pub fn is_zero_series(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible())
    }

    /// Coefficientwise comparison up to the common order.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Multiplicative inverse by Newton iteration `r ← r(2 − f r)`, doubling
    /// precision each step.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_negligible() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order();
        let two = C::from_i64(2);
        let mut r = vec![C::one().div_ref(c0)];
        let mut prec = 0;
        while prec < n {
            prec = (2 * prec + 1).min(n);
            let r_pad = padded(&r, prec);
            let fr = mul_trunc(&self.coeffs, &r_pad, prec);
            let mut corr: Vec<C> = fr.into_iter().map(|c| -c).collect();
            corr[0] = corr[0].add_ref(&two);
            r = mul_trunc(&r_pad, &corr, prec);
        }
        Ok(Series1 { coeffs: r })
    }

    /// Multiplicative inverse by forward substitution on the triangular
    /// system `Σ f_i r_{k-i} = δ_{k0}`.
    pub fn reciprocal_direct(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_negligible() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = C::one().div_ref(c0);
        let n = self.order();
        let mut r: Vec<C> = Vec::with_capacity(n + 1);
        r.push(inv0.clone());
        for k in 1..=n {
            let mut acc = C::zero();
            for i in 1..=k {
                acc.add_product(&self.coeffs[i], &r[k - i]);
            }
            r.push(-(acc.mul_ref(&inv0)));
        }
        Ok(Series1 { coeffs: r })
    }

    /// `self(inner(z))`; `inner` must vanish at the origin.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_negligible() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order().min(inner.order());
        let mut g = inner.coeffs.clone();
        g[0] = C::zero();
        Ok(Series1 {
            coeffs: compose_trunc(&self.coeffs, &g, order),
        })
    }

    fn check_germ(&self) -> Result<()> {
        if !self.coeffs[0].is_negligible() {
            return Err(Error::NotAGerm);
        }
        if self.order() == 0 || self.coeffs[1].is_negligible() {
            return Err(Error::ZeroLinearCoefficient);
        }
        Ok(())
    }

    /// Compositional inverse by Newton iteration
    /// `g ← g − (f∘g − z)/(f'∘g)`, doubling precision each step.
    pub fn invert(&self) -> Result<Self> {
        self.check_germ()?;
        let n = self.order();
        let mut f = self.coeffs.clone();
        f[0] = C::zero();
        let df = self.derivative();
        let mut g = vec![C::zero(), C::one().div_ref(&f[1])];
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec + 1).min(n);
            let g_pad = padded(&g, prec);
            let mut residual = compose_trunc(&f, &g_pad, prec);
            residual[1] = residual[1].sub_ref(&C::one());
            let slope = Series1 {
                coeffs: compose_trunc(df.coeffs(), &g_pad, prec),
            }
            .reciprocal()?;
            let step = mul_trunc(&residual, slope.coeffs(), prec);
            g = g_pad.iter().zip(&step).map(|(a, b)| a.sub_ref(b)).collect();
        }
        g.truncate(n + 1);
        Ok(Series1 { coeffs: g })
    }

    /// Compositional inverse one coefficient at a time: with `g` known below
    /// degree `k`, `g_k = −[z^k] f(g_{<k}) / f_1`.
    pub fn invert_direct(&self) -> Result<Self> {
        self.check_germ()?;
        let n = self.order();
        let mut f = self.coeffs.clone();
        f[0] = C::zero();
        let inv1 = C::one().div_ref(&f[1]);
        let mut g = vec![C::zero(); n + 1];
        g[1] = inv1.clone();
        for k in 2..=n {
            let fk = compose_trunc(&f, &g[..k], k);
            g[k] = -(fk[k].mul_ref(&inv1));
        }
        Ok(Series1 { coeffs: g })
    }
}

impl<C: Coefficient> Add for &Series1<C> {
    type Output = Series1<C>;
    fn add(self, rhs: &Series1<C>) -> Series1<C> {
        let order = self.order().min(rhs.order());
        Series1::from_fn(order, |k| self.coeffs[k].add_ref(&rhs.coeffs[k]))
    }
}

impl<C: Coefficient> Sub for &Series1<C> {
    type Output = Series1<C>;
    fn sub(self, rhs: &Series1<C>) -> Series1<C> {
        let order = self.order().min(rhs.order());
        Series1::from_fn(order, |k| self.coeffs[k].sub_ref(&rhs.coeffs[k]))
    }
}

impl<C: Coefficient> Mul for &Series1<C> {
    type Output = Series1<C>;
    fn mul(self, rhs: &Series1<C>) -> Series1<C> {
        let order = self.order().min(rhs.order());
        Series1 {
            coeffs: mul_trunc(&self.coeffs, &rhs.coeffs, order),
        }
    }
}

impl<C: Coefficient> Neg for &Series1<C> {
    type Output = Series1<C>;
    fn neg(self) -> Series1<C> {
        Series1 {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

/// Binary operation selector for [`s1_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Strict arithmetic on equal-order series.
pub fn s1_arith<C: Coefficient>(f: &Series1<C>, g: &Series1<C>, op: ArithOp) -> Result<Series1<C>> {
    match op {
        ArithOp::Add => f.checked_add(g),
        ArithOp::Sub => f.checked_sub(g),
        ArithOp::Mul => f.checked_mul(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{ratio, Rational};

    fn q(v: &[(i64, i64)]) -> Series1<Rational> {
        Series1::new(v.iter().map(|&(a, b)| ratio(a, b)).collect())
    }

    fn ints(v: &[i64]) -> Series1<Rational> {
        Series1::new(v.iter().map(|&a| ratio(a, 1)).collect())
    }

    fn bernoulli_psi(order: usize) -> Series1<Rational> {
        Series1::from_fn(order, |k| {
            if k == 0 {
                ratio(0, 1)
            } else if k % 2 == 0 {
                ratio(1, 1)
            } else {
                ratio(1, 2)
            }
        })
    }

    #[test]
    fn monomial_and_difference_of_squares() {
        let z = Series1::<Rational>::variable(3);
        assert_eq!(s1_arith(&z, &z, ArithOp::Mul).unwrap(), ints(&[0, 0, 1, 0]));
        let a = ints(&[1, 1, 0, 0]);
        let b = ints(&[1, -1, 0, 0]);
        assert_eq!(&a * &b, ints(&[1, 0, -1, 0]));
    }

    #[test]
    fn bernoulli_psi_doubles() {
        let p = bernoulli_psi(3);
        assert_eq!(s1_arith(&p, &p, ArithOp::Add).unwrap(), ints(&[0, 1, 2, 1]));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = Series1::<Rational>::one(3);
        let b = Series1::<Rational>::one(4);
        assert!(matches!(
            s1_arith(&a, &b, ArithOp::Add),
            Err(Error::OrderMismatch { left: 3, right: 4 })
        ));
        // operator form keeps the common precision
        assert_eq!((&a + &b).order(), 3);
    }

    #[test]
    fn reciprocals() {
        let one_minus_z = ints(&[1, -1, 0, 0, 0]);
        assert_eq!(one_minus_z.reciprocal().unwrap(), ints(&[1, 1, 1, 1, 1]));
        let one_plus_z = ints(&[1, 1, 0, 0, 0]);
        assert_eq!(one_plus_z.reciprocal().unwrap(), ints(&[1, -1, 1, -1, 1]));
        let f = ints(&[2, -8, 0]);
        let expected = q(&[(1, 2), (2, 1), (8, 1)]);
        assert_eq!(f.reciprocal().unwrap(), expected);
        assert_eq!(f.reciprocal_direct().unwrap(), expected);
        assert!(matches!(
            ints(&[0, 1]).reciprocal(),
            Err(Error::ZeroConstantTerm)
        ));
    }

    #[test]
    fn compositions() {
        let g = ints(&[0, 1, 1, 0]);
        assert_eq!(Series1::variable(3).compose(&g).unwrap(), g);
        let f = ints(&[0, 0, 1, 0]);
        assert_eq!(f.compose(&g).unwrap(), ints(&[0, 0, 1, 2]));
        // Ψ_B(ω(z)) with ω = z/2 + 3z²/8
        let omega = q(&[(0, 1), (1, 2), (3, 8)]);
        assert_eq!(
            bernoulli_psi(3).compose(&omega).unwrap(),
            q(&[(0, 1), (1, 4), (7, 16)])
        );
        assert!(matches!(
            f.compose(&ints(&[1, 1, 0, 0])),
            Err(Error::NonzeroConstantTerm)
        ));
    }

    #[test]
    fn inversions() {
        // z/(1-z) ↔ z/(1+z)
        let f = ints(&[0, 1, 1, 1, 1, 1]);
        assert_eq!(f.invert().unwrap(), ints(&[0, 1, -1, 1, -1, 1]));
        let psi = bernoulli_psi(6);
        let expected = ints(&[0, 2, -8, 56, -512, 5312, -59264]);
        assert_eq!(psi.invert().unwrap(), expected);
        assert_eq!(psi.invert_direct().unwrap(), expected);
        assert_eq!(psi.compose(&expected).unwrap(), Series1::variable(6));
        assert!(matches!(
            ints(&[0, 0, 1]).invert(),
            Err(Error::ZeroLinearCoefficient)
        ));
        assert!(matches!(ints(&[1, 1, 1]).invert(), Err(Error::NotAGerm)));
    }

    #[test]
    fn shifts_track_precision() {
        let s = ints(&[0, 3, 4]);
        let d = s.div_z().unwrap();
        assert_eq!(d, ints(&[3, 4]));
        assert_eq!(d.mul_z(), s);
        assert!(ints(&[1, 3]).div_z().is_err());
    }
}
