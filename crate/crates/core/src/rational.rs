//! Exact rationals with an inline fast path.
//!
//! Values whose reduced numerator and denominator fit in an `i64` are kept
//! inline and combined with `i128` intermediates; anything larger falls back
//! to [`BigRational`]. The representation is canonical (reduced, positive
//! denominator, inline whenever it fits), so derived equality and hashing
//! are exact.

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, `den > 0`, both within `±i64::MAX`.
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    if (a | b) >> 64 == 0 {
        return gcd_u64(a as u64, b as u64) as u128;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn fits(v: i128) -> bool {
    v.unsigned_abs() <= i64::MAX as u128
}

impl Rational {
    /// `num/den`, reduced. Panics on a zero denominator.
    pub fn new(num: BigInt, den: BigInt) -> Self {
        Self::from_big(BigRational::new(num, den))
    }

    pub fn from_integer(v: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(v))
    }

    /// Canonical form of a reduced big rational.
    pub fn from_big(b: BigRational) -> Self {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(b)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => b.clone(),
        }
    }

    /// `num/den` from wide parts; reduces and normalizes the sign.
    fn from_i128(mut n: i128, mut d: i128) -> Self {
        assert!(d != 0, "rational with zero denominator");
        let g = gcd_u128(n.unsigned_abs(), d.unsigned_abs());
        if g > 1 {
            n /= g as i128;
            d /= g as i128;
        }
        if d < 0 {
            n = -n;
            d = -d;
        }
        Self::reduced_i128(n, d)
    }

    fn reduced_i128(n: i128, d: i128) -> Self {
        if fits(n) && fits(d) {
            Rational(Repr::Small(n as i64, d as i64))
        } else {
            Rational(Repr::Big(BigRational::new_raw(
                BigInt::from(n),
                BigInt::from(d),
            )))
        }
    }

    pub fn from_i64s(num: i64, den: i64) -> Self {
        Self::from_i128(num as i128, den as i128)
    }

    pub fn abs(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(n.abs(), *d)),
            Repr::Big(b) => Rational(Repr::Big(b.abs())),
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        match &self.0 {
            Repr::Small(n, d) => Some(*n as f64 / *d as f64),
            Repr::Big(b) => b.to_f64(),
        }
    }

    /// Bit length of the denominator.
    pub fn denom_bits(&self) -> u64 {
        match &self.0 {
            Repr::Small(_, d) => 64 - d.leading_zeros() as u64,
            Repr::Big(b) => b.denom().bits(),
        }
    }

    fn add_impl(&self, rhs: &Self, negate: bool) -> Self {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            let (a, b, d) = (*a as i128, *b as i128, *d as i128);
            let c = if negate { -(*c as i128) } else { *c as i128 };
            if b == d {
                return Self::from_i128(a + c, b);
            }
            let g = gcd_u128(b as u128, d as u128) as i128;
            return Self::from_i128(a * (d / g) + c * (b / g), (b / g) * d);
        }
        let (x, y) = (self.to_big(), rhs.to_big());
        Self::from_big(if negate { x - y } else { x + y })
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            if *a == 0 || *c == 0 {
                return Self::zero();
            }
            let g1 = gcd_u64(a.unsigned_abs(), d.unsigned_abs()) as i128;
            let g2 = gcd_u64(c.unsigned_abs(), b.unsigned_abs()) as i128;
            let n = (*a as i128 / g1) * (*c as i128 / g2);
            let m = (*b as i128 / g2) * (*d as i128 / g1);
            return Self::reduced_i128(n, m);
        }
        Self::from_big(self.to_big() * rhs.to_big())
    }

    fn recip_impl(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "division by zero rational");
                if *n < 0 {
                    Rational(Repr::Small(-d, -n))
                } else {
                    Rational(Repr::Small(*d, *n))
                }
            }
            Repr::Big(b) => Self::from_big(b.recip()),
        }
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
            Repr::Big(b) => Rational(Repr::Big(-b)),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $asg:ident, $am:ident, |$x:ident, $y:ident| $body:expr) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                let ($x, $y) = (self, rhs);
                $body
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                (&self).$m(rhs)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                self.$m(&rhs)
            }
        }
        impl $asg<Rational> for Rational {
            fn $am(&mut self, rhs: Rational) {
                *self = (&*self).$m(&rhs);
            }
        }
        impl $asg<&Rational> for Rational {
            fn $am(&mut self, rhs: &Rational) {
                *self = (&*self).$m(rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, |x, y| x.add_impl(y, false));
binop!(Sub, sub, SubAssign, sub_assign, |x, y| x.add_impl(y, true));
binop!(Mul, mul, MulAssign, mul_assign, |x, y| x.mul_impl(y));
binop!(Div, div, DivAssign, div_assign, |x, y| x
    .mul_impl(&y.recip_impl()));

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(Rational::from_i64s(6, -8).to_string(), "-3/4");
        assert_eq!(Rational::from_i64s(0, -5), Rational::zero());
        assert_eq!(Rational::from_big(big(4, 2)), Rational::from_i64s(2, 1));
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let x = Rational::from_i64s(i64::MAX, 3);
        let y = &x * &x;
        assert!(matches!(y.0, Repr::Big(_)));
        let back = &y / &x;
        assert_eq!(back, x);
        assert!(matches!(back.0, Repr::Small(..)));
    }

    fn small() -> impl Strategy<Value = (i64, i64)> {
        (
            any::<i64>().prop_filter("min", |v| *v != i64::MIN),
            1i64..=i64::MAX,
        )
    }

    proptest! {
        #[test]
        fn agrees_with_big_rationals((a, b) in small(), (c, d) in small()) {
            let (x, y) = (Rational::from_i64s(a, b), Rational::from_i64s(c, d));
            let (bx, by) = (big(a, b), big(c, d));
            prop_assert_eq!((&x + &y).to_big(), &bx + &by);
            prop_assert_eq!((&x - &y).to_big(), &bx - &by);
            prop_assert_eq!((&x * &y).to_big(), &bx * &by);
            if c != 0 {
                prop_assert_eq!((&x / &y).to_big(), &bx / &by);
            }
            prop_assert_eq!(Rational::from_big(&bx * &by), &x * &y);
        }

        #[test]
        fn small_values_stay_inline(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let s = &Rational::from_i64s(a, b) + &Rational::from_i64s(c, d);
            prop_assert!(matches!(s.0, Repr::Small(..)));
        }
    }
}
