//! Matrix-valued transforms of `X = diag(a, b)` over the upper-triangular
//! argument `Γ = [[z, ζ], [0, w]]`.
//!
//! With `E((1 − ΓX)⁻¹) − 1` as `Ψ_X(Γ)`, the diagonal carries the scalar
//! transforms of `a` and `b` and the `ζ` entry carries the two-band data:
//!
//! - `Ψ_X(Γ)`: off `= (Ψ_{a,b}(z,w) + Ψ_b(w))/w`,
//! - `S_X(Γ) = Γ⁻¹(1 + Γ)Ψ_X^{⟨-1⟩}(Γ)`: off
//!   `ρ = S_b(w)(1 − S_{a,b})/(zS_{a,b} + w + 1)`.
//!
//! For bi-free pairs the twisted product
//! `S_{X₂}(Γ) S_{X₁}(S_{X₂}(Γ)⁻¹ Γ S_{X₂}(Γ))` equals `S_{X₁X₂}(Γ)` exactly when
//! one of the partial S-transforms is identically 1; [`twisted_check`] tests
//! this coefficientwise.
//!
//! A function of such a matrix is linear in `ζ`, so evaluating at
//! `[[u(z), ζe(z,w)], [0, v(w)]]` just substitutes `u`, `v` in the entries and
//! multiplies the `ζ` entry by `e`.

use crate::biconv::{check_admissible, Subordination};
use crate::coeff::Coefficient;
use crate::error::{Error, Precondition, Result};
use crate::measures::PairDistribution;
use crate::series::{Series1, Series2, UTGammaSeries};
use crate::transforms::{partial_s, s_transform};

fn require<C: Coefficient>(p: &PairDistribution<C>, index: usize) -> Result<()> {
    let bad = p.violations(index);
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Inadmissible(bad))
    }
}

/// Splits `G = [[u, ζe], [0, v]]` into `u(z)`, `e`, `v(w)`.
fn split<C: Coefficient>(g: &UTGammaSeries<C>) -> Result<(Series1<C>, Series2<C>, Series1<C>)> {
    let u =
        g.d1.as_z_only()
            .ok_or_else(|| Error::Inconsistent("upper diagonal entry depends on w".into()))?;
    let v =
        g.d2.as_w_only()
            .ok_or_else(|| Error::Inconsistent("lower diagonal entry depends on z".into()))?;
    if !u.coeff(0).is_negligible() || !v.coeff(0).is_negligible() {
        return Err(Error::NonzeroConstantTerm);
    }
    Ok((u, g.off.clone(), v))
}

fn assemble<C: Coefficient>(d1: Series2<C>, off: Series2<C>, d2: Series2<C>) -> UTGammaSeries<C> {
    let n = d1.order().min(off.order()).min(d2.order());
    UTGammaSeries::new(d1, off, d2).truncate(n)
}

/// `K(z, w) = (Ψ_{a,b}(z,w) + Ψ_b(w))/w`, the `ζ` entry of `Ψ_X(Γ)`.
fn psi_kernel<C: Coefficient>(p: &PairDistribution<C>) -> Result<Series2<C>> {
    (&p.psi_ab() + &Series2::embed_w(&p.psi_b())).div_w()
}

/// `Ψ_X(Γ)`, of order `N − 1`.
pub fn psi_x<C: Coefficient>(p: &PairDistribution<C>) -> Result<UTGammaSeries<C>> {
    Ok(assemble(
        Series2::embed_z(&p.psi_a()),
        psi_kernel(p)?,
        Series2::embed_w(&p.psi_b()),
    ))
}

/// `Ψ_X` evaluated at `G = [[u(z), ζe], [0, v(w)]]`.
pub fn psi_x_at<C: Coefficient>(
    p: &PairDistribution<C>,
    g: &UTGammaSeries<C>,
) -> Result<UTGammaSeries<C>> {
    let (u, e, v) = split(g)?;
    let off = &e * &psi_kernel(p)?.compose_slots(&u, &v)?;
    Ok(assemble(
        Series2::embed_z(&p.psi_a().compose(&u)?),
        off,
        Series2::embed_w(&p.psi_b().compose(&v)?),
    ))
}

/// `Ψ_X^{⟨-1⟩}(Γ)`: off `= (Ψ_b^{⟨-1⟩}(w)/w) / (Ψ_{a,b}(Ψ_a^{⟨-1⟩}(z), Ψ_b^{⟨-1⟩}(w))/w + 1)`.
pub fn psi_x_inverse<C: Coefficient>(p: &PairDistribution<C>) -> Result<UTGammaSeries<C>> {
    require(p, 1)?;
    let ia = p.psi_a().invert()?;
    let ib = p.psi_b().invert()?;
    let num = Series2::embed_w(&ib.div_z()?);
    let den = p
        .psi_ab()
        .compose_slots(&ia, &ib)?
        .div_w()?
        .add_constant(&C::one());
    Ok(assemble(
        Series2::embed_z(&ia),
        &num * &den.reciprocal()?,
        Series2::embed_w(&ib),
    ))
}

/// `ρ_{a,b} = S_b(w)(1 − S_{a,b})/(zS_{a,b} + w + 1)`.
pub fn rho<C: Coefficient>(p: &PairDistribution<C>) -> Result<Series2<C>> {
    let s = partial_s(p)?;
    let sb = Series2::embed_w(&s_transform(&p.psi_b())?);
    let n = s.order();
    let num = &sb * &(-&s).add_constant(&C::one());
    let den = (&s.mul_z() + &Series2::var_w(n)).add_constant(&C::one());
    Ok(&num * &den.reciprocal()?)
}

/// `S_X(Γ)`, of order `N − 1`. The `ζ` entry is computed twice, in closed
/// form and as `Γ⁻¹(1 + Γ)Ψ_X^{⟨-1⟩}(Γ)`, and the two must agree.
pub fn s_x<C: Coefficient>(p: &PairDistribution<C>) -> Result<UTGammaSeries<C>> {
    require(p, 1)?;
    let r = rho(p)?;
    let direct = s_x_direct_off(p)?;
    let m = direct.order().min(r.order());
    if let Some((j, k)) = r.truncate(m).first_difference(&direct.truncate(m), 1e-9) {
        return Err(Error::Inconsistent(format!(
            "ζ entry of S_X: closed form {} vs direct {} at z^{j} w^{k}",
            r.coeff(j, k).render(),
            direct.coeff(j, k).render()
        )));
    }
    Ok(assemble(
        Series2::embed_z(&s_transform(&p.psi_a())?),
        r,
        Series2::embed_w(&s_transform(&p.psi_b())?),
    ))
}

/// `ζ` entry of `Γ⁻¹(1 + Γ)Ψ_X^{⟨-1⟩}(Γ)`, i.e.
/// `((1 + z)wE − Ψ_b^{⟨-1⟩}(w))/(zw)` with `E` the `ζ` entry of `Ψ_X^{⟨-1⟩}`.
/// One order shorter than the closed form.
pub fn s_x_direct_off<C: Coefficient>(p: &PairDistribution<C>) -> Result<Series2<C>> {
    let inv = psi_x_inverse(p)?;
    let n = inv.order();
    let one_plus_z = Series2::var_z(n).add_constant(&C::one());
    let t = &(&one_plus_z * &inv.off).mul_w() - &inv.d2;
    t.div_zw()
}

/// `S_X` at `G = [[u(z), ζe], [0, v(w)]]`: `(S_a(u), e·ρ(u, v), S_b(v))`.
pub fn s_x_at<C: Coefficient>(
    p: &PairDistribution<C>,
    g: &UTGammaSeries<C>,
) -> Result<UTGammaSeries<C>> {
    require(p, 1)?;
    let (u, e, v) = split(g)?;
    Ok(assemble(
        Series2::embed_z(&s_transform(&p.psi_a())?.compose(&u)?),
        &e * &rho(p)?.compose_slots(&u, &v)?,
        Series2::embed_w(&s_transform(&p.psi_b())?.compose(&v)?),
    ))
}

/// The twisted product `S_{X₂}(Γ) S_{X₁}(S_{X₂}(Γ)⁻¹ Γ S_{X₂}(Γ))`, with
/// `ζ` entry `γ = ρ₁((z − w)ρ₂ + S_{b₂}) + ρ₂S_{b₁}`; the matrix route is
/// evaluated too and must agree.
pub fn twisted_rhs<C: Coefficient>(
    p1: &PairDistribution<C>,
    p2: &PairDistribution<C>,
) -> Result<UTGammaSeries<C>> {
    check_admissible(p1, p2)?;
    let x1 = s_x(p1)?;
    let x2 = s_x(p2)?;
    let n = x1.order().min(x2.order());
    let (x1, x2) = (x1.truncate(n), x2.truncate(n));
    let z_minus_w = &Series2::var_z(n) - &Series2::var_w(n);
    let gamma = &(&x1.off * &(&(&z_minus_w * &x2.off) + &x2.d2)) + &(&x2.off * &x1.d2);
    let closed = UTGammaSeries::new(&x2.d1 * &x1.d1, gamma, &x2.d2 * &x1.d2);

    let g = UTGammaSeries::gamma(n);
    let inner = x2.inverse()?.mul(&g)?.mul(&x2)?;
    let twisted = x2.mul(&s_x_at(p1, &inner)?)?;
    let m = twisted.order();
    if !twisted.approx_eq(&closed.truncate(m), 1e-9) {
        return Err(Error::Inconsistent(
            "twisted product: closed form and matrix route disagree".into(),
        ));
    }
    Ok(closed)
}

/// Where two matrix series first differ.
#[derive(Debug, Clone)]
pub struct Discrepancy<C: Coefficient> {
    /// `"d1"`, `"off"` or `"d2"`.
    pub entry: &'static str,
    pub monomial: (usize, usize),
    pub lhs: C,
    pub rhs: C,
}

#[derive(Debug, Clone)]
pub struct TwistedReport<C: Coefficient> {
    pub order: usize,
    /// `S_{X₁X₂}(Γ)` from the product table.
    pub lhs: UTGammaSeries<C>,
    /// The twisted product.
    pub rhs: UTGammaSeries<C>,
    pub holds: bool,
    pub first_discrepancy: Option<Discrepancy<C>>,
    /// Closed-form `ζ` coefficients of both sides at `z = w = 0`.
    pub limit_lhs12: C,
    pub limit_rhs12: C,
    /// Some partial S-transform is identically 1 through the order.
    pub some_partial_s_trivial: bool,
}

/// `ζ` coefficient of `S_{X₁X₂}` at the origin:
/// `(φ(a₁)φ(a₂)φ(b₁)φ(b₂) − φ(a₁b₁)φ(a₂b₂)) / (φ(a₁)φ(a₂)(φ(b₁)φ(b₂))²)`.
pub fn limit_lhs12<C: Coefficient>(p1: &PairDistribution<C>, p2: &PairDistribution<C>) -> C {
    let (a1, b1, ab1) = (p1.m(1, 0), p1.m(0, 1), p1.m(1, 1));
    let (a2, b2, ab2) = (p2.m(1, 0), p2.m(0, 1), p2.m(1, 1));
    let aa = a1.mul_ref(a2);
    let bb = b1.mul_ref(b2);
    let num = aa.mul_ref(&bb).sub_ref(&ab1.mul_ref(ab2));
    num.div_ref(&aa.mul_ref(&bb).mul_ref(&bb))
}

/// The same coefficient of the twisted product:
/// `(φ(a₁)φ(b₁) − φ(a₁b₁))/(φ(a₁)φ(b₁)²φ(b₂)) + (φ(a₂)φ(b₂) − φ(a₂b₂))/(φ(a₂)φ(b₂)²φ(b₁))`.
pub fn limit_rhs12<C: Coefficient>(p1: &PairDistribution<C>, p2: &PairDistribution<C>) -> C {
    let term = |p: &PairDistribution<C>, other_b: &C| {
        let (a, b, ab) = (p.m(1, 0), p.m(0, 1), p.m(1, 1));
        a.mul_ref(b)
            .sub_ref(ab)
            .div_ref(&a.mul_ref(b).mul_ref(b).mul_ref(other_b))
    };
    term(p1, p2.m(0, 1)).add_ref(&term(p2, p1.m(0, 1)))
}

fn first_discrepancy<C: Coefficient>(
    lhs: &UTGammaSeries<C>,
    rhs: &UTGammaSeries<C>,
    tol: f64,
) -> Option<Discrepancy<C>> {
    [
        ("d1", &lhs.d1, &rhs.d1),
        ("off", &lhs.off, &rhs.off),
        ("d2", &lhs.d2, &rhs.d2),
    ]
    .into_iter()
    .find_map(|(entry, l, r)| {
        l.first_difference(r, tol).map(|(j, k)| Discrepancy {
            entry,
            monomial: (j, k),
            lhs: l.coeff(j, k).clone(),
            rhs: r.coeff(j, k).clone(),
        })
    })
}

/// Compares `S_{X₁X₂}` of the product table with the twisted product through
/// order `n`.
pub fn twisted_check<C: Coefficient>(
    p1: &PairDistribution<C>,
    p2: &PairDistribution<C>,
    product: &PairDistribution<C>,
    n: usize,
    tol: f64,
) -> Result<TwistedReport<C>> {
    check_admissible(p1, p2)?;
    require(product, 1)?;
    let lhs = s_x(product)?;
    let rhs = twisted_rhs(p1, p2)?;
    let have = lhs.order().min(rhs.order());
    if have < n {
        return Err(Error::InsufficientPrecision {
            needed: n,
            available: have as i64,
        });
    }
    let (lhs, rhs) = (lhs.truncate(n), rhs.truncate(n));
    let first = first_discrepancy(&lhs, &rhs, tol);
    let trivial = |p: &PairDistribution<C>| -> Result<bool> {
        Ok(partial_s(p)?.truncate(n).is_constant(&C::one(), tol))
    };
    Ok(TwistedReport {
        order: n,
        holds: first.is_none(),
        first_discrepancy: first,
        limit_lhs12: limit_lhs12(p1, p2),
        limit_rhs12: limit_rhs12(p1, p2),
        some_partial_s_trivial: trivial(p1)? || trivial(p2)?,
        lhs,
        rhs,
    })
}

/// `ω_j(Γ) = [[ω_{aⱼ}(z), ζω_{bⱼ}(w)/w], [0, ω_{bⱼ}(w)]]`.
pub fn omega_gamma<C: Coefficient>(
    omega_a: &Series1<C>,
    omega_b: &Series1<C>,
) -> Result<UTGammaSeries<C>> {
    Ok(assemble(
        Series2::embed_z(omega_a),
        Series2::embed_w(&omega_b.div_z()?),
        Series2::embed_w(omega_b),
    ))
}

#[derive(Debug, Clone)]
pub struct MatrixSubordinationReport {
    pub order: usize,
    /// Largest coefficient of `Ψ_{X₁X₂}(Γ) − Ψ_{X_j}(ω_j(Γ))`, `j = 1, 2`.
    pub residual: [f64; 2],
    pub exact: bool,
}

/// `Ψ_{X₁X₂}(Γ) = Ψ_{X_j}(ω_j(Γ))` for factoring pairs, `j = 1, 2`.
pub fn matrix_subordination_check<C: Coefficient>(
    p1: &PairDistribution<C>,
    p2: &PairDistribution<C>,
    product: &PairDistribution<C>,
    n: usize,
    tol: f64,
) -> Result<MatrixSubordinationReport> {
    let mut bad = Vec::new();
    for (i, p) in [(1, p1), (2, p2)] {
        if !p.is_factoring(tol) {
            bad.push(Precondition::Factoring(i));
        }
    }
    if !bad.is_empty() {
        return Err(Error::Inadmissible(bad));
    }
    check_admissible(p1, p2)?;
    let sub = Subordination::with_marginals(p1, p2, product.psi_a(), product.psi_b())?;
    let lhs = psi_x(product)?;
    let mut residual = [0.0; 2];
    let mut exact = true;
    for (j, p) in [p1, p2].into_iter().enumerate() {
        let rhs = psi_x_at(p, &omega_gamma(&sub.omega_a[j], &sub.omega_b[j])?)?;
        let m = lhs.order().min(rhs.order());
        if m < n {
            return Err(Error::InsufficientPrecision {
                needed: n,
                available: m as i64,
            });
        }
        let (l, r) = (lhs.truncate(n), rhs.truncate(n));
        residual[j] = l.max_abs_diff(&r);
        exact &= l.approx_eq(&r, tol);
    }
    Ok(MatrixSubordinationReport {
        order: n,
        residual,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{ratio, Rational};
    use crate::measures::{Atom, AtomicPairMeasure, Space};
    use crate::oracle::product_pair_moments;

    fn q(a: i64, b: i64) -> Rational {
        ratio(a, b)
    }

    fn bern() -> AtomicPairMeasure<Rational> {
        AtomicPairMeasure::new(
            Space::Torus,
            vec![
                Atom::new(q(1, 1), q(1, 1), q(3, 4)),
                Atom::new(q(-1, 1), q(-1, 1), q(1, 4)),
            ],
        )
        .unwrap()
    }

    fn factoring() -> AtomicPairMeasure<Rational> {
        let mut atoms = Vec::new();
        for (s, ws) in [(1, q(3, 4)), (-1, q(1, 4))] {
            for (t, wt) in [(1, q(2, 3)), (-1, q(1, 3))] {
                atoms.push(Atom::new(q(s, 1), q(t, 1), ws.clone() * wt));
            }
        }
        AtomicPairMeasure::new(Space::Torus, atoms).unwrap()
    }

    fn identity() -> AtomicPairMeasure<Rational> {
        AtomicPairMeasure::dirac(Space::Torus, q(1, 1), q(1, 1)).unwrap()
    }

    #[test]
    fn psi_x_of_identity_and_bernoulli() {
        let id = psi_x(&identity().moments(4)).unwrap();
        // off = 1/((1 − z)(1 − w))
        assert!(id.off.coeffs().all(|(_, c)| c == &q(1, 1)));
        let b = psi_x(&bern().moments(4)).unwrap();
        assert_eq!(b.off.coeff(0, 0), &q(1, 2));
    }

    #[test]
    fn psi_x_at_gamma_and_inverse_round_trip() {
        let p = bern().moments(6);
        let n = psi_x(&p).unwrap().order();
        assert_eq!(
            psi_x_at(&p, &UTGammaSeries::gamma(n)).unwrap(),
            psi_x(&p).unwrap()
        );
        let inv = psi_x_inverse(&p).unwrap();
        let back = psi_x_at(&p, &inv).unwrap();
        assert_eq!(back, UTGammaSeries::gamma(back.order()));
    }

    #[test]
    fn s_x_constant_terms() {
        let s = s_x(&bern().moments(6)).unwrap();
        assert_eq!(s.off.coeff(0, 0), &q(-6, 1));
        assert_eq!(s.d1.coeff(0, 0), &q(2, 1));
        assert!(s_x(&factoring().moments(6)).unwrap().off.is_zero_series());
        assert_eq!(
            s_x(&identity().moments(5)).unwrap(),
            UTGammaSeries::identity(4)
        );
    }

    #[test]
    fn bernoulli_square_fails_twisted_multiplicativity() {
        let b = bern();
        let p = b.moments(7);
        let prod = product_pair_moments(&b, &b, 7).unwrap();
        assert_eq!(twisted_rhs(&p, &p).unwrap().off.coeff(0, 0), &q(-24, 1));
        let r = twisted_check(&p, &p, &prod, 5, 0.0).unwrap();
        assert!(!r.holds && !r.some_partial_s_trivial);
        assert_eq!(r.limit_lhs12, q(-60, 1));
        assert_eq!(r.limit_rhs12, q(-24, 1));
        assert_eq!(r.lhs.off.coeff(0, 0), &q(-60, 1));
        let d = r.first_discrepancy.unwrap();
        assert_eq!((d.entry, d.monomial), ("off", (0, 0)));
    }

    #[test]
    fn factoring_factor_satisfies_it() {
        for (m1, m2) in [(factoring(), bern()), (bern(), factoring())] {
            let prod = product_pair_moments(&m1, &m2, 7).unwrap();
            let r = twisted_check(&m1.moments(7), &m2.moments(7), &prod, 5, 0.0).unwrap();
            assert!(r.holds && r.some_partial_s_trivial);
        }
    }

    #[test]
    fn matrix_subordination() {
        let f = factoring();
        let prod = product_pair_moments(&f, &f, 7).unwrap();
        let r = matrix_subordination_check(&f.moments(7), &f.moments(7), &prod, 5, 0.0).unwrap();
        assert!(r.exact);
        assert_eq!(r.residual, [0.0, 0.0]);
        let prod = product_pair_moments(&f, &identity(), 7).unwrap();
        assert!(
            matrix_subordination_check(&f.moments(7), &identity().moments(7), &prod, 5, 0.0)
                .unwrap()
                .exact
        );
    }

    #[test]
    fn matrix_subordination_needs_factoring() {
        let b = bern();
        let prod = product_pair_moments(&b, &b, 5).unwrap();
        assert!(matches!(
            matrix_subordination_check(&b.moments(5), &b.moments(5), &prod, 3, 0.0),
            Err(Error::Inadmissible(v)) if v == vec![Precondition::Factoring(1), Precondition::Factoring(2)]
        ));
    }
}
