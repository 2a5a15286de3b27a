//! Bi-free multiplicative convolution `μ₁ ⊠⊠ μ₂` of two-band moment tables,
//! by three independent transform routes.
//!
//! Every route needs the marginals `Ψ_{a₁a₂}`, `Ψ_{b₁b₂}` (free
//! multiplicative convolution of the marginals) and produces the mixed part
//! `Ψ₂ = Ψ_{a₁a₂,b₁b₂}`; the table is reassembled from the two.
//!
//! - [`biconv_via_s`]: multiply partial S-transforms, then solve
//!   `1/Ψ₂ + 1/A = (1/A + 1/B) / S(Ψ_{a₁a₂}, Ψ_{b₁b₂})` with
//!   `A = 1 + Ψ_{a₁a₂} + Ψ_{b₁b₂}`, `B = Ψ_{a₁a₂}Ψ_{b₁b₂}`.
//! - [`biconv_via_subordination`]: the same identity written with the subordination germs
//!   `ω`, no S-transform of the product.
//! - [`biconv_via_quotient`]: `Ψ₂ = F/G` with `G(0,0) = φ(a₁)φ(b₁)`, a plain
//!   quotient of power series.
//!
//! Inputs should carry [`WORKING_MARGIN`](crate::WORKING_MARGIN) orders more
//! than the requested output; the routes fail with
//! [`Error::InsufficientPrecision`] rather than return unverified
//! coefficients.

use crate::coeff::Coefficient;
use crate::error::{Error, Precondition, Result};
use crate::measures::{AtomicPairMeasure, PairDistribution};
use crate::oracle::product_pair_moments;
use crate::series::{Series1, Series2, ValuatedSeries2};
use crate::transforms::{free_mult_convolve_marginal, partial_s, subordination_series};
use crate::WORKING_MARGIN;

type V<C> = ValuatedSeries2<C>;

/// Rejects pairs with a vanishing first or mixed moment, listing all of them.
pub fn check_admissible<C: Coefficient>(
    p1: &PairDistribution<C>,
    p2: &PairDistribution<C>,
) -> Result<()> {
    let mut bad = p1.violations(1);
    bad.extend(p2.violations(2));
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Inadmissible(bad))
    }
}

/// Marginal `Ψ`s of the product pair.
pub fn product_marginals<C: Coefficient>(
    p1: &PairDistribution<C>,
    p2: &PairDistribution<C>,
) -> Result<(Series1<C>, Series1<C>)> {
    Ok((
        free_mult_convolve_marginal(&p1.marginal_a(), &p2.marginal_a())?,
        free_mult_convolve_marginal(&p1.marginal_b(), &p2.marginal_b())?,
    ))
}

/// `A = 1 + Ψ_a(z) + Ψ_b(w)` and `B = Ψ_a(z)Ψ_b(w)`.
fn a_and_b<C: Coefficient>(pa: &Series1<C>, pb: &Series1<C>) -> (Series2<C>, Series2<C>) {
    let a = (&Series2::embed_z(pa) + &Series2::embed_w(pb)).add_constant(&C::one());
    (a, Series2::outer(pa, pb))
}

fn recover<C: Coefficient>(
    pa: &Series1<C>,
    pb: &Series1<C>,
    psi2: &Series2<C>,
    n: usize,
) -> PairDistribution<C> {
    PairDistribution::from_psi(&pa.truncate(n), &pb.truncate(n), psi2)
}

fn within_order<C: Coefficient>(
    p1: &PairDistribution<C>,
    p2: &PairDistribution<C>,
    n: usize,
) -> Result<()> {
    let have = p1.order().min(p2.order());
    if n == 0 || have < n {
        return Err(Error::InsufficientPrecision {
            needed: n.max(1),
            available: have as i64,
        });
    }
    Ok(())
}

/// Via multiplicativity of the partial S-transform.
pub fn biconv_via_s<C: Coefficient>(
    p1: &PairDistribution<C>,
    p2: &PairDistribution<C>,
    n: usize,
) -> Result<PairDistribution<C>> {
    check_admissible(p1, p2)?;
    within_order(p1, p2, n)?;
    let s12 = &partial_s(p1)? * &partial_s(p2)?;
    let (pa, pb) = product_marginals(p1, p2)?;
    let s_at = s12.compose_slots(&pa, &pb)?;
    let (a, b) = a_and_b(&pa, &pb);
    let inv_a = V::from_series(&a).recip()?;
    let inv_b = V::from_series(&b).recip()?;
    let rhs = inv_a
        .add(&inv_b)?
        .div(&V::from_series(&s_at))?
        .sub(&inv_a)?;
    let psi2 = rhs.recip()?.to_series_at(n)?;
    Ok(recover(&pa, &pb, &psi2, n))
}

/// Subordination germs `ω_{a₁}, ω_{b₁}, ω_{a₂}, ω_{b₂}` and the product
/// marginals they are built from.
#[derive(Debug, Clone)]
pub struct Subordination<C: Coefficient> {
    pub psi_a12: Series1<C>,
    pub psi_b12: Series1<C>,
    pub omega_a: [Series1<C>; 2],
    pub omega_b: [Series1<C>; 2],
}

impl<C: Coefficient> Subordination<C> {
    pub fn new(p1: &PairDistribution<C>, p2: &PairDistribution<C>) -> Result<Self> {
        let (pa, pb) = product_marginals(p1, p2)?;
        Self::with_marginals(p1, p2, pa, pb)
    }

    /// Germs subordinating the given product marginals to each factor.
    pub fn with_marginals(
        p1: &PairDistribution<C>,
        p2: &PairDistribution<C>,
        psi_a12: Series1<C>,
        psi_b12: Series1<C>,
    ) -> Result<Self> {
        let omega_a = [
            subordination_series(&psi_a12, &p1.psi_a())?,
            subordination_series(&psi_a12, &p2.psi_a())?,
        ];
        let omega_b = [
            subordination_series(&psi_b12, &p1.psi_b())?,
            subordination_series(&psi_b12, &p2.psi_b())?,
        ];
        Ok(Subordination {
            psi_a12,
            psi_b12,
            omega_a,
            omega_b,
        })
    }

    /// `A` and `B` evaluated through face `j` (0 or 1).
    fn a_and_b_face(&self, p: &PairDistribution<C>, j: usize) -> Result<(Series2<C>, Series2<C>)> {
        let ua = p.psi_a().compose(&self.omega_a[j])?;
        let ub = p.psi_b().compose(&self.omega_b[j])?;
        Ok(a_and_b(&ua, &ub))
    }

    /// `Ψ_{a,b}/H_{a,b}` at `(ω_{aⱼ}(z), ω_{bⱼ}(w))`.
    fn ratio(&self, p: &PairDistribution<C>, j: usize) -> Result<V<C>> {
        let (oa, ob) = (&self.omega_a[j], &self.omega_b[j]);
        let num = p.psi_ab().compose_slots(oa, ob)?;
        let den = p.h_ab().compose_slots(oa, ob)?;
        V::from_series(&num).div(&V::from_series(&den))
    }
}

/// `(1/A + 1/B) / ((1 + A/B)² R₁R₂)` with face-one `A`, `B`; this is
/// `1/Ψ₂ + 1/A`.
fn subordinated_rhs<C: Coefficient>(
    p1: &PairDistribution<C>,
    p2: &PairDistribution<C>,
    sub: &Subordination<C>,
) -> Result<(V<C>, V<C>)> {
    let (a, b) = sub.a_and_b_face(p1, 0)?;
    let (a2, b2) = sub.a_and_b_face(p2, 1)?;
    let m = a.order().min(a2.order());
    if !a.truncate(m).approx_eq(&a2.truncate(m), 1e-9)
        || !b.truncate(m).approx_eq(&b2.truncate(m), 1e-9)
    {
        return Err(Error::Inconsistent(
            "subordination germs of the two faces disagree on A and B".into(),
        ));
    }
    let va = V::from_series(&a);
    let vb = V::from_series(&b);
    let inv_a = va.recip()?;
    let inv_b = vb.recip()?;
    let q = V::from_series(&(&a + &b)).div(&vb)?;
    let den = q.mul(&q).mul(&sub.ratio(p1, 0)?).mul(&sub.ratio(p2, 1)?);
    let den_inv = den.recip().map_err(|e| {
        Error::Inconsistent(format!(
            "subordinated denominator cancels at the origin ({e})"
        ))
    })?;
    Ok((inv_a.add(&inv_b)?.mul(&den_inv), inv_a))
}

/// Via the subordination germs, without the S-transform of the product.
pub fn biconv_via_subordination<C: Coefficient>(
    p1: &PairDistribution<C>,
    p2: &PairDistribution<C>,
    n: usize,
) -> Result<PairDistribution<C>> {
    check_admissible(p1, p2)?;
    within_order(p1, p2, n)?;
    let sub = Subordination::new(p1, p2)?;
    let (rhs, inv_a) = subordinated_rhs(p1, p2, &sub)?;
    let psi2 = rhs.sub(&inv_a)?.recip()?.to_series_at(n)?;
    Ok(recover(&sub.psi_a12, &sub.psi_b12, &psi2, n))
}

/// Via `Ψ₂ = F/G`. The factors `Ψ_{a₁}(ω)/ω` in `G` are the `ζ` functions,
/// which is what makes `G(0,0) = φ(a₁)φ(b₁)`.
pub fn biconv_via_quotient<C: Coefficient>(
    p1: &PairDistribution<C>,
    p2: &PairDistribution<C>,
    n: usize,
) -> Result<PairDistribution<C>> {
    check_admissible(p1, p2)?;
    within_order(p1, p2, n)?;
    let sub = Subordination::new(p1, p2)?;
    let (oa1, ob1) = (&sub.omega_a[0], &sub.omega_b[0]);
    let (oa2, ob2) = (&sub.omega_a[1], &sub.omega_b[1]);
    let h1 = p1.h_ab().compose_slots(oa1, ob1)?;
    let h2 = p2.h_ab().compose_slots(oa2, ob2)?;
    let zeta_a1 = p1.psi_a().div_z()?.compose(oa1)?;
    let zeta_b1 = p1.psi_b().div_z()?.compose(ob1)?;
    let eta1 = p1.psi_ab().div_zw()?.compose_slots(oa1, ob1)?;
    let psi2_at = p2.psi_ab().compose_slots(oa2, ob2)?;
    let one = C::one();
    let (a, _) = a_and_b(&sub.psi_a12, &sub.psi_b12);
    let c = Series2::outer(
        &sub.psi_a12.add_constant(&one),
        &sub.psi_b12.add_constant(&one),
    );
    let k = &(&c * &eta1) * &psi2_at;
    let f = &a * &k;
    let g = &(&(&h1 * &h2) * &Series2::outer(&zeta_a1, &zeta_b1)) - &k;
    if g.coeff(0, 0).is_negligible() {
        return Err(Error::ZeroConstantTerm);
    }
    let psi2 = &f * &g.reciprocal()?;
    if psi2.order() < n {
        return Err(Error::InsufficientPrecision {
            needed: n,
            available: psi2.order() as i64,
        });
    }
    Ok(recover(&sub.psi_a12, &sub.psi_b12, &psi2.truncate(n), n))
}

/// Both sides of the subordination equation for the product's mixed
/// transform.
#[derive(Debug, Clone)]
pub struct SubordinationResidual {
    /// Largest coefficient of `zw·(left − right)` through order `n`.
    pub residual: f64,
    /// Left and right agree under the mode's policy.
    pub exact: bool,
    pub order: usize,
}

/// Checks `1/Ψ₂ + 1/A = (1/A + 1/B)/((1 + A/B)² R₁R₂)` with the left side
/// taken from `product` (the oracle table) and the right built from `p1`,
/// `p2` and their subordination germs.
pub fn subordination_check<C: Coefficient>(
    p1: &PairDistribution<C>,
    p2: &PairDistribution<C>,
    product: &PairDistribution<C>,
    n: usize,
) -> Result<SubordinationResidual> {
    check_admissible(p1, p2)?;
    within_order(p1, p2, n)?;
    let sub = Subordination::new(p1, p2)?;
    let (rhs, _) = subordinated_rhs(p1, p2, &sub)?;
    let (a, _) = a_and_b(&product.psi_a(), &product.psi_b());
    let lhs = V::from_series(&product.psi_ab())
        .recip()?
        .add(&V::from_series(&a).recip()?)?;
    let diff = lhs.sub(&rhs)?;
    let (p, q) = diff.valuation();
    let (zp, wp) = diff.precision();
    if zp.min(wp) < n as i64 - 1 {
        return Err(Error::InsufficientPrecision {
            needed: n,
            available: zp.min(wp) + 1,
        });
    }
    let mut residual: f64 = 0.0;
    if !diff.is_zero() {
        let u = diff.unit();
        for ((j, k), c) in u.coeffs() {
            // monomial of zw·diff
            let (dj, dk) = (p + 1 + j as i64, q + 1 + k as i64);
            if dj <= n as i64 && dk <= n as i64 {
                residual = residual.max(c.magnitude());
            }
        }
    }
    let exact = match C::MODE {
        crate::Mode::Rational => residual == 0.0,
        crate::Mode::Complex => residual <= 1e-9,
    };
    Ok(SubordinationResidual {
        residual,
        exact,
        order: n,
    })
}

/// The three route tables next to the oracle, with per-route discrepancies.
#[derive(Debug, Clone)]
pub struct ConvolutionReport<C: Coefficient> {
    pub order: usize,
    pub oracle: PairDistribution<C>,
    pub route_s: PairDistribution<C>,
    pub route_sub: PairDistribution<C>,
    pub route_quotient: PairDistribution<C>,
    /// Max entrywise difference to the oracle for routes S, 12, 13.
    pub max_discrepancy: [f64; 3],
    pub subordination: SubordinationResidual,
    /// Every route matches the oracle under the mode's policy.
    pub agree: bool,
}

impl<C: Coefficient> ConvolutionReport<C> {
    pub fn routes(&self) -> [(&'static str, &PairDistribution<C>); 3] {
        [
            ("S", &self.route_s),
            ("subordination", &self.route_sub),
            ("F/G", &self.route_quotient),
        ]
    }
}

/// Runs all routes and the oracle at order `n`.
pub fn convolve<C: Coefficient>(
    mu1: &AtomicPairMeasure<C>,
    mu2: &AtomicPairMeasure<C>,
    n: usize,
    tol: f64,
) -> Result<ConvolutionReport<C>> {
    let work = n + WORKING_MARGIN;
    let p1 = mu1.moments(work);
    let p2 = mu2.moments(work);
    check_admissible(&p1, &p2)?;
    let oracle = product_pair_moments(mu1, mu2, work)?;
    let route_s = biconv_via_s(&p1, &p2, n)?;
    let route_sub = biconv_via_subordination(&p1, &p2, n)?;
    let route_quotient = biconv_via_quotient(&p1, &p2, n)?;
    let subordination = subordination_check(&p1, &p2, &oracle, n)?;
    let oracle = oracle.truncate(n);
    let routes = [&route_s, &route_sub, &route_quotient];
    let max_discrepancy = routes.map(|r| r.max_abs_diff(&oracle));
    let agree = routes.iter().all(|r| r.approx_eq(&oracle, tol)) && subordination.exact;
    Ok(ConvolutionReport {
        order: n,
        oracle,
        route_s,
        route_sub,
        route_quotient,
        max_discrepancy,
        subordination,
        agree,
    })
}

/// Preconditions a measure pair violates, in report order.
pub fn violations<C: Coefficient>(
    mu1: &AtomicPairMeasure<C>,
    mu2: &AtomicPairMeasure<C>,
) -> Vec<Precondition> {
    let mut v = mu1.moments(1).violations(1);
    v.extend(mu2.moments(1).violations(2));
    v
}
