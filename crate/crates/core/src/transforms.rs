//! Scalar transforms of a two-faced pair as truncated series.
//!
//! For a table of order `N`:
//!
//! | transform | definition | order |
//! |---|---|---|
//! | `Ψ_a`, `h_a = 1 + Ψ_a` | `Σ_{n≥1} φ(aⁿ) zⁿ` | `N` |
//! | `Ψ_{a,b}`, `H_{a,b}` | `Σ φ(aᵐbⁿ) zᵐwⁿ` over `m,n ≥ 1` / `≥ 0` | `N` |
//! | `η_a` | `Ψ_a / (1 + Ψ_a)` | `N` |
//! | `ζ_a`, `η_{a,b}` | `Ψ_a / z`, `Ψ_{a,b} / (zw)` | `N − 1` |
//! | `S_a` | `((1 + z)/z) Ψ_a^{⟨-1⟩}(z)` | `N − 1` |
//! | `S_{a,b}` | `((1+z)(1+w)/(zw)) (1 − (1+z+w)/H_{a,b}(Ψ_a^{⟨-1⟩}(z), Ψ_b^{⟨-1⟩}(w)))` | `N − 1` |
//! | `Σ_{a,b}` | `S_{a,b}(z/(1−z), w/(1−w))` | `N − 1` |

use crate::coeff::Coefficient;
use crate::error::{Error, Precondition, Result};
use crate::measures::PairDistribution;
use crate::series::{Series1, Series2};

/// `Σ_{n≥1} mₙ zⁿ` from moments `m₀, …, m_N`.
pub fn psi_from_moments<C: Coefficient>(moments: &[C]) -> Series1<C> {
    Series1::from_fn(moments.len() - 1, |k| {
        if k == 0 {
            C::zero()
        } else {
            moments[k].clone()
        }
    })
}

/// `η = Ψ / (1 + Ψ)`.
pub fn eta<C: Coefficient>(psi: &Series1<C>) -> Result<Series1<C>> {
    Ok(psi * &psi.add_constant(&C::one()).reciprocal()?)
}

/// `S = ((1 + z)/z) Ψ^{⟨-1⟩}`; needs `φ(a) ≠ 0`, i.e. a nonzero linear term.
pub fn s_transform<C: Coefficient>(psi: &Series1<C>) -> Result<Series1<C>> {
    let inv = psi.invert()?;
    let q = inv.div_z()?;
    Ok(&q + &q.mul_z().truncate(q.order()))
}

/// Moments `φ(aᵏ)` of a product of free variables, from the moment
/// sequences `m1`, `m2` (index 0 is the constant 1): `S_{a₁a₂} = S_{a₁}S_{a₂}`,
/// `Ψ^{⟨-1⟩} = z S/(1 + z)`, invert. Returns `Ψ_{a₁a₂}` at the common order.
pub fn free_mult_convolve_marginal<C: Coefficient>(m1: &[C], m2: &[C]) -> Result<Series1<C>> {
    let s = &s_transform(&psi_from_moments(m1))? * &s_transform(&psi_from_moments(m2))?;
    free_mult_from_s(&s)
}

/// `Ψ` from an S-transform of order `n − 1`; the result has order `n`.
pub fn psi_from_s<C: Coefficient>(s: &Series1<C>) -> Result<Series1<C>> {
    free_mult_from_s(s)
}

fn free_mult_from_s<C: Coefficient>(s: &Series1<C>) -> Result<Series1<C>> {
    let zs = s.mul_z();
    let n = zs.order();
    let one_plus_z = Series1::from_fn(n, |k| if k <= 1 { C::one() } else { C::zero() });
    let inv = &zs * &one_plus_z.reciprocal()?;
    inv.invert()
}

/// Formal subordination germ `ω = Ψ_factor^{⟨-1⟩} ∘ Ψ_target`, so that
/// `Ψ_factor ∘ ω = Ψ_target`.
pub fn subordination_series<C: Coefficient>(
    psi_target: &Series1<C>,
    psi_factor: &Series1<C>,
) -> Result<Series1<C>> {
    if psi_target.order() >= 1 && psi_target.coeff(1).is_negligible() {
        return Err(Error::ZeroLinearCoefficient);
    }
    psi_factor.invert()?.compose(psi_target)
}

fn first_moment_violations<C: Coefficient>(
    p: &PairDistribution<C>,
    index: usize,
) -> Vec<Precondition> {
    p.violations(index)
        .into_iter()
        .filter(|v| !matches!(v, Precondition::MixedMoment(_)))
        .collect()
}

/// Partial bi-free S-transform `S_{a,b}`, of order `N − 1`.
///
/// The bracket `1 − (1+z+w)/H(…)` must vanish on both axes; anything left
/// there is reported as an error, never truncated away.
pub fn partial_s<C: Coefficient>(p: &PairDistribution<C>) -> Result<Series2<C>> {
    let bad = first_moment_violations(p, 1);
    if !bad.is_empty() {
        return Err(Error::Inadmissible(bad));
    }
    let n = p.order();
    let inv_a = p.psi_a().invert()?;
    let inv_b = p.psi_b().invert()?;
    let h = p.h_ab().compose_slots(&inv_a, &inv_b)?;
    let one_z_w = Series2::from_fn(n, |j, k| if j + k <= 1 { C::one() } else { C::zero() });
    let bracket = (-&(&one_z_w * &h.reciprocal()?)).add_constant(&C::one());
    let q = bracket.div_zw()?;
    let m = q.order();
    let one_plus = Series1::from_fn(m, |k| if k <= 1 { C::one() } else { C::zero() });
    Ok(&q * &Series2::outer(&one_plus, &one_plus))
}

/// `Σ_{a,b}(z, w) = S_{a,b}(z/(1 − z), w/(1 − w))`.
pub fn sigma_transform<C: Coefficient>(p: &PairDistribution<C>) -> Result<Series2<C>> {
    let s = partial_s(p)?;
    let m = s.order();
    let g = Series1::from_fn(m, |k| if k == 0 { C::zero() } else { C::one() });
    s.compose_slots(&g, &g)
}

/// `g(z, w) = 4Ψ_{a,b} + 2(Ψ_a + Ψ_b) + 1`.
pub fn g_series<C: Coefficient>(p: &PairDistribution<C>) -> Series2<C> {
    let two = C::from_i64(2);
    let four = C::from_i64(4);
    Series2::from_fn(p.order(), |j, k| match (j, k) {
        (0, 0) => C::one(),
        (0, _) | (_, 0) => two.mul_ref(p.m(j, k)),
        _ => four.mul_ref(p.m(j, k)),
    })
}

/// Every transform of one pair. The S-family is absent when a first moment
/// vanishes; `missing` says why.
#[derive(Debug, Clone)]
pub struct TransformBundle<C: Coefficient> {
    pub psi_a: Series1<C>,
    pub psi_b: Series1<C>,
    pub psi_ab: Series2<C>,
    pub h_a: Series1<C>,
    pub h_b: Series1<C>,
    pub h_ab: Series2<C>,
    pub eta_a: Series1<C>,
    pub eta_b: Series1<C>,
    pub zeta_a: Series1<C>,
    pub zeta_b: Series1<C>,
    pub eta_ab: Series2<C>,
    pub s_a: Option<Series1<C>>,
    pub s_b: Option<Series1<C>>,
    pub partial_s: Option<Series2<C>>,
    pub sigma: Option<Series2<C>>,
    pub missing: Vec<Precondition>,
}

pub fn bundle<C: Coefficient>(p: &PairDistribution<C>) -> Result<TransformBundle<C>> {
    if p.order() == 0 {
        return Err(Error::InsufficientPrecision {
            needed: 1,
            available: 0,
        });
    }
    let psi_a = p.psi_a();
    let psi_b = p.psi_b();
    let one = C::one();
    let missing = first_moment_violations(p, 1);
    let a_ok = !missing.contains(&Precondition::FirstMomentA(1));
    let b_ok = !missing.contains(&Precondition::FirstMomentB(1));
    let (partial, sigma) = if missing.is_empty() {
        (Some(partial_s(p)?), Some(sigma_transform(p)?))
    } else {
        (None, None)
    };
    Ok(TransformBundle {
        h_a: psi_a.add_constant(&one),
        h_b: psi_b.add_constant(&one),
        eta_a: eta(&psi_a)?,
        eta_b: eta(&psi_b)?,
        zeta_a: psi_a.div_z()?,
        zeta_b: psi_b.div_z()?,
        eta_ab: p.psi_ab().div_zw()?,
        s_a: if a_ok {
            Some(s_transform(&psi_a)?)
        } else {
            None
        },
        s_b: if b_ok {
            Some(s_transform(&psi_b)?)
        } else {
            None
        },
        psi_ab: p.psi_ab(),
        h_ab: p.h_ab(),
        psi_a,
        psi_b,
        partial_s: partial,
        sigma,
        missing,
    })
}
