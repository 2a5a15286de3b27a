//! Ground-truth moments from the operator model of a pair of bi-free
//! two-faced pairs.
//!
//! Let `(A₁, τ₁)`, `(A₂, τ₂)` be commutative algebras with `xᵢ, yᵢ ∈ Aᵢ`
//! distributed as `μᵢ`, and act on the free product `A₁ * A₂` by
//! `aᵢ = λ(xᵢ)` (left multiplication) and `bᵢ = ρ(yᵢ)` (right
//! multiplication). Then `(a₁, b₁)` and `(a₂, b₂)` are bi-free with the
//! prescribed distributions, and
//!
//! `φ((a₁a₂)ᵐ (b₁b₂)ⁿ) = τ((x₁x₂)ᵐ (y₂y₁)ⁿ)`.
//!
//! Note the reversed order `y₂y₁`: `ρ(y₁)ρ(y₂)ξ = ξ y₂ y₁`.

mod fock;
mod nc;
mod word;

pub use fock::{FockOracle, FockVector};
pub use nc::{NcOracle, NC_MAX_LEN};
pub use word::{Gen, Letter, RawLetter, Word};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::measures::{AtomicPairMeasure, PairDistribution};

/// `τ(word)` in the free product of the algebras of `law1` and `law2`.
pub fn word_moment<C: Coefficient>(
    law1: &AtomicPairMeasure<C>,
    law2: &AtomicPairMeasure<C>,
    word: &Word,
) -> C {
    FockOracle::new(law1, law2).moment(word)
}

/// `τ(word)` by the non-crossing partition sum (words up to
/// [`NC_MAX_LEN`] letters).
pub fn nc_word_moment<C: Coefficient>(
    law1: &AtomicPairMeasure<C>,
    law2: &AtomicPairMeasure<C>,
    word: &Word,
) -> Result<C> {
    NcOracle::new(law1, law2).moment(word)
}

/// Two-band moments of `(a₁a₂, b₁b₂)` for bi-free pairs distributed as
/// `mu1`, `mu2`.
pub fn product_pair_moments<C: Coefficient>(
    mu1: &AtomicPairMeasure<C>,
    mu2: &AtomicPairMeasure<C>,
    order: usize,
) -> Result<PairDistribution<C>> {
    if order == 0 {
        return Err(Error::InsufficientPrecision {
            needed: 1,
            available: 0,
        });
    }
    let mut oracle = FockOracle::new(mu1, mu2);
    let x1 = Letter::new(1, 1, 0);
    let x2 = Letter::new(2, 1, 0);
    let y1 = Letter::new(1, 0, 1);
    let y2 = Letter::new(2, 0, 1);
    let mut table = vec![vec![C::zero(); order + 1]; order + 1];
    let mut v = FockVector::vacuum();
    for n in 0..=order {
        if n > 0 {
            v = oracle.apply(y1, &v);
            v = oracle.apply(y2, &v);
            v.prune(2 * order);
        }
        let mut u = v.clone();
        for (m, row) in table.iter_mut().enumerate() {
            row[n] = u.vacuum_coeff();
            if m < order {
                u = oracle.apply(x2, &u);
                u = oracle.apply(x1, &u);
                u.prune(2 * (order - m - 1));
            }
        }
    }
    PairDistribution::from_table(table)
}
