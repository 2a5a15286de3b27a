//! Finitely supported joint distributions of a commuting pair `(a, b)` and
//! their two-band moment tables `φ(aᵐbⁿ)`.

mod file;

use crate::coeff::{Coefficient, COMPLEX_ABS_ZERO};
use crate::error::{Error, Precondition, Result};
use crate::series::{Series1, Series2};

pub use file::{parse_decimal_or_ratio, MeasureFile, RawAtom, Scalar};

/// Where the atoms live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// `|s| = |t| = 1`.
    Torus,
    /// `s, t > 0`.
    Positive,
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::Torus => "torus",
            Space::Positive => "positive",
        }
    }
}

/// One atom `(s, t)` with its mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom<C> {
    pub s: C,
    pub t: C,
    pub weight: C,
}

impl<C: Coefficient> Atom<C> {
    pub fn new(s: C, t: C, weight: C) -> Self {
        Atom { s, t, weight }
    }
}

/// A probability measure with finitely many atoms on `𝕋²` or `ℝ₊²`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicPairMeasure<C> {
    space: Space,
    atoms: Vec<Atom<C>>,
}

const WEIGHT_TOL: f64 = 1e-12;

impl<C: Coefficient> AtomicPairMeasure<C> {
    /// Validates weights (positive, summing to 1), distinctness and the
    /// support condition of `space`.
    pub fn new(space: Space, atoms: Vec<Atom<C>>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        let mut total = C::zero();
        for (i, a) in atoms.iter().enumerate() {
            if !is_positive_real(&a.weight) {
                return Err(Error::InvalidMeasure(format!(
                    "atom {i}: weight {} is not positive",
                    a.weight.render()
                )));
            }
            total = total.add_ref(&a.weight);
            match space {
                Space::Torus => {
                    for (name, v) in [("s", &a.s), ("t", &a.t)] {
                        let modulus_sq = v.mul_ref(&v.conj());
                        let off = (modulus_sq.magnitude().sqrt() - 1.0).abs();
                        let on_circle = match C::MODE {
                            crate::Mode::Rational => modulus_sq == C::one(),
                            crate::Mode::Complex => off <= WEIGHT_TOL,
                        };
                        if !on_circle {
                            return Err(Error::InvalidMeasure(format!(
                                "atom {i}: {name} = {} is off the unit circle",
                                v.render()
                            )));
                        }
                    }
                }
                Space::Positive => {
                    for (name, v) in [("s", &a.s), ("t", &a.t)] {
                        if !is_positive_real(v) {
                            return Err(Error::InvalidMeasure(format!(
                                "atom {i}: {name} = {} is not positive",
                                v.render()
                            )));
                        }
                    }
                }
            }
            for (j, b) in atoms[..i].iter().enumerate() {
                if a.s.approx_eq(&b.s, WEIGHT_TOL) && a.t.approx_eq(&b.t, WEIGHT_TOL) {
                    return Err(Error::InvalidMeasure(format!("atoms {j} and {i} coincide")));
                }
            }
        }
        if !total.approx_eq(&C::one(), WEIGHT_TOL) {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {}, not 1",
                total.render()
            )));
        }
        Ok(AtomicPairMeasure { space, atoms })
    }

    /// Point mass at `(s, t)`.
    pub fn dirac(space: Space, s: C, t: C) -> Result<Self> {
        Self::new(space, vec![Atom::new(s, t, C::one())])
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn atoms(&self) -> &[Atom<C>] {
        &self.atoms
    }

    /// `M[m][n] = Σ wᵢ sᵢᵐ tᵢⁿ` for `m, n ≤ order`.
    pub fn moments(&self, order: usize) -> PairDistribution<C> {
        moments_from_atoms(self, order)
    }
}

fn is_positive_real<C: Coefficient>(c: &C) -> bool {
    let imag = c.sub_ref(&c.conj()).magnitude() / 2.0;
    c.real_part() > 0.0 && imag <= COMPLEX_ABS_ZERO
}

/// Two-band moments of a measure.
pub fn moments_from_atoms<C: Coefficient>(
    mu: &AtomicPairMeasure<C>,
    order: usize,
) -> PairDistribution<C> {
    let mut table = vec![vec![C::zero(); order + 1]; order + 1];
    for atom in &mu.atoms {
        let mut s_pow = atom.weight.clone();
        for row in table.iter_mut() {
            let mut v = s_pow.clone();
            for cell in row.iter_mut() {
                *cell = cell.add_ref(&v);
                v = v.mul_ref(&atom.t);
            }
            s_pow = s_pow.mul_ref(&atom.s);
        }
    }
    PairDistribution { order, table }
}

/// The table `M[m][n] = φ(aᵐbⁿ)`, `0 ≤ m, n ≤ N`.
///
/// This is the interchange format between the oracle, the transforms and the
/// convolution routes.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDistribution<C> {
    order: usize,
    table: Vec<Vec<C>>,
}

impl<C: Coefficient> PairDistribution<C> {
    /// Wraps a square table; `M[0][0]` must be 1.
    pub fn from_table(table: Vec<Vec<C>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMeasure(
                "moment table must be square and nonempty".into(),
            ));
        }
        if !table[0][0].approx_eq(&C::one(), WEIGHT_TOL) {
            return Err(Error::InvalidMeasure(format!(
                "M[0][0] = {} (must be 1)",
                table[0][0].render()
            )));
        }
        Ok(PairDistribution {
            order: n - 1,
            table,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `φ(aᵐbⁿ)`.
    pub fn m(&self, m: usize, n: usize) -> &C {
        &self.table[m][n]
    }

    pub fn table(&self) -> &[Vec<C>] {
        &self.table
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        PairDistribution {
            order,
            table: self.table[..=order]
                .iter()
                .map(|r| r[..=order].to_vec())
                .collect(),
        }
    }

    /// `φ(a) ≠ 0` and `φ(b) ≠ 0`.
    pub fn first_moments_nonzero(&self) -> bool {
        self.order >= 1 && !self.m(1, 0).is_negligible() && !self.m(0, 1).is_negligible()
    }

    /// `φ(ab) ≠ 0`.
    pub fn mixed_nonzero(&self) -> bool {
        self.order >= 1 && !self.m(1, 1).is_negligible()
    }

    /// Violated standing hypotheses, labelled with the 1-based pair `index`.
    pub fn violations(&self, index: usize) -> Vec<Precondition> {
        let mut out = Vec::new();
        if self.order == 0 || self.m(1, 0).is_negligible() {
            out.push(Precondition::FirstMomentA(index));
        }
        if self.order == 0 || self.m(0, 1).is_negligible() {
            out.push(Precondition::FirstMomentB(index));
        }
        if self.order == 0 || self.m(1, 1).is_negligible() {
            out.push(Precondition::MixedMoment(index));
        }
        out
    }

    /// Moments `φ(aᵏ)`, `k = 0..=N`.
    pub fn marginal_a(&self) -> Vec<C> {
        self.table.iter().map(|r| r[0].clone()).collect()
    }

    /// Moments `φ(bᵏ)`, `k = 0..=N`.
    pub fn marginal_b(&self) -> Vec<C> {
        self.table[0].clone()
    }

    /// `Ψ_a(z) = Σ_{k≥1} φ(aᵏ) zᵏ`.
    pub fn psi_a(&self) -> Series1<C> {
        Series1::from_fn(self.order, |k| {
            if k == 0 {
                C::zero()
            } else {
                self.m(k, 0).clone()
            }
        })
    }

    /// `Ψ_b(w) = Σ_{k≥1} φ(bᵏ) wᵏ`.
    pub fn psi_b(&self) -> Series1<C> {
        Series1::from_fn(self.order, |k| {
            if k == 0 {
                C::zero()
            } else {
                self.m(0, k).clone()
            }
        })
    }

    /// `Ψ_{a,b}(z, w) = Σ_{m,n≥1} φ(aᵐbⁿ) zᵐwⁿ`.
    pub fn psi_ab(&self) -> Series2<C> {
        Series2::from_fn(self.order, |j, k| {
            if j == 0 || k == 0 {
                C::zero()
            } else {
                self.m(j, k).clone()
            }
        })
    }

    /// `H_{a,b}(z, w) = Σ_{m,n≥0} φ(aᵐbⁿ) zᵐwⁿ`.
    pub fn h_ab(&self) -> Series2<C> {
        Series2::from_fn(self.order, |j, k| self.m(j, k).clone())
    }

    /// Rebuilds a table from `Ψ_{a,b}` and the two marginal `Ψ`s.
    pub fn from_psi(psi_a: &Series1<C>, psi_b: &Series1<C>, psi_ab: &Series2<C>) -> Self {
        let order = psi_a.order().min(psi_b.order()).min(psi_ab.order());
        let table = (0..=order)
            .map(|m| {
                (0..=order)
                    .map(|n| match (m, n) {
                        (0, 0) => C::one(),
                        (m, 0) => psi_a.coeff(m).clone(),
                        (0, n) => psi_b.coeff(n).clone(),
                        (m, n) => psi_ab.coeff(m, n).clone(),
                    })
                    .collect()
            })
            .collect();
        PairDistribution { order, table }
    }

    /// Largest entrywise difference over the common order.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.order.min(other.order);
        let mut d: f64 = 0.0;
        for i in 0..=n {
            for j in 0..=n {
                d = d.max(self.m(i, j).sub_ref(other.m(i, j)).magnitude());
            }
        }
        d
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let n = self.order.min(other.order);
        (0..=n).all(|i| (0..=n).all(|j| self.m(i, j).approx_eq(other.m(i, j), tol)))
    }

    pub fn is_factoring(&self, tol: f64) -> bool {
        is_factoring(self, tol)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.table
                .iter()
                .map(|r| serde_json::Value::Array(r.iter().map(|c| c.to_json()).collect()))
                .collect(),
        )
    }
}

/// `M[m][n] = M[m][0]·M[0][n]` for all `1 ≤ m, n ≤ N`.
pub fn is_factoring<C: Coefficient>(p: &PairDistribution<C>, tol: f64) -> bool {
    (1..=p.order)
        .all(|m| (1..=p.order).all(|n| p.m(m, n).approx_eq(&p.m(m, 0).mul_ref(p.m(0, n)), tol)))
}
