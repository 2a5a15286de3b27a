//! Moments in the reduced free product of two finite commutative algebras,
//! computed on the free product Hilbert space.
//!
//! Each algebra is the function algebra on the atoms of its law, with the
//! state `τ(f) = Σ wₖ f(k)`. A vector of the free product space is a
//! combination of elementary tensors `v₁ ⊗ v₂ ⊗ …` of centered functions
//! from alternating algebras. A letter `ℓ` of algebra `i` acts by
//!
//! - `ℓ·ξ = τ(ℓ)ξ + ℓ° ⊗ ξ` when `ξ` does not start in algebra `i`,
//! - `ℓ·(v ⊗ ξ) = τ(ℓv)ξ + (ℓv)° ⊗ ξ` when it does,
//!
//! and `τ(word)` is the vacuum coefficient of `word·Ω`. Centered functions
//! are interned up to a scalar, so repeated tensors merge.

use std::collections::BTreeMap;

use crate::coeff::Coefficient;
use crate::measures::AtomicPairMeasure;

use super::word::{Gen, Letter, RawLetter, Word};

/// Tensor slot: algebra index in the top bit, interned vector id below.
type Slot = u32;
const ALG_BIT: u32 = 1 << 31;

/// Elementary tensors keyed by their slots, front slot last.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<C> {
    terms: BTreeMap<Vec<Slot>, C>,
}

impl<C: Coefficient> FockVector<C> {
    /// The vacuum `Ω`.
    pub fn vacuum() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), C::one());
        FockVector { terms }
    }

    /// Coefficient of `Ω`.
    pub fn vacuum_coeff(&self) -> C {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(C::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops tensors that are too long to return to `Ω` within `budget`
    /// further letters.
    pub fn prune(&mut self, budget: usize) {
        self.terms.retain(|k, _| k.len() <= budget);
    }
}

#[derive(Debug, Clone)]
struct AlgebraModel<C> {
    weights: Vec<C>,
    s: Vec<C>,
    t: Vec<C>,
    /// Normalized coordinates (first nonzero entry 1) of interned centered
    /// vectors, in the basis `uₖ = δₖ/wₖ − δ_last/w_last`.
    vectors: Vec<Vec<C>>,
    /// Function values of the interned vectors on the atoms.
    values: Vec<Vec<C>>,
    letters: BTreeMap<(u32, u32), (Vec<C>, C)>,
}

impl<C: Coefficient> AlgebraModel<C> {
    fn new(mu: &AtomicPairMeasure<C>) -> Self {
        AlgebraModel {
            weights: mu.atoms().iter().map(|a| a.weight.clone()).collect(),
            s: mu.atoms().iter().map(|a| a.s.clone()).collect(),
            t: mu.atoms().iter().map(|a| a.t.clone()).collect(),
            vectors: Vec::new(),
            values: Vec::new(),
            letters: BTreeMap::new(),
        }
    }

    fn dim(&self) -> usize {
        self.weights.len()
    }

    fn tau(&self, f: &[C]) -> C {
        let mut acc = C::zero();
        for (w, v) in self.weights.iter().zip(f) {
            acc.add_product(w, v);
        }
        acc
    }

    /// Values and state of `x^p y^q` on the atoms.
    fn letter(&mut self, p: u32, q: u32) -> (Vec<C>, C) {
        if let Some(hit) = self.letters.get(&(p, q)) {
            return hit.clone();
        }
        let values: Vec<C> = (0..self.dim())
            .map(|k| {
                let mut v = C::one();
                for _ in 0..p {
                    v = v.mul_ref(&self.s[k]);
                }
                for _ in 0..q {
                    v = v.mul_ref(&self.t[k]);
                }
                v
            })
            .collect();
        let tau = self.tau(&values);
        self.letters.insert((p, q), (values.clone(), tau.clone()));
        (values, tau)
    }

    /// Function values of a centered vector given by coordinates.
    fn values_of(&self, c: &[C]) -> Vec<C> {
        let last = self.dim() - 1;
        let mut out = Vec::with_capacity(self.dim());
        let mut tail = C::zero();
        for (k, ck) in c.iter().enumerate() {
            out.push(ck.div_ref(&self.weights[k]));
            tail = tail.sub_ref(ck);
        }
        out.push(tail.div_ref(&self.weights[last]));
        out
    }

    /// Interns `f − τ(f)` given `τ(f)`; returns the id and the scalar the
    /// normalized vector must be multiplied by, or `None` if `f` is constant.
    fn intern_centered(&mut self, f: &[C], tau: &C) -> Option<(usize, C)> {
        let last = self.dim() - 1;
        let coords: Vec<C> = (0..last)
            .map(|k| f[k].sub_ref(tau).mul_ref(&self.weights[k]))
            .collect();
        let floor = match C::MODE {
            crate::Mode::Rational => 0.0,
            crate::Mode::Complex => 1e-13 * f.iter().map(|c| c.magnitude()).fold(1.0, f64::max),
        };
        let pivot = coords
            .iter()
            .position(|c| !c.is_zero() && c.magnitude() > floor)?;
        let scale = coords[pivot].clone();
        let normalized: Vec<C> = coords.iter().map(|c| c.div_ref(&scale)).collect();
        let id = match self.vectors.iter().position(|v| {
            v.iter()
                .zip(&normalized)
                .all(|(a, b)| a.approx_eq(b, 1e-13))
        }) {
            Some(id) => id,
            None => {
                self.values.push(self.values_of(&normalized));
                self.vectors.push(normalized);
                self.vectors.len() - 1
            }
        };
        Some((id, scale))
    }
}

/// Evaluator for one pair of laws; caches interned vectors and word moments.
#[derive(Debug, Clone)]
pub struct FockOracle<C> {
    algebras: [AlgebraModel<C>; 2],
    memo: BTreeMap<Word, C>,
}

fn add_term<C: Coefficient>(terms: &mut BTreeMap<Vec<Slot>, C>, key: Vec<Slot>, value: C) {
    if value.is_zero() {
        return;
    }
    match terms.get_mut(&key) {
        Some(slot) => {
            *slot = slot.add_ref(&value);
            if slot.is_zero() {
                terms.remove(&key);
            }
        }
        None => {
            terms.insert(key, value);
        }
    }
}

impl<C: Coefficient> FockOracle<C> {
    pub fn new(law1: &AtomicPairMeasure<C>, law2: &AtomicPairMeasure<C>) -> Self {
        FockOracle {
            algebras: [AlgebraModel::new(law1), AlgebraModel::new(law2)],
            memo: BTreeMap::new(),
        }
    }

    /// Applies the block `x_i^p y_i^q` to `xi`.
    pub fn apply(&mut self, letter: Letter, xi: &FockVector<C>) -> FockVector<C> {
        let a = (letter.alg - 1) as usize;
        let tag = (a as u32) * ALG_BIT;
        let model = &mut self.algebras[a];
        let (values, tau_l) = model.letter(letter.x, letter.y);
        let fresh = model.intern_centered(&values, &tau_l);
        let mut out = BTreeMap::new();
        for (key, coef) in &xi.terms {
            match key.last() {
                Some(&front) if front & ALG_BIT == tag => {
                    let id = (front & !ALG_BIT) as usize;
                    let h: Vec<C> = values
                        .iter()
                        .zip(&model.values[id])
                        .map(|(l, f)| l.mul_ref(f))
                        .collect();
                    let tau_h = model.tau(&h);
                    let mut rest = key.clone();
                    rest.pop();
                    if let Some((nid, scale)) = model.intern_centered(&h, &tau_h) {
                        let mut k = rest.clone();
                        k.push(tag | nid as u32);
                        add_term(&mut out, k, coef.mul_ref(&scale));
                    }
                    add_term(&mut out, rest, coef.mul_ref(&tau_h));
                }
                _ => {
                    add_term(&mut out, key.clone(), coef.mul_ref(&tau_l));
                    if let Some((nid, scale)) = &fresh {
                        let mut k = key.clone();
                        k.push(tag | *nid as u32);
                        add_term(&mut out, k, coef.mul_ref(scale));
                    }
                }
            }
        }
        FockVector { terms: out }
    }

    /// `τ` of every canonical word of length `1..=max_len`, sorted by word.
    ///
    /// Words are grown leftwards from shared suffixes, so each costs a single
    /// letter application.
    pub fn all_word_moments(&mut self, max_len: usize) -> Vec<(Word, C)> {
        let mut out = Vec::new();
        // (raw suffix, state, whether the leading same-algebra run has an x)
        let mut stack: Vec<(Vec<RawLetter>, FockVector<C>, bool)> =
            vec![(Vec::new(), FockVector::vacuum(), false)];
        while let Some((suffix, state, run_has_x)) = stack.pop() {
            if !suffix.is_empty() {
                let word = Word::from_raw(suffix.iter().rev().copied());
                out.push((word, state.vacuum_coeff()));
            }
            if suffix.len() == max_len {
                continue;
            }
            for code in 0..4u8 {
                let r = RawLetter::from_code(code);
                let same_run = suffix.last().is_some_and(|f| f.alg == r.alg);
                if same_run && r.gen == Gen::Y && run_has_x {
                    continue;
                }
                let letter = match r.gen {
                    Gen::X => Letter::new(r.alg, 1, 0),
                    Gen::Y => Letter::new(r.alg, 0, 1),
                };
                let mut next = self.apply(letter, &state);
                next.prune(max_len - suffix.len() - 1);
                let mut s = suffix.clone();
                s.push(r);
                let has_x = r.gen == Gen::X || (same_run && run_has_x);
                stack.push((s, next, has_x));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// `τ(word)`, memoized.
    pub fn moment(&mut self, word: &Word) -> C {
        if let Some(v) = self.memo.get(word) {
            return v.clone();
        }
        let mut xi = FockVector::vacuum();
        let mut remaining = word.len();
        for &letter in word.letters().iter().rev() {
            xi = self.apply(letter, &xi);
            remaining -= letter.degree();
            xi.prune(remaining);
        }
        let v = xi.vacuum_coeff();
        self.memo.insert(word.clone(), v.clone());
        v
    }
}
