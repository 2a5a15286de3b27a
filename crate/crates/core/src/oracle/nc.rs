//! Second, independent moment evaluator: the free moment-cumulant formula.
//!
//! `τ(ℓ₁⋯ℓₙ) = Σ_{π ∈ NC(n)} Π_{V ∈ π} κ(V)`, where mixed blocks vanish by
//! freeness and one-algebra blocks carry that algebra's free cumulants.
//! Summing first over the block `V` that contains position 1 gives the
//! recursion
//!
//! `τ(ℓ₁⋯ℓₙ) = Σ_{V ∋ 1} κ(ℓ_V) Π τ(gaps of V)`,
//!
//! and the same recursion inside one algebra, solved for the top term,
//! yields the cumulants from the moments.

use std::collections::HashMap;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::measures::{AtomicPairMeasure, PairDistribution};

use super::word::{RawLetter, Word};

/// Longest word the partition sum accepts.
pub const NC_MAX_LEN: usize = 12;

/// Memoized partition-sum evaluator for one pair of laws.
#[derive(Debug, Clone)]
pub struct NcOracle<C> {
    tables: [PairDistribution<C>; 2],
    /// Free cumulants per algebra, keyed by `x`/`y` pattern (`false` = x).
    cumulants: [HashMap<u32, C>; 2],
    moments: HashMap<u64, C>,
}

/// Every subset of `positions` that contains `positions[0]`, as index lists.
fn blocks_containing_first(positions: &[usize], mut f: impl FnMut(&[usize])) {
    let rest = positions.len() - 1;
    let mut chosen = Vec::with_capacity(positions.len());
    for mask in 0u32..(1 << rest) {
        chosen.clear();
        chosen.push(positions[0]);
        for (b, &p) in positions[1..].iter().enumerate() {
            if mask & (1 << b) != 0 {
                chosen.push(p);
            }
        }
        f(&chosen);
    }
}

impl<C: Coefficient> NcOracle<C> {
    pub fn new(law1: &AtomicPairMeasure<C>, law2: &AtomicPairMeasure<C>) -> Self {
        NcOracle {
            tables: [law1.moments(NC_MAX_LEN), law2.moments(NC_MAX_LEN)],
            cumulants: [HashMap::new(), HashMap::new()],
            moments: HashMap::new(),
        }
    }

    fn single_moment(&self, alg: usize, pattern: &[bool]) -> C {
        let ys = pattern.iter().filter(|&&y| y).count();
        self.tables[alg].m(pattern.len() - ys, ys).clone()
    }

    /// Free cumulant `κ(c₁, …, cₖ)` of algebra `alg`.
    fn cumulant(&mut self, alg: usize, pattern: &[bool]) -> C {
        let key = pattern
            .iter()
            .fold(pattern.len() as u32, |acc, &y| (acc << 1) | y as u32);
        if let Some(v) = self.cumulants[alg].get(&key) {
            return v.clone();
        }
        let n = pattern.len();
        let mut total = self.single_moment(alg, pattern);
        let positions: Vec<usize> = (0..n).collect();
        let mut blocks = Vec::new();
        blocks_containing_first(&positions, |b| {
            if b.len() < n {
                blocks.push(b.to_vec());
            }
        });
        for block in blocks {
            let sub: Vec<bool> = block.iter().map(|&i| pattern[i]).collect();
            let mut term = self.cumulant(alg, &sub);
            for (lo, hi) in gaps(&block, n) {
                if term.is_zero() {
                    break;
                }
                let gap = &pattern[lo..hi];
                let m = self.single_moment(alg, gap);
                term = term.mul_ref(&m);
            }
            total = total.sub_ref(&term);
        }
        self.cumulants[alg].insert(key, total.clone());
        total
    }

    /// `τ` of a raw letter sequence (codes from [`RawLetter::code`]).
    fn raw_moment(&mut self, codes: &[u8]) -> C {
        if codes.is_empty() {
            return C::one();
        }
        self.ensure(codes);
        self.moments[&pack(codes)].clone()
    }

    /// Fills the memo entry for a nonempty raw sequence.
    fn ensure(&mut self, codes: &[u8]) {
        let key = pack(codes);
        if self.moments.contains_key(&key) {
            return;
        }
        let alg = codes[0] / 2;
        let n = codes.len();
        let positions: Vec<usize> = (1..n).filter(|&i| codes[i] / 2 == alg).collect();
        let mut total = C::zero();
        let mut pattern = Vec::with_capacity(positions.len() + 1);
        for mask in 0u32..(1 << positions.len()) {
            pattern.clear();
            pattern.push(codes[0] % 2 == 1);
            let mut prev = 0;
            let mut gaps = [(0usize, 0usize); NC_MAX_LEN];
            let mut ngaps = 0;
            for (b, &p) in positions.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    pattern.push(codes[p] % 2 == 1);
                    if p > prev + 1 {
                        gaps[ngaps] = (prev + 1, p);
                        ngaps += 1;
                    }
                    prev = p;
                }
            }
            if n > prev + 1 {
                gaps[ngaps] = (prev + 1, n);
                ngaps += 1;
            }
            let mut term = self.cumulant(alg as usize, &pattern);
            for &(lo, hi) in &gaps[..ngaps] {
                if term.is_zero() {
                    break;
                }
                let gap = &codes[lo..hi];
                self.ensure(gap);
                term = term.mul_ref(&self.moments[&pack(gap)]);
            }
            total = total.add_ref(&term);
        }
        self.moments.insert(key, total);
    }

    /// `τ(word)` by the partition sum; refuses words longer than
    /// [`NC_MAX_LEN`].
    pub fn moment(&mut self, word: &Word) -> Result<C> {
        let len = word.len();
        if len > NC_MAX_LEN {
            return Err(Error::WordTooLong {
                len,
                max: NC_MAX_LEN,
            });
        }
        let codes: Vec<u8> = word.raw().into_iter().map(RawLetter::code).collect();
        Ok(self.raw_moment(&codes))
    }
}

/// Two bits per letter above a four-bit length.
fn pack(codes: &[u8]) -> u64 {
    codes.iter().fold(0u64, |acc, &c| (acc << 2) | c as u64) | ((codes.len() as u64) << 60)
}

/// Half-open intervals strictly between consecutive block members and after
/// the last one, up to `n`.
fn gaps(block: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(block.len());
    for (i, &p) in block.iter().enumerate() {
        let next = block.get(i + 1).copied().unwrap_or(n);
        if next > p + 1 {
            out.push((p + 1, next));
        }
    }
    out
}
