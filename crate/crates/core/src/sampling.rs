//! Random test laws. Rational ones live on `{±1}²` with small integer
//! weights so that exact arithmetic stays cheap.

use num_complex::Complex64;
use rand::Rng;

use crate::coeff::{ratio, Rational};
use crate::measures::{Atom, AtomicPairMeasure, Space};
use crate::series::{Series1, Series2};

const CORNERS: [(i64, i64); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Largest integer weight before normalization.
pub const MAX_WEIGHT: i64 = 6;

fn weighted(points: &[(i64, i64)], weights: &[i64]) -> AtomicPairMeasure<Rational> {
    let total: i64 = weights.iter().sum();
    let atoms = points
        .iter()
        .zip(weights)
        .map(|(&(s, t), &w)| Atom::new(ratio(s, 1), ratio(t, 1), ratio(w, total)))
        .collect();
    AtomicPairMeasure::new(Space::Torus, atoms).expect("corner atoms are valid")
}

/// `atoms` distinct corners of `{±1}²` (1 to 4) with random weights.
pub fn random_corner_law<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: usize,
) -> AtomicPairMeasure<Rational> {
    let atoms = atoms.clamp(1, 4);
    let mut corners = CORNERS.to_vec();
    for i in (1..corners.len()).rev() {
        corners.swap(i, rng.gen_range(0..=i));
    }
    corners.truncate(atoms);
    corners.sort_unstable();
    let weights: Vec<i64> = (0..atoms).map(|_| rng.gen_range(1..=MAX_WEIGHT)).collect();
    weighted(&corners, &weights)
}

fn admissible(mu: &AtomicPairMeasure<Rational>) -> bool {
    mu.moments(1).violations(1).is_empty()
}

/// A random corner law with nonzero `φ(a)`, `φ(b)`, `φ(ab)`.
pub fn random_admissible<R: Rng + ?Sized>(rng: &mut R) -> AtomicPairMeasure<Rational> {
    loop {
        let n = rng.gen_range(2..=4);
        let mu = random_corner_law(rng, n);
        if admissible(&mu) {
            return mu;
        }
    }
}

/// Two-atom admissible corner law.
pub fn random_two_atom<R: Rng + ?Sized>(rng: &mut R) -> AtomicPairMeasure<Rational> {
    loop {
        let mu = random_corner_law(rng, 2);
        if admissible(&mu) {
            return mu;
        }
    }
}

/// Product of two independent `{±1}` marginals with nonzero means, so the
/// pair has factoring two-band moments.
pub fn random_factoring<R: Rng + ?Sized>(rng: &mut R) -> AtomicPairMeasure<Rational> {
    let mut side = || loop {
        let (p, q) = (rng.gen_range(1..=MAX_WEIGHT), rng.gen_range(1..=MAX_WEIGHT));
        if p != q {
            return (p, q);
        }
    };
    let (ps, qs) = side();
    let (pt, qt) = side();
    let weights: Vec<i64> = CORNERS
        .iter()
        .map(|&(s, t)| (if s > 0 { ps } else { qs }) * (if t > 0 { pt } else { qt }))
        .collect();
    weighted(&CORNERS, &weights)
}

/// `atoms` random points of `𝕋²` with random weights, in complex mode.
/// Redrawn until the first and mixed moments are comfortably nonzero.
pub fn random_torus_complex<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: usize,
) -> AtomicPairMeasure<Complex64> {
    loop {
        let raw: Vec<f64> = (0..atoms).map(|_| rng.gen_range(0.2..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mut points: Vec<Atom<Complex64>> = raw
            .iter()
            .map(|w| {
                let s = Complex64::from_polar(1.0, rng.gen_range(-1.2..1.2));
                let t = Complex64::from_polar(1.0, rng.gen_range(-1.2..1.2));
                Atom::new(s, t, Complex64::new(w / total, 0.0))
            })
            .collect();
        // weights must sum to one to rounding
        let drift: Complex64 = points.iter().map(|a| a.weight).sum::<Complex64>() - 1.0;
        points[0].weight -= drift;
        let Ok(mu) = AtomicPairMeasure::new(Space::Torus, points) else {
            continue;
        };
        let p = mu.moments(1);
        if [p.m(1, 0), p.m(0, 1), p.m(1, 1)]
            .iter()
            .all(|c| c.norm() > 0.2)
        {
            return mu;
        }
    }
}

fn small_rational<R: Rng + ?Sized>(rng: &mut R, nonzero: bool) -> Rational {
    loop {
        let n = rng.gen_range(-5..=5);
        if n != 0 || !nonzero {
            return ratio(n, rng.gen_range(1..=4));
        }
    }
}

/// Random series with small rational coefficients. A germ (`germ = true`)
/// has zero constant and nonzero linear term; otherwise the constant term is
/// nonzero.
pub fn random_series1<R: Rng + ?Sized>(rng: &mut R, order: usize, germ: bool) -> Series1<Rational> {
    Series1::from_fn(order, |k| match (k, germ) {
        (0, true) => ratio(0, 1),
        (0, false) | (1, true) => small_rational(rng, true),
        _ => small_rational(rng, false),
    })
}

/// Random bivariate series with nonzero constant term.
pub fn random_series2<R: Rng + ?Sized>(rng: &mut R, order: usize) -> Series2<Rational> {
    Series2::from_fn(order, |j, k| small_rational(rng, j + k == 0))
}
