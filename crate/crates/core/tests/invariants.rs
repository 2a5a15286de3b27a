//! Randomized invariants. Laws are drawn from a seeded ChaCha stream so
//! proptest only has to shrink a seed.

use bifree::biconv::{biconv_via_quotient, biconv_via_s, biconv_via_subordination, convolve};
use bifree::coeff::ratio;
use bifree::measures::{Atom, AtomicPairMeasure, Space};
use bifree::oracle::{product_pair_moments, FockOracle, NcOracle, RawLetter, Word};
use bifree::sampling::{
    random_admissible, random_corner_law, random_series1, random_series2, random_two_atom,
};
use bifree::transforms::{partial_s, psi_from_s, s_transform};
use bifree::{Rational, Series1, Series2, WORKING_MARGIN};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn flip_b(mu: &AtomicPairMeasure<Rational>) -> AtomicPairMeasure<Rational> {
    let atoms = mu
        .atoms()
        .iter()
        .map(|a| Atom::new(a.s.clone(), -a.t.clone(), a.weight.clone()))
        .collect();
    AtomicPairMeasure::new(mu.space(), atoms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reciprocal_round_trip(seed in any::<u64>(), n in 1usize..10) {
        let f = random_series1(&mut rng(seed), n, false);
        let r = f.reciprocal().unwrap();
        prop_assert_eq!(f.checked_mul(&r).unwrap(), Series1::one(n));
        prop_assert_eq!(r.reciprocal().unwrap(), f);
    }

    #[test]
    fn reversion_is_two_sided(seed in any::<u64>(), n in 1usize..10) {
        let f = random_series1(&mut rng(seed), n, true);
        let g = f.invert().unwrap();
        prop_assert_eq!(f.compose(&g).unwrap(), Series1::variable(n));
        prop_assert_eq!(g.compose(&f).unwrap(), Series1::variable(n));
        prop_assert_eq!(g, f.invert_direct().unwrap());
    }

    #[test]
    fn bivariate_reciprocal_round_trip(seed in any::<u64>(), n in 0usize..7) {
        let f = random_series2(&mut rng(seed), n);
        let r = f.reciprocal().unwrap();
        prop_assert_eq!(f.checked_mul(&r).unwrap(), Series2::one(n));
    }

    #[test]
    fn s_transform_round_trip(seed in any::<u64>()) {
        let mu = random_admissible(&mut rng(seed));
        let psi = mu.moments(7).psi_a();
        let s = s_transform(&psi).unwrap();
        let back = psi_from_s(&s).unwrap();
        let m = back.order();
        prop_assert_eq!(back, psi.truncate(m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn word_oracles_agree(seed in any::<u64>(), len in 1usize..9) {
        let mut r = rng(seed);
        let (mu1, mu2) = (random_corner_law(&mut r, 3), random_two_atom(&mut r));
        let word = Word::from_raw((0..len).map(|_| RawLetter::from_code(r.gen_range(0..4))));
        let fock = FockOracle::new(&mu1, &mu2).moment(&word);
        prop_assert_eq!(fock, NcOracle::new(&mu1, &mu2).moment(&word).unwrap());
    }

    #[test]
    fn cyclic_words_have_equal_moments(seed in any::<u64>(), len in 2usize..9, k in 1usize..8) {
        let mut r = rng(seed);
        let (mu1, mu2) = (random_corner_law(&mut r, 4), random_corner_law(&mut r, 2));
        let word = Word::from_raw((0..len).map(|_| RawLetter::from_code(r.gen_range(0..4))));
        let mut oracle = FockOracle::new(&mu1, &mu2);
        // the free product of traces is a trace
        prop_assert_eq!(oracle.moment(&word), oracle.moment(&word.rotate(k % len)));
    }

    #[test]
    fn routes_agree_with_oracle(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let (mu1, mu2) = (random_admissible(&mut r), random_admissible(&mut r));
        let report = convolve(&mu1, &mu2, n, 0.0).unwrap();
        prop_assert!(report.agree, "{:?}", report.max_discrepancy);
        prop_assert_eq!(report.subordination.residual, 0.0);
    }

    #[test]
    fn convolution_is_symmetric_in_the_routes(seed in any::<u64>()) {
        // the transforms commute, so swapping the pairs leaves each route unchanged
        let mut r = rng(seed);
        let (p1, p2) = (random_admissible(&mut r).moments(5), random_admissible(&mut r).moments(5));
        prop_assert_eq!(biconv_via_s(&p1, &p2, 4).unwrap(), biconv_via_s(&p2, &p1, 4).unwrap());
        prop_assert_eq!(biconv_via_subordination(&p1, &p2, 4).unwrap(), biconv_via_subordination(&p2, &p1, 4).unwrap());
        prop_assert_eq!(biconv_via_quotient(&p1, &p2, 4).unwrap(), biconv_via_quotient(&p2, &p1, 4).unwrap());
    }

    #[test]
    fn identity_is_neutral(seed in any::<u64>()) {
        let mu = random_admissible(&mut rng(seed));
        let one = AtomicPairMeasure::dirac(Space::Torus, ratio(1, 1), ratio(1, 1)).unwrap();
        let left = convolve(&one, &mu, 5, 0.0).unwrap();
        let right = convolve(&mu, &one, 5, 0.0).unwrap();
        prop_assert_eq!(&left.route_s, &mu.moments(5));
        prop_assert_eq!(&right.route_quotient, &mu.moments(5));
        prop_assert!(left.agree && right.agree);
    }

    #[test]
    fn reflecting_b_reflects_the_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (mu1, mu2) = (random_admissible(&mut r), random_admissible(&mut r));
        let base = product_pair_moments(&mu1, &mu2, 5).unwrap();
        let flipped = product_pair_moments(&flip_b(&mu1), &mu2, 5).unwrap();
        for j in 0..=5 {
            for k in 0..=5 {
                let want = if k % 2 == 0 { base.m(j, k).clone() } else { -base.m(j, k).clone() };
                prop_assert_eq!(flipped.m(j, k), &want);
            }
        }
    }

    #[test]
    fn partial_s_is_multiplicative(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let (mu1, mu2) = (random_admissible(&mut r), random_admissible(&mut r));
        let work = n + WORKING_MARGIN;
        let lhs = partial_s(&product_pair_moments(&mu1, &mu2, work).unwrap()).unwrap();
        let rhs = partial_s(&mu1.moments(work)).unwrap()
            .checked_mul(&partial_s(&mu2.moments(work)).unwrap()).unwrap();
        let m = lhs.order().min(rhs.order());
        prop_assert!(m + 1 >= n);
        prop_assert_eq!(lhs.truncate(m), rhs.truncate(m));
    }
}
