//! Seeded property suite behind `bifree verify`. Every draw comes from one
//! ChaCha8 stream, so a seed fixes the whole run.

use bifree::biconv::{convolve, subordination_check};
use bifree::matrix_s::{matrix_subordination_check, psi_x_at, psi_x_inverse, twisted_check};
use bifree::measures::{Atom, AtomicPairMeasure, Space};
use bifree::oracle::{product_pair_moments, FockOracle, NcOracle, RawLetter, Word};
use bifree::sampling::{
    random_admissible, random_factoring, random_series1, random_series2, random_torus_complex,
    random_two_atom,
};
use bifree::transforms::partial_s;
use bifree::{Coefficient, Rational, Result, Series1, UTGammaSeries, WORKING_MARGIN};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{Format, Outcome, RunConfig};

/// Complex cases are slower and only spot-check the floating path.
const COMPLEX_CASES: usize = 3;
const WORD_LEN: usize = 8;

struct Property {
    name: &'static str,
    cases: usize,
    failure: Option<String>,
}

type Check = Box<dyn FnMut(&mut ChaCha8Rng, usize) -> Result<Option<String>>>;

fn flip_a(mu: &AtomicPairMeasure<Rational>) -> AtomicPairMeasure<Rational> {
    let atoms = mu
        .atoms()
        .iter()
        .map(|a| Atom::new(-a.s.clone(), a.t.clone(), a.weight.clone()))
        .collect();
    AtomicPairMeasure::new(mu.space(), atoms).expect("reflection keeps the support on the torus")
}

fn checks(n: usize) -> Vec<(&'static str, bool, Check)> {
    let work = n + WORKING_MARGIN;
    vec![
        (
            "series reciprocal: Newton matches the direct recursion",
            false,
            Box::new(move |rng, _| {
                let f = random_series1(rng, n, false);
                let r = f.reciprocal()?;
                let ok = r == f.reciprocal_direct()? && f.checked_mul(&r)? == Series1::one(n);
                Ok((!ok).then(|| format!("f = {:?}", f.coeffs())))
            }),
        ),
        (
            "compositional inverse of a germ",
            false,
            Box::new(move |rng, _| {
                let f = random_series1(rng, n, true);
                let g = f.invert()?;
                let ok = g == f.invert_direct()? && f.compose(&g)? == Series1::variable(n);
                Ok((!ok).then(|| format!("f = {:?}", f.coeffs())))
            }),
        ),
        (
            "bivariate reciprocal",
            false,
            Box::new(move |rng, _| {
                let f = random_series2(rng, n);
                let ok = f
                    .checked_mul(&f.reciprocal()?)?
                    .is_constant(&Rational::from_i64(1), 0.0);
                Ok((!ok).then(|| "f·(1/f) ≠ 1".to_string()))
            }),
        ),
        (
            "word moments: vacuum vector equals partition sum",
            false,
            Box::new(|rng, _| {
                let (mu1, mu2) = (random_admissible(rng), random_admissible(rng));
                let len = rng.gen_range(1..=WORD_LEN);
                let word =
                    Word::from_raw((0..len).map(|_| RawLetter::from_code(rng.gen_range(0..4))));
                let fock = FockOracle::new(&mu1, &mu2).moment(&word);
                let nc = NcOracle::new(&mu1, &mu2).moment(&word)?;
                Ok((fock != nc).then(|| format!("word {word}: {fock} vs {nc}")))
            }),
        ),
        (
            "three routes reproduce the oracle",
            false,
            Box::new(move |rng, _| {
                let (mu1, mu2) = (random_admissible(rng), random_admissible(rng));
                let r = convolve(&mu1, &mu2, n, 0.0)?;
                Ok((!r.agree).then(|| format!("discrepancies {:?}", r.max_discrepancy)))
            }),
        ),
        (
            "identity law is neutral",
            false,
            Box::new(move |rng, _| {
                let mu = random_admissible(rng);
                let one = AtomicPairMeasure::dirac(
                    Space::Torus,
                    Rational::from_i64(1),
                    Rational::from_i64(1),
                )?;
                let r = convolve(&mu, &one, n, 0.0)?;
                let ok = r.agree && r.oracle == mu.moments(n);
                Ok((!ok).then(|| "μ ⊠ δ ≠ μ".to_string()))
            }),
        ),
        (
            "reflecting a₁ reflects the product",
            false,
            Box::new(move |rng, _| {
                let (mu1, mu2) = (random_two_atom(rng), random_admissible(rng));
                let base = product_pair_moments(&mu1, &mu2, n)?;
                let flipped = product_pair_moments(&flip_a(&mu1), &mu2, n)?;
                let ok = (0..=n).all(|j| {
                    (0..=n).all(|k| {
                        let b = base.m(j, k);
                        let f = flipped.m(j, k);
                        if j % 2 == 0 {
                            f == b
                        } else {
                            *f == -b.clone()
                        }
                    })
                });
                Ok((!ok).then(|| "sign pattern broken".to_string()))
            }),
        ),
        (
            "partial S-transform is multiplicative",
            false,
            Box::new(move |rng, _| {
                let (mu1, mu2) = (random_admissible(rng), random_admissible(rng));
                let prod = product_pair_moments(&mu1, &mu2, work)?;
                let lhs = partial_s(&prod)?;
                let rhs =
                    partial_s(&mu1.moments(work))?.checked_mul(&partial_s(&mu2.moments(work))?)?;
                let m = lhs.order().min(rhs.order());
                let ok = lhs.truncate(m) == rhs.truncate(m);
                Ok((!ok).then(|| {
                    format!(
                        "first difference at {:?}",
                        lhs.truncate(m).first_difference(&rhs.truncate(m), 0.0)
                    )
                }))
            }),
        ),
        (
            "scalar subordination equation",
            false,
            Box::new(move |rng, _| {
                let (mu1, mu2) = (random_admissible(rng), random_admissible(rng));
                let (p1, p2) = (mu1.moments(work), mu2.moments(work));
                let r = subordination_check(&p1, &p2, &product_pair_moments(&mu1, &mu2, work)?, n)?;
                Ok((!r.exact).then(|| format!("residual {:e}", r.residual)))
            }),
        ),
        (
            "matrix Ψ composed with its inverse is Γ",
            false,
            Box::new(move |rng, _| {
                let p = random_admissible(rng).moments(work);
                let back = psi_x_at(&p, &psi_x_inverse(&p)?)?;
                let ok = back == UTGammaSeries::gamma(back.order());
                Ok((!ok).then(|| "Ψ_X(Ψ_X⁻¹(Γ)) ≠ Γ".to_string()))
            }),
        ),
        (
            "twisted multiplicativity iff a partial S is trivial",
            false,
            Box::new(move |rng, _| {
                let (mu1, mu2) = (random_admissible(rng), random_admissible(rng));
                let (p1, p2) = (mu1.moments(n + 1), mu2.moments(n + 1));
                let prod = product_pair_moments(&mu1, &mu2, n + 1)?;
                let r = twisted_check(&p1, &p2, &prod, n, 0.0)?;
                let ok = r.holds == r.some_partial_s_trivial
                    && *r.lhs.off.coeff(0, 0) == r.limit_lhs12
                    && *r.rhs.off.coeff(0, 0) == r.limit_rhs12;
                Ok(
                    (!ok)
                        .then(|| format!("holds {} trivial {}", r.holds, r.some_partial_s_trivial)),
                )
            }),
        ),
        (
            "matrix subordination for factoring pairs",
            false,
            Box::new(move |rng, _| {
                let (mu1, mu2) = (random_factoring(rng), random_factoring(rng));
                let (p1, p2) = (mu1.moments(work), mu2.moments(work));
                let prod = product_pair_moments(&mu1, &mu2, work)?;
                let r = matrix_subordination_check(&p1, &p2, &prod, n, 0.0)?;
                Ok((!r.exact).then(|| format!("residuals {:?}", r.residual)))
            }),
        ),
        (
            "complex mode: routes reproduce the oracle on 3-atom torus laws",
            true,
            Box::new(move |rng, _| {
                let (mu1, mu2) = (random_torus_complex(rng, 3), random_torus_complex(rng, 3));
                let r = convolve(&mu1, &mu2, n, bifree::coeff::COMPLEX_REL_TOL)?;
                Ok((!r.agree).then(|| format!("discrepancies {:?}", r.max_discrepancy)))
            }),
        ),
    ]
}

pub fn run(cfg: &RunConfig, cases: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut results = Vec::new();
    for (name, complex, mut check) in checks(cfg.order) {
        let count = if complex {
            cases.min(COMPLEX_CASES)
        } else {
            cases
        };
        let mut failure = None;
        for i in 0..count {
            let verdict = match check(&mut rng, i) {
                Ok(v) => v,
                Err(e) => Some(e.to_string()),
            };
            if let Some(msg) = verdict {
                failure = Some(format!("case {i}: {msg}"));
                break;
            }
        }
        results.push(Property {
            name,
            cases: count,
            failure,
        });
    }
    let ok = results.iter().all(|p| p.failure.is_none());
    let text = match cfg.format {
        Format::Plain => {
            let mut out = format!("bifree verify  seed {}  order {}\n", cfg.seed, cfg.order);
            for p in &results {
                match &p.failure {
                    None => out.push_str(&format!("PASS  {} ({} cases)\n", p.name, p.cases)),
                    Some(f) => out.push_str(&format!("FAIL  {}: {f}\n", p.name)),
                }
            }
            let passed = results.iter().filter(|p| p.failure.is_none()).count();
            out.push_str(&format!("{passed}/{} properties passed\n", results.len()));
            out
        }
        Format::Json => {
            let v = json!({
                "command": "verify",
                "seed": cfg.seed,
                "order": cfg.order,
                "properties": results.iter().map(|p| json!({
                    "name": p.name,
                    "cases": p.cases,
                    "pass": p.failure.is_none(),
                    "failure": p.failure,
                })).collect::<Vec<_>>(),
                "pass": ok,
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&v).expect("serializable")
            )
        }
    };
    Outcome { text, ok }
}
