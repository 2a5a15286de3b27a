//! Frozen values on the shipped fixtures. Each table below was computed
//! once by the word oracle and is checked against every route.

use std::path::PathBuf;

use bifree::biconv::{convolve, subordination_check};
use bifree::coeff::ratio;
use bifree::error::Precondition;
use bifree::matrix_s::{matrix_subordination_check, s_x, twisted_check};
use bifree::measures::MeasureFile;
use bifree::oracle::{product_pair_moments, word_moment, Word};
use bifree::transforms::{bundle, partial_s, s_transform};
use bifree::{AtomicPairMeasure, Complex64, Error, Rational};

fn fixture(name: &str) -> AtomicPairMeasure<Rational> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    MeasureFile::parse(&std::fs::read_to_string(path).unwrap())
        .unwrap()
        .to_measure()
        .unwrap()
}

fn table(rows: &[&[(i64, i64)]]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|&(p, q)| ratio(p, q)).collect())
        .collect()
}

#[test]
fn bernoulli_square_table() {
    let b = fixture("B.json");
    let r = convolve(&b, &b, 4, 0.0).unwrap();
    let want = table(&[
        &[(1, 1), (1, 4), (7, 16), (17, 32), (139, 256)],
        &[(1, 4), (1, 1), (1, 4), (7, 16), (17, 32)],
        &[(7, 16), (1, 4), (1, 1), (1, 4), (7, 16)],
        &[(17, 32), (7, 16), (1, 4), (1, 1), (1, 4)],
        &[(139, 256), (17, 32), (7, 16), (1, 4), (1, 1)],
    ]);
    assert_eq!(r.oracle.table(), want.as_slice());
    for (_, route) in r.routes() {
        assert_eq!(route, &r.oracle);
    }
    assert_eq!(r.max_discrepancy, [0.0; 3]);
}

#[test]
fn bernoulli_transforms() {
    let b = fixture("B.json");
    let p = b.moments(5);
    let s = s_transform(&p.psi_a()).unwrap();
    let want: Vec<Rational> = [2, -6, 48, -456, 4800]
        .iter()
        .map(|&v| ratio(v, 1))
        .collect();
    assert_eq!(&s.coeffs()[..5], want.as_slice());
    assert_eq!(partial_s(&p).unwrap().coeff(0, 0), &ratio(4, 1));
    assert!(bundle(&p).unwrap().missing.is_empty());
}

#[test]
fn haar_has_no_s_transform() {
    let h = fixture("haar.json");
    let b = bundle(&h.moments(4)).unwrap();
    assert!(b.s_a.is_none() && b.partial_s.is_none());
    assert!(b.s_b.is_some());
    assert_eq!(b.missing, vec![Precondition::FirstMomentA(1)]);
    let err = convolve(&h, &fixture("B.json"), 3, 0.0).unwrap_err();
    assert!(
        matches!(err, Error::Inadmissible(ref v) if v.contains(&Precondition::FirstMomentA(1)))
    );
}

#[test]
fn word_value_on_fixtures() {
    let (b, f) = (fixture("B.json"), fixture("F.json"));
    let w = Word::parse("x1 y2 x2 y1").unwrap();
    assert_eq!(word_moment(&b, &f, &w), ratio(1, 4));
    assert_eq!(w.to_string(), "x1 x2 y2 y1");
}

#[test]
fn factoring_partner_makes_twisted_product_hold() {
    let (b, f) = (fixture("B.json"), fixture("F.json"));
    let (pb, pf) = (b.moments(4), f.moments(4));
    let prod = product_pair_moments(&f, &b, 4).unwrap();
    let r = twisted_check(&pf, &pb, &prod, 3, 0.0).unwrap();
    assert!(r.holds && r.some_partial_s_trivial);
    assert_eq!(r.lhs.off.coeff(0, 0), &ratio(-12, 1));
    assert_eq!(r.lhs.off.coeff(1, 1), &ratio(-1200, 1));
}

#[test]
fn bernoulli_square_breaks_twisted_product() {
    let b = fixture("B.json");
    let p = b.moments(4);
    let prod = product_pair_moments(&b, &b, 4).unwrap();
    let r = twisted_check(&p, &p, &prod, 3, 0.0).unwrap();
    assert!(!r.holds && !r.some_partial_s_trivial);
    let d = r.first_discrepancy.unwrap();
    assert_eq!((d.entry, d.monomial), ("off", (0, 0)));
    assert_eq!((d.lhs, d.rhs), (ratio(-60, 1), ratio(-24, 1)));
    assert_eq!(s_x(&prod).unwrap().off.coeff(0, 0), &ratio(-60, 1));
}

#[test]
fn matrix_subordination_needs_factoring() {
    let (b, f, id) = (
        fixture("B.json"),
        fixture("F.json"),
        fixture("identity.json"),
    );
    let (pb, pf, pid) = (b.moments(5), f.moments(5), id.moments(5));
    let ok = matrix_subordination_check(
        &pf,
        &pid,
        &product_pair_moments(&f, &id, 5).unwrap(),
        4,
        0.0,
    )
    .unwrap();
    assert!(ok.exact && ok.residual == [0.0; 2]);
    let err =
        matrix_subordination_check(&pb, &pf, &product_pair_moments(&b, &f, 5).unwrap(), 4, 0.0)
            .unwrap_err();
    assert!(matches!(err, Error::Inadmissible(ref v) if v == &[Precondition::Factoring(1)]));
    let t = subordination_check(&pb, &pf, &product_pair_moments(&b, &f, 5).unwrap(), 4).unwrap();
    assert!(t.exact);
}

#[test]
fn complex_fixture_agrees_to_tolerance() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/rotation.json");
    let rot: AtomicPairMeasure<Complex64> =
        MeasureFile::parse(&std::fs::read_to_string(path).unwrap())
            .unwrap()
            .to_measure()
            .unwrap();
    let b: AtomicPairMeasure<Complex64> = MeasureFile::parse(
        r#"{"space":"torus","atoms":[{"s":"1","t":"1","w":"3/4"},{"s":"-1","t":"-1","w":"1/4"}]}"#,
    )
    .unwrap()
    .to_measure()
    .unwrap();
    let r = convolve(&rot, &b, 5, 1e-9).unwrap();
    assert!(r.agree, "{:?}", r.max_discrepancy);
    assert!(r.max_discrepancy.iter().all(|&d| d < 1e-10));
}

#[test]
fn rational_mode_rejects_complex_files() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/rotation.json");
    let file = MeasureFile::parse(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!(matches!(
        file.to_measure::<Rational>(),
        Err(Error::Parse(_))
    ));
}
