//! Acceptance suite: one line per criterion, with its time budget. Runs
//! without the libtest harness so the lines always show.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use bifree::biconv::{convolve, subordination_check};
use bifree::coeff::ratio;
use bifree::error::Precondition;
use bifree::matrix_s::{limit_lhs12, limit_rhs12, matrix_subordination_check, s_x, twisted_check};
use bifree::measures::MeasureFile;
use bifree::oracle::{product_pair_moments, FockOracle, NcOracle};
use bifree::sampling::{
    random_admissible, random_factoring, random_series1, random_series2, random_two_atom,
};
use bifree::transforms::{partial_s, s_transform};
use bifree::{AtomicPairMeasure, Error, Rational, Series1, Series2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const ORDER: usize = 8;
const PAIRS: usize = 20;
const SEED: u64 = 20_240_601;

type Verdict = Result<String, String>;

/// Name, time budget in seconds, check.
type Criterion = (&'static str, Option<u64>, fn() -> Verdict);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn fixture(name: &str) -> AtomicPairMeasure<Rational> {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture");
    MeasureFile::parse(&text)
        .and_then(|f| f.to_measure())
        .expect("valid fixture")
}

type Pair = (AtomicPairMeasure<Rational>, AtomicPairMeasure<Rational>);

fn corpus(seed: u64) -> Vec<Pair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..PAIRS)
        .map(|_| (random_admissible(&mut rng), random_admissible(&mut rng)))
        .collect()
}

fn series_round_trips() -> Verdict {
    let n = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..200 {
        let germ = random_series1(&mut rng, n, true);
        let inv = germ.invert().map_err(e)?;
        ensure(
            germ.compose(&inv).map_err(e)? == Series1::variable(n),
            || format!("case {i}: f∘f⁻¹ ≠ z"),
        )?;
        ensure(
            inv.compose(&germ).map_err(e)? == Series1::variable(n),
            || format!("case {i}: f⁻¹∘f ≠ z"),
        )?;
        let unit = random_series1(&mut rng, n, false);
        ensure(
            unit.checked_mul(&unit.reciprocal().map_err(e)?)
                .map_err(e)?
                == Series1::one(n),
            || format!("case {i}: f·(1/f) ≠ 1"),
        )?;
        let two = random_series2(&mut rng, 4);
        ensure(
            two.checked_mul(&two.reciprocal().map_err(e)?).map_err(e)? == Series2::one(4),
            || format!("case {i}: bivariate f·(1/f) ≠ 1"),
        )?;
    }
    Ok("200 cases at order 12".into())
}

fn oracle_cross_validation() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut words = 0;
    for i in 0..PAIRS {
        let (mu1, mu2) = (random_two_atom(&mut rng), random_two_atom(&mut rng));
        let mut nc = NcOracle::new(&mu1, &mu2);
        for (w, v) in FockOracle::new(&mu1, &mu2).all_word_moments(8) {
            let other = nc.moment(&w).map_err(e)?;
            ensure(other == v, || {
                format!("law pair {i}, word {w}: {v} vs {other}")
            })?;
            words += 1;
        }
    }
    Ok(format!("{words} words over {PAIRS} law pairs"))
}

fn partial_s_multiplicative() -> Verdict {
    for (i, (mu1, mu2)) in corpus(SEED).iter().enumerate() {
        let work = ORDER + 1;
        let lhs = partial_s(&product_pair_moments(mu1, mu2, work).map_err(e)?).map_err(e)?;
        let rhs = partial_s(&mu1.moments(work))
            .and_then(|a| a.checked_mul(&partial_s(&mu2.moments(work))?))
            .map_err(e)?;
        ensure(lhs.order() >= ORDER && rhs.order() >= ORDER, || {
            format!("pair {i}: order lost")
        })?;
        let (l, r) = (lhs.truncate(ORDER), rhs.truncate(ORDER));
        ensure(l == r, || {
            format!(
                "pair {i}: first difference at {:?}",
                l.first_difference(&r, 0.0)
            )
        })?;
    }
    Ok(format!("{PAIRS} pairs at order {ORDER}"))
}

fn route_agreement() -> Verdict {
    for (i, (mu1, mu2)) in corpus(SEED).iter().enumerate() {
        let r = convolve(mu1, mu2, ORDER, 0.0).map_err(e)?;
        ensure(r.agree && r.max_discrepancy == [0.0; 3], || {
            format!("pair {i}: {:?}", r.max_discrepancy)
        })?;
        ensure(r.subordination.residual == 0.0, || {
            format!("pair {i}: residual {:e}", r.subordination.residual)
        })?;
    }
    Ok(format!(
        "{PAIRS} pairs at order {ORDER}, subordination residual 0"
    ))
}

fn bernoulli_case() -> Verdict {
    let b = fixture("B.json");
    let r = convolve(&b, &b, 2, 0.0).map_err(e)?;
    ensure(r.agree, || "routes disagree".into())?;
    ensure(r.oracle.m(1, 1) == &ratio(1, 1), || {
        format!("M[1][1] = {}", r.oracle.m(1, 1))
    })?;
    ensure(r.oracle.m(2, 0) == &ratio(7, 16), || {
        format!("M[2][0] = {}", r.oracle.m(2, 0))
    })?;
    let p = b.moments(4);
    let s = s_transform(&p.psi_a()).map_err(e)?;
    let want = [ratio(2, 1), ratio(-6, 1), ratio(48, 1)];
    ensure(s.coeffs()[..3] == want, || {
        format!("S_B starts {:?}", &s.coeffs()[..3])
    })?;
    let ps = partial_s(&p).map_err(e)?;
    ensure(ps.coeff(0, 0) == &ratio(4, 1), || {
        format!("partial S(0,0) = {}", ps.coeff(0, 0))
    })?;
    Ok("M[1][1]=1, M[2][0]=7/16, S_B=2-6z+48z², partial S(0,0)=4".into())
}

fn twisted_multiplicativity() -> Verdict {
    let work = ORDER + 1;
    let f = fixture("F.json");
    let pf = f.moments(work);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    for i in 0..10 {
        let mu = random_admissible(&mut rng);
        let prod = product_pair_moments(&f, &mu, work).map_err(e)?;
        let r = twisted_check(&pf, &mu.moments(work), &prod, ORDER, 0.0).map_err(e)?;
        ensure(r.holds, || {
            format!(
                "F with random law {i}: fails at {:?}",
                r.first_discrepancy.map(|d| d.monomial)
            )
        })?;
    }
    let b = fixture("B.json");
    let pb = b.moments(work);
    let r = twisted_check(
        &pb,
        &pb,
        &product_pair_moments(&b, &b, work).map_err(e)?,
        ORDER,
        0.0,
    )
    .map_err(e)?;
    ensure(!r.holds, || "B, B: holds".into())?;
    ensure(
        r.limit_lhs12 == ratio(-60, 1) && r.limit_rhs12 == ratio(-24, 1),
        || format!("B, B limits {} vs {}", r.limit_lhs12, r.limit_rhs12),
    )?;
    let (mut holds, mut trivial) = (0, 0);
    for (i, (mu1, mu2)) in corpus(SEED + 60).iter().enumerate() {
        // every fourth pair has a factoring partner so both sides of the equivalence occur
        let mu1 = if i % 4 == 0 { f.clone() } else { mu1.clone() };
        let prod = product_pair_moments(&mu1, mu2, work).map_err(e)?;
        let r =
            twisted_check(&mu1.moments(work), &mu2.moments(work), &prod, ORDER, 0.0).map_err(e)?;
        ensure(r.holds == r.some_partial_s_trivial, || {
            format!(
                "pair {i}: holds {} trivial {}",
                r.holds, r.some_partial_s_trivial
            )
        })?;
        holds += r.holds as usize;
        trivial += r.some_partial_s_trivial as usize;
    }
    Ok(format!("F·μ holds 10/10; B·B fails with -60 vs -24; equivalence on {PAIRS} pairs ({holds} hold, {trivial} trivial)"))
}

fn limit_formulas() -> Verdict {
    for (i, (mu1, mu2)) in corpus(SEED + 7).iter().enumerate() {
        let (p1, p2) = (mu1.moments(3), mu2.moments(3));
        let s = s_x(&product_pair_moments(mu1, mu2, 3).map_err(e)?).map_err(e)?;
        let closed = limit_lhs12(&p1, &p2);
        ensure(s.off.coeff(0, 0) == &closed, || {
            format!("pair {i}: series {} vs closed {closed}", s.off.coeff(0, 0))
        })?;
        let r = twisted_check(
            &p1,
            &p2,
            &product_pair_moments(mu1, mu2, 3).map_err(e)?,
            2,
            0.0,
        )
        .map_err(e)?;
        ensure(r.rhs.off.coeff(0, 0) == &limit_rhs12(&p1, &p2), || {
            format!("pair {i}: twisted side differs")
        })?;
    }
    Ok(format!("{PAIRS} pairs, both sides"))
}

fn matrix_subordination() -> Verdict {
    let work = ORDER + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    for i in 0..10 {
        let (mu1, mu2) = (random_factoring(&mut rng), random_factoring(&mut rng));
        let (p1, p2) = (mu1.moments(work), mu2.moments(work));
        let prod = product_pair_moments(&mu1, &mu2, work).map_err(e)?;
        let r = matrix_subordination_check(&p1, &p2, &prod, ORDER, 0.0).map_err(e)?;
        ensure(r.exact && r.residual == [0.0; 2], || {
            format!("pair {i}: residuals {:?}", r.residual)
        })?;
        let t = subordination_check(&p1, &p2, &prod, ORDER).map_err(e)?;
        ensure(t.exact, || {
            format!("pair {i}: scalar residual {:e}", t.residual)
        })?;
    }
    let (b, f) = (fixture("B.json"), fixture("F.json"));
    let (pb, pf) = (b.moments(work), f.moments(work));
    let prod = product_pair_moments(&f, &b, work).map_err(e)?;
    match matrix_subordination_check(&pf, &pb, &prod, ORDER, 0.0) {
        Err(Error::Inadmissible(v)) if v == [Precondition::Factoring(2)] => {}
        other => return Err(format!("non-factoring input not rejected: {other:?}")),
    }
    Ok("10 factoring pairs exact at order 8; non-factoring input rejected".into())
}

fn bifree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bifree"))
        .args(args)
        .output()
        .expect("run bifree")
}

fn json_of(out: &Output) -> Result<Value, String> {
    serde_json::from_slice(&out.stdout).map_err(|err| format!("bad JSON: {err}"))
}

fn cli() -> Verdict {
    let start = Instant::now();
    let out = bifree(&["verify", "--seed", "1", "--order", "6"]);
    let took = start.elapsed();
    ensure(out.status.success(), || {
        format!("verify failed:\n{}", String::from_utf8_lossy(&out.stdout))
    })?;
    ensure(took < Duration::from_secs(30), || {
        format!("verify took {took:.1?}")
    })?;

    let path = |n: &str| fixture_path(n).to_string_lossy().into_owned();
    let (b, f, id) = (path("B.json"), path("F.json"), path("identity.json"));
    let runs: [(Vec<&str>, i32); 6] = [
        (vec!["--format", "json", "convolve", &b, &b], 0),
        (vec!["--format", "json", "convolve", &b, &id], 0),
        (vec!["--format", "json", "dykema-check", &f, &b], 0),
        (vec!["--format", "json", "dykema-check", &b, &b], 0),
        (vec!["--format", "json", "subordinate", &f, &id], 0),
        (vec!["--format", "json", "subordinate", &b, &f], 3),
    ];
    let mut reports = Vec::new();
    for (args, code) in &runs {
        let first = bifree(args);
        let second = bifree(args);
        ensure(first.status.code() == Some(*code), || {
            format!("{args:?}: exit {:?}", first.status.code())
        })?;
        ensure(
            first.stdout == second.stdout && first.stderr == second.stderr,
            || format!("{args:?}: output differs between runs"),
        )?;
        reports.push(json_of(&first)?);
    }
    let bb = &reports[0];
    ensure(
        bb["oracle"][1][1] == "1" && bb["oracle"][2][0] == "7/16" && bb["agree"] == true,
        || "convolve B B".into(),
    )?;
    ensure(reports[1]["agree"] == true, || "convolve B identity".into())?;
    ensure(
        reports[2]["holds"] == true && reports[2]["consistent"] == true,
        || "dykema-check F B".into(),
    )?;
    let d = &reports[3];
    ensure(
        d["holds"] == false && d["limit_lhs12"] == "-60" && d["limit_rhs12"] == "-24",
        || "dykema-check B B".into(),
    )?;
    ensure(reports[4]["matrix_exact"] == true, || {
        "subordinate F identity".into()
    })?;
    ensure(
        reports[5]["matrix_error"]
            .as_str()
            .is_some_and(|m| m.contains("factoring")),
        || "subordinate B F".into(),
    )?;
    Ok(format!(
        "verify in {:.1}s; 6 fixture runs byte-identical",
        took.as_secs_f64()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("series round trips", Some(5), series_round_trips),
        ("oracle cross-validation", Some(10), oracle_cross_validation),
        ("partial S multiplicativity", None, partial_s_multiplicative),
        ("convolution route agreement", None, route_agreement),
        ("Bernoulli worked case", None, bernoulli_case),
        (
            "twisted multiplicativity criterion",
            Some(20),
            twisted_multiplicativity,
        ),
        ("limit formulas", None, limit_formulas),
        ("matrix subordination", None, matrix_subordination),
        ("command line", Some(60), cli),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let took = start.elapsed();
        let verdict = match (verdict, limit) {
            (Ok(_), Some(l)) if took > Duration::from_secs(*l) => {
                Err(format!("over the {l}s limit"))
            }
            (v, _) => v,
        };
        let budget = limit.map_or(String::new(), |l| format!(" / {l}s"));
        match verdict {
            Ok(detail) => println!(
                "criterion {}: PASS  {name}: {detail} [{:.1}s{budget}]",
                k + 1,
                took.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL  {name}: {why} [{:.1}s{budget}]",
                    k + 1,
                    took.as_secs_f64()
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
