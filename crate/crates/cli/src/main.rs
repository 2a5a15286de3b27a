//! `bifree`: bi-free multiplicative convolution from the command line.
//!
//! Exit status: 0 success, 1 disagreement or internal failure,
//! 2 unreadable input, 3 inadmissible input.

mod report;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bifree::biconv::{convolve, subordination_check, Subordination};
use bifree::matrix_s::{matrix_subordination_check, twisted_check};
use bifree::measures::MeasureFile;
use bifree::oracle::{product_pair_moments, FockOracle, NcOracle, Word, NC_MAX_LEN};
use bifree::transforms::bundle;
use bifree::{AtomicPairMeasure, Coefficient, Complex64, Error, Mode, Rational, WORKING_MARGIN};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use report::*;

#[derive(Parser, Debug)]
#[command(
    name = "bifree",
    version,
    about = "Bi-free multiplicative convolution of measures on the torus or the positive quadrant"
)]
struct Cli {
    /// Truncation order N of every series and table.
    #[arg(long, global = true, default_value_t = 8)]
    order: usize,
    /// Arithmetic: `auto` is exact unless an input has complex entries.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    /// Comparison tolerance in complex mode (default 1e-9; rational mode is exact).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for `verify`.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Auto,
    Rational,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convolve two measures by every route and compare with the oracle.
    Convolve { mu1: PathBuf, mu2: PathBuf },
    /// Scalar transforms of one measure.
    Transforms { mu: PathBuf },
    /// Compare S of the product pair with the twisted product.
    #[command(name = "dykema-check")]
    TwistedCheck { mu1: PathBuf, mu2: PathBuf },
    /// Residuals of the scalar and matrix subordination identities.
    Subordinate { mu1: PathBuf, mu2: PathBuf },
    /// Moment of one word in the free product of the two algebras.
    Oracle {
        mu1: PathBuf,
        mu2: PathBuf,
        word: String,
    },
    /// Seeded randomized run of every invariant.
    Verify {
        /// Random cases per property.
        #[arg(long, default_value_t = 10)]
        cases: usize,
    },
}

pub enum Failure {
    Parse(String),
    Inadmissible(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Inadmissible(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Inadmissible(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::MalformedWord(_) | Error::InvalidMeasure(_) => {
                Failure::Parse(e.to_string())
            }
            Error::Inadmissible(_) => Failure::Inadmissible(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

/// Settings shared by every subcommand, after mode resolution.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub order: usize,
    pub tol: f64,
    pub format: Format,
    pub seed: u64,
}

/// Rendered report plus whether the run counts as success.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn new(cfg: &RunConfig, plain: String, json: Value, ok: bool) -> Self {
        let text = match cfg.format {
            Format::Plain => plain,
            Format::Json => format!(
                "{}\n",
                serde_json::to_string_pretty(&json).expect("serializable")
            ),
        };
        Outcome { text, ok }
    }
}

fn read_measure(path: &Path) -> Result<MeasureFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    MeasureFile::parse(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn resolve_mode(arg: ModeArg, files: &[MeasureFile]) -> Mode {
    match arg {
        ModeArg::Rational => Mode::Rational,
        ModeArg::Complex => Mode::Complex,
        ModeArg::Auto => {
            if files.iter().any(|f| f.natural_mode() == Mode::Complex) {
                Mode::Complex
            } else {
                Mode::Rational
            }
        }
    }
}

fn measures<C: Coefficient>(files: &[MeasureFile]) -> Result<Vec<AtomicPairMeasure<C>>, Failure> {
    files
        .iter()
        .map(|f| f.to_measure::<C>().map_err(Failure::from))
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    if cli.order == 0 {
        return Err(Failure::Parse("--order must be at least 1".into()));
    }
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Parse("--tol must be positive".into()));
        }
    }
    let paths: Vec<&PathBuf> = match &cli.command {
        Command::Convolve { mu1, mu2 }
        | Command::TwistedCheck { mu1, mu2 }
        | Command::Subordinate { mu1, mu2 }
        | Command::Oracle { mu1, mu2, .. } => vec![mu1, mu2],
        Command::Transforms { mu } => vec![mu],
        Command::Verify { .. } => vec![],
    };
    let files = paths
        .iter()
        .map(|p| read_measure(p))
        .collect::<Result<Vec<_>, _>>()?;
    let mode = resolve_mode(cli.mode, &files);
    let cfg = RunConfig {
        order: cli.order,
        tol: cli.tol.unwrap_or(match mode {
            Mode::Rational => 0.0,
            Mode::Complex => bifree::coeff::COMPLEX_REL_TOL,
        }),
        format: cli.format,
        seed: cli.seed,
    };
    if let Command::Verify { cases } = cli.command {
        return Ok(verify::run(&cfg, cases));
    }
    match mode {
        Mode::Rational => dispatch::<Rational>(&cli.command, &files, &cfg),
        Mode::Complex => dispatch::<Complex64>(&cli.command, &files, &cfg),
    }
}

fn dispatch<C: Coefficient>(
    cmd: &Command,
    files: &[MeasureFile],
    cfg: &RunConfig,
) -> Result<Outcome, Failure> {
    let mus = measures::<C>(files)?;
    match cmd {
        Command::Convolve { .. } => cmd_convolve(&mus[0], &mus[1], cfg),
        Command::Transforms { .. } => cmd_transforms(&mus[0], cfg),
        Command::TwistedCheck { .. } => cmd_twisted(&mus[0], &mus[1], cfg),
        Command::Subordinate { .. } => cmd_subordinate(&mus[0], &mus[1], cfg),
        Command::Oracle { word, .. } => cmd_oracle(&mus[0], &mus[1], word, cfg),
        Command::Verify { .. } => unreachable!("handled before mode dispatch"),
    }
}

fn header<C: Coefficient>(cmd: &str, cfg: &RunConfig) -> String {
    format!("bifree {cmd}  order {}  mode {}\n\n", cfg.order, C::MODE)
}

fn cmd_convolve<C: Coefficient>(
    mu1: &AtomicPairMeasure<C>,
    mu2: &AtomicPairMeasure<C>,
    cfg: &RunConfig,
) -> Result<Outcome, Failure> {
    let r = convolve(mu1, mu2, cfg.order, cfg.tol)?;
    let names = ["S", "subordination", "F/G"];
    let mut plain = header::<C>("convolve", cfg);
    plain.push_str(&table_text(
        "oracle: M[m][n] = φ((a₁a₂)ᵐ(b₁b₂)ⁿ)",
        &r.oracle,
    ));
    for (name, table) in r.routes() {
        plain.push_str(&table_text(&format!("\nroute {name}"), table));
    }
    plain.push_str("\nmax discrepancy vs oracle:");
    for (name, d) in names.iter().zip(r.max_discrepancy) {
        plain.push_str(&format!("  {name} {}", residual(d)));
    }
    plain.push_str(&format!(
        "\nsubordination equation residual: {}\nverdict: {}\n",
        residual(r.subordination.residual),
        if r.agree {
            "all routes agree with the oracle"
        } else {
            "DISAGREEMENT"
        }
    ));
    let json = json!({
        "command": "convolve",
        "order": cfg.order,
        "mode": C::MODE.to_string(),
        "oracle": table_json(&r.oracle),
        "route_s": table_json(&r.route_s),
        "route_subordination": table_json(&r.route_sub),
        "route_fg": table_json(&r.route_quotient),
        "max_discrepancy": {"s": r.max_discrepancy[0], "subordination": r.max_discrepancy[1], "fg": r.max_discrepancy[2]},
        "subordination_residual": r.subordination.residual,
        "agree": r.agree,
    });
    Ok(Outcome::new(cfg, plain, json, r.agree))
}

fn cmd_transforms<C: Coefficient>(
    mu: &AtomicPairMeasure<C>,
    cfg: &RunConfig,
) -> Result<Outcome, Failure> {
    let p = mu.moments(cfg.order + WORKING_MARGIN);
    let b = bundle(&p)?;
    let n = cfg.order;
    let mut plain = header::<C>("transforms", cfg);
    let mut json = serde_json::Map::new();
    json.insert("command".into(), json!("transforms"));
    json.insert("order".into(), json!(n));
    json.insert("mode".into(), json!(C::MODE.to_string()));
    for (name, s) in [
        ("Ψ_a", &b.psi_a),
        ("Ψ_b", &b.psi_b),
        ("η_a", &b.eta_a),
        ("η_b", &b.eta_b),
        ("ζ_a", &b.zeta_a),
        ("ζ_b", &b.zeta_b),
    ] {
        let s = s.truncate(n);
        plain.push_str(&series1_text(name, &s));
        json.insert(name.into(), series1_json(&s));
    }
    for (name, s) in [("S_a", &b.s_a), ("S_b", &b.s_b)] {
        match s {
            Some(s) => {
                let s = s.truncate(n);
                plain.push_str(&series1_text(name, &s));
                json.insert(name.into(), series1_json(&s));
            }
            None => {
                plain.push_str(&format!("{name}: undefined\n"));
                json.insert(name.into(), Value::Null);
            }
        }
    }
    for (name, s) in [
        ("Ψ_{a,b}", &b.psi_ab),
        ("H_{a,b}", &b.h_ab),
        ("η_{a,b}", &b.eta_ab),
    ] {
        let s = s.truncate(n);
        plain.push_str(&series2_text(&format!("\n{name}"), &s));
        json.insert(name.into(), series2_json(&s));
    }
    for (name, s) in [("S_{a,b}", &b.partial_s), ("Σ_{a,b}", &b.sigma)] {
        match s {
            Some(s) => {
                let s = s.truncate(n);
                plain.push_str(&series2_text(&format!("\n{name}"), &s));
                json.insert(name.into(), series2_json(&s));
            }
            None => {
                plain.push_str(&format!("\n{name}: undefined\n"));
                json.insert(name.into(), Value::Null);
            }
        }
    }
    let missing: Vec<String> = b.missing.iter().map(|m| m.to_string()).collect();
    if !missing.is_empty() {
        plain.push_str(&format!(
            "\nS-transforms undefined: {}\n",
            missing.join(", ")
        ));
    }
    json.insert("undefined_because".into(), json!(missing));
    Ok(Outcome::new(cfg, plain, Value::Object(json), true))
}

fn cmd_twisted<C: Coefficient>(
    mu1: &AtomicPairMeasure<C>,
    mu2: &AtomicPairMeasure<C>,
    cfg: &RunConfig,
) -> Result<Outcome, Failure> {
    let work = cfg.order + 1;
    let (p1, p2) = (mu1.moments(work), mu2.moments(work));
    bifree::biconv::check_admissible(&p1, &p2)?;
    let prod = product_pair_moments(mu1, mu2, work)?;
    let r = twisted_check(&p1, &p2, &prod, cfg.order, cfg.tol)?;
    let lhs0 = r.lhs.off.coeff(0, 0);
    let rhs0 = r.rhs.off.coeff(0, 0);
    let limits_match = lhs0.approx_eq(&r.limit_lhs12, cfg.tol.max(1e-12))
        && rhs0.approx_eq(&r.limit_rhs12, cfg.tol.max(1e-12));
    let consistent = r.holds == r.some_partial_s_trivial && limits_match;
    let mut plain = header::<C>("dykema-check", cfg);
    plain.push_str(&format!(
        "twisted multiplicativity holds: {}\nsome partial S ≡ 1: {}\n",
        r.holds, r.some_partial_s_trivial
    ));
    match &r.first_discrepancy {
        Some(d) => plain.push_str(&format!(
            "first discrepancy: {} at z^{} w^{}: lhs {} rhs {}\n",
            d.entry,
            d.monomial.0,
            d.monomial.1,
            d.lhs.render(),
            d.rhs.render()
        )),
        None => plain.push_str("first discrepancy: none\n"),
    }
    plain.push_str(&format!(
        "ζ entry at z = w = 0: lhs {} (closed form {}), rhs {} (closed form {})\n",
        lhs0.render(),
        r.limit_lhs12.render(),
        rhs0.render(),
        r.limit_rhs12.render()
    ));
    plain.push_str(&series2_text("\nlhs ζ entry: S_{X₁X₂}", &r.lhs.off));
    plain.push_str(&series2_text("\nrhs ζ entry: twisted product", &r.rhs.off));
    plain.push_str(&format!("\nconsistent: {consistent}\n"));
    let json = json!({
        "command": "dykema-check",
        "order": cfg.order,
        "mode": C::MODE.to_string(),
        "holds": r.holds,
        "some_partial_s_trivial": r.some_partial_s_trivial,
        "first_discrepancy": r.first_discrepancy.as_ref().map(|d| json!({
            "entry": d.entry,
            "monomial": [d.monomial.0, d.monomial.1],
            "lhs": d.lhs.to_json(),
            "rhs": d.rhs.to_json(),
        })),
        "limit_lhs12": r.limit_lhs12.to_json(),
        "limit_rhs12": r.limit_rhs12.to_json(),
        "series_lhs12": lhs0.to_json(),
        "series_rhs12": rhs0.to_json(),
        "lhs": ut_json(&r.lhs),
        "rhs": ut_json(&r.rhs),
        "consistent": consistent,
    });
    Ok(Outcome::new(cfg, plain, json, consistent))
}

fn cmd_subordinate<C: Coefficient>(
    mu1: &AtomicPairMeasure<C>,
    mu2: &AtomicPairMeasure<C>,
    cfg: &RunConfig,
) -> Result<Outcome, Failure> {
    let n = cfg.order;
    let work = n + WORKING_MARGIN;
    let (p1, p2) = (mu1.moments(work), mu2.moments(work));
    bifree::biconv::check_admissible(&p1, &p2)?;
    let prod = product_pair_moments(mu1, mu2, work)?;
    let scalar = subordination_check(&p1, &p2, &prod, n)?;
    let sub = Subordination::with_marginals(&p1, &p2, prod.psi_a(), prod.psi_b())?;
    let mut plain = header::<C>("subordinate", cfg);
    let mut germs = serde_json::Map::new();
    for (j, name) in [(0, "1"), (1, "2")] {
        for (label, s) in [("a", &sub.omega_a[j]), ("b", &sub.omega_b[j])] {
            let s = s.truncate(n);
            plain.push_str(&series1_text(&format!("ω_{label}{name}"), &s));
            germs.insert(format!("omega_{label}{name}"), series1_json(&s));
        }
    }
    plain.push_str(&format!(
        "\nscalar subordination residual: {} ({})\n",
        residual(scalar.residual),
        if scalar.exact { "exact" } else { "FAILED" }
    ));
    let mut json = json!({
        "command": "subordinate",
        "order": n,
        "mode": C::MODE.to_string(),
        "omega": Value::Object(germs),
        "scalar_residual": scalar.residual,
        "scalar_exact": scalar.exact,
    });
    match matrix_subordination_check(&p1, &p2, &prod, n, cfg.tol) {
        Ok(m) => {
            plain.push_str(&format!(
                "matrix subordination residual: j=1 {}  j=2 {} ({})\n",
                residual(m.residual[0]),
                residual(m.residual[1]),
                if m.exact { "exact" } else { "FAILED" }
            ));
            json["matrix_residual"] = json!(m.residual);
            json["matrix_exact"] = json!(m.exact);
            let ok = scalar.exact && m.exact;
            Ok(Outcome::new(cfg, plain, json, ok))
        }
        Err(e @ Error::Inadmissible(_)) => {
            // report what was computed, then fail with the precondition
            plain.push_str(&format!("matrix subordination: not applicable: {e}\n"));
            json["matrix_error"] = json!(e.to_string());
            let out = Outcome::new(cfg, plain, json, false);
            print!("{}", out.text);
            Err(Failure::Inadmissible(e.to_string()))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_oracle<C: Coefficient>(
    mu1: &AtomicPairMeasure<C>,
    mu2: &AtomicPairMeasure<C>,
    word: &str,
    cfg: &RunConfig,
) -> Result<Outcome, Failure> {
    let w = Word::parse(word)?;
    let fock = FockOracle::new(mu1, mu2).moment(&w);
    let nc = if w.len() <= NC_MAX_LEN {
        Some(NcOracle::new(mu1, mu2).moment(&w)?)
    } else {
        None
    };
    let agree = nc.as_ref().is_none_or(|v| v.approx_eq(&fock, cfg.tol));
    let mut plain = format!("τ({w}) = {}\n", fock.render());
    match &nc {
        Some(v) => plain.push_str(&format!(
            "partition sum: {} ({})\n",
            v.render(),
            if agree { "agrees" } else { "DISAGREES" }
        )),
        None => plain.push_str(&format!(
            "partition sum: skipped (longer than {NC_MAX_LEN})\n"
        )),
    }
    let json = json!({
        "command": "oracle",
        "mode": C::MODE.to_string(),
        "word": w.to_string(),
        "value": fock.to_json(),
        "partition_sum": nc.as_ref().map(C::to_json),
        "agree": agree,
    });
    Ok(Outcome::new(cfg, plain, json, agree))
}
