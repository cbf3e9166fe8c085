use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use unirow::cert::{Certificate, VectorJson};
use unirow::factor::{
    bound_table, factor_radical_perturbation, factor_sl2_triangular, factor_sln_elementary,
    min_triangular_length_2x2, whitehead_diagonal,
};
use unirow::finite::enumerate_ring;
use unirow::parse::parse_element;
use unirow::radical::{exp_radical, invert, is_in_radical, is_unit, log_one_minus};
use unirow::suite::{run_suite, DEFAULT_SEED};
use unirow::unimodular::{
    apply_reduction, bass_witness, brute_force_lemma26, complete_to_invertible, is_unimodular,
    search_reduction_pair, transfer_through_radical, SearchOutcome, DEFAULT_DEGREE_BOUND, LEMMA26_CAP,
    MAX_DEGREE_BOUND,
};
use unirow::word::normalize_word;
use unirow::{Error, RingElement};

mod input;

#[derive(Parser, Debug)]
#[command(name = "unirow", version, about = "Exact elementary factorizations and unimodular rows over computable rings")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Ring descriptor, e.g. field(Q), poly(Q;2), trunc(Q;1;1;3), zmod(8), dual(3;1)
    #[arg(long, global = true, default_value = "field(Q)")]
    ring: String,
    /// Override the truncation order of a trunc ring
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Degree bound for reduction searches
    #[arg(long, global = true)]
    degree_bound: Option<u32>,
    /// Value standing for v(2d) in the bound table
    #[arg(long, global = true)]
    v2d: Option<u64>,
    /// Dimension parameter (bass witness, bound table)
    #[arg(long, global = true)]
    d: Option<u64>,
    /// Print the full run report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Write the certificate (or result, if there is none) to this file
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Element arithmetic
    #[command(subcommand)]
    Ring(RingCmd),
    /// Matrix factorizations
    #[command(subcommand)]
    Factor(FactorCmd),
    /// Unimodular rows
    #[command(subcommand)]
    Unimod(UnimodCmd),
    /// Exhaustive checks over finite rings
    #[command(subcommand)]
    Lemma26(Lemma26Cmd),
    /// Factor-count bounds for a dimension d and constant v2d
    Bounds,
    /// Triangular words given as certificates
    #[command(subcommand)]
    Word(WordCmd),
    /// Acceptance suites
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Subcommand, Debug)]
enum RingCmd {
    /// Normal form of an element
    Eval { element: String },
    /// Inverse of a unit
    Invert { element: String },
    /// Logarithm of an element congruent to 1 modulo the radical
    Log { element: String },
    /// Exponential of a radical element
    Exp { element: String },
}

#[derive(Subcommand, Debug)]
enum FactorCmd {
    /// Radical perturbation of the identity into elementaries and one scalar
    Lemma23 { matrix: String },
    /// Unit diagonal of determinant 1 into 4(m-1) elementaries
    Whitehead { matrix: String },
    /// SL2 matrix into at most 4 alternating triangular factors
    Sl2 {
        matrix: String,
        /// Unit shift for the lower-left corner
        #[arg(long)]
        shift: Option<String>,
    },
    /// SLn matrix into elementaries
    Sln { matrix: String },
    /// Minimal number of triangular factors of a 2x2 matrix
    Minlen { matrix: String },
}

#[derive(Subcommand, Debug)]
enum UnimodCmd {
    /// Unimodularity with a cofactor witness
    Check { row: String },
    /// Shorten a row by (a_i + c_i a_n) with the given coefficients
    Reduce {
        row: String,
        #[arg(long)]
        coeffs: String,
    },
    /// Search for a reducing coefficient of bounded degree
    Search { row: String },
    /// Witness row z1 z2 + ... + z_{2d-1} z_{2d} over poly(Q;2d)
    Witness,
    /// Move witnesses between a trunc row and its reduction
    Transfer { row: String },
    /// Complete a unimodular row to an invertible matrix
    Complete { row: String },
}

#[derive(Subcommand, Debug)]
enum Lemma26Cmd {
    /// Check the quotient criterion for every principal ideal (or just --a)
    Bruteforce {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        a: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum WordCmd {
    /// Merge a certificate's word into alternating normal form
    Normalize { certificate: String },
    /// Re-check a certificate
    Verify { certificate: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteName {
    Radical,
    Factorization,
    Unimodular,
    Lemma26,
    All,
}

#[derive(Subcommand, Debug)]
enum SuiteCmd {
    Run {
        name: SuiteName,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Serialize)]
struct RunReport {
    subcommand: String,
    inputs: Value,
    result: Value,
    certificate: Option<Certificate>,
    verified: bool,
    elapsed_us: u128,
}

struct Outcome {
    result: Value,
    certificate: Option<Certificate>,
    verified: bool,
}

impl Outcome {
    fn plain(result: Value, verified: bool) -> Outcome {
        Outcome { result, certificate: None, verified }
    }

    fn cert(result: Value, c: Certificate) -> Outcome {
        let verified = c.verified && c.recheck();
        Outcome { result, certificate: Some(c), verified }
    }
}

fn names(cmd: &Cmd) -> (&'static str, Value) {
    match cmd {
        Cmd::Ring(c) => match c {
            RingCmd::Eval { element } => ("ring eval", json!({ "element": element })),
            RingCmd::Invert { element } => ("ring invert", json!({ "element": element })),
            RingCmd::Log { element } => ("ring log", json!({ "element": element })),
            RingCmd::Exp { element } => ("ring exp", json!({ "element": element })),
        },
        Cmd::Factor(c) => match c {
            FactorCmd::Lemma23 { matrix } => ("factor lemma23", json!({ "matrix": matrix })),
            FactorCmd::Whitehead { matrix } => ("factor whitehead", json!({ "matrix": matrix })),
            FactorCmd::Sl2 { matrix, shift } => ("factor sl2", json!({ "matrix": matrix, "shift": shift })),
            FactorCmd::Sln { matrix } => ("factor sln", json!({ "matrix": matrix })),
            FactorCmd::Minlen { matrix } => ("factor minlen", json!({ "matrix": matrix })),
        },
        Cmd::Unimod(c) => match c {
            UnimodCmd::Check { row } => ("unimod check", json!({ "row": row })),
            UnimodCmd::Reduce { row, coeffs } => ("unimod reduce", json!({ "row": row, "coeffs": coeffs })),
            UnimodCmd::Search { row } => ("unimod search", json!({ "row": row })),
            UnimodCmd::Witness => ("unimod witness", json!({})),
            UnimodCmd::Transfer { row } => ("unimod transfer", json!({ "row": row })),
            UnimodCmd::Complete { row } => ("unimod complete", json!({ "row": row })),
        },
        Cmd::Lemma26(Lemma26Cmd::Bruteforce { n, a }) => ("lemma26 bruteforce", json!({ "n": n, "a": a })),
        Cmd::Bounds => ("bounds", json!({})),
        Cmd::Word(c) => match c {
            WordCmd::Normalize { certificate } => ("word normalize", json!({ "certificate": certificate })),
            WordCmd::Verify { certificate } => ("word verify", json!({ "certificate": certificate })),
        },
        Cmd::Suite(SuiteCmd::Run { name, seed }) => ("suite run", json!({ "name": suite_name(*name), "seed": seed })),
    }
}

fn suite_name(s: SuiteName) -> &'static str {
    match s {
        SuiteName::Radical => "radical",
        SuiteName::Factorization => "factorization",
        SuiteName::Unimodular => "unimodular",
        SuiteName::Lemma26 => "lemma26",
        SuiteName::All => "all",
    }
}

fn strs(v: &[RingElement]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn dispatch(cmd: &Cmd, o: &Opts) -> unirow::Result<Outcome> {
    let ring = || input::ring(&o.ring, o.trunc);
    let elem = |s: &str| parse_element(&ring()?, &input::load(s)?);
    let mat = |s: &str| input::matrix(&ring()?, &input::load(s)?);
    let row = |s: &str| input::row(&ring()?, &input::load(s)?);
    Ok(match cmd {
        Cmd::Ring(RingCmd::Eval { element }) => {
            let a = elem(element)?;
            let rad = is_in_radical(&a).ok();
            Outcome::plain(json!({ "value": a.to_string(), "unit": is_unit(&a), "radical": rad }), true)
        }
        Cmd::Ring(RingCmd::Invert { element }) => {
            let a = elem(element)?;
            let b = invert(&a)?;
            Outcome::plain(json!({ "value": b.to_string() }), (&a * &b).is_one())
        }
        Cmd::Ring(RingCmd::Log { element }) => {
            let a = elem(element)?;
            let g = &RingElement::one(a.ring()) - &a;
            let h = log_one_minus(&g)?;
            Outcome::plain(json!({ "value": h.to_string() }), exp_radical(&h)? == a)
        }
        Cmd::Ring(RingCmd::Exp { element }) => {
            let h = elem(element)?;
            let e = exp_radical(&h)?;
            let back = log_one_minus(&(&RingElement::one(h.ring()) - &e))?;
            Outcome::plain(json!({ "value": e.to_string() }), back == h)
        }
        Cmd::Factor(FactorCmd::Lemma23 { matrix }) => {
            let a = mat(matrix)?;
            let m = a.rows();
            let w = factor_radical_perturbation(&a)?;
            let bound = (m + 4) * (m - 1);
            let res = json!({ "elementary_count": w.elementary_count(), "bound": bound });
            Outcome::cert(res, Certificate::from_word(&w, Some(bound)))
        }
        Cmd::Factor(FactorCmd::Whitehead { matrix }) => {
            let a = mat(matrix)?;
            let bound = 4 * (a.rows().max(1) - 1);
            let w = whitehead_diagonal(&a)?;
            let res = json!({ "elementary_count": w.elementary_count(), "bound": bound });
            Outcome::cert(res, Certificate::from_word(&w, Some(bound)))
        }
        Cmd::Factor(FactorCmd::Sl2 { matrix, shift }) => {
            let a = mat(matrix)?;
            let u = shift.as_deref().map(elem).transpose()?;
            let w = factor_sl2_triangular(&a, u.as_ref())?;
            Outcome::cert(json!({ "length": w.len() }), Certificate::from_word(&w, Some(4)))
        }
        Cmd::Factor(FactorCmd::Sln { matrix }) => {
            let f = factor_sln_elementary(&mat(matrix)?)?;
            let res = json!({ "elementary_count": f.word.elementary_count(), "triangular_length": f.triangular_length });
            Outcome::cert(res, Certificate::from_word(&f.word, None))
        }
        Cmd::Factor(FactorCmd::Minlen { matrix }) => {
            let a = mat(matrix)?;
            let n = min_triangular_length_2x2(&a)?;
            // an explicit word of at most four factors backs the answer
            let w = normalize_word(&factor_sl2_triangular(&a, None)?)?;
            let verified = w.verify() && n <= w.len();
            Outcome::plain(json!({ "min_length": n }), verified)
        }
        Cmd::Unimod(UnimodCmd::Check { row: r }) => {
            let r = row(r)?;
            match is_unimodular(&r) {
                Ok(u) => Outcome::plain(json!({ "unimodular": true, "vector": VectorJson::from_vector(&u) }), u.verify()),
                Err(Error::NotUnimodular) => {
                    Outcome::plain(json!({ "unimodular": false, "vector": VectorJson::from_row(&r) }), true)
                }
                Err(e) => return Err(e),
            }
        }
        Cmd::Unimod(UnimodCmd::Reduce { row: r, coeffs }) => {
            let r = row(r)?;
            let c = row(coeffs)?;
            let u = is_unimodular(&r)?;
            let s = apply_reduction(&u, &c)?;
            Outcome::plain(json!({ "shortened": VectorJson::from_vector(&s) }), s.verify())
        }
        Cmd::Unimod(UnimodCmd::Search { row: r }) => {
            let bound = o.degree_bound.unwrap_or(DEFAULT_DEGREE_BOUND);
            if bound > MAX_DEGREE_BOUND {
                return Err(Error::DegreeBoundExceeded(format!("degree bound {bound} above {MAX_DEGREE_BOUND}")));
            }
            let r = row(r)?;
            let u = is_unimodular(&r)?;
            match search_reduction_pair(&u, bound)? {
                SearchOutcome::Reducible(cert) => {
                    let ok = cert.verify(&r);
                    let res = json!({
                        "reducible": true,
                        "coefficients": strs(&cert.coefficients),
                        "shortened": VectorJson::from_vector(&cert.shortened),
                    });
                    Outcome::plain(res, ok)
                }
                SearchOutcome::InfeasibleWithinBound { degree_bound } => {
                    Outcome::plain(json!({ "reducible": false, "degree_bound": degree_bound }), true)
                }
            }
        }
        Cmd::Unimod(UnimodCmd::Witness) => {
            let d = o.d.ok_or_else(|| Error::InvalidDimension("--d is required".into()))?;
            let u = bass_witness(d as usize)?;
            Outcome::plain(json!({ "d": d, "vector": VectorJson::from_vector(&u) }), u.verify())
        }
        Cmd::Unimod(UnimodCmd::Transfer { row: r }) => {
            let t = transfer_through_radical(&row(r)?)?;
            let v = |x: &Option<unirow::unimodular::UnimodularVector>| x.as_ref().map(VectorJson::from_vector);
            let res = json!({
                "base_row": strs(&t.base_row),
                "unimodular": t.base.is_some(),
                "base": v(&t.base),
                "lifted": v(&t.lifted),
                "direct": v(&t.direct),
                "reduced": v(&t.reduced),
            });
            Outcome::plain(res, t.verdicts_agree() && t.transports_verify()?)
        }
        Cmd::Unimod(UnimodCmd::Complete { row: r }) => {
            let r = row(r)?;
            let u = is_unimodular(&r)?;
            let m = complete_to_invertible(&u)?;
            let det = m.det()?;
            let first_column = (0..r.len()).all(|k| m.get(k, 0) == &r[k]);
            let res = json!({ "matrix": unirow::cert::matrix_to_strings(&m), "det": det.to_string() });
            Outcome::plain(res, first_column && is_unit(&det))
        }
        Cmd::Lemma26(Lemma26Cmd::Bruteforce { n, a }) => {
            let ring = ring()?;
            let gens: Vec<RingElement> = match a {
                Some(s) => vec![parse_element(&ring, s)?],
                None => enumerate_ring(&ring, LEMMA26_CAP)?.collect(),
            };
            let reports = gens.iter().map(|a| brute_force_lemma26(&ring, a, *n)).collect::<unirow::Result<Vec<_>>>()?;
            let ok = reports.iter().all(|r| r.equivalence_holds);
            Outcome::plain(json!({ "reports": reports }), ok)
        }
        Cmd::Bounds => {
            let d = o.d.ok_or_else(|| Error::InvalidDimension("--d is required".into()))?;
            let v2d = o.v2d.ok_or_else(|| Error::InvalidDimension("--v2d is required".into()))?;
            Outcome::plain(serde_json::to_value(bound_table(d, v2d)?)?, true)
        }
        Cmd::Word(WordCmd::Normalize { certificate }) => {
            let c = Certificate::from_json(&input::load(certificate)?)?;
            let w = normalize_word(&c.to_word()?)?;
            Outcome::cert(json!({ "length": w.len(), "alternating": w.is_alternating() }), Certificate::from_word(&w, None))
        }
        Cmd::Word(WordCmd::Verify { certificate }) => {
            let c = Certificate::from_json(&input::load(certificate)?)?;
            let ok = c.recheck();
            Outcome::plain(json!({ "stored_flag": c.verified, "recheck": ok }), ok && c.verified)
        }
        Cmd::Suite(SuiteCmd::Run { name, seed }) => {
            let r = run_suite(suite_name(*name), *seed)?;
            let ok = r.passed;
            Outcome::plain(serde_json::to_value(r)?, ok)
        }
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegreeBoundExceeded(_) | Error::CardinalityTooLarge { .. } => 3,
        Error::WitnessMismatch(_) => 1,
        _ => 2,
    }
}

// Output errors (a closed pipe, say) are not worth a panic.
macro_rules! out {
    ($($t:tt)*) => {
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    };
}

fn print_text(report: &RunReport) {
    if let Some(criteria) = report.result.get("criteria").and_then(Value::as_array) {
        for c in criteria {
            let mark = if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
            out!("[{mark}] {}. {}: {}", c["index"], c["name"].as_str().unwrap_or(""), c["detail"].as_str().unwrap_or(""));
        }
    } else {
        out!("{}", serde_json::to_string_pretty(&report.result).expect("json"));
    }
    if let Some(c) = &report.certificate {
        out!("certificate: {} factors, claimed bound {:?}", c.factors.len(), c.claimed_bound);
    }
    out!("verified: {}", report.verified);
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, inputs) = names(&cli.cmd);
    let start = Instant::now();
    let outcome = match dispatch(&cli.cmd, &cli.opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let mut inputs = inputs;
    inputs["ring"] = json!(cli.opts.ring);
    let o = &cli.opts;
    for (k, v) in [("trunc", json!(o.trunc)), ("degree_bound", json!(o.degree_bound)), ("d", json!(o.d)), ("v2d", json!(o.v2d))] {
        if !v.is_null() {
            inputs[k] = v;
        }
    }
    let report = RunReport {
        subcommand: name.to_string(),
        inputs,
        result: outcome.result,
        certificate: outcome.certificate,
        verified: outcome.verified,
        elapsed_us: start.elapsed().as_micros(),
    };
    if let Some(path) = &cli.opts.out {
        let text = match &report.certificate {
            Some(c) => c.to_json(),
            None => serde_json::to_string_pretty(&report.result).expect("json"),
        };
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if cli.opts.json {
        out!("{}", serde_json::to_string_pretty(&report).expect("json"));
    } else {
        print_text(&report);
    }
    if report.verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
