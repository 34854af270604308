//! Argument parsing and dispatch. [`run`] never panics on bad input; every
//! failure becomes exit code 2 and an `{"error": …}` document.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};
use ttocheck_core::blaschke::separation_delta;
use ttocheck_core::harness::{self, InstanceKind, TrialConfig, Verdict};
use ttocheck_core::operators::{chain_c_symmetry, compress_from_tail, is_c_symmetric, is_tto, recover_symbol};
use ttocheck_core::{ZeroSequence, C64};

use crate::json::{self as wire, BlaschkeDoc, InputError, OperatorDoc, Result};
use crate::report;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ttocheck", version, about = "Checks for truncated Toeplitz operators on model spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Also write the JSON document to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Bands {
    /// Residuals at or below this value pass.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Residuals at or above this value fail; values in between are inconclusive.
    #[arg(long, default_value_t = 1e-4)]
    pub tol_fail: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a Blaschke product and its derivative at points.
    Eval {
        /// Path or inline JSON `{"blaschke": {...}, "points": [[re, im], ...]}`.
        input: String,
    },
    /// Test C-symmetry of an operator matrix.
    CheckCsym {
        input: String,
        #[command(flatten)]
        bands: Bands,
        /// Test every compression, not only the top level.
        #[arg(long)]
        chain: bool,
    },
    /// Test whether an operator matrix is a truncated Toeplitz operator.
    CheckTto {
        input: String,
        #[command(flatten)]
        bands: Bands,
    },
    /// Compress an operator matrix to a prefix space.
    Compress {
        input: String,
        #[arg(long)]
        degree: usize,
    },
    /// Run a seeded verification and emit its report.
    Verify {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// `N` or `min:max`.
        #[arg(long)]
        degree: Option<String>,
        #[arg(long, default_value_t = 0.8)]
        cap: f64,
        #[command(flatten)]
        bands: Bands,
        /// Zero of `b_a` as `re,im` (single_zero); random when absent.
        #[arg(long)]
        a: Option<String>,
        /// Third zero of the degree-three example as `re,im`.
        #[arg(long, default_value = "0.5")]
        w: String,
        /// Truncation order of the infinite product.
        #[arg(long, default_value_t = 12)]
        truncation: usize,
        /// Ratio `r` of the zeros `1 − r^j` of the infinite product.
        #[arg(long, default_value_t = 0.5)]
        ratio: f64,
    },
    /// Emit a seeded operator matrix accepted by the check commands.
    Generate {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// `N` or `min:max`.
        #[arg(long)]
        degree: Option<String>,
        #[arg(long, default_value_t = 0.8)]
        cap: f64,
    },
}

/// Exit code plus the text written to standard output.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// Exit code of a verdict.
pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

fn error_doc(kind: &str, message: &str) -> Value {
    json!({"error": {"kind": kind, "message": message}})
}

/// Parse `args` (program name first), execute, and write `--out` if given.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: EXIT_PASS, stdout: e.to_string() };
            }
            return Outcome {
                code: EXIT_INVALID,
                stdout: render(&error_doc("usage", e.to_string().trim_end())),
            };
        }
    };
    let (code, doc) = match execute(&cli.command) {
        Ok(v) => {
            // the exit code is read back from the document so the two cannot disagree
            let code = match v.get("verdict").and_then(Value::as_str) {
                Some("fail") => EXIT_FAIL,
                Some("inconclusive") => EXIT_INCONCLUSIVE,
                _ => EXIT_PASS,
            };
            (code, v)
        }
        Err(e) => (EXIT_INVALID, error_doc(e.kind(), &e.to_string())),
    };
    let stdout = render(&doc);
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &stdout) {
            return Outcome {
                code: EXIT_INVALID,
                stdout: render(&error_doc("io", &format!("cannot write {}: {e}", path.display()))),
            };
        }
    }
    Outcome { code, stdout }
}

/// Inline JSON when the argument starts with `{`, a file path otherwise.
fn load(input: &str) -> Result<String> {
    if input.trim_start().starts_with('{') {
        Ok(input.to_string())
    } else {
        Ok(std::fs::read_to_string(input)?)
    }
}

fn parse<T: for<'de> Deserialize<'de>>(input: &str) -> Result<T> {
    Ok(serde_json::from_str(&load(input)?)?)
}

fn parse_degree(s: Option<&str>, default: (usize, usize)) -> Result<(usize, usize)> {
    let Some(s) = s else { return Ok(default) };
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| InputError::Invalid(format!("bad degree {t:?}")))
    };
    match s.split_once(':') {
        Some((lo, hi)) => Ok((num(lo)?, num(hi)?)),
        None => {
            let n = num(s)?;
            Ok((n, n))
        }
    }
}

fn check_bands(b: &Bands) -> Result<()> {
    if !(b.tol > 0.0 && b.tol < b.tol_fail) {
        return Err(InputError::Invalid("need 0 < --tol < --tol-fail".into()));
    }
    Ok(())
}

fn classify(residual: f64, b: &Bands) -> Verdict {
    if residual.is_nan() || residual >= b.tol_fail {
        Verdict::Fail
    } else if residual <= b.tol {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvalDoc {
    blaschke: BlaschkeDoc,
    #[serde(default)]
    points: Vec<[f64; 2]>,
}

fn execute(cmd: &Command) -> Result<Value> {
    match cmd {
        Command::Eval { input } => {
            let doc: EvalDoc = parse(input)?;
            let b = doc.blaschke.build()?;
            let points = doc
                .points
                .iter()
                .map(|p| {
                    let z = C64::new(p[0], p[1]);
                    let (v, d) = b.eval_with_derivative(z)?;
                    Ok(json!({"z": wire::complex(z), "value": wire::complex(v), "derivative": wire::complex(d)}))
                })
                .collect::<Result<Vec<_>>>()?;
            let delta = if b.degree() >= 2 && b.has_distinct_zeros() {
                Some(separation_delta(b.zeros())?)
            } else {
                None
            };
            Ok(json!({
                "blaschke": wire::blaschke(&b),
                "points": points,
                "separation_delta": delta,
                "verdict": "pass",
            }))
        }
        Command::CheckCsym { input, bands, chain } => {
            check_bands(bands)?;
            let m = parse::<OperatorDoc>(input)?.build()?;
            let levels: Vec<f64> = if *chain {
                chain_c_symmetry(&m, bands.tol)?.iter().map(|o| o.residual).collect()
            } else {
                vec![is_c_symmetric(&m, bands.tol)?.residual]
            };
            let residual = levels.iter().copied().fold(0.0f64, f64::max);
            let verdict = classify(residual, bands);
            Ok(json!({
                "check": if *chain { "chain_c_symmetry" } else { "c_symmetry" },
                "basis": m.basis().as_str(),
                "dim": m.dim(),
                "residual": residual,
                "levels": if *chain { Some(levels) } else { None },
                "tolerance_pass": bands.tol,
                "tolerance_fail": bands.tol_fail,
                "verdict": verdict.as_str(),
            }))
        }
        Command::CheckTto { input, bands } => {
            check_bands(bands)?;
            let m = parse::<OperatorDoc>(input)?.build()?;
            let out = is_tto(&m, bands.tol)?;
            let verdict = classify(out.residual, bands);
            let symbol = if verdict == Verdict::Pass { Some(wire::symbol(&recover_symbol(&m)?)) } else { None };
            Ok(json!({
                "check": "tto",
                "basis": m.basis().as_str(),
                "dim": m.dim(),
                "residual": out.residual,
                "symbol": symbol,
                "tolerance_pass": bands.tol,
                "tolerance_fail": bands.tol_fail,
                "verdict": verdict.as_str(),
            }))
        }
        Command::Compress { input, degree } => {
            let m = parse::<OperatorDoc>(input)?.build()?;
            let c = compress_from_tail(&m, *degree)?;
            let mut doc = wire::operator(&c);
            doc["verdict"] = json!("pass");
            Ok(doc)
        }
        Command::Verify { name, seed, trials, degree, cap, bands, a, w, truncation, ratio } => {
            let cfg = TrialConfig {
                seed: *seed,
                trials: *trials,
                degree_range: parse_degree(degree.as_deref(), TrialConfig::default().degree_range)?,
                zero_modulus_cap: *cap,
                tolerance_pass: bands.tol,
                tolerance_fail: bands.tol_fail,
            };
            cfg.validate()?;
            let r = match name.as_str() {
                "zn" => harness::verify_zn(&cfg)?,
                "toeplitz_h2" => harness::verify_toeplitz_h2(&cfg)?,
                "single_zero" => match a {
                    Some(a) => harness::verify_single_zero_at(wire::parse_point(a)?, &cfg)?,
                    None => harness::verify_single_zero(&cfg)?,
                },
                "finite_blaschke" => harness::verify_finite_blaschke(&cfg)?,
                "infinite_blaschke" => {
                    harness::verify_infinite_blaschke(ZeroSequence::Geometric { ratio: *ratio }, *truncation, &cfg)?
                }
                "example3" => harness::verify_example_degree3(wire::parse_point(w)?, &cfg)?,
                other => return Err(InputError::Invalid(format!("unknown verification {other:?}"))),
            };
            let doc = report::report(&r);
            debug_assert_eq!(doc["verdict"], json!(r.verdict.as_str()));
            Ok(doc)
        }
        Command::Generate { kind, seed, index, degree, cap } => {
            let kind = InstanceKind::parse(kind)
                .ok_or_else(|| InputError::Invalid(format!("unknown kind {kind:?}")))?;
            let cfg = TrialConfig {
                seed: *seed,
                degree_range: parse_degree(degree.as_deref(), TrialConfig::default().degree_range)?,
                zero_modulus_cap: *cap,
                ..TrialConfig::default()
            };
            cfg.validate()?;
            let m = harness::gen_instance(kind, &cfg, *index)?;
            let mut doc = wire::operator(&m);
            doc["kind"] = json!(kind.as_str());
            doc["verdict"] = json!("pass");
            Ok(doc)
        }
    }
}
