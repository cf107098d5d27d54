//! Command-line front end: root data dumps, module construction, verification
//! suites and multiplicity tables.
//!
//! Exit codes: 0 success, 1 a suite failed, 2 bad input.

mod config;

use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use uchi::gradedmod::{Ambient, GradedModule};
use uchi::structure::{self, MultKind};
use uchi::verify::{run_suite, SuiteOptions, SuiteReport, SUITES};
use uchi::{induction, Scalar, Weight, F11, F13, F3, F5, F7};

use config::{parse_weight, ConfigArgs, Format, SuiteConfig};

/// Version of the report layout written by `verify`.
const REPORT_SCHEMA: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// malformed flags, files or data; exit code 2
    Input(String),
    /// a computation failed; exit code 1
    Failure(String),
}

impl From<uchi::Error> for CliError {
    fn from(e: uchi::Error) -> Self {
        use uchi::Error::*;
        match e {
            BadPrime { .. } | UnsupportedType(_) | InvalidInput(_) | DatumCheckFailed(_) | NotLocal | AmbientMismatch(_)
            | WrongSubalgebra(_) | LeviVanishingViolated | NeedsField | WindowTooSmall(_) => CliError::Input(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "uchi", version, about = "Graded modules over reduced enveloping algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dump the root datum as JSON
    Rootdata(ConfigArgs),
    /// Construct a module and dump it
    Module {
        #[arg(value_enum)]
        kind: ModuleKind,
        /// weight coordinates, e.g. 1,0
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Run verification suites
    Verify(ConfigArgs),
    /// Tabulate multiplicities over the window
    Table {
        #[arg(value_enum)]
        kind: TableKind,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModuleKind {
    Verma,
    LeviVerma,
    Simple,
    QLevi,
    QUpper,
    Xi,
    ProjCover,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableKind {
    /// [Z(mu) : L(lambda)]
    Zl,
    /// (Q(lambda) : Z(mu))
    Qz,
    /// (Q(lambda) : Q^I(mu))
    Qqi,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Failure(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

/// Calls `$f::<F>(args)` for the scalar field of characteristic `$p`.
macro_rules! with_field {
    ($p:expr, $f:ident ( $($arg:expr),* )) => {
        match $p {
            3 => $f::<F3>($($arg),*),
            5 => $f::<F5>($($arg),*),
            7 => $f::<F7>($($arg),*),
            11 => $f::<F11>($($arg),*),
            13 => $f::<F13>($($arg),*),
            p => Err(CliError::Input(format!("p = {p} is not supported; use one of 3, 5, 7, 11, 13"))),
        }
    };
}

fn run(cmd: Command) -> Result<bool, CliError> {
    match cmd {
        Command::Rootdata(args) => {
            let c = args.resolve()?;
            let d = c.build_datum()?;
            emit(&c, &to_json(&d.dump())?)?;
            Ok(true)
        }
        Command::Module { kind, lambda, cfg } => {
            let c = cfg.resolve()?;
            let lam = parse_weight(&lambda)?;
            with_field!(c.p, module_cmd(&c, kind, &lam))
        }
        Command::Verify(args) => {
            let c = args.resolve()?;
            with_field!(c.p, verify_cmd(&c))
        }
        Command::Table { kind, cfg } => {
            let c = cfg.resolve()?;
            with_field!(c.p, table_cmd(&c, kind))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Failure(e.to_string()))
}

/// Writes `text` to the configured output file, or to stdout.
fn emit(c: &SuiteConfig, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Input(e.to_string());
    match &c.out {
        Some(path) => std::fs::write(path, format!("{text}\n")).map_err(io),
        None => match writeln!(std::io::stdout(), "{text}") {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(io),
        },
    }
}

fn weight_for<S: Scalar>(amb: &Ambient<S>, lam: &[i32]) -> Result<Weight, CliError> {
    if lam.len() != amb.datum.d {
        return Err(CliError::Input(format!("lambda needs {} coordinates", amb.datum.d)));
    }
    Ok(Weight::new(lam))
}

fn build_module<S: Scalar>(amb: &Arc<Ambient<S>>, kind: ModuleKind, lam: &Weight, seed: u64) -> Result<GradedModule<S>, CliError> {
    Ok(match kind {
        ModuleKind::Verma => induction::baby_verma(amb, lam).module,
        ModuleKind::LeviVerma => induction::levi_baby_verma(amb, lam).module,
        ModuleKind::Simple => structure::simple_head(amb, lam)?,
        ModuleKind::QLevi => structure::projective_cover_levi(amb, lam, seed)?,
        ModuleKind::QUpper => structure::q_upper_i(amb, lam, seed)?,
        ModuleKind::Xi => structure::xi_i(amb, lam, seed)?,
        ModuleKind::ProjCover => structure::projective_cover(amb, lam, seed)?,
    })
}

fn module_cmd<S: Scalar>(c: &SuiteConfig, kind: ModuleKind, lam: &[i32]) -> Result<bool, CliError> {
    let amb = c.ambient::<S>()?;
    let lam = weight_for(&amb, lam)?;
    let m = build_module(&amb, kind, &lam, c.seed)?;
    let text = match c.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({
            "kind": kind,
            "lambda": lam,
            "dim": m.dim(),
            "grades": m.num_grades(),
            "free": m.is_free(),
            "rank_over_base": m.rank_over_base(),
            "valid": m.is_valid(),
            "module": m.dump(),
        }))?,
        Format::Csv => {
            let mut s = String::from("grade,dim\n");
            for (k, d) in m.keys().iter().zip(m.dims()) {
                s.push_str(&format!("\"{k}\",{d}\n"));
            }
            s.trim_end().to_string()
        }
    };
    emit(c, &text)?;
    Ok(true)
}

fn verify_cmd<S: Scalar>(c: &SuiteConfig) -> Result<bool, CliError> {
    let amb = c.ambient::<S>()?;
    let window = c.window_for(amb.datum.d);
    let names: Vec<String> = if c.suites.is_empty() { SUITES.iter().map(|s| s.to_string()).collect() } else { c.suites.clone() };
    let opts = SuiteOptions { seed: c.seed, samples: c.samples };
    let mut reports: Vec<SuiteReport> = names
        .par_iter()
        .map(|name| {
            let start = Instant::now();
            let r = run_suite(name, &amb, &window, &opts).unwrap_or_else(|e| {
                let mut r = SuiteReport::new(name);
                r.case("error", false, e.to_string());
                r
            });
            eprintln!("{name}: {} in {:.2?}", if r.passed() { "pass" } else { "FAIL" }, start.elapsed());
            r
        })
        .collect();
    reports.sort_by_key(|r| SUITES.iter().position(|s| *s == r.suite));
    let passed = reports.iter().all(|r| r.passed());
    let text = match c.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({
            "schema": REPORT_SCHEMA,
            "config": c,
            "passed": passed,
            "suites": reports,
        }))?,
        Format::Csv => {
            let mut s = String::from("suite,case,passed,detail\n");
            for r in &reports {
                for case in &r.cases {
                    s.push_str(&format!("{},\"{}\",{},\"{}\"\n", r.suite, case.key, case.passed, case.detail.replace('"', "'")));
                }
            }
            s.trim_end().to_string()
        }
    };
    emit(c, &text)?;
    Ok(passed)
}

fn table_cmd<S: Scalar>(c: &SuiteConfig, kind: TableKind) -> Result<bool, CliError> {
    let amb = c.ambient::<S>()?;
    let window = c.window_for(amb.datum.d);
    let kind = match kind {
        TableKind::Zl => MultKind::ZL,
        TableKind::Qz => MultKind::QZ,
        TableKind::Qqi => MultKind::QQI,
    };
    let t = structure::multiplicities(&amb, kind, &window, c.seed)?;
    let text = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => t.to_csv().trim_end().to_string(),
        Format::Json => to_json(&t)?,
    };
    emit(c, &text)?;
    Ok(true)
}
