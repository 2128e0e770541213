//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or validation error,
//! 3 falsifier outcome contradicting the closed-form verdict, 4 crosscheck
//! disagreements.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::characterize::{decide, CoefficientTuple, Exponent, SetId, DEFAULT_TOL};
use crate::envelope::{envelope_csv, sample_envelope};
use crate::error::Error;
use crate::format::sig_digits;
use crate::oracle::{
    crosscheck, falsify, CrosscheckParams, Direction, Probe, SearchConfig, Witness,
};
use crate::spaces::SpaceDescriptor;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;
pub const EXIT_DISAGREE: i32 = 4;

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "TRIQ_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "triq",
    version,
    about = "Generalized triangle inequality toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide membership of a coefficient tuple in F(p), G(p) or H(p).
    Decide(DecideArgs),
    /// Search for a counterexample to the inequality (F) or its reverse (G).
    Falsify(FalsifyArgs),
    /// Write envelope samples as CSV.
    Envelope(EnvelopeArgs),
    /// Compare closed-form verdicts against the falsifier on random inputs.
    Crosscheck(CrosscheckArgs),
}

#[derive(Debug, Args)]
struct DecideArgs {
    #[arg(long)]
    set: SetId,
    #[arg(long, allow_hyphen_values = true)]
    p: f64,
    /// Comma-separated coefficients.
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct FalsifyArgs {
    #[arg(long)]
    set: SetId,
    #[arg(long, allow_hyphen_values = true)]
    p: f64,
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
    #[arg(long, default_value = "lq:2:2")]
    space: SpaceDescriptor,
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct EnvelopeArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: f64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    grid: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CrosscheckArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "1.1,4", value_parser = parse_f64_pair)]
    p_range: (f64, f64),
    #[arg(long, default_value = "2,5", value_parser = parse_usize_pair)]
    n_range: (usize, usize),
    /// Falsifier budget and verification samples per check.
    #[arg(long, default_value_t = 2_000)]
    budget: usize,
    #[arg(long)]
    json: bool,
}

fn parse_pair<T: std::str::FromStr>(s: &str) -> Result<(T, T), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<T>()
            .map_err(|_| format!("malformed number `{}`", x.trim()))
    };
    Ok((parse(a)?, parse(b)?))
}

fn parse_f64_pair(s: &str) -> Result<(f64, f64), String> {
    parse_pair(s)
}

fn parse_usize_pair(s: &str) -> Result<(usize, usize), String> {
    parse_pair(s)
}

fn parse_mu(s: &str) -> Result<CoefficientTuple, Error> {
    let values = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("malformed mu entry `{}`", x.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    CoefficientTuple::new(values)
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Error> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{SEED_ENV}=`{v}` is not a u64"))),
        Err(_) => Ok(0),
    }
}

/// Machine-readable falsification result.
#[derive(Debug, Serialize)]
struct FalsifyReport<'a> {
    set: SetId,
    p: f64,
    mu: &'a [f64],
    member: bool,
    found: bool,
    min_gap: f64,
    min_gap_probe: Probe,
    evaluations: usize,
    witness: Option<&'a Witness>,
}

enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Parses `argv` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Decide(a) => run_decide(a, stdout),
        Command::Falsify(a) => run_falsify(a, stdout, stderr),
        Command::Envelope(a) => run_envelope(a, stdout),
        Command::Crosscheck(a) => run_crosscheck(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_IO
        }
    }
}

fn run_decide(a: DecideArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = Exponent::new(a.p)?;
    let mu = parse_mu(&a.mu)?;
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Err(Failure::Usage(format!(
            "tolerance must be finite and >= 0, got {}",
            a.tol
        )));
    }
    let verdict = decide(a.set, p, &mu, a.tol)?;
    if a.json {
        writeln!(
            out,
            "{}",
            serde_json::to_string(&verdict).expect("verdict serializes")
        )?;
    } else {
        writeln!(out, "{}", verdict.describe())?;
    }
    Ok(EXIT_OK)
}

fn run_falsify(a: FalsifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let p = Exponent::new(a.p)?;
    let mu = parse_mu(&a.mu)?;
    let direction = Direction::try_from(a.set)?;
    let cfg = SearchConfig {
        budget: a.budget,
        seed: resolve_seed(a.seed)?,
        space: a.space,
        ..SearchConfig::default()
    };
    cfg.validate()?;
    let verdict = decide(a.set, p, &mu, DEFAULT_TOL)?;
    let outcome = falsify(direction, p, &mu, &cfg)?;

    if a.json {
        let report = FalsifyReport {
            set: a.set,
            p: p.value(),
            mu: mu.values(),
            member: verdict.member,
            found: outcome.found(),
            min_gap: outcome.min_gap,
            min_gap_probe: outcome.min_gap_probe,
            evaluations: outcome.evaluations,
            witness: outcome.witness.as_ref(),
        };
        writeln!(
            out,
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        )?;
    } else {
        match &outcome.witness {
            Some(w) => writeln!(out, "{}", w.describe())?,
            None => writeln!(
                out,
                "no witness found (min gap = {})",
                sig_digits(outcome.min_gap, 6)
            )?,
        }
    }

    // a witness proves non-membership
    if outcome.found() != verdict.member {
        Ok(EXIT_OK)
    } else {
        writeln!(
            err,
            "inconsistent: verdict says member={} but falsifier {} a witness",
            verdict.member,
            if outcome.found() {
                "found"
            } else {
                "did not find"
            }
        )?;
        Ok(EXIT_INCONSISTENT)
    }
}

fn run_envelope(a: EnvelopeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = Exponent::new(a.p)?;
    let rows = sample_envelope(p, a.n, a.grid)?;
    let csv = envelope_csv(&rows, a.n);
    match a.out {
        Some(path) => std::fs::write(path, csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn run_crosscheck(a: CrosscheckArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let params = CrosscheckParams {
        trials: a.trials,
        seed: resolve_seed(a.seed)?,
        p_range: a.p_range,
        n_range: a.n_range,
        search: SearchConfig {
            budget: a.budget,
            ..SearchConfig::default()
        },
    };
    let report = crosscheck(&params)?;
    if a.json {
        writeln!(
            out,
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        )?;
    } else {
        writeln!(out, "{report}")?;
    }
    Ok(if report.disagreements == 0 {
        EXIT_OK
    } else {
        EXIT_DISAGREE
    })
}
