//! Command implementations behind the `hsharp` binary.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid arguments,
//! 3 I/O error.

pub mod record;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hsharp::quadrature::{a_q_oracle, a_q_oracle_mc};
use hsharp::sharp::{c_p_global, global_branch, point_bound, ExponentPair, GlobalBranch};
use hsharp::verification::{run_suite, CheckReport, Suite};
use hsharp::{BallPoint, QuadratureConfig};

use record::{parse_p, write_csv, write_json, OutputRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "hsharp",
    version,
    about = "Sharp pointwise bounds for harmonic hᵖ functions on the unit ball"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// C_p(x), the growth prefactor and the bound at one point
    Eval(EvalArgs),
    /// The global constant C_p
    Const(ConstArgs),
    /// Bounds over a grid of exponents and radii
    Table(TableArgs),
    /// Run verification suites
    Verify(VerifyArgs),
    /// Numerical value of the a_q integral
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub n: usize,
    /// Exponent in (1, ∞), or `inf`
    #[arg(long, value_parser = parse_p)]
    pub p: f64,
    /// Radius |x| in [0, 1)
    #[arg(long, conflicts_with = "x", required_unless_present = "x")]
    pub r: Option<f64>,
    /// Coordinates of x, comma separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ConstArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = parse_p)]
    pub p: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long)]
    pub n: usize,
    /// Comma-separated exponents; `inf` allowed
    #[arg(long, value_delimiter = ',', value_parser = parse_p, required = true)]
    pub p_list: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub r_min: f64,
    #[arg(long)]
    pub r_max: f64,
    /// Number of radii, endpoints included
    #[arg(long)]
    pub r_steps: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// One of all, oracle, kummer, monotone, sharpness, p2, endpoints,
    /// threshold, n3, identities, kernel
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    pub suite: Suite,
    /// Tolerance for every report (`1e-9`) or for one check (`kummer=1e-12`);
    /// repeatable
    #[arg(long)]
    pub tol: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print the reports as a JSON array
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleMethod {
    Quad,
    Mc,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: f64,
    #[arg(long)]
    pub r: f64,
    #[arg(long, value_enum, default_value = "quad")]
    pub method: OracleMethod,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::parse(s).ok_or_else(|| {
        format!(
            "unknown suite `{s}`; expected one of {}",
            Suite::NAMES.join(", ")
        )
    })
}

/// A failed command: exit code and diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: e.to_string(),
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("I/O error: {e}"),
    }
}

fn exponents(p: f64) -> Result<ExponentPair, Failure> {
    ExponentPair::from_p(p).map_err(usage)
}

fn record(n: usize, exps: &ExponentPair, x: &BallPoint) -> Result<OutputRecord, Failure> {
    let res = point_bound(n, exps, x).map_err(usage)?;
    Ok(OutputRecord {
        n,
        p: exps.p(),
        q: exps.q(),
        r: x.radius(),
        c_p_x: res.c_p_x,
        prefactor: res.prefactor,
        bound: res.bound,
        method: res.method.to_string(),
    })
}

fn emit<W: Write>(out: &mut W, format: Format, records: &[OutputRecord]) -> io::Result<()> {
    match format {
        Format::Json => write_json(out, records),
        Format::Csv => write_csv(out, records),
    }
}

pub fn cmd_eval<W: Write>(args: &EvalArgs, out: &mut W) -> Result<(), Failure> {
    let exps = exponents(args.p)?;
    let x = match (&args.x, args.r) {
        (Some(coords), _) => {
            if coords.len() != args.n {
                return Err(usage(format!(
                    "--x has {} coordinates but --n is {}",
                    coords.len(),
                    args.n
                )));
            }
            BallPoint::new(coords.clone()).map_err(usage)?
        }
        (None, Some(r)) => {
            if !(0.0..1.0).contains(&r) {
                return Err(usage(format!("--r {r} must lie in [0, 1)")));
            }
            BallPoint::on_axis(r, args.n).map_err(usage)?
        }
        (None, None) => return Err(usage("one of --r or --x is required")),
    };
    let rec = record(args.n, &exps, &x)?;
    emit(out, args.format, &[rec]).map_err(io_failure)
}

/// The global constant as a record: r is the radius where the supremum
/// is attained, the prefactor is 1 and the method names the branch.
pub fn const_record(n: usize, p: f64) -> Result<OutputRecord, Failure> {
    let exps = exponents(p)?;
    let value = c_p_global(n, &exps).map_err(usage)?;
    let (r, method) = match global_branch(n, exps.q()) {
        GlobalBranch::Unit => (0.0, "global_unit"),
        GlobalBranch::Gamma => (1.0, "global_gamma"),
    };
    Ok(OutputRecord {
        n,
        p: exps.p(),
        q: exps.q(),
        r,
        c_p_x: value,
        prefactor: 1.0,
        bound: value,
        method: method.into(),
    })
}

pub fn cmd_const<W: Write>(args: &ConstArgs, out: &mut W) -> Result<(), Failure> {
    let rec = const_record(args.n, args.p)?;
    emit(out, args.format, &[rec]).map_err(io_failure)
}

/// Rows of `table`: p ascending with `inf` last, r ascending within each p.
pub fn table_records(args: &TableArgs) -> Result<Vec<OutputRecord>, Failure> {
    if !(0.0 <= args.r_min && args.r_min <= args.r_max && args.r_max < 1.0) {
        return Err(usage(format!(
            "radii must satisfy 0 ≤ r-min ≤ r-max < 1 (got {} and {})",
            args.r_min, args.r_max
        )));
    }
    if args.r_steps == 0 {
        return Err(usage("--r-steps must be at least 1"));
    }
    let mut ps = args.p_list.clone();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    let radii: Vec<f64> = if args.r_steps == 1 {
        vec![args.r_min]
    } else {
        let step = (args.r_max - args.r_min) / (args.r_steps - 1) as f64;
        (0..args.r_steps)
            .map(|i| {
                if i == args.r_steps - 1 {
                    args.r_max
                } else {
                    args.r_min + step * i as f64
                }
            })
            .collect()
    };
    let mut rows = Vec::with_capacity(ps.len() * radii.len());
    for p in ps {
        let exps = exponents(p)?;
        for &r in &radii {
            let x = BallPoint::on_axis(r, args.n).map_err(usage)?;
            rows.push(record(args.n, &exps, &x)?);
        }
    }
    Ok(rows)
}

pub fn cmd_table<W: Write>(args: &TableArgs, out: &mut W) -> Result<(), Failure> {
    let rows = table_records(args)?;
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(io_failure)?;
            let mut w = BufWriter::new(file);
            emit(&mut w, args.format, &rows).map_err(io_failure)?;
            w.flush().map_err(io_failure)
        }
        None => emit(out, args.format, &rows).map_err(io_failure),
    }
}

/// Tolerance overrides from `--tol`: a global value and per-check values.
struct Tolerances {
    global: Option<f64>,
    named: Vec<(String, f64)>,
}

fn parse_tolerances(specs: &[String]) -> Result<Tolerances, Failure> {
    let mut global = None;
    let mut named = Vec::new();
    for spec in specs {
        let parse = |s: &str| -> Result<f64, Failure> {
            let v: f64 = s
                .parse()
                .map_err(|_| usage(format!("invalid tolerance `{s}`")))?;
            if v.is_nan() || v < 0.0 {
                return Err(usage(format!("tolerance `{s}` must be nonnegative")));
            }
            Ok(v)
        };
        match spec.split_once('=') {
            Some((name, v)) => named.push((name.to_string(), parse(v)?)),
            None => global = Some(parse(spec)?),
        }
    }
    Ok(Tolerances { global, named })
}

fn fmt_location(report: &CheckReport) -> String {
    report
        .location
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Runs the suite and returns the reports with overrides applied.
pub fn verify_reports(args: &VerifyArgs) -> Result<Vec<CheckReport>, Failure> {
    let Tolerances { global, named } = parse_tolerances(&args.tol)?;
    let reports = run_suite(args.suite, args.seed, global).map_err(|e| Failure {
        code: EXIT_VERIFY,
        message: format!("verification aborted: {e}"),
    })?;
    Ok(reports
        .into_iter()
        .map(
            |r| match named.iter().rev().find(|(name, _)| *name == r.name) {
                Some(&(_, tol)) => r.with_tolerance(tol),
                None => r,
            },
        )
        .collect())
}

pub fn cmd_verify<W: Write>(args: &VerifyArgs, out: &mut W) -> Result<(), Failure> {
    let reports = verify_reports(args)?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    if args.json {
        let text = serde_json::to_string(&reports).map_err(|e| io_failure(io::Error::other(e)))?;
        writeln!(out, "{text}").map_err(io_failure)?;
    } else {
        for r in &reports {
            writeln!(
                out,
                "{} {} residual={:e} tolerance={:e} at {}",
                if r.passed { "PASS" } else { "FAIL" },
                r.name,
                r.worst_residual,
                r.tolerance,
                fmt_location(r)
            )
            .map_err(io_failure)?;
        }
        writeln!(
            out,
            "{} of {} checks passed",
            reports.len() - failed,
            reports.len()
        )
        .map_err(io_failure)?;
    }
    if failed > 0 {
        return Err(Failure {
            code: EXIT_VERIFY,
            message: format!("{failed} check(s) failed"),
        });
    }
    Ok(())
}

pub fn cmd_oracle<W: Write>(args: &OracleArgs, out: &mut W) -> Result<(), Failure> {
    if args.samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let cfg = QuadratureConfig {
        mc_samples: args.samples,
        seed: args.seed,
        ..QuadratureConfig::default()
    };
    let est = match args.method {
        OracleMethod::Quad => a_q_oracle(args.n, args.q, args.r, &cfg),
        OracleMethod::Mc => a_q_oracle_mc(args.n, args.q, args.r, &cfg),
    }
    .map_err(usage)?;
    let text = serde_json::to_string(&est).map_err(|e| io_failure(io::Error::other(e)))?;
    writeln!(out, "{text}").map_err(io_failure)
}

/// Runs a parsed command against `out`.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<(), Failure> {
    match &cli.command {
        Command::Eval(a) => cmd_eval(a, out),
        Command::Const(a) => cmd_const(a, out),
        Command::Table(a) => cmd_table(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
    }
}
