//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input or usage, 3 computation failure
//! (overflow, resource budget), 4 I/O.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bounds::{verify_instance, BoundReport};
use crate::denumerant::Limits;
use crate::error::{ErrorKind, Result};
use crate::experiments::{run_experiment, SampleConfig, TailPoint, DEFAULT_D_GRID};
use crate::frobenius::{self, FrobeniusResult, Method};
use crate::instance::{validate_instance, InputVector, Multiplicity};
use crate::lattice::{covering_radius_identity, integral_covering_radius, CoveringRadiusResult};
use crate::par::{self, Execution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "frobgeom", version, about = "Generalized Frobenius numbers and Kannan-simplex covering radii")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Apery,
    Naive,
    Closed,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Apery => Method::Apery,
            MethodArg::Naive => Method::NaiveScan,
            MethodArg::Closed => Method::ClosedForm2,
        }
    }
}

#[derive(Debug, clap::Args)]
struct InstanceArgs {
    /// Comma-separated entries, e.g. 3,5,7.
    #[arg(long = "a", value_delimiter = ',', required = true, allow_hyphen_values = true)]
    a: Vec<i128>,
    /// Required number of representations.
    #[arg(long = "s", default_value_t = 1, allow_hyphen_values = true)]
    s: i128,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the s-Frobenius number.
    Frobenius {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Apery)]
        method: MethodArg,
    },
    /// Integral and continuous s-covering radius of the Kannan simplex.
    Covering {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Also check both covering-radius identities against F_s.
        #[arg(long)]
        check_identity: bool,
    },
    /// Evaluate every bound exactly.
    Bounds {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Sample G(T) and estimate mean and tail of X_s.
    Experiment {
        #[arg(long = "n")]
        n: usize,
        #[arg(long = "T")]
        t: i128,
        #[arg(long = "s", default_value_t = 1)]
        s: i128,
        #[arg(long = "N")]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tail thresholds, comma-separated and strictly increasing.
        #[arg(long, value_delimiter = ',')]
        d_grid: Option<Vec<f64>>,
        /// JSON report path; CSV and tail files are written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (output does not depend on this).
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Debug, Serialize)]
struct Envelope<I, R> {
    command: &'static str,
    input: I,
    result: R,
    timing_ms: f64,
    version: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceEcho {
    pub a: Vec<i128>,
    pub s: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub frobenius: i128,
    /// Integral radius equals `F_s + a_n`.
    pub integral_matches: bool,
    /// Continuous minus integral radius equals `a_1 + ... + a_{n-1}`.
    pub shift_matches: bool,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringPayload {
    pub integral: CoveringRadiusResult,
    pub continuous: i128,
    pub identity_check: Option<IdentityCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub config: SampleConfig,
    pub mean_x: f64,
    pub tail: Vec<TailPoint>,
    pub sum_term_mean: f64,
    pub unit_entry_count: u64,
    pub files: Vec<PathBuf>,
}

fn emit<I: Serialize, R: Serialize>(
    out: &mut dyn Write,
    command: &'static str,
    input: I,
    result: R,
    started: Instant,
) -> Result<()> {
    let env = Envelope {
        command,
        input,
        result,
        timing_ms: started.elapsed().as_secs_f64() * 1e3,
        version: env!("CARGO_PKG_VERSION"),
    };
    serde_json::to_writer_pretty(&mut *out, &env)?;
    writeln!(out)?;
    Ok(())
}

fn csv_out(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().flexible(true).from_writer(out)
}

fn join(a: &[i128]) -> String {
    a.iter().map(i128::to_string).collect::<Vec<_>>().join(",")
}

fn instance(args: &InstanceArgs) -> Result<(InputVector, Multiplicity, InstanceEcho)> {
    let (a, s) = validate_instance(&args.a, args.s)?;
    Ok((a, s, InstanceEcho { a: args.a.clone(), s: args.s }))
}

fn execute(cli: Cli, out: &mut dyn Write, limits: &Limits) -> Result<()> {
    let started = Instant::now();
    let format = cli.format;
    match cli.command {
        Command::Frobenius { instance: args, method } => {
            let (a, s, echo) = instance(&args)?;
            let r: FrobeniusResult = frobenius::compute(&a, s, method.into(), limits)?;
            match format {
                Format::Json => emit(out, "frobenius", echo, r, started)?,
                Format::Csv => {
                    let mut w = csv_out(out);
                    w.write_record(["a", "s", "value", "method", "search_bound_used"])?;
                    w.write_record([
                        join(a.entries()),
                        s.to_string(),
                        r.value.to_string(),
                        format!("{:?}", r.method),
                        r.search_bound_used.to_string(),
                    ])?;
                    w.flush()?;
                }
            }
        }
        Command::Covering {
            instance: args,
            check_identity,
        } => {
            let (a, s, echo) = instance(&args)?;
            let integral = integral_covering_radius(&a, s, limits, Execution::default())?;
            let continuous = covering_radius_identity(&a, s, limits)?;
            let identity_check = if check_identity {
                let f = frobenius::frobenius(&a, s, limits)?;
                let shift: i128 = a.prefix().iter().sum();
                let integral_matches = integral.value == f + a.last();
                let shift_matches = continuous - integral.value == shift;
                Some(IdentityCheck {
                    frobenius: f,
                    integral_matches,
                    shift_matches,
                    consistent: integral_matches && shift_matches,
                })
            } else {
                None
            };
            let payload = CoveringPayload {
                integral,
                continuous,
                identity_check,
            };
            match format {
                Format::Json => emit(out, "covering", echo, payload, started)?,
                Format::Csv => {
                    let mut w = csv_out(out);
                    w.write_record(["a", "s", "integral", "continuous", "consistent"])?;
                    w.write_record([
                        join(a.entries()),
                        s.to_string(),
                        payload.integral.value.to_string(),
                        payload.continuous.to_string(),
                        payload
                            .identity_check
                            .map_or(String::new(), |c| c.consistent.to_string()),
                    ])?;
                    w.flush()?;
                }
            }
        }
        Command::Bounds { instance: args } => {
            let (a, s, echo) = instance(&args)?;
            let reports: Vec<BoundReport> = verify_instance(&a, s, limits)?;
            match format {
                Format::Json => emit(out, "bounds", echo, reports, started)?,
                Format::Csv => {
                    let mut w = csv_out(out);
                    w.write_record(["bound", "status", "relation", "lhs", "rhs", "equality", "note"])?;
                    for r in &reports {
                        w.write_record([
                            variant_name(&r.bound),
                            variant_name(&r.status),
                            variant_name(&r.relation),
                            r.lhs.map_or(String::new(), |v| v.to_string()),
                            r.rhs.map_or(String::new(), |v| v.to_string()),
                            r.equality.to_string(),
                            r.note.clone().unwrap_or_default(),
                        ])?;
                    }
                    w.flush()?;
                }
            }
        }
        Command::Experiment {
            n,
            t,
            s,
            samples,
            seed,
            d_grid,
            out: path,
            jobs,
        } => {
            let mut config = SampleConfig::new(n, t, Multiplicity::new(s)?, samples, seed);
            config.d_grid = d_grid.unwrap_or_else(|| DEFAULT_D_GRID.to_vec());
            config.validate()?;
            let report = par::with_jobs(jobs, || run_experiment(&config, limits, Execution::Parallel))?;
            let files = match &path {
                Some(p) => report.write_files(p)?.to_vec(),
                None => Vec::new(),
            };
            let summary = ExperimentSummary {
                config: report.config.clone(),
                mean_x: report.mean_x,
                tail: report.tail.clone(),
                sum_term_mean: report.sum_term_mean,
                unit_entry_count: report.unit_entry_count,
                files,
            };
            match format {
                Format::Json => emit(out, "experiment", &config, summary, started)?,
                Format::Csv => {
                    let mut w = csv_out(out);
                    w.write_record(["statistic", "value"])?;
                    w.write_record(["mean_x".to_string(), summary.mean_x.to_string()])?;
                    w.write_record(["sum_term_mean".to_string(), summary.sum_term_mean.to_string()])?;
                    for tp in &summary.tail {
                        w.write_record([format!("tail_ge_{}", tp.d), tp.p.to_string()])?;
                    }
                    w.flush()?;
                }
            }
        }
    }
    Ok(())
}

/// snake_case name of a unit-variant enum, via its serde representation.
fn variant_name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Input => EXIT_INPUT,
        ErrorKind::Compute => EXIT_COMPUTE,
        ErrorKind::Io => EXIT_IO,
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let limits = match Limits::from_env() {
        Ok(l) => l,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(e.kind());
        }
    };
    match execute(cli, out, &limits) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(e.kind())
        }
    }
}
