//! The `lacasse` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error.

use std::ffi::OsString;
use std::io::Write;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exact::ExactRational;
use crate::identity::{
    alpha_closed, beta_closed, composition_count, ramanujan_q, s_d_closed, s_d_series,
    telescoping_difference, xi, xi2, xi_scaled_brute, RouteSet, VerificationReport, Verifier,
    DEFAULT_BRUTE_CUTOFF,
};
use crate::series::{geom_power, tree_series, TruncatedSeries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "lacasse",
    version,
    about = "Exact tree-function sums and the identity xi_2(n) = xi(n) + n"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a single exact value.
    Value(ValueArgs),
    /// Check beta(n) - alpha(n) = n^(n+1) over a range of n.
    Verify(VerifyArgs),
    /// Print coefficients of y(z) or (1/(1-y))^d.
    Series(SeriesArgs),
    /// Time the closed-form, series and brute-force routes for s_d.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Alpha,
    Beta,
    #[value(name = "s_d")]
    SD,
    Q,
    Xi,
    Xi2,
    Diff,
}

impl Quantity {
    pub fn label(self) -> &'static str {
        match self {
            Quantity::Alpha => "alpha",
            Quantity::Beta => "beta",
            Quantity::SD => "s_d",
            Quantity::Q => "q",
            Quantity::Xi => "xi",
            Quantity::Xi2 => "xi2",
            Quantity::Diff => "diff",
        }
    }
}

#[derive(Debug, Args)]
pub struct ValueArgs {
    pub quantity: Quantity,
    pub n: u64,
    /// Number of parts for s_d.
    #[arg(long, default_value_t = 2)]
    pub d: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub from: u64,
    #[arg(long)]
    pub to: u64,
    /// Comma-separated routes among closed, brute, series. The closed form
    /// is always included.
    #[arg(long, default_value = "closed,brute")]
    pub routes: String,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Skip the brute-force route once beta needs more composition terms
    /// than this.
    #[arg(long, default_value_t = DEFAULT_BRUTE_CUTOFF)]
    pub brute_cutoff: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    Tree,
    Geom,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    pub which: SeriesKind,
    #[arg(long)]
    pub order: usize,
    /// Power of 1/(1-y) for `geom`.
    #[arg(long, default_value_t = 1)]
    pub d: u32,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub n_max: u64,
    #[arg(long, default_value_t = 3)]
    pub d: u32,
    #[arg(long, default_value_t = 5)]
    pub repetitions: u32,
    #[arg(long, default_value_t = DEFAULT_BRUTE_CUTOFF)]
    pub brute_cutoff: u64,
}

/// One line of machine-readable output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub n: u64,
    pub quantity: String,
    pub d: Option<u32>,
    /// Exact decimal integer, or `p/q` in lowest terms.
    pub value: String,
    pub passed: Option<bool>,
    pub routes: Option<Vec<String>>,
}

impl OutputRecord {
    fn new(n: u64, quantity: &str, value: impl ToString) -> Self {
        Self {
            n,
            quantity: quantity.to_owned(),
            d: None,
            value: value.to_string(),
            passed: None,
            routes: None,
        }
    }

    /// Parse `value` back into an exact rational.
    pub fn exact_value(&self) -> Option<ExactRational> {
        self.value.parse().ok()
    }
}

/// A series coefficient row: `value` is `[z^n]`, `egf` is `n! [z^n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub n: u64,
    pub quantity: String,
    pub d: Option<u32>,
    pub value: String,
    pub egf: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: u64,
    pub d: u32,
    pub closed_ns: u128,
    pub series_ns: u128,
    pub brute_ns: Option<u128>,
    pub agree: bool,
}

/// Run the CLI with the given arguments (including the program name) and
/// return the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_verifier(args, out, err, |v, n| v.verify(n))
}

/// [`run`] with the per-`n` check used by `verify` supplied by the caller.
pub fn run_with_verifier<I, T, F>(args: I, out: &mut dyn Write, err: &mut dyn Write, verify_one: F) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    F: Fn(&Verifier, u64) -> crate::Result<VerificationReport> + Sync,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Value(args) => cmd_value(args, cli.format, out),
        Command::Verify(args) => cmd_verify(args, cli.format, out, err, verify_one),
        Command::Series(args) => cmd_series(args, cli.format, out),
        Command::Bench(args) => cmd_bench(args, cli.format, out),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    // an exact computation contradicted itself
    Failure(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::NonzeroConstantTerm(_) | Error::IndexBeyondOrder { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

type CliResult = std::result::Result<i32, CliError>;

const RECORD_HEADER: &str = "n,quantity,d,value,passed";
const SERIES_HEADER: &str = "n,quantity,d,value,egf";
const BENCH_HEADER: &str = "n,d,closed_ns,series_ns,brute_ns,agree";

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .quote_style(csv::QuoteStyle::Always)
        .from_writer(out)
}

fn opt_to_string<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn write_records(records: &[OutputRecord], format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Plain => {
            for r in records {
                writeln!(out, "{}", r.value)?;
            }
        }
        Format::Json => {
            for r in records {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            writeln!(out, "{RECORD_HEADER}")?;
            let mut w = csv_writer(out);
            for r in records {
                w.write_record([
                    r.n.to_string(),
                    r.quantity.clone(),
                    opt_to_string(&r.d),
                    r.value.clone(),
                    opt_to_string(&r.passed),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_value(args: &ValueArgs, format: Format, out: &mut dyn Write) -> CliResult {
    let n = args.n;
    let value = match args.quantity {
        Quantity::Alpha => alpha_closed(n).to_string(),
        Quantity::Beta => beta_closed(n).to_string(),
        Quantity::SD => s_d_closed(n, args.d)?.to_string(),
        Quantity::Q => ramanujan_q(n)?.to_string(),
        Quantity::Xi => xi(n)?.to_string(),
        Quantity::Xi2 => xi2(n)?.to_string(),
        Quantity::Diff => telescoping_difference(n)?.to_string(),
    };
    let mut record = OutputRecord::new(n, args.quantity.label(), value);
    if args.quantity == Quantity::SD {
        record.d = Some(args.d);
    }
    write_records(&[record], format, out)?;
    Ok(EXIT_OK)
}

/// Per-`n` outcome of a verification run.
type Outcome = std::result::Result<VerificationReport, (u64, Error)>;

fn report_records(report: &VerificationReport) -> Vec<OutputRecord> {
    let routes: Vec<String> = report.routes_compared.iter().map(|r| r.to_string()).collect();
    [
        ("alpha", &report.alpha),
        ("beta", &report.beta),
        ("diff", &report.difference),
    ]
    .into_iter()
    .map(|(q, v)| OutputRecord {
        passed: Some(report.passed),
        routes: Some(routes.clone()),
        ..OutputRecord::new(report.n, q, v)
    })
    .collect()
}

fn failure_record(n: u64, routes: RouteSet) -> OutputRecord {
    OutputRecord {
        passed: Some(false),
        routes: Some(routes.iter().map(|r| r.to_string()).collect()),
        ..OutputRecord::new(n, "diff", beta_closed(n) - alpha_closed(n))
    }
}

fn cmd_verify<F>(
    args: &VerifyArgs,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
    verify_one: F,
) -> CliResult
where
    F: Fn(&Verifier, u64) -> crate::Result<VerificationReport> + Sync,
{
    if args.from < 1 || args.from > args.to {
        return Err(CliError::Usage(format!(
            "invalid range --from {} --to {}: need 1 <= from <= to",
            args.from, args.to
        )));
    }
    if args.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let mut routes: RouteSet = args.routes.parse()?;
    routes.insert(crate::Route::Closed);
    let verifier = Verifier::with_cutoff(routes, args.to, args.brute_cutoff)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    // collect() on an indexed parallel iterator keeps the order of n
    let outcomes: Vec<Outcome> = pool.install(|| {
        (args.from..=args.to)
            .into_par_iter()
            .map(|n| verify_one(&verifier, n).map_err(|e| (n, e)))
            .collect()
    });

    let mut failures = 0u64;
    let mut records = Vec::new();
    for outcome in &outcomes {
        match outcome {
            Ok(report) if report.passed => records.extend(report_records(report)),
            Ok(report) => {
                failures += 1;
                records.extend(report_records(report));
            }
            Err((n, e)) => {
                failures += 1;
                writeln!(err, "n = {n}: {e}")?;
                records.push(failure_record(*n, routes));
            }
        }
    }

    let total = outcomes.len() as u64;
    let summary = format!(
        "verified n = {}..={}: {} passed, {} failed",
        args.from,
        args.to,
        total - failures,
        failures
    );
    match format {
        Format::Plain => {
            for outcome in &outcomes {
                match outcome {
                    Ok(r) => writeln!(
                        out,
                        "n={} alpha={} beta={} diff={} expected={} routes={} passed={}",
                        r.n,
                        r.alpha,
                        r.beta,
                        r.difference,
                        r.expected,
                        r.routes_compared
                            .iter()
                            .map(|r| r.label())
                            .collect::<Vec<_>>()
                            .join(","),
                        r.passed
                    )?,
                    Err((n, _)) => writeln!(out, "n={n} passed=false")?,
                }
            }
            writeln!(out, "{summary}")?;
        }
        Format::Json | Format::Csv => {
            write_records(&records, format, out)?;
            writeln!(err, "{summary}")?;
        }
    }
    Ok(if failures == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_series(args: &SeriesArgs, format: Format, out: &mut dyn Write) -> CliResult {
    if args.d == 0 {
        return Err(CliError::Usage("--d must be at least 1".into()));
    }
    let y = tree_series(args.order)?;
    let (series, label, d): (TruncatedSeries, &str, Option<u32>) = match args.which {
        SeriesKind::Tree => (y, "tree", None),
        SeriesKind::Geom => (geom_power(&y, args.d, args.order)?, "geom", Some(args.d)),
    };
    let rows = (0..=series.order())
        .map(|i| {
            Ok(SeriesRecord {
                n: i as u64,
                quantity: label.to_owned(),
                d,
                value: series.coeff(i)?.to_string(),
                egf: series.egf_coeff(i)?.to_string(),
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    match format {
        Format::Plain => {
            for r in &rows {
                writeln!(out, "{} {} {}", r.n, r.value, r.egf)?;
            }
        }
        Format::Json => {
            for r in &rows {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            writeln!(out, "{SERIES_HEADER}")?;
            let mut w = csv_writer(out);
            for r in &rows {
                w.write_record([
                    r.n.to_string(),
                    r.quantity.clone(),
                    opt_to_string(&r.d),
                    r.value.clone(),
                    r.egf.clone(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort();
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2
    }
}

fn time_median<T>(repetitions: u32, mut f: impl FnMut() -> T) -> (Duration, T) {
    let mut samples = Vec::with_capacity(repetitions as usize);
    let mut last = None;
    for _ in 0..repetitions {
        let start = Instant::now();
        let v = f();
        samples.push(start.elapsed());
        last = Some(v);
    }
    (median(samples), last.expect("at least one repetition"))
}

fn cmd_bench(args: &BenchArgs, format: Format, out: &mut dyn Write) -> CliResult {
    if args.n_max < 1 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    if args.repetitions == 0 {
        return Err(CliError::Usage("--repetitions must be at least 1".into()));
    }
    if args.d == 0 {
        return Err(CliError::Usage("--d must be at least 1".into()));
    }
    let d = args.d;
    let mut rows = Vec::new();
    for n in 1..=args.n_max {
        let (closed_t, closed) = time_median(args.repetitions, || s_d_closed(n, d));
        let (series_t, series) = time_median(args.repetitions, || s_d_series(n, d));
        let closed = closed?;
        let series = series?;
        let mut agree = closed == series;
        let brute_ns = if composition_count(n, u64::from(d)) <= args.brute_cutoff {
            let (brute_t, brute) = time_median(args.repetitions, || xi_scaled_brute(n, d));
            agree &= brute? == closed;
            Some(brute_t.as_nanos())
        } else {
            None
        };
        rows.push(BenchRow {
            n,
            d,
            closed_ns: closed_t.as_nanos(),
            series_ns: series_t.as_nanos(),
            brute_ns,
            agree,
        });
    }
    match format {
        Format::Plain => {
            writeln!(
                out,
                "{:>6} {:>14} {:>14} {:>14} {:>6}",
                "n", "closed_us", "series_us", "brute_us", "agree"
            )?;
            let us = |ns: u128| format!("{:.1}", ns as f64 / 1e3);
            for r in &rows {
                writeln!(
                    out,
                    "{:>6} {:>14} {:>14} {:>14} {:>6}",
                    r.n,
                    us(r.closed_ns),
                    us(r.series_ns),
                    r.brute_ns.map(us).unwrap_or_else(|| "-".into()),
                    if r.agree { "yes" } else { "NO" }
                )?;
            }
        }
        Format::Json => {
            for r in &rows {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            writeln!(out, "{BENCH_HEADER}")?;
            let mut w = csv_writer(out);
            for r in &rows {
                w.write_record([
                    r.n.to_string(),
                    r.d.to_string(),
                    r.closed_ns.to_string(),
                    r.series_ns.to_string(),
                    opt_to_string(&r.brute_ns),
                    r.agree.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}
