//! Command implementations for the `duration-solver` binary.
//!
//! Each command builds a serializable record and renders it as JSON (stable
//! key order, full precision) or CSV (header row, LF line endings). The
//! `table` command rounds to 6 decimals for display.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::asymptotic;
use crate::error::Error;
use crate::exact::{duration_pmf, policy_value, solve, Horizon, PayoffTable, PolicyThresholds};
use crate::simulate::monte_carlo;

/// Horizons listed in the reference table.
pub const DEFAULT_TABLE_NS: [usize; 13] = [10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 200, 500, 1000];

/// Largest horizon the CLI will allocate tables for.
pub const MAX_CLI_N: usize = 10_000_000;

/// Environment variable capping simulator threads.
pub const THREADS_ENV: &str = "DURATION_SOLVER_THREADS";

#[derive(Debug, Parser)]
#[command(name = "duration-solver", version, about = "Best-or-second-best duration secretary problem")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal thresholds and value by backward induction.
    Solve(SolveArgs),
    /// Thresholds and values for a list of horizons plus the limit row.
    Table(TableArgs),
    /// Monte Carlo estimate of a threshold rule.
    Simulate(SimulateArgs),
    /// Distribution of the candidacy end time.
    Pmf(PmfArgs),
    /// Limit constants a, b and the limit value.
    Asymptotic(AsymptoticArgs),
}

#[derive(Debug, Clone, Copy, Default, Args)]
pub struct FormatArgs {
    /// JSON output.
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// CSV output.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FormatArgs {
    fn resolve(self, default: Format) -> Format {
        match (self.json, self.csv) {
            (true, _) => Format::Json,
            (_, true) => Format::Csv,
            _ => default,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub n: usize,
    /// Write per-time rows (k, phi1, phi2, continuation, stop1, stop2) as CSV.
    #[arg(long, value_name = "PATH")]
    pub table_out: Option<PathBuf>,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Comma-separated horizons.
    #[arg(long)]
    pub ns: Option<String>,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    /// Defaults to the optimal k1.
    #[arg(long)]
    pub k1: Option<usize>,
    /// Defaults to the optimal k2.
    #[arg(long)]
    pub k2: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Args)]
pub struct PmfArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub i: usize,
    #[arg(long)]
    pub rank: usize,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Args)]
pub struct AsymptoticArgs {
    /// Also solve this horizon exactly and report k1/N, k2/N and v_N.
    #[arg(long)]
    pub fine_n: Option<usize>,
    #[command(flatten)]
    pub format: FormatArgs,
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Numeric(_) => CliError::Numeric(err.to_string()),
            _ => CliError::Usage(err.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(err))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveRecord {
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveRow {
    pub k: usize,
    pub phi1: f64,
    pub phi2: f64,
    pub continuation: f64,
    pub stop1: bool,
    pub stop2: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateRecord {
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    pub std_error: f64,
    pub exact: f64,
    /// `None` when the standard error is zero.
    pub z_score: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PmfRow {
    pub k: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PmfRecord {
    pub n: usize,
    pub i: usize,
    pub rank: usize,
    pub rows: Vec<PmfRow>,
    pub survive: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticRecord {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub residual_b: f64,
    pub residual_a: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fine_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k1_over_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k2_over_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_n: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRecord {
    pub rows: Vec<SolveRecord>,
    pub asymptotic: asymptotic::AsymptoticSolution,
}

/// Parses a comma-separated list of horizons, each at least 2.
pub fn parse_ns_list(input: &str) -> Result<Vec<usize>, CliError> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(CliError::Usage("empty horizon list".into()));
    }
    trimmed
        .split(',')
        .map(|item| {
            let item = item.trim();
            let n: usize = item
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid horizon {item:?}")))?;
            checked_horizon(n).map(Horizon::n)
        })
        .collect()
}

fn checked_horizon(n: usize) -> Result<Horizon, CliError> {
    if n > MAX_CLI_N {
        return Err(CliError::Usage(format!("horizon {n} exceeds the limit {MAX_CLI_N}")));
    }
    Ok(Horizon::new(n)?)
}

/// Rounds half-to-even at 6 decimals for display.
pub fn round6(x: f64) -> String {
    format!("{x:.6}")
}

fn to_json<T: Serialize>(record: &T) -> String {
    let mut out = serde_json::to_string(record).expect("records serialize");
    out.push('\n');
    out
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn csv_finish(writer: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = writer.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_records<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv_writer();
    for row in rows {
        w.serialize(row)?;
    }
    csv_finish(w)
}

/// Runs a parsed command and returns what it prints on stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Table(args) => cmd_table(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Pmf(args) => cmd_pmf(args),
        Command::Asymptotic(args) => cmd_asymptotic(args),
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<String, CliError> {
    let horizon = checked_horizon(args.n)?;
    let result = solve(horizon);
    let record = SolveRecord {
        n: horizon.n(),
        k1: result.thresholds.k1,
        k2: result.thresholds.k2,
        value: result.value,
    };
    if let Some(path) = &args.table_out {
        let table = PayoffTable::new(horizon);
        let rows: Vec<SolveRow> = (1..=horizon.n())
            .map(|k| SolveRow {
                k,
                phi1: table.best[k],
                phi2: table.second[k],
                continuation: result.continuation(k),
                stop1: result.thresholds.stops_at(k, 1),
                stop2: k >= 2 && result.thresholds.stops_at(k, 2),
            })
            .collect();
        std::fs::write(path, csv_records(&rows)?)?;
    }
    match args.format.resolve(Format::Json) {
        Format::Json => Ok(to_json(&record)),
        Format::Csv => csv_records(&[record]),
    }
}

pub fn cmd_table(args: &TableArgs) -> Result<String, CliError> {
    let ns = match &args.ns {
        Some(list) => parse_ns_list(list)?,
        None => DEFAULT_TABLE_NS.to_vec(),
    };
    let rows: Vec<SolveRecord> = ns
        .iter()
        .map(|&n| {
            let r = solve(Horizon::new(n).expect("validated by parse_ns_list"));
            SolveRecord { n, k1: r.thresholds.k1, k2: r.thresholds.k2, value: r.value }
        })
        .collect();
    let limit = asymptotic::solve()?;
    match args.format.resolve(Format::Csv) {
        Format::Json => Ok(to_json(&TableRecord { rows, asymptotic: limit })),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["N", "k1", "k2", "v_N"])?;
            for row in &rows {
                w.write_record([
                    row.n.to_string(),
                    row.k1.to_string(),
                    row.k2.to_string(),
                    round6(row.value),
                ])?;
            }
            w.write_record(["inf".to_string(), round6(limit.a), round6(limit.b), round6(limit.value)])?;
            csv_finish(w)
        }
    }
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<String, CliError> {
    let horizon = checked_horizon(args.n)?;
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let optimal = if args.k1.is_none() || args.k2.is_none() {
        Some(solve(horizon).thresholds)
    } else {
        None
    };
    let k1 = args.k1.or(optimal.map(|t| t.k1)).expect("k1 resolved");
    let k2 = args.k2.or(optimal.map(|t| t.k2)).expect("k2 resolved");
    let policy = PolicyThresholds::new(k1, k2)?;
    let estimate = monte_carlo(horizon, policy, args.trials, args.seed)?;
    let exact = policy_value(policy, horizon)?;
    let z_score = (estimate.std_error > 0.0).then(|| (estimate.mean - exact) / estimate.std_error);
    let record = SimulateRecord {
        n: horizon.n(),
        k1,
        k2,
        trials: args.trials,
        seed: args.seed,
        mean: estimate.mean,
        std_error: estimate.std_error,
        exact,
        z_score,
    };
    match args.format.resolve(Format::Json) {
        Format::Json => Ok(to_json(&record)),
        Format::Csv => csv_records(&[record]),
    }
}

pub fn cmd_pmf(args: &PmfArgs) -> Result<String, CliError> {
    let horizon = checked_horizon(args.n)?;
    let pmf = duration_pmf(args.i, args.rank, horizon)?;
    let n = horizon.n();
    let rows: Vec<PmfRow> = pmf
        .iter()
        .filter(|&(k, _)| k <= n)
        .map(|(k, probability)| PmfRow { k, probability })
        .collect();
    let survive = pmf.survival();
    match args.format.resolve(Format::Csv) {
        Format::Json => Ok(to_json(&PmfRecord { n, i: args.i, rank: args.rank, rows, survive })),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["k", "probability"])?;
            for row in &rows {
                w.write_record([row.k.to_string(), row.probability.to_string()])?;
            }
            w.write_record(["survive".to_string(), survive.to_string()])?;
            csv_finish(w)
        }
    }
}

pub fn cmd_asymptotic(args: &AsymptoticArgs) -> Result<String, CliError> {
    let limit = asymptotic::solve()?;
    let mut record = AsymptoticRecord {
        a: limit.a,
        b: limit.b,
        value: limit.value,
        residual_b: asymptotic::residual_b(limit.b)?,
        residual_a: asymptotic::residual_a(limit.a, limit.b)?,
        fine_n: None,
        k1_over_n: None,
        k2_over_n: None,
        v_n: None,
    };
    if let Some(n) = args.fine_n {
        let horizon = checked_horizon(n)?;
        let r = solve(horizon);
        let nf = n as f64;
        record.fine_n = Some(n);
        record.k1_over_n = Some(r.thresholds.k1 as f64 / nf);
        record.k2_over_n = Some(r.thresholds.k2 as f64 / nf);
        record.v_n = Some(r.value);
    }
    match args.format.resolve(Format::Json) {
        Format::Json => Ok(to_json(&record)),
        Format::Csv => {
            let mut header = vec!["a", "b", "value", "residual_b", "residual_a"];
            let mut values = vec![record.a, record.b, record.value, record.residual_b, record.residual_a];
            if let (Some(k1), Some(k2), Some(v)) = (record.k1_over_n, record.k2_over_n, record.v_n) {
                header.extend(["k1_over_n", "k2_over_n", "v_n"]);
                values.extend([k1, k2, v]);
            }
            let mut line = header.join(",");
            line.push('\n');
            let body: Vec<String> = values.iter().map(f64::to_string).collect();
            let _ = writeln!(line, "{}", body.join(","));
            Ok(line)
        }
    }
}

/// Thread cap from [`THREADS_ENV`], if set.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(Some(t)),
            _ => Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))),
        },
        Err(_) => Ok(None),
    }
}
