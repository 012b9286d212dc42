//! Command-line front end: `compute`, `table`, `verify` and `sum`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 resource cap exceeded.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::entropy::{
    as_integer_order, entropy_in, uncertainty_sum, ClosedForm, EntropyError, Fault, Provenance, RenyiBreakdown,
    UncertaintySum,
};
use crate::exactnum::{int, parse_rational, DEFAULT_PRECISION};
use crate::hyperfun::HyperError;
use crate::oracle::{self, renyi_float, OracleError, Space, SweepReport};
use crate::states::HydrogenicState;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hydrenyi", version, about = "Exact Rényi entropies of D-dimensional hydrogenic states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Bits of working precision when rendering exact values as floats.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Position,
    Momentum,
    Both,
}

impl SpaceArg {
    fn spaces(self) -> Vec<Space> {
        match self {
            SpaceArg::Position => vec![Space::Position],
            SpaceArg::Momentum => vec![Space::Momentum],
            SpaceArg::Both => vec![Space::Position, Space::Momentum],
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entropies of one state, e.g. `compute D=3,n=2,mu=1,0 --q 2`.
    Compute(ComputeArgs),
    /// The 3-D tables at q = 2, Z = 1 for n <= 3.
    Table(TableArgs),
    /// Closed forms against the exact oracle over every state up to the bounds.
    Verify(VerifyArgs),
    /// Position–momentum uncertainty sum at conjugate orders.
    Sum(SumArgs),
}

#[derive(Debug, Args)]
struct ComputeArgs {
    /// State literal `D=..,n=..,mu=..,..,Z=..`.
    state: String,
    #[arg(long, default_value = "2")]
    q: String,
    #[arg(long, value_enum, default_value_t = SpaceArg::Position)]
    space: SpaceArg,
    /// Evaluate with the float oracle, allowing any real q > 0, q != 1.
    #[arg(long)]
    float: bool,
    /// Also compare against the exact and float oracles.
    #[arg(long)]
    check: bool,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_enum, default_value_t = SpaceArg::Position)]
    space: SpaceArg,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 5)]
    dmax: u32,
    #[arg(long, default_value_t = 4)]
    nmax: u32,
    /// Comma-separated integer orders.
    #[arg(long, default_value = "2,3", value_delimiter = ',')]
    q: Vec<u32>,
    /// Emit only the summary, without per-state reports.
    #[arg(long)]
    summary: bool,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Args)]
struct SumArgs {
    state: String,
    #[arg(long, default_value = "2")]
    q: String,
}

/// Comparison of a printed value with the oracles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residuals {
    pub oracle_exact_equal: Option<bool>,
    pub oracle_float_residual: Option<f64>,
}

/// One printed result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub state: String,
    pub space: Space,
    pub q: String,
    pub part: &'static str,
    pub exact: Option<String>,
    pub value: f64,
    pub provenance: Provenance,
    pub error_estimate: Option<f64>,
    pub residuals: Option<Residuals>,
}

#[derive(Debug, Serialize)]
struct CsvRecord<'a> {
    state: &'a str,
    space: Space,
    q: &'a str,
    part: &'a str,
    exact: Option<&'a str>,
    value: f64,
    provenance: Provenance,
    error_estimate: Option<f64>,
    oracle_exact_equal: Option<bool>,
    oracle_float_residual: Option<f64>,
}

impl<'a> From<&'a OutputRecord> for CsvRecord<'a> {
    fn from(r: &'a OutputRecord) -> Self {
        CsvRecord {
            state: &r.state,
            space: r.space,
            q: &r.q,
            part: r.part,
            exact: r.exact.as_deref(),
            value: r.value,
            provenance: r.provenance,
            error_estimate: r.error_estimate,
            oracle_exact_equal: r.residuals.as_ref().and_then(|x| x.oracle_exact_equal),
            oracle_float_residual: r.residuals.as_ref().and_then(|x| x.oracle_float_residual),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCell {
    pub n: u32,
    pub l: u32,
    pub m: i64,
    pub state: String,
    pub exact: String,
    pub value: f64,
}

#[derive(Debug, Serialize)]
struct TableOutput {
    space: Space,
    q: u32,
    z: String,
    cells: Vec<TableCell>,
}

#[derive(Debug, Serialize)]
struct SumOutput<'a> {
    state: String,
    #[serde(flatten)]
    sum: &'a UncertaintySum,
}

#[derive(Debug, Serialize)]
struct VerifyCsvRow<'a> {
    state: &'a str,
    q: u32,
    space: Space,
    radial_equal: bool,
    angular_equal: bool,
    total_equal: bool,
    entropy: &'a str,
    value: f64,
    float_residual: f64,
    elapsed_ms: f64,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<EntropyError> for Failure {
    fn from(e: EntropyError) -> Self {
        let code = match &e {
            EntropyError::Hyper(HyperError::TermCap { .. }) => EXIT_RESOURCE,
            EntropyError::State(_) | EntropyError::Domain(_) => EXIT_USAGE,
            EntropyError::Oracle(OracleError::State(_) | OracleError::Domain(_)) => EXIT_USAGE,
            _ => EXIT_VERIFY_FAILED,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::from(EntropyError::from(e))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_VERIFY_FAILED, message: format!("write failed: {e}") }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        io_failure(e)
    }
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_VERIFY_FAILED, message: format!("write failed: {e}") }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`], writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => compute(a, &cli, out),
        Command::Table(a) => table(a, &cli, out),
        Command::Verify(a) => verify(a, &cli, out),
        Command::Sum(a) => sum(a, &cli, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn parse_state(s: &str) -> Result<HydrogenicState, Failure> {
    s.parse().map_err(|e: crate::states::StateError| Failure::usage(e.to_string()))
}

/// Parses `2`, `2/3` or `0.75` as a real order.
fn parse_order(s: &str) -> Result<f64, Failure> {
    let v = match parse_rational(s) {
        Some(r) => num_traits::ToPrimitive::to_f64(&r).unwrap_or(f64::NAN),
        None => s.trim().parse::<f64>().map_err(|_| Failure::usage(format!("cannot parse q = {s:?}")))?,
    };
    if !(v > 0.0 && v.is_finite()) {
        return Err(Failure::usage(format!("q must be a positive real, got {s}")));
    }
    if v == 1.0 {
        return Err(Failure::usage("q = 1 is the Shannon limit, not a Rényi order handled here"));
    }
    Ok(v)
}

fn emit_records(records: &[OutputRecord], format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, records).map_err(io_failure)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(CsvRecord::from(r)).map_err(io_failure)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn breakdown_records(
    state: &HydrogenicState,
    space: Space,
    b: &RenyiBreakdown,
    precision: usize,
) -> Vec<OutputRecord> {
    [("radial", &b.radial), ("angular", &b.angular), ("total", &b.total)]
        .into_iter()
        .map(|(part, v)| OutputRecord {
            state: state.to_string(),
            space,
            q: v.q.to_string(),
            part,
            exact: Some(v.to_string()),
            value: v.value_at(precision),
            provenance: Provenance::ClosedForm,
            error_estimate: None,
            residuals: None,
        })
        .collect()
}

fn compute(a: &ComputeArgs, cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let state = parse_state(&a.state)?;
    let q = parse_order(&a.q)?;
    let mut records = Vec::new();
    for space in a.space.spaces() {
        if a.float {
            let est = renyi_float(&state, q, space)?;
            records.push(OutputRecord {
                state: state.to_string(),
                space,
                q: a.q.clone(),
                part: "total",
                exact: None,
                value: est.value,
                provenance: Provenance::OracleFloat,
                error_estimate: Some(est.error),
                residuals: None,
            });
            continue;
        }
        let qi = as_integer_order(q).ok_or_else(|| {
            Failure::usage(format!("exact entropies need an integer q >= 2 (got {}); use --float", a.q))
        })?;
        let b = entropy_in(space, &state, qi)?;
        let mut recs = breakdown_records(&state, space, &b, cli.precision);
        if a.check {
            let oracle_w = match space {
                Space::Position => oracle::position_w_exact(&state, qi)?,
                Space::Momentum => oracle::momentum_w_exact(&state, qi)?,
            };
            let fl = renyi_float(&state, q, space)?.value;
            let total = recs.last_mut().expect("three parts");
            total.residuals = Some(Residuals {
                oracle_exact_equal: Some(oracle_w == b.total.w),
                oracle_float_residual: Some((fl - total.value).abs() / total.value.abs().max(1.0)),
            });
        }
        records.extend(recs);
    }
    emit_records(&records, cli.format, out)?;
    Ok(EXIT_OK)
}

/// Cells of the 3-D tables: `n ≤ 3`, `0 ≤ m ≤ l < n`, q = 2, Z = 1.
pub fn table_cells(space: Space, precision: usize) -> Result<Vec<TableCell>, EntropyError> {
    let mut cells = Vec::new();
    for l in 0..3u32 {
        for m in 0..=l as i64 {
            for n in (l + 1)..=3 {
                let state = HydrogenicState::new(3, n, vec![l as i64, m], int(1))?;
                let v = entropy_in(space, &state, 2)?.total;
                cells.push(TableCell {
                    n,
                    l,
                    m,
                    state: state.to_string(),
                    exact: v.to_string(),
                    value: v.value_at(precision),
                });
            }
        }
    }
    cells.sort_by_key(|c| (c.n, c.l, c.m));
    Ok(cells)
}

fn table(a: &TableArgs, cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let spaces = a.space.spaces();
    let mut tables = Vec::new();
    for space in spaces {
        tables.push(TableOutput {
            space,
            q: 2,
            z: "1".into(),
            cells: table_cells(space, cli.precision)?,
        });
    }
    match cli.format {
        Format::Json => {
            if tables.len() == 1 {
                serde_json::to_writer_pretty(&mut *out, &tables[0]).map_err(io_failure)?;
            } else {
                serde_json::to_writer_pretty(&mut *out, &tables).map_err(io_failure)?;
            }
            writeln!(out)?;
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                space: Space,
                n: u32,
                l: u32,
                m: i64,
                exact: &'a str,
                value: f64,
            }
            let mut w = csv::Writer::from_writer(out);
            for t in &tables {
                for c in &t.cells {
                    w.serialize(Row { space: t.space, n: c.n, l: c.l, m: c.m, exact: &c.exact, value: c.value })
                        .map_err(io_failure)?;
                }
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn write_sweep(report: &SweepReport, summary: bool, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Json => {
            if summary {
                let mut r = report.clone();
                r.reports.clear();
                serde_json::to_writer_pretty(&mut *out, &r).map_err(io_failure)?;
            } else {
                serde_json::to_writer_pretty(&mut *out, report).map_err(io_failure)?;
            }
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in &report.reports {
                for s in &r.spaces {
                    w.serialize(VerifyCsvRow {
                        state: &r.state,
                        q: r.q,
                        space: s.space,
                        radial_equal: s.radial.equal,
                        angular_equal: s.angular.equal,
                        total_equal: s.total_equal,
                        entropy: &s.entropy,
                        value: s.value,
                        float_residual: s.float_residual,
                        elapsed_ms: r.elapsed_ms,
                    })
                    .map_err(io_failure)?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn verify(a: &VerifyArgs, cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    if a.dmax < 2 || a.nmax < 1 {
        return Err(Failure::usage("verify needs --dmax >= 2 and --nmax >= 1"));
    }
    if a.q.is_empty() || a.q.iter().any(|&q| q < 2) {
        return Err(Failure::usage("verify orders must be integers >= 2"));
    }
    let forms = if a.inject_fault {
        ClosedForm::with_fault(Fault::RadialPochhammer)
    } else {
        ClosedForm::default()
    };
    let report = oracle::verify_sweep(a.dmax, a.nmax, &a.q, &forms)?;
    write_sweep(&report, a.summary, cli.format, out)?;
    Ok(if report.all_equal { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn sum(a: &SumArgs, cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let state = parse_state(&a.state)?;
    let q = parse_order(&a.q)?;
    if q <= 0.5 {
        return Err(Failure::usage(format!("the conjugate order needs q > 1/2, got {}", a.q)));
    }
    let s = uncertainty_sum(&state, q)?;
    let record = SumOutput { state: state.to_string(), sum: &s };
    match cli.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &record).map_err(io_failure)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["state", "q", "p", "position", "momentum", "sum", "bound", "margin", "satisfied"])?;
            w.write_record([
                record.state.clone(),
                s.q.to_string(),
                s.p.to_string(),
                s.position.to_string(),
                s.momentum.to_string(),
                s.sum.to_string(),
                s.bound.to_string(),
                s.margin.to_string(),
                s.satisfied.to_string(),
            ])?;
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["hydrenyi"];
        full.extend_from_slice(args);
        let code = run_with(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn order_parsing() {
        assert_eq!(parse_order("2").unwrap(), 2.0);
        assert!((parse_order("2/3").unwrap() - 2.0 / 3.0).abs() < 1e-16);
        assert_eq!(parse_order("0.75").unwrap(), 0.75);
        assert_eq!(parse_order("1").unwrap_err().code, EXIT_USAGE);
        assert_eq!(parse_order("-2").unwrap_err().code, EXIT_USAGE);
        assert_eq!(parse_order("two").unwrap_err().code, EXIT_USAGE);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&[]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["compute", "D=3,n=1,mu=0", "--q", "2"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["compute", "D=3,n=1,mu=0,0", "--q", "1"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["compute", "D=3,n=1,mu=0,0", "--q", "5/2"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["sum", "D=3,n=1,mu=0,0", "--q", "1/2"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["compute", "D=3,n=1,mu=0,0", "--format", "xml"]).0, EXIT_USAGE);
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("compute"));
    }

    #[test]
    fn failure_codes() {
        let e = EntropyError::Hyper(HyperError::TermCap { terms: 10, cap: 1 });
        assert_eq!(Failure::from(e).code, EXIT_RESOURCE);
        let e = EntropyError::Domain("x".into());
        assert_eq!(Failure::from(e).code, EXIT_USAGE);
    }
}
