//! The `wyd` command line: argument parsing, command dispatch and output
//! rendering. [`run`] executes one invocation against arbitrary output
//! streams and returns the process exit code.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::ffi::OsString;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wyd_core::io::{parse_density, parse_observable, sci12};
use wyd_core::linalg::{Alpha, DensityMatrix, HermitianOperator, Tolerances};
use wyd_core::measures::{decompose_variance, UncertaintyComponents};
use wyd_core::relations::{
    check_relation, golden_counterexample_report, GoldenReport, RelationId, RelationReport,
    DEFAULT_TOL_REL, GOLDEN_ALPHA,
};
use wyd_core::sampling::{search_violations, sweep_alpha, SearchSpec, SweepRow};
use wyd_core::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

/// Output and diagnostic streams of one invocation.
pub struct Streams<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

#[derive(Parser)]
#[command(name = "wyd", version, about = "Wigner-Yanase-Dyson uncertainty relations for mixed states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the two-level counterexample and its corrected bound
    VerifyPaper {
        #[arg(long, default_value_t = GOLDEN_ALPHA)]
        alpha: f64,
        /// Replace every reference tolerance with this value
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decompose the variance of one observable: V, I, J, U and V - I
    Measure {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long, default_value_t = GOLDEN_ALPHA)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check one uncertainty relation; exits 1 when it is violated
    Check {
        #[arg(long)]
        relation: RelationId,
        #[command(flatten)]
        inputs: PairInputs,
        #[arg(long, default_value_t = GOLDEN_ALPHA)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_TOL_REL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Tabulate both sides of the I*J relations over an alpha grid
    Sweep {
        #[command(flatten)]
        inputs: PairInputs,
        /// Comma list (0.1,0.5) or range start:stop:step
        #[arg(long, default_value = "0.05:0.95:0.05")]
        grid: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Search random instances for violations; exits 1 when any are found
    Search {
        #[arg(long)]
        relation: RelationId,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Comma-separated dimensions to draw from
        #[arg(long, default_value = "2,3,4,5")]
        dims: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Single alpha; ignored when --grid is given
        #[arg(long, default_value_t = GOLDEN_ALPHA)]
        alpha: f64,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TOL_REL)]
        tol: f64,
        /// JSON-lines file receiving one record per violation
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
struct PairInputs {
    #[arg(long)]
    rho: PathBuf,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Numerical(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ConvergenceFailure(_)
            | Error::NumericalFailure { .. }
            | Error::CrossCheck { .. }
            | Error::NonImaginaryResult(_)
            | Error::GoldenMismatch { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load_density(path: &Path) -> Result<DensityMatrix, Failure> {
    parse_density(&read(path)?, Tolerances::default())
        .map_err(|e| with_path(path, e))
}

fn load_observable(path: &Path) -> Result<HermitianOperator, Failure> {
    parse_observable(&read(path)?, Tolerances::default())
        .map_err(|e| with_path(path, e))
}

fn with_path(path: &Path, e: Error) -> Failure {
    match Failure::from(e) {
        Failure::Invalid(m) => Failure::Invalid(format!("{}: {m}", path.display())),
        Failure::Numerical(m) => Failure::Numerical(format!("{}: {m}", path.display())),
    }
}

fn parse_alpha(value: f64) -> Result<Alpha, Failure> {
    Alpha::new(value).map_err(Failure::from)
}

/// Rounds grid points to 12 significant digits so `0.05:0.95:0.05` yields
/// `0.15` rather than `0.15000000000000002`.
fn tidy(x: f64) -> f64 {
    sci12::format(x).parse().unwrap_or(x)
}

fn parse_grid(text: &str) -> Result<Vec<Alpha>, Failure> {
    let invalid = |msg: String| Failure::Invalid(format!("invalid grid '{text}': {msg}"));
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| invalid(format!("'{}': {e}", s.trim())))
    };
    let values: Vec<f64> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(invalid("expected start:stop:step".into()));
        };
        let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(invalid("need step > 0 and stop >= start".into()));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| tidy(start + k as f64 * step)).collect()
    } else {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(number)
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(invalid("no values".into()));
    }
    values.into_iter().map(parse_alpha).collect()
}

fn parse_dims(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| Failure::Invalid(format!("invalid dimension '{}': {e}", s.trim())))
        })
        .collect()
}

/// A closed pipe (`wyd ... | head`) is not an error.
fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Numerical(e.to_string()))?;
    emit(out, &text)
}

fn print_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_error = |e: csv::Error| Failure::Invalid(e.to_string());
    w.write_record(header).map_err(csv_error)?;
    for r in rows {
        w.write_record(r).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Invalid(e.to_string()))?;
    let text = String::from_utf8(bytes).map_err(|e| Failure::Invalid(e.to_string()))?;
    emit(out, text.trim_end())
}

fn reject_text(format: Format) -> Result<(), Failure> {
    if format == Format::Text {
        return Err(Failure::Invalid("--format text is only available for verify-paper".into()));
    }
    Ok(())
}

fn verify_paper(out: &mut dyn Write, alpha: f64, tol: Option<f64>, format: Format) -> CmdResult {
    let alpha = parse_alpha(alpha)?;
    if let Some(t) = tol {
        if t.is_nan() || t < 0.0 {
            return Err(Failure::Invalid(format!("tolerance {t} must be nonnegative")));
        }
    }
    let report = golden_counterexample_report(alpha, tol)?;
    match format {
        Format::Text => emit(out, &golden_text(&report))?,
        Format::Json => print_json(out, &report)?,
        Format::Csv => {
            let header = ["field", "expected", "actual", "tolerance", "passed"];
            let mut rows: Vec<Vec<String>> = report
                .values
                .iter()
                .map(|c| {
                    vec![
                        c.field.to_owned(),
                        sci12::format(c.expected),
                        sci12::format(c.actual),
                        sci12::format(c.tolerance),
                        c.passed.to_string(),
                    ]
                })
                .collect();
            rows.extend(report.verdicts.iter().map(|v| {
                vec![
                    format!("{}.holds", v.field),
                    v.expected_holds.to_string(),
                    v.report.holds.to_string(),
                    String::new(),
                    v.passed.to_string(),
                ]
            }));
            print_csv(out, &header, &rows)?;
        }
    }
    match report.ensure() {
        Ok(_) => Ok(EXIT_OK),
        Err(e) => Err(e.into()),
    }
}

fn golden_text(report: &GoldenReport) -> String {
    let mark = |ok: bool| if ok { "ok" } else { "MISMATCH" };
    let mut lines = vec![format!("two-level counterexample at alpha = {}", report.alpha)];
    for c in &report.values {
        lines.push(format!(
            "  {:<24} computed {:>12.6}  reference {:>10} +/- {:<8e} {}",
            c.field,
            c.actual,
            c.expected,
            c.tolerance,
            mark(c.passed)
        ));
    }
    for v in &report.verdicts {
        let expected = if v.expected_holds { "holds" } else { "violated" };
        let actual = if v.report.holds { "holds" } else { "violated" };
        lines.push(format!(
            "  {:<24} lhs {:>12.6}  rhs {:>12.6}  {actual} (expected {expected}) {}",
            v.field,
            v.report.lhs,
            v.report.rhs,
            mark(v.passed)
        ));
    }
    lines.push(if report.passed { "PASS" } else { "FAIL" }.to_owned());
    lines.join("\n")
}

#[derive(Serialize)]
struct MeasureOutput {
    #[serde(serialize_with = "sci12::serialize")]
    alpha: f64,
    #[serde(flatten)]
    components: UncertaintyComponents,
}

fn measure(out: &mut dyn Write, rho: &Path, a: &Path, alpha: f64, format: Format) -> CmdResult {
    reject_text(format)?;
    let alpha = parse_alpha(alpha)?;
    let rho = load_density(rho)?;
    let a = load_observable(a)?;
    let c = decompose_variance(&rho, &a, alpha)?;
    match format {
        Format::Csv => print_csv(
            out,
            &["alpha", "variance", "i_alpha", "j_alpha", "u_alpha", "classical"],
            &[[alpha.value(), c.variance, c.i_alpha, c.j_alpha, c.u_alpha, c.classical]
                .map(sci12::format)
                .to_vec()],
        )?,
        _ => print_json(out, &MeasureOutput {
            alpha: alpha.value(),
            components: c,
        })?,
    }
    Ok(EXIT_OK)
}

fn load_pair(inputs: &PairInputs) -> Result<(DensityMatrix, HermitianOperator, HermitianOperator), Failure> {
    let rho = load_density(&inputs.rho)?;
    let a = load_observable(&inputs.a)?;
    let b = load_observable(&inputs.b)?;
    if a.dim() != rho.dim() || b.dim() != rho.dim() {
        return Err(Failure::Invalid(format!(
            "dimension mismatch: rho is {}x{}, A is {}x{}, B is {}x{}",
            rho.dim(),
            rho.dim(),
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    Ok((rho, a, b))
}

fn report_row(r: &RelationReport) -> Vec<String> {
    vec![
        r.relation.to_string(),
        sci12::format(r.alpha),
        sci12::format(r.lhs),
        sci12::format(r.rhs),
        sci12::format(r.margin),
        r.holds.to_string(),
    ]
}

fn check(out: &mut dyn Write, relation: RelationId, inputs: &PairInputs, alpha: f64, tol: f64, format: Format) -> CmdResult {
    reject_text(format)?;
    let alpha = parse_alpha(alpha)?;
    if tol.is_nan() || tol < 0.0 {
        return Err(Failure::Invalid(format!("tolerance {tol} must be nonnegative")));
    }
    let (rho, a, b) = load_pair(inputs)?;
    let report = check_relation(relation, &rho, &a, &b, alpha, tol)?;
    match format {
        Format::Csv => print_csv(out, &["relation", "alpha", "lhs", "rhs", "margin", "holds"], &[report_row(&report)])?,
        _ => print_json(out, &report)?,
    }
    Ok(if report.holds { EXIT_OK } else { EXIT_VIOLATION })
}

fn sweep(out: &mut dyn Write, inputs: &PairInputs, grid: &str, format: Format) -> CmdResult {
    reject_text(format)?;
    let grid = parse_grid(grid)?;
    let (rho, a, b) = load_pair(inputs)?;
    let rows = sweep_alpha(&rho, &a, &b, &grid)?;
    match format {
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.values().map(sci12::format).to_vec())
                .collect();
            print_csv(out, &SweepRow::COLUMNS, &body)?;
        }
        _ => print_json(out, &rows)?,
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn search(
    io: &mut Streams<'_>,
    relation: RelationId,
    trials: u64,
    dims: &str,
    seed: u64,
    alpha: f64,
    grid: Option<&str>,
    tol: f64,
    records_path: Option<&Path>,
    format: Format,
) -> CmdResult {
    let out = &mut *io.out;
    reject_text(format)?;
    if trials == 0 {
        return Err(Failure::Invalid("--trials must be positive".into()));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(Failure::Invalid(format!("tolerance {tol} must be nonnegative")));
    }
    let grid: Vec<f64> = match grid {
        Some(g) => parse_grid(g)?.into_iter().map(Alpha::value).collect(),
        None => vec![parse_alpha(alpha)?.value()],
    };
    let mut spec = SearchSpec::new(relation, trials, parse_dims(dims)?, grid, seed);
    spec.tol_rel = tol;
    let outcome = search_violations(&spec)?;

    if let Some(path) = records_path {
        let file = fs::File::create(path)
            .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
        let mut w = BufWriter::new(file);
        for rec in &outcome.records {
            let line = serde_json::to_string(rec).map_err(|e| Failure::Numerical(e.to_string()))?;
            writeln!(w, "{line}")?;
        }
        w.flush()?;
    }
    for (index, err) in &outcome.failures {
        let _ = writeln!(io.err, "trial {index} skipped: {err}");
    }

    let s = &outcome.summary;
    match format {
        Format::Csv => print_csv(
            out,
            &["trials", "violations", "skipped", "worst_margin", "min_holding_margin"],
            &[vec![
                s.trials.to_string(),
                s.violations.to_string(),
                s.skipped.to_string(),
                sci12::format(s.worst_margin),
                sci12::format(s.min_holding_margin),
            ]],
        )?,
        _ => print_json(out, s)?,
    }
    Ok(if s.violations > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

fn dispatch(cli: Cli, io: &mut Streams<'_>) -> CmdResult {
    match cli.command {
        Command::VerifyPaper { alpha, tol, format } => verify_paper(io.out, alpha, tol, format),
        Command::Measure { rho, a, alpha, format } => measure(io.out, &rho, &a, alpha, format),
        Command::Check {
            relation,
            inputs,
            alpha,
            tol,
            format,
        } => check(io.out, relation, &inputs, alpha, tol, format),
        Command::Sweep { inputs, grid, format } => sweep(io.out, &inputs, &grid, format),
        Command::Search {
            relation,
            trials,
            dims,
            seed,
            alpha,
            grid,
            tol,
            out,
            format,
        } => search(
            io,
            relation,
            trials,
            &dims,
            seed,
            alpha,
            grid.as_deref(),
            tol,
            out.as_deref(),
            format,
        ),
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, io: &mut Streams<'_>) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let sink = if e.use_stderr() { &mut *io.err } else { &mut *io.out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli, io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

/// Entry point for the `wyd` binary.
pub fn main() -> ExitCode {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut io = Streams {
        out: &mut stdout.lock(),
        err: &mut stderr.lock(),
    };
    ExitCode::from(run(std::env::args_os(), &mut io))
}
