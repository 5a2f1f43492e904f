//! `qsep`: spectra, entropies, separability thresholds and reproduction runs.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsep::entropy::{renyi_entropy, tsallis_entropy, von_neumann_entropy};
use qsep::output::format_sig;
use qsep::reproduce::{self, write_rows_csv};
use qsep::spectra::state_spectrum;
use qsep::thresholds::{
    asymptotic_threshold_for, bound_ghz_exact, bound_w_exact, default_q_grid, ppt_cuts,
    ppt_threshold_strongest, PptCut, DEFAULT_TOL,
};
use qsep::verify::verify_closed_forms;
use qsep::{
    ar_conditional_entropy, ppt_threshold, solve_x_threshold, threshold_curve, Conditional,
    Error, Family, FamilySpec, Mode, PartitionSpec, QParam, Spectrum, ThresholdCurve,
};

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "qsep", version, about = "Entropic separability thresholds for symmetric multiqubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form eigenvalue spectrum of a family member.
    Spectrum(SpectrumArgs),
    /// Entropy of a family member (conditional by default).
    Entropy(EntropyArgs),
    /// Mixing parameter at which the conditional entropy vanishes.
    Threshold(ThresholdArgs),
    /// Threshold as a function of q.
    Curve(CurveArgs),
    /// Closed-form q → ∞ threshold.
    Bound(BoundArgs),
    /// Partial-transpose threshold.
    Ppt(PptArgs),
    /// Cross-check closed-form spectra against full diagonalisation.
    Verify(VerifyArgs),
    /// Regenerate figure data or the table of headline numbers.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    W,
    Ghz,
    Werner,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Default,
    AsPublished,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Default => Mode::Default,
            ModeArg::AsPublished => Mode::AsPublished,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum EntropyKind {
    /// Conditional q-entropy of the selected split.
    Ar,
    Tsallis,
    Renyi,
    VonNeumann,
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3a")]
    ThreeA,
    #[value(name = "3b")]
    ThreeB,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    /// Register size N (ignored for werner).
    #[arg(long, default_value_t = 2)]
    n_qubits: usize,
    /// Qubits traced out of the N-qubit state.
    #[arg(long, default_value_t = 0)]
    traced: usize,
}

impl FamilyArgs {
    fn family(&self) -> qsep::Result<Family> {
        match self.family {
            FamilyKind::W => Family::w(self.n_qubits, self.traced),
            FamilyKind::Ghz => Family::ghz(self.n_qubits, self.traced),
            FamilyKind::Werner => Ok(Family::Werner),
        }
    }
}

#[derive(Args)]
struct SplitArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Qubits kept in the conditioning marginal (default: all but one).
    #[arg(long)]
    marginal_qubits: Option<usize>,
    #[arg(long, value_enum, default_value = "default")]
    mode: ModeArg,
}

impl SplitArgs {
    fn conditional(&self) -> qsep::Result<Conditional> {
        let family = self.family.family()?;
        let k = self
            .marginal_qubits
            .unwrap_or_else(|| family.kept_qubits().saturating_sub(1));
        Conditional::new(family, k, self.mode.into())
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    x: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    split: SplitArgs,
    #[arg(long)]
    x: f64,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, value_enum, default_value = "ar")]
    kind: EntropyKind,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    split: SplitArgs,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    split: SplitArgs,
    /// Explicit ascending q values, comma separated (default: log grid on [0.2, 1000] plus 1).
    #[arg(long, value_delimiter = ',')]
    q_values: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Print the exact fraction instead of a decimal.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct PptArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Number of (last) qubits to transpose.
    #[arg(long, default_value_t = 1, conflicts_with_all = ["strongest", "all_cuts"])]
    transpose: usize,
    /// Report the most restrictive bipartition.
    #[arg(long)]
    strongest: bool,
    /// Report every bipartition size.
    #[arg(long, conflicts_with = "strongest")]
    all_cuts: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 8)]
    max_qubits: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long, value_enum, required_unless_present = "all", conflicts_with = "all")]
    figure: Option<Figure>,
    /// Table of every headline number with expected and computed values.
    #[arg(long)]
    all: bool,
    /// Marginal used for figure 3b.
    #[arg(long, value_enum, default_value = "default")]
    mode: ModeArg,
    /// Upper register size of the oracle sweep in `--all`.
    #[arg(long, default_value_t = 8)]
    oracle_qubits: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DimensionMismatch { .. }
            | Error::InvalidPartition(_)
            | Error::InvalidFamily(_)
            | Error::OutOfRange { .. }
            | Error::Unsupported(_)
            | Error::UnsortedGrid => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn sink(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes one named scalar in the requested format.
fn emit_scalar(out: &OutputArgs, name: &str, text: &str, json: serde_json::Value) -> Outcome {
    let mut w = sink(&out.output)?;
    match out.format {
        Format::Csv => writeln!(w, "{name}\n{text}")?,
        Format::Table => writeln!(w, "{text}")?,
        Format::Json => writeln!(w, "{}", serde_json::json!({ name: json }))?,
    }
    w.flush()?;
    Ok(())
}

fn json_number(v: f64) -> serde_json::Value {
    serde_json::Value::from(format_sig(v).parse::<f64>().unwrap_or(v))
}

fn run_spectrum(a: &SpectrumArgs) -> Outcome {
    let spec = FamilySpec::new(a.family.family()?, a.x)?;
    let s = state_spectrum(&spec)?;
    let mut w = sink(&a.out.output)?;
    write_spectrum(&mut w, &s, a.out.format)?;
    w.flush()?;
    Ok(())
}

fn write_spectrum(w: &mut dyn Write, s: &Spectrum, format: Format) -> io::Result<()> {
    match format {
        Format::Csv => s.write_csv(w),
        Format::Json => writeln!(w, "{}", s.to_json()),
        Format::Table => {
            writeln!(w, "{:>20}  {:>5}", "value", "mult")?;
            for l in s.levels() {
                writeln!(w, "{:>20}  {:>5}", format_sig(l.value), l.multiplicity)?;
            }
            Ok(())
        }
    }
}

fn run_entropy(a: &EntropyArgs) -> Outcome {
    let q = QParam::new(a.q)?;
    let value = match a.kind {
        EntropyKind::Ar => {
            let pair = a.split.conditional()?.spectra(a.x)?;
            ar_conditional_entropy(&pair.joint, &pair.marginal, q)?
        }
        kind => {
            let s = state_spectrum(&FamilySpec::new(a.split.family.family()?, a.x)?)?;
            match kind {
                EntropyKind::Tsallis => tsallis_entropy(&s, q),
                EntropyKind::Renyi => renyi_entropy(&s, q),
                _ => von_neumann_entropy(&s),
            }
        }
    };
    emit_scalar(&a.out, "entropy", &format_sig(value), json_number(value))
}

fn run_threshold(a: &ThresholdArgs) -> Outcome {
    let t = solve_x_threshold(&a.split.conditional()?, QParam::new(a.q)?, a.tol)?;
    let json = t.root().map_or(serde_json::Value::Null, json_number);
    emit_scalar(&a.out, "x_star", &t.to_string(), json)
}

fn write_curve(w: &mut dyn Write, c: &ThresholdCurve, format: Format) -> io::Result<()> {
    match format {
        Format::Csv => c.write_csv(w),
        Format::Json => writeln!(w, "{}", c.to_json()),
        Format::Table => {
            writeln!(w, "{} | marginal {} qubit(s) | mode {}", c.family, c.marginal_qubits, c.mode)?;
            writeln!(w, "{:>20}  {:>20}", "q", "x_star")?;
            for s in &c.samples {
                writeln!(w, "{:>20}  {:>20}", format_sig(s.q), s.x_star.to_string())?;
            }
            Ok(())
        }
    }
}

fn run_curve(a: &CurveArgs) -> Outcome {
    let grid = a.q_values.clone().unwrap_or_else(default_q_grid);
    let curve = threshold_curve(&a.split.conditional()?, &grid, a.tol)?;
    let mut w = sink(&a.out.output)?;
    write_curve(&mut w, &curve, a.out.format)?;
    w.flush()?;
    Ok(())
}

fn run_bound(a: &BoundArgs) -> Outcome {
    let exact = match a.family.family {
        FamilyKind::W => bound_w_exact(a.family.n_qubits, a.family.traced)?,
        FamilyKind::Ghz => {
            if a.family.traced != 0 {
                return Err(Failure::Usage("ghz bound is defined for the full state (--traced 0)".into()));
            }
            bound_ghz_exact(a.family.n_qubits)?
        }
        FamilyKind::Werner => {
            let x = asymptotic_threshold_for(&Conditional::single_qubit(Family::Werner)?, 1e-14)?;
            return emit_scalar(&a.out, "bound", &format_sig(x), json_number(x));
        }
    };
    let value = *exact.numer() as f64 / *exact.denom() as f64;
    if a.exact {
        let text = format!("{}/{}", exact.numer(), exact.denom());
        emit_scalar(&a.out, "bound", &text, serde_json::Value::from(text.clone()))
    } else {
        emit_scalar(&a.out, "bound", &format_sig(value), json_number(value))
    }
}

fn write_cuts(w: &mut dyn Write, cuts: &[PptCut], format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "transposed,x_ppt")?;
            for c in cuts {
                writeln!(w, "{},{}", c.transposed, format_sig(c.threshold))?;
            }
            Ok(())
        }
        Format::Json => {
            let rows: Vec<_> = cuts
                .iter()
                .map(|c| serde_json::json!({ "transposed": c.transposed, "x_ppt": json_number(c.threshold) }))
                .collect();
            writeln!(w, "{}", serde_json::Value::from(rows))
        }
        Format::Table => {
            writeln!(w, "{:>10}  {:>20}", "transposed", "x_ppt")?;
            for c in cuts {
                writeln!(w, "{:>10}  {:>20}", c.transposed, format_sig(c.threshold))?;
            }
            Ok(())
        }
    }
}

fn run_ppt(a: &PptArgs) -> Outcome {
    let family = a.family.family()?;
    let cuts = if a.all_cuts {
        ppt_cuts(family, a.tol)?
    } else if a.strongest {
        vec![ppt_threshold_strongest(family, a.tol)?]
    } else {
        let part = PartitionSpec::last(family.kept_qubits(), a.transpose)?;
        vec![PptCut {
            transposed: a.transpose,
            threshold: ppt_threshold(family, &part, a.tol)?,
        }]
    };
    let mut w = sink(&a.out.output)?;
    write_cuts(&mut w, &cuts, a.out.format)?;
    w.flush()?;
    Ok(())
}

fn run_verify(a: &VerifyArgs) -> Outcome {
    let report = verify_closed_forms(a.max_qubits)?;
    let mut w = sink(&a.out.output)?;
    match a.out.format {
        Format::Csv => report.write_csv(&mut w)?,
        Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&report).expect("report serialises"))?,
        Format::Table => {
            for c in report.failures() {
                writeln!(w, "FAIL {} x={} diff={}", c.label, format_sig(c.x), format_sig(c.max_abs_diff))?;
            }
        }
    }
    w.flush()?;
    let failed = report.failures().count();
    eprintln!(
        "{} spectra compared, {} failed, max |diff| = {}",
        report.checks.len(),
        failed,
        format_sig(report.max_abs_diff())
    );
    if failed > 0 {
        return Err(Failure::Numeric(format!("{failed} spectra differ by more than {}", report.tolerance)));
    }
    Ok(())
}

fn run_reproduce(a: &ReproduceArgs) -> Outcome {
    let mut w = sink(&a.out.output)?;
    if a.all {
        let rows = reproduce::headline_rows(a.oracle_qubits)?;
        match a.out.format {
            Format::Csv => write_rows_csv(&rows, &mut w)?,
            Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&rows).expect("rows serialise"))?,
            Format::Table => {
                for r in &rows {
                    writeln!(
                        w,
                        "[{}] {:<4} {:<55} expected {:>16} computed {:>16}",
                        r.criterion,
                        if r.passed { "pass" } else { "FAIL" },
                        r.quantity,
                        format_sig(r.expected),
                        format_sig(r.computed)
                    )?;
                }
            }
        }
        w.flush()?;
        let failed = rows.iter().filter(|r| !r.passed).count();
        if failed > 0 {
            return Err(Failure::Numeric(format!("{failed} headline checks failed")));
        }
        return Ok(());
    }
    let curve = match a.figure.expect("clap enforces --figure or --all") {
        Figure::One => {
            if a.out.format != Format::Csv {
                return Err(Failure::Usage("figure 1 is emitted as CSV only".into()));
            }
            reproduce::figure_1(&mut w)?;
            w.flush()?;
            return Ok(());
        }
        Figure::Two => reproduce::figure_2()?,
        Figure::ThreeA => reproduce::figure_3a()?,
        Figure::ThreeB => reproduce::figure_3b(a.mode.into())?,
    };
    write_curve(&mut w, &curve, a.out.format)?;
    w.flush()?;
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("QSEP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("QSEP_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Spectrum(a) => run_spectrum(a),
        Command::Entropy(a) => run_entropy(a),
        Command::Threshold(a) => run_threshold(a),
        Command::Curve(a) => run_curve(a),
        Command::Bound(a) => run_bound(a),
        Command::Ppt(a) => run_ppt(a),
        Command::Verify(a) => run_verify(a),
        Command::Reproduce(a) => run_reproduce(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("numerical check failed: {m}");
            ExitCode::from(EXIT_NUMERIC)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(EXIT_IO)
        }
    }
}
