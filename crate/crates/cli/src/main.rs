//! Command-line front end: state ingestion, measure computation, sweep
//! grids, combinatorics tables and the geometric measure, emitted as CSV or
//! JSON with 12 significant digits.
//!
//! Exit codes: 0 success, 2 malformed input, 3 resource cap exceeded,
//! 4 numeric failure (non-finite value produced).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use entsep::error::Error;
use entsep::geometric;
use entsep::io;
use entsep::measures::{self, MeasureReport};
use entsep::partitions;
use entsep::state::StateVector;
use entsep::symmetric::{self, Family, SymmetricProfile};

#[derive(Parser)]
#[command(name = "entsep", version, about = "Separability measures for n-qubit pure states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads (default: all cores); 1 reproduces the sequential lane
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Entropies below this are treated as exact zeros
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_sep: f64,
    /// Seed for randomized components (the geometric optimizer)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathChoice {
    Generic,
    Symmetric,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Ghz,
    W,
    Dicke,
}

/// Inclusive range `A..B`, or a single point `A`.
#[derive(Clone, Copy, Debug)]
struct RangeArg {
    lo: usize,
    hi: usize,
}

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |x: &str| {
            x.trim().parse::<usize>().map_err(|_| format!("invalid integer '{x}'"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(RangeArg { lo, hi })
    }
}

#[derive(Args)]
struct StateArgs {
    /// JSON state file ({"n":..,"amps":[[re,im],..]} or {"builtin":..})
    #[arg(long, conflicts_with = "builtin")]
    state: Option<PathBuf>,
    /// Builtin spec: ghz:4, w:5, dicke:6,2, zero:3, basis:3,5 or products
    /// joined by '+', e.g. ghz:3+zero:5
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Block counts, e.g. 2..8 (default: 2..n)
    #[arg(long)]
    m: Option<RangeArg>,
    /// Bypass the automatic generic/symmetric path choice
    #[arg(long, value_enum)]
    force_path: Option<PathChoice>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Excitation number for the dicke family
    #[arg(long)]
    k: Option<usize>,
    /// Qubit counts, e.g. 3..50
    #[arg(long)]
    n: RangeArg,
    /// Block counts filter (default: 2..n per point)
    #[arg(long)]
    m: Option<RangeArg>,
}

#[derive(Args)]
struct GridArgs {
    /// Qubit counts, e.g. 4..8
    #[arg(long)]
    n: RangeArg,
    /// Block counts (default: 1..n per point)
    #[arg(long)]
    m: Option<RangeArg>,
}

#[derive(Args)]
struct GeomArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Independent optimizer starts
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Convergence threshold on the per-sweep overlap improvement
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Tie all qubits to one shared (theta, phi) pair
    #[arg(long)]
    symmetric: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Separability measures R_m of one state
    Measure(MeasureArgs),
    /// R_m curves for a closed-form family over an (n, m) grid
    Sweep(SweepArgs),
    /// Partition shapes and their multiplicities
    Partitions(GridArgs),
    /// Stirling numbers: exact values, log-domain asymptotics, ratios
    Stirling(GridArgs),
    /// Operation-count estimates m * S(n, m)
    Opcount(GridArgs),
    /// Geometric measure via overlap maximization
    Geom(GeomArgs),
}

enum CliError {
    Input(String),
    Cap(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Cap(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::QubitCap { .. }
            | Error::DensityCap { .. }
            | Error::CombinatoricsCap { .. }
            | Error::EnumerationCap { .. } => CliError::Cap(e.to_string()),
            Error::GenericPathCap { .. } => CliError::Cap(format!(
                "{e}; symmetric states can use --force-path symmetric or a \
                 builtin family via `sweep`"
            )),
            Error::NonFinite(_) => CliError::Numeric(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    #[cfg(feature = "parallel")]
    if let Some(w) = cli.workers {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| CliError::Input(format!("invalid worker count: {e}")))?;
        return pool.install(|| run(&cli));
    }
    #[cfg(not(feature = "parallel"))]
    if let Some(w) = cli.workers {
        if w != 1 {
            eprintln!("note: built without the parallel feature; running sequentially");
        }
    }
    run(&cli)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let output = match &cli.command {
        Command::Measure(args) => cmd_measure(cli, args)?,
        Command::Sweep(args) => cmd_sweep(cli, args)?,
        Command::Partitions(args) => cmd_partitions(cli, args)?,
        Command::Stirling(args) => cmd_stirling(cli, args)?,
        Command::Opcount(args) => cmd_opcount(cli, args)?,
        Command::Geom(args) => cmd_geom(cli, args)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, output)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{output}");
            Ok(())
        }
    }
}

/// 12 significant digits; round-trips doubles for downstream diffing.
fn fmt_val(x: f64) -> String {
    format!("{x:.11e}")
}

fn check_finite(values: impl IntoIterator<Item = f64>) -> Result<(), CliError> {
    for v in values {
        if !v.is_finite() {
            return Err(CliError::Numeric("non-finite value in output".into()));
        }
    }
    Ok(())
}

fn load_state(args: &StateArgs) -> Result<(StateVector, String), CliError> {
    match (&args.state, &args.builtin) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            let psi = io::state_from_json(&text)?;
            let tag = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "state".into());
            Ok((psi, tag))
        }
        (None, Some(spec)) => {
            let psi = io::state_from_builtin(spec)?;
            Ok((psi, spec.clone()))
        }
        _ => Err(CliError::Input("exactly one of --state or --builtin is required".into())),
    }
}

/// Generic path for small systems so the fast path gets cross-validated in
/// normal use; symmetric beyond that when the symmetry check passes.
const AUTO_GENERIC_MAX: usize = 10;

fn cmd_measure(cli: &Cli, args: &MeasureArgs) -> Result<String, CliError> {
    let (psi, tag) = load_state(&args.state)?;
    let n = psi.n();
    if n < 2 {
        return Err(CliError::Input("measures need at least 2 qubits".into()));
    }
    let (m_lo, m_hi) = match args.m {
        Some(r) => (r.lo, r.hi.min(n)),
        None => (2, n),
    };
    if m_lo < 2 || m_lo > m_hi || m_hi > n {
        return Err(CliError::Input(format!(
            "block counts must satisfy 2 <= m <= n = {n}"
        )));
    }
    let with_shapes = cli.format == Format::Json;

    let symmetric_profile = || SymmetricProfile::from_state(&psi, cli.eps_sep);
    let (report, path): (MeasureReport, &str) = match args.force_path {
        Some(PathChoice::Generic) => (
            measures::separability_report(&psi, m_lo, m_hi, cli.eps_sep, with_shapes)?,
            "generic",
        ),
        Some(PathChoice::Symmetric) => (
            symmetric::symmetric_report(&symmetric_profile()?, m_lo, m_hi, with_shapes)?,
            "symmetric",
        ),
        None => {
            if n <= AUTO_GENERIC_MAX {
                (
                    measures::separability_report(&psi, m_lo, m_hi, cli.eps_sep, with_shapes)?,
                    "generic",
                )
            } else {
                match symmetric_profile() {
                    Ok(profile) => (
                        symmetric::symmetric_report(&profile, m_lo, m_hi, with_shapes)?,
                        "symmetric",
                    ),
                    Err(Error::NotSymmetric { .. }) => (
                        measures::separability_report(
                            &psi, m_lo, m_hi, cli.eps_sep, with_shapes,
                        )?,
                        "generic",
                    ),
                    Err(e) => return Err(e.into()),
                }
            }
        }
    };
    check_finite(report.rows.iter().map(|r| r.value))?;

    match cli.format {
        Format::Csv => {
            let mut out = String::from("state_tag,n,m,R_m,zero_flag\n");
            for row in &report.rows {
                writeln!(out, "{tag},{n},{},{},{}", row.m, fmt_val(row.value), row.zero)
                    .unwrap();
            }
            Ok(out)
        }
        Format::Json => {
            let doc = serde_json::json!({
                "state_tag": tag,
                "path": path,
                "report": report,
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
    }
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> Result<String, CliError> {
    let family = match (args.family, args.k) {
        (FamilyArg::Ghz, None) => Family::Ghz,
        (FamilyArg::W, None) => Family::W,
        (FamilyArg::Dicke, Some(k)) if k >= 1 => Family::Dicke { k },
        (FamilyArg::Dicke, _) => {
            return Err(CliError::Input("the dicke family requires --k >= 1".into()))
        }
        _ => return Err(CliError::Input("--k only applies to the dicke family".into())),
    };
    let m_filter = args.m.map(|r| (r.lo, r.hi));
    let rows = symmetric::sweep(family, args.n.lo, args.n.hi, m_filter)?;
    check_finite(rows.iter().map(|r| r.value))?;

    match cli.format {
        Format::Csv => {
            let mut out = String::from("family,n,k,m,R_m,zero_flag\n");
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.family,
                    r.n,
                    r.k,
                    r.m,
                    fmt_val(r.value),
                    r.zero
                )
                .unwrap();
            }
            Ok(out)
        }
        Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(&rows).unwrap())),
    }
}

fn grid_points(args: &GridArgs, m_floor: usize) -> Vec<(usize, usize)> {
    let mut points = Vec::new();
    for n in args.n.lo..=args.n.hi {
        let (lo, hi) = match args.m {
            Some(r) => (r.lo.max(m_floor), r.hi.min(n)),
            None => (m_floor, n),
        };
        for m in lo..=hi {
            points.push((n, m));
        }
    }
    points
}

fn cmd_partitions(cli: &Cli, args: &GridArgs) -> Result<String, CliError> {
    let mut csv = String::from("n,m,shape,multiplicity\n");
    let mut json_rows = Vec::new();
    for (n, m) in grid_points(args, 1) {
        for shape in partitions::shapes(n, m)? {
            let h = partitions::multiplicity(&shape);
            match cli.format {
                Format::Csv => writeln!(csv, "{n},{m},{shape},{h}").unwrap(),
                Format::Json => json_rows.push(serde_json::json!({
                    "n": n,
                    "m": m,
                    "shape": shape,
                    "multiplicity": h.to_string(),
                })),
            }
        }
    }
    match cli.format {
        Format::Csv => Ok(csv),
        Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(&json_rows).unwrap())),
    }
}

fn cmd_stirling(cli: &Cli, args: &GridArgs) -> Result<String, CliError> {
    let mut csv = String::from(
        "n,m,S_exact,ln_S,ln_asym_large_n,ratio_large_n,ln_asym_small_gap,ratio_small_gap\n",
    );
    let mut json_rows = Vec::new();
    for (n, m) in grid_points(args, 1) {
        let exact = partitions::stirling2(n, m)?;
        let ln_exact = partitions::ln_big(&exact);
        // The fixed-m form needs n > m; the small-gap form is always defined.
        let large = (n > m).then(|| partitions::stirling_asym_large_n(n, m));
        let small = partitions::stirling_asym_small_gap(n, n - m);
        let ratio = |asym: f64| (ln_exact - asym).exp();
        match cli.format {
            Format::Csv => {
                let (l1, l2) = match large {
                    Some(a) => (fmt_val(a), fmt_val(ratio(a))),
                    None => (String::new(), String::new()),
                };
                writeln!(
                    csv,
                    "{n},{m},{exact},{},{l1},{l2},{},{}",
                    fmt_val(ln_exact),
                    fmt_val(small),
                    fmt_val(ratio(small)),
                )
                .unwrap();
            }
            Format::Json => json_rows.push(serde_json::json!({
                "n": n,
                "m": m,
                "S_exact": exact.to_string(),
                "ln_S": ln_exact,
                "ln_asym_large_n": large,
                "ratio_large_n": large.map(ratio),
                "ln_asym_small_gap": small,
                "ratio_small_gap": ratio(small),
            })),
        }
    }
    match cli.format {
        Format::Csv => Ok(csv),
        Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(&json_rows).unwrap())),
    }
}

fn cmd_opcount(cli: &Cli, args: &GridArgs) -> Result<String, CliError> {
    let mut csv = String::from("n,m,op_count\n");
    let mut json_rows = Vec::new();
    for (n, m) in grid_points(args, 1) {
        let count = partitions::op_count_estimate(n, m)?;
        match cli.format {
            Format::Csv => writeln!(csv, "{n},{m},{count}").unwrap(),
            Format::Json => json_rows.push(serde_json::json!({
                "n": n,
                "m": m,
                "op_count": count.to_string(),
            })),
        }
    }
    match cli.format {
        Format::Csv => Ok(csv),
        Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(&json_rows).unwrap())),
    }
}

fn cmd_geom(cli: &Cli, args: &GeomArgs) -> Result<String, CliError> {
    let (psi, tag) = load_state(&args.state)?;
    let opts = geometric::OptimizeOptions {
        restarts: args.restarts,
        tol: args.tol,
        seed: cli.seed,
        symmetric: args.symmetric,
        ..Default::default()
    };
    let result = geometric::optimize(&psi, &opts)?;
    check_finite([result.e_g, result.overlap])?;

    match cli.format {
        Format::Csv => {
            let mut out = String::from("state_tag,n,E_G,overlap,restarts_used\n");
            writeln!(
                out,
                "{tag},{},{},{},{}",
                psi.n(),
                fmt_val(result.e_g),
                fmt_val(result.overlap),
                result.restarts_used
            )
            .unwrap();
            Ok(out)
        }
        Format::Json => {
            let doc = serde_json::json!({
                "state_tag": tag,
                "n": psi.n(),
                "seed": cli.seed,
                "tol": args.tol,
                "sweeps_used": result.sweeps_used,
                "result": result,
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
    }
}
