//! `projflag`: growth vectors, curvature and invariants of projective
//! surfaces given in a sectioned text file.

mod input;
mod report;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use projflag::projective::{catalog_entry, growth_dictionary, CATALOG_NAMES};

use input::{parse_spec, SurfaceSpec, COMMANDS};
use report::{m6_ranks, render_text, Bundle, Report, Space};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Engine(#[from] projflag::Error),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use projflag::Error as E;
        match self {
            CliError::Input(_) | CliError::Io { .. } | CliError::UnknownEntry(_) => 2,
            CliError::Engine(e) => match e {
                E::Syntax { .. }
                | E::UndeclaredIdentifier(_)
                | E::DivisionByZero
                | E::NonIntegerExponent(_)
                | E::NameConflict(_)
                | E::EmptyInput => 2,
                E::Inconsistent(_) => 4,
                _ => 3,
            },
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "projflag", version, about = "Derived flags, curvature and invariants of projective surfaces")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrability residuals of the canonical system.
    Check { file: PathBuf },
    /// Projective metric, cubic form, Fubini contraction, ell, r and K.
    Invariants {
        /// Fail with exit code 3 when K is undefined (bc = 0).
        #[arg(long)]
        gaussian_curvature: bool,
        file: PathBuf,
    },
    /// Stratum, growth vector on B and its predicted value.
    Classify { file: PathBuf },
    /// Derived flag and growth vector of a distribution.
    Growth {
        #[arg(long, value_enum)]
        space: Space,
        /// Slice `s = s0` for m5 and m6hat; overrides `[run] s0`.
        #[arg(long)]
        s0: Option<String>,
        file: PathBuf,
    },
    /// Curvature matrix of the rank-3 connection on B or the rank-4 system.
    Curvature {
        #[arg(long, value_enum)]
        bundle: Bundle,
        file: PathBuf,
    },
    /// JSON report of the `[run]` commands, or of everything without `[run]`.
    Report { file: PathBuf },
    /// Bundled examples, expected against computed.
    Catalog { name: Option<String> },
}

fn load(path: &Path) -> Result<SurfaceSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_spec(&text)
}

fn s0_of(spec: &SurfaceSpec, flag: Option<&str>) -> Result<projflag::Expr, CliError> {
    let src = flag.or(spec.s0.as_deref()).unwrap_or("0");
    Ok(spec.system.table().parse(src)?)
}

#[derive(Serialize, Debug)]
struct CatalogRow {
    name: &'static str,
    origin: &'static str,
    expected_stratum: &'static str,
    stratum: &'static str,
    expected_growth: Vec<usize>,
    bar_growth: Vec<usize>,
    m6_growth: Vec<usize>,
    ok: bool,
}

#[derive(Serialize, Debug)]
struct CatalogReport {
    tool: &'static str,
    version: &'static str,
    entries: Vec<CatalogRow>,
    all_ok: bool,
}

fn catalog_row(name: &'static str) -> Result<CatalogRow, CliError> {
    let e = catalog_entry(name)?.ok_or_else(|| CliError::UnknownEntry(name.into()))?;
    let d = growth_dictionary(&e.system)?;
    let m6 = m6_ranks(&e.system)?;
    let stratum = d.classification.stratum;
    let ok = stratum == e.stratum && d.ranks() == e.growth && d.prediction_holds && m6 == [3, 5, 6];
    Ok(CatalogRow {
        name,
        origin: e.origin.name(),
        expected_stratum: e.stratum.name(),
        stratum: stratum.name(),
        expected_growth: e.growth,
        bar_growth: d.ranks().to_vec(),
        m6_growth: m6,
        ok,
    })
}

fn run_catalog(name: Option<&str>, json: bool) -> Result<bool, CliError> {
    let names: Vec<&'static str> = match name {
        None => CATALOG_NAMES.to_vec(),
        Some(n) => vec![*CATALOG_NAMES.iter().find(|&&c| c == n).ok_or_else(|| CliError::UnknownEntry(n.into()))?],
    };
    // Each entry lives on its own symbol table, so the rows are independent.
    let rows: Vec<Result<CatalogRow, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = names.iter().map(|&n| scope.spawn(move || catalog_row(n))).collect();
        handles.into_iter().map(|h| h.join().expect("catalog worker panicked")).collect()
    });
    let entries = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let all_ok = entries.iter().all(|r| r.ok);
    if json {
        let report = CatalogReport {
            tool: env!("CARGO_BIN_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            entries,
            all_ok,
        };
        out(&json_line(&report));
    } else {
        let g = |r: &[usize]| format!("({})", r.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
        let mut table = format!(
            "{:<12} {:<13} {:<25} {:<19} {:<9} {}\n",
            "entry", "origin", "stratum exp/got", "bar growth exp/got", "M6", "ok"
        );
        for r in &entries {
            table += &format!(
                "{:<12} {:<13} {:<25} {:<19} {:<9} {}\n",
                r.name,
                r.origin,
                format!("{}/{}", r.expected_stratum, r.stratum),
                format!("{}/{}", g(&r.expected_growth), g(&r.bar_growth)),
                g(&r.m6_growth),
                if r.ok { "yes" } else { "NO" }
            );
        }
        out(&table);
    }
    Ok(all_ok)
}

/// Writes to stdout; a closed pipe is not an error worth reporting.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn json_line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report serializes") + "\n"
}

fn emit(report: &Report, json: bool) {
    if json {
        out(&json_line(report));
    } else {
        out(&render_text(report));
    }
}

/// Returns whether every assertion held.
fn run(cli: Cli) -> Result<bool, CliError> {
    let json = cli.json;
    let (spec, cmd_name) = match &cli.command {
        Command::Catalog { name } => return run_catalog(name.as_deref(), json),
        Command::Check { file } => (load(file)?, "check"),
        Command::Invariants { file, .. } => (load(file)?, "invariants"),
        Command::Classify { file } => (load(file)?, "classify"),
        Command::Growth { file, .. } => (load(file)?, "growth"),
        Command::Curvature { file, .. } => (load(file)?, "curvature"),
        Command::Report { file } => (load(file)?, "report"),
    };
    let s = &spec.system;
    let report = match cli.command {
        Command::Report { .. } => {
            let commands = spec.commands.clone().unwrap_or_else(|| COMMANDS.map(String::from).to_vec());
            let s0 = s0_of(&spec, None)?;
            let mut r = Report::new(&spec, commands.clone());
            for c in &commands {
                r.run_command(s, c, &s0)?;
            }
            // A report is always JSON.
            out(&json_line(&r));
            return Ok(r.assertions_hold());
        }
        Command::Check { .. } => {
            let mut r = Report::new(&spec, vec![cmd_name.into()]);
            r.run_check(s);
            r
        }
        Command::Invariants { gaussian_curvature, .. } => {
            let mut r = Report::new(&spec, vec![cmd_name.into()]);
            r.run_invariants(s, gaussian_curvature)?;
            r
        }
        Command::Classify { .. } => {
            let mut r = Report::new(&spec, vec![cmd_name.into()]);
            r.run_classify(s)?;
            r
        }
        Command::Growth { space, ref s0, .. } => {
            let s0 = s0_of(&spec, s0.as_deref())?;
            let mut r = Report::new(&spec, vec![cmd_name.into()]);
            r.run_growth(s, space, &s0)?;
            r
        }
        Command::Curvature { bundle, .. } => {
            let mut r = Report::new(&spec, vec![cmd_name.into()]);
            r.run_curvature(s, bundle)?;
            r
        }
        Command::Catalog { .. } => unreachable!("handled above"),
    };
    emit(&report, json);
    Ok(report.assertions_hold())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
