//! Argument parsing and dispatch for the `chessboard` binary.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or I/O error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cubic::{self, Law};
use crate::dirac::{self, DispersionPoint, Grid};
use crate::enveloping::{self, BracketShape, SearchConfig};
use crate::error::{ChessError, Result};
use crate::graded;
use crate::scalar::ExactScalar;
use crate::verify::{self, Suite, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_ENV: &str = "CHESSBOARD_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "chessboard", version, about = "Exact cubic-matrix tables, j-bracket checks and ternary Dirac sampling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full multiplication table of basis units.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        n: u8,
        #[arg(long, value_enum, default_value_t = Law::Star)]
        law: Law,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run verification suites and print a JSON report.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The nine flat symmetric connections.
    Flat {
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exact null-space search for linear identities among double j-brackets.
    BracketSearch {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
        n: u8,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Ordinary commutators instead of j-brackets (Jacobi sanity run).
        #[arg(long)]
        binary: bool,
        /// Seven-argument words (two nested brackets).
        #[arg(long)]
        stretch: bool,
        /// Cap on word classes for stretch searches.
        #[arg(long, default_value_t = 60)]
        max_words: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sample the real branch of ω over a cubic k-grid.
    Dispersion {
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        /// lo:hi:step, inclusive, applied to each k component.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Relative tolerance for the per-row dispersion check.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// What a command produced, before it is written anywhere.
#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub payload: Vec<u8>,
    pub notes: Vec<String>,
}

impl Outcome {
    fn ok(payload: Vec<u8>) -> Self {
        Self { exit_code: EXIT_OK, payload, notes: Vec::new() }
    }
}

fn json_bytes<T: Serialize>(v: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("reports serialize");
    out.push(b'\n');
    out
}

#[derive(Serialize)]
struct FlatSolution {
    display: [String; 3],
    alpha: ExactScalar,
    beta: ExactScalar,
    gamma: ExactScalar,
    satisfies: bool,
}

#[derive(Serialize)]
struct DispersionReport {
    m: f64,
    grid: String,
    tolerance: f64,
    rows: Vec<dirac::DispersionRow>,
    failing_rows: Vec<usize>,
}

/// Runs a parsed command without touching stdout or the filesystem.
pub fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Table { n, law, format, .. } => {
            let table = cubic::mult_table(*n as usize, *law)?;
            let payload = match format {
                Format::Csv => table.to_csv()?.into_bytes(),
                Format::Json => {
                    let mut s = table.to_json().into_bytes();
                    s.push(b'\n');
                    s
                }
            };
            Ok(Outcome::ok(payload))
        }
        Command::Verify { suite, seed, .. } => {
            let report = verify::run(*suite, *seed);
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            Ok(Outcome {
                exit_code: if report.passed { EXIT_OK } else { EXIT_FAILED },
                payload: json_bytes(&report),
                notes: vec![format!("seed: {seed}"), format!("{} checks, {failed} failed", report.checks.len())],
            })
        }
        Command::Flat { .. } => {
            let solutions: Vec<FlatSolution> = graded::enumerate_symmetric_flat()
                .into_iter()
                .map(|[a, b, c]| FlatSolution {
                    display: [a.to_string(), b.to_string(), c.to_string()],
                    satisfies: graded::flat_condition(&a, &b, &c),
                    alpha: a,
                    beta: b,
                    gamma: c,
                })
                .collect();
            let all = solutions.iter().all(|s| s.satisfies);
            let payload = json_bytes(&json!({ "count": solutions.len(), "solutions": solutions }));
            Ok(Outcome { exit_code: if all { EXIT_OK } else { EXIT_FAILED }, payload, notes: Vec::new() })
        }
        Command::BracketSearch { n, seed, binary, stretch, max_words, .. } => {
            let mut cfg = if *binary { SearchConfig::binary(*n as usize, *seed) } else { SearchConfig::ternary(*n as usize, *seed) };
            if *stretch {
                cfg.shape = BracketShape::Triple;
                cfg.max_words = Some(*max_words);
            }
            let cert = enveloping::double_bracket_identity_search(&cfg)?;
            let code = if cert.stable() { EXIT_OK } else { EXIT_FAILED };
            Ok(Outcome {
                exit_code: code,
                payload: json_bytes(&cert),
                notes: vec![format!("seed: {seed}"), format!("null space dimension {}", cert.nullity)],
            })
        }
        Command::Dispersion { m, grid, format, tol, .. } => {
            if !m.is_finite() || !tol.is_finite() || *tol <= 0.0 {
                return Err(ChessError::Parse("mass and tolerance must be finite, tolerance positive".into()));
            }
            let parsed = Grid::parse(grid)?;
            let rows = dirac::dispersion_samples(*m, &parsed);
            let failing_rows: Vec<usize> = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| !DispersionPoint::new(r.omega_real, [r.k_x, r.k_y, r.k_z], r.m).satisfies(*tol))
                .map(|(i, _)| i)
                .collect();
            let code = if failing_rows.is_empty() { EXIT_OK } else { EXIT_FAILED };
            let notes = vec![format!("{} rows, {} outside tolerance", rows.len(), failing_rows.len())];
            let payload = match format {
                Format::Csv => dirac::dispersion_csv(&rows)?.into_bytes(),
                Format::Json => json_bytes(&DispersionReport { m: *m, grid: grid.clone(), tolerance: *tol, rows, failing_rows }),
            };
            Ok(Outcome { exit_code: code, payload, notes })
        }
    }
}

fn output_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Table { output, .. }
        | Command::Verify { output, .. }
        | Command::Flat { output }
        | Command::BracketSearch { output, .. }
        | Command::Dispersion { output, .. } => output.as_ref(),
    }
}

/// Caps the rayon pool from `CHESSBOARD_THREADS`; ignored when unset or unparsable.
pub fn configure_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("{THREADS_ENV} must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err(format!("{THREADS_ENV} must be positive"));
    }
    // A pool may already exist when called twice in one process; that is fine.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args`, runs, writes output, and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_USAGE;
    }
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    for note in &outcome.notes {
        let _ = writeln!(stderr, "{note}");
    }
    let written = match output_path(&cli.command) {
        Some(path) => std::fs::write(path, &outcome.payload).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(&outcome.payload).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    outcome.exit_code
}
