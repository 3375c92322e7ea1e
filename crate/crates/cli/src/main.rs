//! `hkl`: JSON in, certificates out.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 precondition violation
//! (the message starts with the violated clause), 3 internal invariant
//! breach.

mod commands;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hkl_core::gen::Census;
use hkl_core::json::{envelope, render};
use hkl_core::numeric::{boundary_csv, DEFAULT_N};
use hkl_core::par::{map_slice, Execution};
use hkl_core::Tolerances;
use serde_json::json;

use commands::Output;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] hkl_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_invariant_breach() => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } | CliError::Usage(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "hkl", version, about = "Moduli of Toeplitz-kernel functions: factorizations, extreme-point certificates, decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Override the certificate tolerances (factor, divide, certificate); echoed in the output.
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,
    /// Sample count for grid-based steps (power of two, at least 4).
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_N)]
    grid: usize,
    /// Write `theta,re,im,abs` rows of the command's boundary function to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Seed for random generation.
    #[arg(long, global = true, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Write the JSON result to PATH instead of stdout (a directory with --batch).
    #[arg(long, short, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Run a single-input command on every `*.json` file in DIR.
    #[arg(long, global = true, value_name = "DIR")]
    batch: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Inner-outer factorization of a polynomial.
    Factor { input: Option<PathBuf> },
    /// Fejér–Riesz outer factor F with |F|² = g.
    Spectral { input: Option<PathBuf> },
    /// Companion element of a kernel element.
    Companion { input: Option<PathBuf> },
    /// H² norm of a kernel element.
    Norm { input: Option<PathBuf> },
    /// Extreme-point certificate for g in V.
    Extreme {
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Split a non-extreme boundary point of V into two extreme points.
    Split {
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Write |x|² as a midpoint of two other moduli, or report rigidity.
    Decompose { input: Option<PathBuf> },
    /// All kernel elements with modulus squared g.
    Solutions {
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Is x a constant multiple of the outer factor of g?
    Rigidity {
        trig: PathBuf,
        kernel: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Outer function with the given modulus samples.
    OuterGrid { input: Option<PathBuf> },
    /// Numeric test that conj(ζ)·conj(φ)·g is analytic.
    SymbolTest { phi: PathBuf, g: PathBuf },
    /// Numeric estimate of ∫ |f| / √g dm with a divergence flag.
    Domination { kernel: PathBuf, trig: PathBuf },
    /// Random instance with a prescribed root census.
    Gen {
        #[arg(long)]
        n: usize,
        /// Root census, e.g. `inside:1,circle:2,outside:0`.
        #[arg(long, default_value = "")]
        zeros: Census,
        #[arg(long, value_enum, default_value_t = GenKind::Kernel)]
        kind: GenKind,
    },
    /// Unrestricted midpoint split g(1 ± τ), band n + 1.
    BaselineSplit { input: Option<PathBuf> },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    /// Unit-norm kernel element f.
    Kernel,
    /// |f|² normalized to mean 1.
    Trig,
    /// Samples of the symbol conj(ζ^{n+1}) on the --grid.
    Symbol,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Factor { .. } => "factor",
            Command::Spectral { .. } => "spectral",
            Command::Companion { .. } => "companion",
            Command::Norm { .. } => "norm",
            Command::Extreme { .. } => "extreme",
            Command::Split { .. } => "split",
            Command::Decompose { .. } => "decompose",
            Command::Solutions { .. } => "solutions",
            Command::Rigidity { .. } => "rigidity",
            Command::OuterGrid { .. } => "outer-grid",
            Command::SymbolTest { .. } => "symbol-test",
            Command::Domination { .. } => "domination",
            Command::Gen { .. } => "gen",
            Command::BaselineSplit { .. } => "baseline-split",
        }
    }

    /// The input slot of a single-input command.
    fn single_input(&mut self) -> Option<&mut Option<PathBuf>> {
        match self {
            Command::Factor { input }
            | Command::Spectral { input }
            | Command::Companion { input }
            | Command::Norm { input }
            | Command::Extreme { input, .. }
            | Command::Split { input, .. }
            | Command::Decompose { input }
            | Command::Solutions { input, .. }
            | Command::OuterGrid { input }
            | Command::BaselineSplit { input } => Some(input),
            _ => None,
        }
    }
}

/// Options shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub tol: Tolerances,
    pub grid: usize,
    pub seed: u64,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn emit(out: &Output, target: Option<&Path>, csv: Option<&Path>) -> CliResult<()> {
    let text = render(&out.value);
    match target {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = csv {
        let grid = out
            .boundary
            .as_ref()
            .ok_or_else(|| CliError::Usage("this command has no boundary function for --csv".into()))?;
        write(path, &boundary_csv(grid))?;
    }
    Ok(())
}

fn batch_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|source| CliError::Io {
        path: dir.to_owned(),
        source,
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension().is_some_and(|e| e == "json")
                && !p.to_string_lossy().ends_with(".out.json")
        })
        .collect();
    files.sort();
    Ok(files)
}

fn run_batch(cli: &Cli, opts: Options, dir: &Path) -> CliResult<u8> {
    if cli.csv.is_some() {
        return Err(CliError::Usage("--csv cannot be combined with --batch".into()));
    }
    let mut template = cli.command.clone();
    match template.single_input() {
        Some(slot) if slot.is_none() => {}
        Some(_) => return Err(CliError::Usage("give either an input file or --batch".into())),
        None => {
            return Err(CliError::Usage(format!(
                "`{}` does not take a single input file; --batch is unavailable",
                cli.command.name()
            )))
        }
    }
    let out_dir = cli.output.clone().unwrap_or_else(|| dir.to_owned());
    let files = batch_files(dir)?;
    let results = map_slice(Execution::Parallel, &files, |file| {
        let mut command = template.clone();
        *command.single_input().expect("checked above") = Some(file.clone());
        let stem = file.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        let target = out_dir.join(format!("{stem}.{}.out.json", command.name()));
        let (text, code) = match commands::run(&command, &opts) {
            Ok(out) => (render(&out.value), out.exit_code),
            Err(e) => {
                eprintln!("{}: {e}", file.display());
                let code = e.exit_code();
                let value = envelope("error", json!({ "message": e.to_string(), "exit_code": code }));
                (render(&value), code)
            }
        };
        write(&target, &text).map(|_| code)
    });
    let mut worst = 0;
    for r in results {
        worst = worst.max(r?);
    }
    Ok(worst)
}

fn run(cli: Cli) -> CliResult<u8> {
    let opts = Options {
        tol: cli.tol.map_or(Tolerances::DEFAULT, Tolerances::with_override),
        grid: cli.grid,
        seed: cli.seed,
    };
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Usage(format!("--tol must be a positive number, got {t}")));
        }
    }
    if let Some(dir) = &cli.batch {
        return run_batch(&cli, opts, dir);
    }
    let mut command = cli.command.clone();
    if let Some(slot) = command.single_input() {
        if slot.is_none() {
            return Err(CliError::Usage(format!(
                "`{}` needs an input file (or --batch DIR)",
                command.name()
            )));
        }
    }
    let out = commands::run(&command, &opts)?;
    emit(&out, cli.output.as_deref(), cli.csv.as_deref())?;
    Ok(out.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
