//! `polykit`: column vectors, doublings and elementary automorphisms of
//! lattice polytopes from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 precondition rejected (for example a spectrum of an unbalanced seed).

mod commands;
mod report;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::debug;
use polykit::ring::RingSpec;
use polykit::{format, Polytope};

use report::{Outcome, Report};
use verify::{Check, ModelArgs, ModelKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] polykit::Error),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use polykit::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(..) => 2,
            CliError::Core(e) => match e {
                E::Precondition(_) | E::NotBalanced | E::NoColumns => 3,
                E::Internal(_) => 1,
                _ => 2,
            },
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "polykit", version, about = "Column vectors, doublings and elementary automorphisms of lattice polytopes")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Coefficient ring: int, mod:<m> or poly:<names>.
    #[arg(long, global = true, default_value = "int", value_parser = parse_ring)]
    ring: RingSpec,

    /// Seed for sampled scalars.
    #[arg(long, global = true, env = "POLYKIT_SEED", default_value_t = 1)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Column vectors with base facets and heights.
    Cols { file: PathBuf },
    /// The product table of the column vectors.
    Products { file: PathBuf },
    /// Heights of columns against base facets.
    Cb { file: PathBuf },
    /// Double the polytope along a facet.
    Double {
        file: PathBuf,
        facet: usize,
        /// Write the doubled polytope document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterated doubling of a balanced polytope.
    Spectrum {
        file: PathBuf,
        depth: usize,
        /// Write one file per node and the ledger into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        check: Check,
        /// Polytope file, or the model class for matrix-model.
        target: Option<String>,
        #[arg(long)]
        class: Option<ModelKind>,
        /// Truncation of the matrix model.
        #[arg(long, default_value_t = 2)]
        j: usize,
        /// Parameter of the class d model.
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Classify a balanced lattice polygon.
    Classify { file: PathBuf },
    /// Compare two polytopes.
    Equiv {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::E)]
        mode: Mode,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    E,
    Proj,
}

fn parse_ring(s: &str) -> Result<RingSpec, String> {
    s.parse().map_err(|e: polykit::Error| e.to_string())
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, format!("{text}\n")).map_err(|e| CliError::Io(path.display().to_string(), e))
}

struct Input {
    bytes: Vec<u8>,
    polytope: Polytope,
}

fn load(path: &Path) -> Result<Input, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Usage(format!("{}: not UTF-8", path.display())))?;
    let polytope = format::parse_polytope(&text)?;
    debug!("loaded {}: dim {}, {} lattice points", path.display(), polytope.dim(), polytope.lattice_points().len());
    Ok(Input { bytes, polytope })
}

fn run(cli: &Cli) -> Result<(String, Vec<Vec<u8>>, Outcome), CliError> {
    let mut files = Vec::new();
    let mut input = |path: &Path| -> Result<Polytope, CliError> {
        let i = load(path)?;
        files.push(i.bytes);
        Ok(i.polytope)
    };
    let (name, out) = match &cli.command {
        Command::Cols { file } => ("cols", commands::cols(&input(file)?)),
        Command::Products { file } => ("products", commands::products(&input(file)?)),
        Command::Cb { file } => ("cb", commands::cb(&input(file)?)?),
        Command::Double { file, facet, out } => ("double", commands::double(&input(file)?, *facet, out.as_deref())?),
        Command::Spectrum { file, depth, out_dir } => {
            ("spectrum", commands::spectrum(&input(file)?, *depth, out_dir.as_deref())?)
        }
        Command::Verify { check, target, class, j, t } => {
            let (p, model) = if *check == Check::MatrixModel {
                let kind = match (class, target) {
                    (Some(k), _) => Some(*k),
                    (None, Some(s)) => Some(ModelKind::from_str(s, true).map_err(CliError::Usage)?),
                    (None, None) => None,
                };
                (None, kind.map(|kind| ModelArgs { kind, j: *j, t: *t }))
            } else {
                let p = match target {
                    Some(path) => Some(input(Path::new(path))?),
                    None => None,
                };
                (p, None)
            };
            ("verify", verify::run(*check, p.as_ref(), model, &cli.ring, cli.seed)?)
        }
        Command::Classify { file } => ("classify", commands::classify(&input(file)?)?),
        Command::Equiv { p, q, mode } => {
            let (p, q) = (input(p)?, input(q)?);
            let out = match mode {
                Mode::E => commands::equiv_e(&p, &q),
                Mode::Proj => commands::equiv_proj(&p, &q)?,
            };
            ("equiv", out)
        }
    };
    Ok((name.to_string(), files, out))
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok((name, files, out)) => {
            let args: Vec<String> = std::env::args().skip(1).collect();
            let report = Report::new(&name, report::digest(&args, &files), &out);
            report::emit(&report, &out, cli.json);
            ExitCode::from(if out.failed { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
