//! `prep`: decide classicality of spin states, locate boundaries, scan planes.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use prep_core::Norm;

use crate::output::Failure;

#[derive(Parser, Debug)]
#[command(name = "prep", version, about = "Classicality of finite-dimensional spin states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum NormArg {
    Trace,
    #[value(alias = "hilbert-schmidt")]
    Hs,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Trace => Norm::Trace,
            NormArg::Hs => Norm::HilbertSchmidt,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    /// Full-rank state from the Ginibre ensemble.
    Random,
    /// Coherent-state projector at a random direction.
    Coherent,
    /// Two-qubit Werner state `p |ψ⁻⟩⟨ψ⁻| + (1−p) 1/4`.
    Werner,
    /// Random traceless Hermitian direction (a raw file).
    Direction,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a state is classical: prints a certificate, a witness, or "unresolved".
    Decide {
        state: PathBuf,
        /// Initial Fibonacci grid size [default: 1000]. For two spins, the A grid
        /// size of a single product-grid level (default: a three-level schedule).
        #[arg(long)]
        n: Option<usize>,
        /// Local grid refinement rounds around the support.
        #[arg(long, default_value_t = 20)]
        refine: usize,
        /// Hilbert-Schmidt reconstruction tolerance for a certificate.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Skip the Hermiticity and unit-trace checks.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Boundary κ_e of the classical set along `ρ0 + κ ρ̂`.
    Boundary {
        /// Traceless Hermitian direction in the state-file format.
        direction: PathBuf,
        /// Treat the file as a unit-trace target state and use `target − ρ0`.
        #[arg(long)]
        toward: bool,
        /// Grid sizes, comma separated; each level adds a Fibonacci grid of that size.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
        /// Relative stopping tolerance on consecutive 1/κ estimates
        /// [default: 1e-4 for one spin, 1e-3 for two].
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = NormArg::Trace)]
        norm: NormArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Positivity, PPT and classical boundaries along rays of a plane of two-spin directions (CSV).
    Scan2d {
        dir1: PathBuf,
        dir2: PathBuf,
        #[arg(long, default_value_t = 64)]
        rays: usize,
        /// A-grid sizes per level (B sizes follow from the dimensions).
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
        /// Relative stopping tolerance per ray.
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = NormArg::Trace)]
        norm: NormArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst-case moment witnesses of a state.
    Witness {
        state: PathBuf,
        /// Number of grid axes for the spin-3/2 third-moment scan.
        #[arg(long, default_value_t = 2000)]
        scan: usize,
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form decomposition into coherent states (spin 1/2 and spin 1).
    Decompose {
        state: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a test state in the state-file format.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// 2j of the (first) spin.
        #[arg(long, default_value_t = 2)]
        twice_j: u32,
        /// 2j of a second spin; produces a two-spin state.
        #[arg(long)]
        twice_j_b: Option<u32>,
        /// Singlet weight of a Werner state.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            eprintln!("prep: {message}");
            ExitCode::from(code)
        }
    }
}
