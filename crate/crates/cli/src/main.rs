//! `qwalk`: walk simulations, analytic packets and figure data as CSV.

mod angle;
mod commands;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use angle::{parse_angle, ParseError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qwalk_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("output check failed: {0}")]
    Check(String),
}

impl CliError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 for anything the caller can fix by changing arguments, 3 when the
    /// numerics gave up.
    pub fn exit_code(&self) -> u8 {
        use qwalk_core::Error as E;
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(E::Domain(_)) => 3,
            CliError::Core(_) => 2,
            CliError::Check(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Discrete, continuous and Dirac walk simulations with closed-form wave packets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve an initial packet with a direct simulator and write the final state.
    Simulate {
        #[arg(long, value_enum)]
        model: Model,
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a closed-form packet at one time.
    Packet {
        #[arg(long, value_enum)]
        model: PacketModel,
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two densities on the same lattice and report their L¹ distance.
    #[command(group(ArgGroup::new("mode").required(true).args(["dtqw_vs_ctqw", "bessel_vs_exact"])))]
    Compare {
        /// Discrete against continuous walk with equal speeds, 2γ = cos θ.
        #[arg(long)]
        dtqw_vs_ctqw: bool,
        /// Bessel-approximated against exact discrete-walk packet.
        #[arg(long)]
        bessel_vs_exact: bool,
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        out: PathBuf,
    },
    /// Spinor entropy of the Dirac and discrete-walk packets over a log grid of `a`.
    EntropyScan {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 0.05)]
        a_min: f64,
        #[arg(long, default_value_t = 20.0)]
        a_max: f64,
        #[arg(long, default_value_t = 25)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the data behind one of the standard figures.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        which: u8,
        #[command(flatten)]
        params: Params,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Dtqw,
    Ctqw,
    Dirac,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PacketModel {
    Dtqw,
    DtqwBessel,
    Ctqw,
    Dirac,
}

fn angle_arg(text: &str) -> Result<f64, String> {
    parse_angle(text).map_err(|e| e.to_string())
}

/// Physical and numerical parameters; which of them apply depends on the command.
#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    /// Coin angle, as radians or a rational multiple of pi such as `3pi/7`.
    #[arg(long, value_parser = angle_arg, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Lattice localization of walk packets.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Continuum localization (for walk packets, α = a·tan θ).
    #[arg(long = "a", allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Time; whole steps for the discrete walk.
    #[arg(long, allow_hyphen_values = true)]
    pub time: Option<f64>,
    /// Sites on either side of the origin.
    #[arg(long, allow_hyphen_values = true)]
    pub half_width: Option<i64>,
    /// Grid spacing for the Dirac field.
    #[arg(long, allow_hyphen_values = true)]
    pub spacing: Option<f64>,
    /// Absolute tolerance of the adaptive quadratures.
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
