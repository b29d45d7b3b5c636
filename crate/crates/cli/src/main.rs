use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

/// Construct and verify covariant POVMs over finite groups.
#[derive(Debug, Parser)]
#[command(name = "covobs", version)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Verification tolerance, in (0, 1e-3).
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = parse_tolerance)]
    pub tolerance: f64,
    /// Seed for randomized intertwiner choices.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format for densities.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Largest representation dimension handled by the brute-force intertwiner solver.
    #[arg(long, global = true, default_value_t = covobs::covariance::DEFAULT_ORACLE_BOUND, value_parser = parse_bound)]
    pub oracle_bound: usize,
    /// Output file (written atomically); stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory holding `<group>.json` irrep catalogs that override the built-in ones.
    #[arg(long, global = true, env = "COVOBS_CATALOG_DIR")]
    pub catalog_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t < 1e-3 {
        Ok(t)
    } else {
        Err(format!("tolerance {t} is outside (0, 1e-3)"))
    }
}

fn parse_bound(s: &str) -> Result<usize, String> {
    let b: usize = s.parse().map_err(|e| format!("{e}"))?;
    if b <= 64 {
        Ok(b)
    } else {
        Err(format!("oracle bound {b} exceeds 64"))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Group tables.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Representations.
    #[command(subcommand)]
    Rep(RepCommand),
    /// POVMs and covariance systems.
    #[command(subcommand)]
    Povm(PovmCommand),
    /// Intertwiners between representations.
    #[command(subcommand)]
    Intertwiner(IntertwinerCommand),
    /// Quantum reference frames.
    #[command(subcommand)]
    Frame(FrameCommand),
    /// Observables relative to a quantum frame.
    #[command(subcommand)]
    Relative(RelativeCommand),
    /// Incompatibility of relative observables sharing a frame.
    #[command(subcommand)]
    Paradox(ParadoxCommand),
}

#[derive(Debug, Subcommand)]
enum GroupCommand {
    /// Check the group axioms of a Cayley table.
    Verify { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum RepCommand {
    /// Isotypic decomposition against the group's irrep catalog.
    Decompose { file: PathBuf },
    /// Induce a representation of a stabilizer up to the whole group.
    Induce {
        /// Transitive action file.
        action: PathBuf,
        /// Representation of the stabilizer, indexed by its elements in increasing order.
        inducing: PathBuf,
        /// Base point whose stabilizer is the little group.
        #[arg(long, default_value_t = 0)]
        point: usize,
    },
}

#[derive(Debug, Subcommand)]
enum PovmCommand {
    /// Check POVM axioms, plus covariance for a system file.
    Verify { file: PathBuf },
    /// Dilate a covariance system to an imprimitivity system.
    Dilate { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum IntertwinerCommand {
    /// Enumerate a basis of all intertwiners by brute force.
    Solve { source: PathBuf, target: PathBuf },
}

#[derive(Debug, Subcommand)]
enum FrameCommand {
    /// Build the frame observable as a covariance system.
    Build { file: PathBuf },
    /// Probability density of the frame's state on the group.
    Density { file: PathBuf },
    /// Push the frame observable forward to the cosets of a subgroup.
    Marginalize {
        file: PathBuf,
        /// Generators of the subgroup, as element indices.
        #[arg(long, value_delimiter = ',', required = true)]
        subgroup: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum RelativeCommand {
    /// Relative observable of a target with respect to the bundle's reference.
    Build {
        file: PathBuf,
        /// Position in the bundle's `targets` list.
        #[arg(long, default_value_t = 0)]
        target: usize,
    },
    /// Density of the relative observable in the bundle's product state.
    Density {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        target: usize,
    },
}

#[derive(Debug, Subcommand)]
enum ParadoxCommand {
    /// Largest commutator between the relative observables of the first two targets.
    Witness { file: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let cfg = &cli.config;
    let result = match &cli.command {
        Command::Group(GroupCommand::Verify { file }) => commands::group_verify(cfg, file),
        Command::Rep(RepCommand::Decompose { file }) => commands::rep_decompose(cfg, file),
        Command::Rep(RepCommand::Induce { action, inducing, point }) => {
            commands::rep_induce(cfg, action, inducing, *point)
        }
        Command::Povm(PovmCommand::Verify { file }) => commands::povm_verify(cfg, file),
        Command::Povm(PovmCommand::Dilate { file }) => commands::povm_dilate(cfg, file),
        Command::Intertwiner(IntertwinerCommand::Solve { source, target }) => {
            commands::intertwiner_solve(cfg, source, target)
        }
        Command::Frame(FrameCommand::Build { file }) => commands::frame_build(cfg, file),
        Command::Frame(FrameCommand::Density { file }) => commands::frame_density(cfg, file),
        Command::Frame(FrameCommand::Marginalize { file, subgroup }) => {
            commands::frame_marginalize(cfg, file, subgroup)
        }
        Command::Relative(RelativeCommand::Build { file, target }) => commands::relative_build(cfg, file, *target),
        Command::Relative(RelativeCommand::Density { file, target }) => {
            commands::relative_density(cfg, file, *target)
        }
        Command::Paradox(ParadoxCommand::Witness { file }) => commands::paradox_witness(cfg, file),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_structural() { 2 } else { 1 })
        }
    }
}
