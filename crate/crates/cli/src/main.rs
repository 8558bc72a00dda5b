use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod render;

#[derive(Parser, Debug)]
#[command(
    name = "arctensor",
    version,
    about = "Tangent forms, tensor forms and dual hypersurfaces of arcs over finite fields"
)]
pub struct Cli {
    /// Rendering of the report on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct, check, project and encode arcs.
    #[command(subcommand)]
    Arc(ArcCmd),
    /// Dimension and canonical basis of the forms of degree T vanishing on the arc.
    Phi {
        arc: PathBuf,
        #[arg(long)]
        t: u32,
    },
    /// Scaled tangent forms f_S and the g-function.
    #[command(subcommand)]
    Tangents(TangentsCmd),
    /// The multihomogeneous form F, coefficient extraction and quadrics.
    #[command(subcommand)]
    Tensor(TensorCmd),
    /// The dual form φ in hyperplane coordinates.
    #[command(subcommand)]
    Sbbt(SbbtCmd),
    /// Run every applicable verifier.
    Suite { arc: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ArcType {
    Nrc,
    Conic,
    Hyperoval,
    Custom,
}

#[derive(Subcommand, Debug)]
pub enum ArcCmd {
    /// Write a normal rational curve, conic, hyperoval or custom arc.
    New {
        #[arg(long = "type", value_enum)]
        kind: ArcType,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: Option<usize>,
        /// JSON array of point vectors (custom arcs only).
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(short = 'o', long = "output")]
        out: PathBuf,
    },
    /// Check that no k points lie in a hyperplane.
    Verify { arc: PathBuf },
    /// Project from one arc point to an arc one dimension lower.
    Project {
        arc: PathBuf,
        #[arg(long)]
        index: usize,
        #[arg(short = 'o', long = "output")]
        out: PathBuf,
    },
    /// Generator matrix of the associated code and its maximal minors.
    Mds { arc: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum TangentsCmd {
    /// Write the scaled tangent system.
    Build {
        arc: PathBuf,
        #[arg(short = 'o', long = "output")]
        out: PathBuf,
    },
    /// Check tangency, scaling and the sign rule of g under permutations.
    LemmaCheck {
        arc: PathBuf,
        /// Check a saved tangent system instead of rebuilding it.
        #[arg(long)]
        system: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TensorCmd {
    /// Write the coefficient array of F.
    Build {
        arc: PathBuf,
        #[arg(short = 'o', long = "output")]
        out: PathBuf,
    },
    /// Check F against g and its block properties.
    Verify {
        arc: PathBuf,
        /// Check a saved tensor form instead of rebuilding it.
        #[arg(long)]
        form: Option<PathBuf>,
        /// Also search for a block correction making the tangent identity exact.
        #[arg(long)]
        search_exact: bool,
    },
    /// Coefficient form of a monomial in the shifted blocks.
    Extract {
        arc: PathBuf,
        /// JSON array of k-2 exponent vectors, e.g. '[[0,0,0]]'.
        #[arg(long)]
        exponents: String,
        #[arg(long)]
        form: Option<PathBuf>,
    },
    /// Find a quadric through a (q+1)-arc of PG(3, q), q odd.
    QuadricCheck { arc: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum SbbtCmd {
    /// Interpolate φ and write it.
    Build {
        arc: PathBuf,
        #[arg(short = 'o', long = "output")]
        out: PathBuf,
    },
    /// Residual identity, hyperplane sweep, symmetry and agreement with g.
    Verify {
        arc: PathBuf,
        /// Check a saved form instead of rebuilding it.
        #[arg(long)]
        form: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    match commands::run(&cli) {
        Ok(mut report) => {
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            render::emit(&report, cli.format);
            ExitCode::from(if report.passed() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
