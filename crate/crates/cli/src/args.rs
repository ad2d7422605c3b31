use clap::{Args, Parser, Subcommand, ValueEnum};
use isorabi::{CheckFamily, Complex64};

#[derive(Debug, Parser)]
#[command(
    name = "isorabi",
    version,
    about = "Quantum Rabi spectrum from the isomonodromic tau function"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

/// Tolerances, overridable through RABI_* environment variables.
#[derive(Debug, Args)]
pub struct Tolerances {
    /// Newton convergence threshold on the residual norm.
    #[arg(long, env = "RABI_TOL", default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, env = "RABI_MAX_ITER", default_value_t = 40)]
    pub max_iter: usize,
    /// Largest accepted |Im E|.
    #[arg(long, env = "RABI_IM_TOL", default_value_t = 1e-6)]
    pub im_tol: f64,
    /// Largest accepted |Tr(M_tM₀) − 2cos πσ|.
    #[arg(long, env = "RABI_MONODROMY_TOL", default_value_t = 1e-4)]
    pub monodromy_tol: f64,
    #[arg(long, env = "RABI_RTOL", default_value_t = 1e-12)]
    pub rtol: f64,
    #[arg(long, env = "RABI_ATOL", default_value_t = 1e-14)]
    pub atol: f64,
}

#[derive(Debug, Args)]
pub struct Truncation {
    /// Shift window: terms σ+n with |n| ≤ N.
    #[arg(long = "shifts", default_value_t = 4)]
    pub n_window: usize,
    /// Block truncation: |λ|+|μ| ≤ L.
    #[arg(long = "max-level", default_value_t = 10)]
    pub max_level: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the lowest levels.
    Spectrum {
        #[arg(long)]
        g: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Add Fock-space energies for comparison.
        #[arg(long)]
        with_oracle: bool,
        /// Fock cutoff for --with-oracle.
        #[arg(long, default_value_t = 80)]
        n_max: usize,
        #[command(flatten)]
        trunc: Truncation,
        #[command(flatten)]
        tols: Tolerances,
        #[command(flatten)]
        output: Output,
    },
    /// Truncated Fock-space diagonalization.
    Oracle {
        #[arg(long)]
        g: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 10)]
        levels: usize,
        #[arg(long, default_value_t = 80)]
        n_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate the tau function. Parameters are in series units; complex
    /// values accept forms like 0.5, 1e-3-2i or 0.3+0.1i.
    Tau {
        #[arg(long, allow_hyphen_values = true)]
        theta0: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        thetat: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        thetainf: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        s: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        t: Complex64,
        #[command(flatten)]
        trunc: Truncation,
        #[command(flatten)]
        output: Output,
    },
    /// Monodromy and connection data of the Fuchsian system at energy E.
    Monodromy {
        #[arg(long)]
        g: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long = "E", alias = "e", allow_hyphen_values = true)]
        e: f64,
        #[command(flatten)]
        tols: Tolerances,
        #[command(flatten)]
        output: Output,
    },
    /// Run the cross-check battery.
    Validate {
        /// Restrict to these families (repeatable).
        #[arg(long, value_parser = parse_family)]
        only: Vec<CheckFamily>,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Added to σ in the monodromy check.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        sigma_offset: f64,
        #[arg(long, env = "RABI_SEED", default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        tols: Tolerances,
        #[command(flatten)]
        output: Output,
    },
}

fn parse_family(s: &str) -> Result<CheckFamily, String> {
    s.parse()
}
