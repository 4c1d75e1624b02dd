//! Thin command-line front end; all work happens in the library.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use atomloc::cli::{run_chi_scan, run_dressed, run_preset, run_roots, run_verify};
use atomloc::config::{OutputFormat, RunConfig};
use atomloc::error::Result;
use atomloc::presets::PresetId;

#[derive(Parser)]
#[command(
    name = "atomloc",
    version,
    about = "Probe susceptibility and atom-localization data for a loop-driven four-level atom in a standing-wave cavity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Configuration file (flat key-value format; see README)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Standing-wave drive amplitude (gamma1 units)
    #[arg(long)]
    omega1: Option<f64>,
    /// Lower-leg drive amplitude
    #[arg(long)]
    omega2: Option<f64>,
    /// Loop drive amplitude
    #[arg(long)]
    omega3: Option<f64>,
    /// Collective drive phase (radians)
    #[arg(long)]
    phi: Option<f64>,
    /// Probe-transition decay rate (the frequency unit)
    #[arg(long)]
    gamma1: Option<f64>,
    /// Auxiliary-level decay rate
    #[arg(long)]
    gamma2: Option<f64>,
    /// Probe detuning for line scans (repeatable)
    #[arg(long = "delta")]
    deltas: Vec<f64>,
    /// Position grid points per standing-wave period
    #[arg(long)]
    grid: Option<usize>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long)]
    format: Option<String>,
    /// Seed for all random draws
    #[arg(long)]
    seed: Option<u64>,
    /// Verification sample count
    #[arg(long)]
    samples: Option<usize>,
    /// Peak prominence threshold (fraction of global maximum)
    #[arg(long)]
    prominence: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample chi'' and chi' over position for each detuning, plus a 2D map
    ChiScan(CommonArgs),
    /// Export the five resonance-detuning branch curves
    Roots(CommonArgs),
    /// Export dressed eigenvalues and decay rates along the standing wave
    Dressed(CommonArgs),
    /// Run the seeded self-verification suites
    Verify(CommonArgs),
    /// Reproduce the full data set of a reference figure
    Preset {
        /// One of: fig3, fig4, fig5, fig6
        id: String,
        #[command(flatten)]
        args: CommonArgs,
    },
}

fn build_config(args: &CommonArgs) -> Result<RunConfig> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    config.apply_env_overrides(std::env::vars())?;
    if let Some(v) = args.omega1 {
        config.params.omega1 = v;
    }
    if let Some(v) = args.omega2 {
        config.params.omega2 = v;
    }
    if let Some(v) = args.omega3 {
        config.params.omega3 = v;
    }
    if let Some(v) = args.phi {
        config.params.phi = v;
    }
    if let Some(v) = args.gamma1 {
        config.params.gamma1 = v;
    }
    if let Some(v) = args.gamma2 {
        config.params.gamma2 = v;
    }
    if !args.deltas.is_empty() {
        config.deltas = args.deltas.clone();
    }
    if let Some(v) = args.grid {
        config.grid = v;
    }
    if let Some(v) = &args.out {
        config.out_dir = v.clone();
    }
    if let Some(v) = &args.format {
        config.format = OutputFormat::from_str(v)?;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = args.samples {
        config.samples = v;
    }
    if let Some(v) = args.prominence {
        config.prominence_frac = v;
    }
    Ok(config)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::ChiScan(args) => run_chi_scan(&build_config(args)?),
        Command::Roots(args) => run_roots(&build_config(args)?),
        Command::Dressed(args) => run_dressed(&build_config(args)?),
        Command::Verify(args) => run_verify(&build_config(args)?),
        Command::Preset { id, args } => {
            let preset_id = PresetId::from_str(id)?;
            run_preset(preset_id, &build_config(args)?)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(&cli) {
        eprintln!("error: {err}");
        // 1 verification failure, 2 invalid configuration, 3 I/O.
        std::process::exit(err.exit_code());
    }
}
