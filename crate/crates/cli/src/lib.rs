//! Command-line front end for the defect-line quantum walk library:
//! reproduction datasets, parameter sweeps, and the validation suite,
//! emitted as deterministic CSV files with JSON sidecars.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::Settings;
use error::CliError;

#[derive(Parser)]
#[command(
    name = "ctqw",
    version,
    about = "Continuous-time quantum walks on a line with single-point defects",
    after_help = "Exit codes: 0 success, 1 validation failure, 2 configuration error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args, Clone, Default)]
struct Overrides {
    /// Uniform on-site energy.
    #[arg(long, global = true, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// Uniform hopping rate (nonzero).
    #[arg(long, global = true, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Extra on-site energy at the defect node.
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Extra hopping rate on the two defect bonds.
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Defect node index.
    #[arg(long, global = true, allow_negative_numbers = true)]
    jd: Option<i64>,
    /// Starting node of the walk.
    #[arg(long, global = true, allow_negative_numbers = true)]
    j0: Option<i64>,
    /// Evolution time; repeat the flag for several times.
    #[arg(long = "t", global = true)]
    t: Vec<f64>,
    /// Sweep specification var:start:stop:step (var: alpha, beta, jd, t).
    #[arg(long, global = true)]
    sweep: Option<String>,
    /// Gauss-Legendre quadrature nodes.
    #[arg(long, global = true)]
    nodes: Option<usize>,
    /// Truncation margin beyond the light cone (nodes).
    #[arg(long, global = true)]
    buffer: Option<usize>,
    /// Evolution backend: spectral, oracle, or both.
    #[arg(long, global = true)]
    backend: Option<String>,
    /// Output directory for CSV/JSON artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Key-value configuration file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl Overrides {
    fn to_settings(&self) -> Settings {
        Settings {
            epsilon: self.epsilon,
            gamma: self.gamma,
            alpha: self.alpha,
            beta: self.beta,
            jd: self.jd,
            j0: self.j0,
            times: if self.t.is_empty() {
                None
            } else {
                Some(self.t.clone())
            },
            sweep: self.sweep.clone(),
            nodes: self.nodes,
            buffer: self.buffer,
            backend: self.backend.clone(),
            out: self.out.clone(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Bound-state count and energies across a defect-strength sweep.
    BoundEnergy,
    /// Probability distribution P_j at the requested times.
    Evolve,
    /// Probability at the defect node across a defect-strength sweep.
    DefectProb,
    /// Spreading width sigma(t) with a defect-free reference series.
    Sigma,
    /// Run the validation suite and write the machine-readable report.
    Validate {
        /// Comma-separated criterion numbers to run (default: all).
        #[arg(long)]
        only: Option<String>,
        /// Scale factor applied to every tolerance (harness use).
        #[arg(long, hide = true, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
    /// Preset: bound energy against position-defect strength.
    Fig1,
    /// Preset: distributions and defect-site probability, position defect.
    Fig2,
    /// Preset: spreading width against time, position defect.
    Fig3,
    /// Preset: bound energy against transition-defect strength.
    Fig4,
    /// Preset: distributions for transition defects on the starting node.
    Fig5,
    /// Preset: defect-site probability against transition-defect strength.
    Fig6,
    /// Preset: spreading width against time, transition defect.
    Fig7,
    /// Preset: distributions with the walk starting away from the defect.
    Fig8,
}

fn settings_from(overrides: &Overrides) -> Result<Settings, CliError> {
    let base = match &overrides.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    Ok(base.overlay(overrides.to_settings()))
}

fn parse_only(only: Option<String>) -> Result<Option<Vec<u32>>, CliError> {
    let Some(text) = only else { return Ok(None) };
    let ids: Result<Vec<u32>, _> = text.split(',').map(|p| p.trim().parse::<u32>()).collect();
    let ids = ids.map_err(|_| CliError::config(format!("bad criterion list '{text}'")))?;
    if ids.iter().any(|&i| !(1..=12).contains(&i)) {
        return Err(CliError::config("criteria are numbered 1..=12"));
    }
    Ok(Some(ids))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let settings = settings_from(&cli.overrides)?;
    match cli.command {
        Command::BoundEnergy => commands::bound_energy(&settings.resolve()?, "bound_energy"),
        Command::Evolve => commands::evolve(&settings.resolve()?, "evolve"),
        Command::DefectProb => commands::defect_prob(&settings.resolve()?, "defect_prob"),
        Command::Sigma => commands::sigma(&settings.resolve()?, "sigma"),
        Command::Validate {
            only,
            tolerance_scale,
        } => {
            let out_dir = settings.resolve()?.out_dir;
            commands::validate(&out_dir, parse_only(only)?, tolerance_scale)
        }
        Command::Fig1 => commands::fig1(&settings),
        Command::Fig2 => commands::fig2(&settings),
        Command::Fig3 => commands::fig3(&settings),
        Command::Fig4 => commands::fig4(&settings),
        Command::Fig5 => commands::fig5(&settings),
        Command::Fig6 => commands::fig6(&settings),
        Command::Fig7 => commands::fig7(&settings),
        Command::Fig8 => commands::fig8(&settings),
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
