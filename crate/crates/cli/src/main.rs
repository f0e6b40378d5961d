mod config;
mod report;
mod runner;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::Scenario;
use runner::RunStatus;
use std::path::PathBuf;
use std::process::ExitCode;
use tma_core::Result;

/// Single-sideband time-modulated array synthesis tool.
#[derive(Debug, Parser)]
#[command(name = "tma", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Overrides applied on top of the scenario file. Only keys given on the
/// command line are touched.
#[derive(Debug, Clone, Args)]
struct Overrides {
    /// Output directory (also overridable via TMA_OUTPUT_DIR).
    #[arg(long)]
    output_dir: Option<String>,
    /// Scan angle of the first-harmonic beam, degrees.
    #[arg(long)]
    scan_deg: Option<f64>,
    /// Angular grid step, degrees.
    #[arg(long)]
    step_deg: Option<f64>,
    /// Trapezoid rise/fall as a fraction of the period.
    #[arg(long)]
    delta: Option<f64>,
    /// Number of array elements.
    #[arg(long)]
    n_elements: Option<usize>,
    /// Annealer seed.
    #[arg(long)]
    seed: Option<u64>,
}

impl Overrides {
    fn apply(&self, s: &mut Scenario) -> Result<()> {
        if let Some(v) = &self.output_dir {
            s.output.dir = v.clone();
        }
        if let Some(v) = self.scan_deg {
            s.steering.scan_deg = v;
        }
        if let Some(v) = self.step_deg {
            s.grid.step_deg = v;
        }
        if let Some(v) = self.delta {
            s.excitation.delta = v;
        }
        if let Some(v) = self.n_elements {
            s.array.n_elements = v;
        }
        if let Some(v) = self.seed {
            s.optimizer.seed = v;
        }
        s.validate()
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the switching waveforms and dump their spectral lines.
    Pulse {
        /// Optional scenario file (for `delta`, output dir, ...).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Waveform samples per period.
        #[arg(long, default_value_t = 2048)]
        samples: usize,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Compute a steered harmonic pattern with metrics and plots.
    Pattern {
        #[arg(long)]
        config: PathBuf,
        /// Exit 3 if a `[check]` threshold is violated.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Compute the power budget and efficiencies only.
    Efficiency {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Evaluate pattern metrics across a set of scan angles.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Anneal the duty cycles toward the side-lobe / harmonic targets.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Re-run one of the bundled reference scenarios.
    Reproduce {
        figure: Figure,
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Figure {
    Fig3a,
    Fig3b,
    Fig3c,
    Fig3d,
    Fig5,
    Fig6,
}

impl Figure {
    fn scenario_toml(self) -> &'static str {
        match self {
            Figure::Fig3a => include_str!("../../../scenarios/fig3a.toml"),
            Figure::Fig3b => include_str!("../../../scenarios/fig3b.toml"),
            Figure::Fig3c => include_str!("../../../scenarios/fig3c.toml"),
            Figure::Fig3d => include_str!("../../../scenarios/fig3d.toml"),
            Figure::Fig5 => include_str!("../../../scenarios/fig5.toml"),
            Figure::Fig6 => include_str!("../../../scenarios/fig6.toml"),
        }
    }
}

fn load(path: &PathBuf, overrides: &Overrides) -> Result<Scenario> {
    let mut s = Scenario::parse(path)?;
    overrides.apply(&mut s)?;
    Ok(s)
}

fn run(cli: Cli) -> Result<RunStatus> {
    match cli.command {
        Command::Pulse {
            config,
            samples,
            overrides,
        } => {
            let mut s = match config {
                Some(p) => Scenario::parse(&p)?,
                None => Scenario::parse_str("mode = \"pulse-debug\"")?,
            };
            overrides.apply(&mut s)?;
            runner::run_pulse(&s, samples)
        }
        Command::Pattern {
            config,
            check,
            overrides,
        } => runner::run_pattern(&load(&config, &overrides)?, check),
        Command::Efficiency { config, overrides } => {
            runner::run_efficiency(&load(&config, &overrides)?)
        }
        Command::Sweep {
            config,
            check,
            overrides,
        } => runner::run_sweep(&load(&config, &overrides)?, check),
        Command::Optimize {
            config,
            check,
            overrides,
        } => runner::run_optimize(&load(&config, &overrides)?, check),
        Command::Reproduce {
            figure,
            check,
            overrides,
        } => {
            let mut s = Scenario::parse_str(figure.scenario_toml())?;
            overrides.apply(&mut s)?;
            runner::run_scenario(&s, check)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(RunStatus::Ok) => ExitCode::SUCCESS,
        Ok(RunStatus::CheckViolated) => {
            eprintln!("check thresholds violated");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
