use std::path::PathBuf;
use std::process::ExitCode;

use cascade_lab_cli::config::{load_config, ConfigFields, ConfigFile, Experiment, ExperimentConfig};
use cascade_lab_cli::{run, HarnessError};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "cascade-lab", version, about = "Numerical experiments for a continuous turbulent cascade model")]
struct Cli {
    /// JSON configuration; flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form fixed points, spectra and norms
    FixedPoints(ConfigFields),
    /// Exact inviscid solution and finite-time attraction
    Inviscid(ConfigFields),
    /// Godunov evolution of the damped Burgers equation
    Viscous(ConfigFields),
    /// Regularized fixed point, evolution and characteristics
    Leray(ConfigFields),
    /// Dyadic shell model
    Shell(ConfigFields),
    /// Parameter sweeps
    Sweep {
        #[arg(long, value_enum, default_value = "nu")]
        sweep: SweepKind,
        #[command(flatten)]
        fields: ConfigFields,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SweepKind {
    Nu,
    Delta,
    Rates,
    KappaD,
}

fn resolve(cli: Cli) -> Result<ExperimentConfig, HarnessError> {
    let file = match &cli.config {
        Some(path) => load_config(path)?,
        None => ConfigFile::default(),
    };
    let (kind, flags) = match cli.command {
        Command::FixedPoints(f) => (Experiment::FixedPoints, f),
        Command::Inviscid(f) => (Experiment::Inviscid, f),
        Command::Viscous(f) => (Experiment::Viscous, f),
        Command::Leray(f) => (Experiment::Leray, f),
        Command::Shell(f) => (Experiment::Shell, f),
        Command::Sweep { sweep, fields } => (
            match sweep {
                SweepKind::Nu => Experiment::SweepNu,
                SweepKind::Delta => Experiment::SweepDelta,
                SweepKind::Rates => Experiment::SweepRates,
                SweepKind::KappaD => Experiment::SweepKappaD,
            },
            fields,
        ),
    };
    if let Some(declared) = file.experiment {
        if declared != kind {
            return Err(HarnessError::Config(format!(
                "config declares experiment `{}` but `{}` was requested",
                declared.name(),
                kind.name()
            )));
        }
    }
    ExperimentConfig::resolve(kind, file.fields.overridden_by(flags))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = resolve(cli).and_then(|cfg| run(&cfg));
    match outcome {
        Ok(summary) => {
            for line in &summary.report {
                println!("{line}");
            }
            for f in &summary.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
