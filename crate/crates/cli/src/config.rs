//! Experiment configuration: a JSON document whose keys mirror the CLI flags.
//! Flags given on the command line override the file.

use std::path::{Path, PathBuf};

use cascade_lab::ModelParams;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    FixedPoints,
    Inviscid,
    Viscous,
    Leray,
    Shell,
    SweepNu,
    SweepDelta,
    SweepRates,
    SweepKappaD,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::FixedPoints => "fixed-points",
            Self::Inviscid => "inviscid",
            Self::Viscous => "viscous",
            Self::Leray => "leray",
            Self::Shell => "shell",
            Self::SweepNu => "sweep-nu",
            Self::SweepDelta => "sweep-delta",
            Self::SweepRates => "sweep-rates",
            Self::SweepKappaD => "sweep-kappa-d",
        }
    }
}

/// Every field is optional so that a file and the flags can be layered.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigFields {
    /// Spectral exponent alpha in [5/3, 8/3]
    #[arg(long, conflicts_with = "c")]
    pub alpha: Option<f64>,
    /// Intermittency correction c in [0, 1/2]; alpha = 5/3 + 2c
    #[arg(long)]
    pub c: Option<f64>,
    /// Energy input rate
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Kinematic viscosity
    #[arg(long)]
    pub nu: Option<f64>,
    /// Mollifier width for the regularized equation
    #[arg(long)]
    pub delta: Option<f64>,
    /// Number of xi cells
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Final rescaled time
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Courant number
    #[arg(long)]
    pub cfl: Option<f64>,
    /// Seed for a random piecewise-linear initial profile
    #[arg(long)]
    pub seed: Option<u64>,
    /// Two-column CSV (xi, w0) with the initial profile
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Constant initial profile value (used when neither profile nor seed is given)
    #[arg(long)]
    pub w0: Option<f64>,
    /// Snapshot times (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<f64>>,
    /// Start of the dissipation time average
    #[arg(long)]
    pub burn_in: Option<f64>,
    /// Viscosities for sweeps (comma separated, strictly decreasing)
    #[arg(long, value_delimiter = ',')]
    pub nu_list: Option<Vec<f64>>,
    /// Mollifier widths for the delta sweep (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub delta_list: Option<Vec<f64>>,
    /// Exponents for the rate sweep (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub alpha_list: Option<Vec<f64>>,
    /// Refine each sweep row to this many cells per dissipation length
    #[arg(long)]
    pub cells_per_xi_d: Option<f64>,
    /// Add the Richardson value 2 D(n) - D(n/2) to each sweep row
    #[arg(long)]
    pub extrapolate: Option<bool>,
    /// Shell model truncation index N
    #[arg(long)]
    pub shells: Option<usize>,
    /// Shell model intermittency parameter d
    #[arg(long)]
    pub d: Option<f64>,
    /// Shell model maximal time step
    #[arg(long)]
    pub dt: Option<f64>,
    /// Value pinned at shell 0 (0 disables forcing)
    #[arg(long)]
    pub pin: Option<f64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ConfigFields {
    /// Fields set in `other` win.
    pub fn overridden_by(self, other: ConfigFields) -> ConfigFields {
        macro_rules! pick {
            ($($f:ident),*) => { ConfigFields { $($f: other.$f.or(self.$f)),* } };
        }
        pick!(
            alpha, c, epsilon, nu, delta, grid_n, t_end, cfl, seed, profile, w0, snapshots, burn_in, nu_list,
            delta_list, alpha_list, cells_per_xi_d, extrapolate, shells, d, dt, pin, out
        )
    }
}

/// File format: the fields above plus the experiment kind.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigFile {
    pub experiment: Option<Experiment>,
    #[serde(flatten)]
    pub fields: ConfigFields,
}

pub fn load_config(path: &Path) -> Result<ConfigFile, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
}

/// Fully resolved configuration with defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub params: ModelParams,
    pub delta: f64,
    pub grid_n: usize,
    pub t_end: f64,
    pub cfl: f64,
    pub seed: Option<u64>,
    pub profile: Option<PathBuf>,
    pub w0: Option<f64>,
    pub snapshots: Vec<f64>,
    pub burn_in: f64,
    pub nu_list: Vec<f64>,
    pub delta_list: Vec<f64>,
    pub alpha_list: Vec<f64>,
    pub cells_per_xi_d: Option<f64>,
    pub extrapolate: bool,
    pub shells: usize,
    pub d: f64,
    pub dt: f64,
    pub pin: Option<f64>,
    pub out: PathBuf,
}

impl ExperimentConfig {
    pub fn resolve(experiment: Experiment, f: ConfigFields) -> Result<Self, HarnessError> {
        let epsilon = f.epsilon.unwrap_or(1.0);
        let default_nu = match experiment {
            Experiment::Inviscid => 0.0,
            Experiment::Shell => 1e-8,
            _ => 1e-2,
        };
        let nu = f.nu.unwrap_or(default_nu);
        let params = match (f.alpha, f.c) {
            (Some(_), Some(_)) => return Err(HarnessError::Config("give either alpha or c, not both".into())),
            (_, Some(c)) => ModelParams::from_c(c, epsilon, nu)?,
            (a, None) => ModelParams::from_alpha(a.unwrap_or(2.0), epsilon, nu)?,
        };
        let t_end = f.t_end.unwrap_or(match experiment {
            Experiment::Inviscid => 2.05,
            Experiment::Shell => 10.0,
            Experiment::SweepNu => 4.0,
            _ => 3.0,
        });
        let grid_n = f.grid_n.unwrap_or(match experiment {
            Experiment::SweepNu => 4096,
            Experiment::SweepDelta => 16384,
            _ => 1024,
        });
        let snapshots = f.snapshots.unwrap_or_else(|| {
            let k = 4;
            (0..=k).map(|i| t_end * i as f64 / k as f64).collect()
        });
        if snapshots.iter().any(|&t| !(0.0..=t_end).contains(&t)) {
            return Err(HarnessError::Config(format!("snapshot times must lie in [0, {t_end}]")));
        }
        let cfg = Self {
            experiment,
            params,
            delta: f.delta.unwrap_or(0.05),
            grid_n,
            t_end,
            cfl: f.cfl.unwrap_or(0.9),
            seed: f.seed,
            profile: f.profile,
            w0: f.w0,
            snapshots,
            burn_in: f.burn_in.unwrap_or(cascade_lab::viscous::DEFAULT_BURN_IN),
            nu_list: f.nu_list.unwrap_or_else(|| match experiment {
                Experiment::SweepRates => (0..7).map(|k| 10f64.powf(-3.0 - 0.5 * k as f64)).collect(),
                Experiment::SweepKappaD => vec![1e-4, 1e-5, 1e-6],
                _ => vec![1e-1, 1e-2, 1e-3],
            }),
            delta_list: f.delta_list.unwrap_or_else(|| vec![1e-1, 1e-2, 1e-3]),
            alpha_list: f.alpha_list.unwrap_or_else(|| vec![2.0, 2.5]),
            cells_per_xi_d: f.cells_per_xi_d,
            extrapolate: f.extrapolate.unwrap_or(false),
            shells: f.shells.unwrap_or(24),
            d: f.d.unwrap_or(1.0),
            dt: f.dt.unwrap_or(1e-3),
            pin: match f.pin {
                Some(0.0) => None,
                Some(v) => Some(v),
                None => Some(1.0),
            },
            out: f.out.unwrap_or_else(|| PathBuf::from("out")),
        };
        if cfg.t_end.is_nan() || cfg.t_end <= 0.0 {
            return Err(HarnessError::Config(format!("t-end = {} must be positive", cfg.t_end)));
        }
        Ok(cfg)
    }

    /// `key = value` lines echoed into every CSV header.
    pub fn header_lines(&self) -> Vec<String> {
        let p = &self.params;
        let list = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        let mut lines = vec![
            format!("experiment = {}", self.experiment.name()),
            format!("alpha = {}", p.alpha),
            format!("c = {}", p.c),
            format!("gamma = {}", p.gamma),
            format!("epsilon = {}", p.epsilon),
            format!("nu = {}", p.nu),
            format!("mu = {}", p.mu),
            format!("delta = {}", self.delta),
            format!("grid-n = {}", self.grid_n),
            format!("t-end = {}", self.t_end),
            format!("cfl = {}", self.cfl),
            format!("seed = {}", self.seed.map_or("none".into(), |s| s.to_string())),
            format!("profile = {}", self.profile.as_ref().map_or("none".into(), |p| p.display().to_string())),
            format!("w0 = {}", self.w0.map_or("none".into(), |v| v.to_string())),
            format!("snapshots = {}", list(&self.snapshots)),
            format!("burn-in = {}", self.burn_in),
            format!("nu-list = {}", list(&self.nu_list)),
            format!("delta-list = {}", list(&self.delta_list)),
            format!("alpha-list = {}", list(&self.alpha_list)),
            format!("cells-per-xi-d = {}", self.cells_per_xi_d.map_or("none".into(), |v| v.to_string())),
            format!("extrapolate = {}", self.extrapolate),
        ];
        if self.experiment == Experiment::Shell {
            lines.extend([
                format!("shells = {}", self.shells),
                format!("d = {}", self.d),
                format!("dt = {}", self.dt),
                format!("pin = {}", self.pin.map_or("none".into(), |v| v.to_string())),
            ]);
        }
        lines
    }
}
