//! One function per experiment kind. Each writes its CSV files into the
//! output directory and returns a short report.

use std::path::PathBuf;

use cascade_lab::field::XiGrid;
use cascade_lab::fixed_point::{dissipation_wavenumber, inviscid_a0, rescaled_w, viscous_anu};
use cascade_lab::inviscid::{verify_attraction, InitialProfile, LaxOleinik};
use cascade_lab::leray::{
    attractor_deviation, count_crossings, evolve_regularized_with_history, fixed_point_regularized,
    trace_characteristic, Mollifier,
};
use cascade_lab::norms::{energy_viscous, enstrophy_viscous, l2_distance_sq_fixed_points};
use cascade_lab::shell::{shell_evolve, shell_spectrum, shell_steady_slope, ShellConfig, ShellState};
use cascade_lab::spectrum::{fit_log_log, log_spaced};
use cascade_lab::viscous::{
    check_decreasing, dissipation_anomaly_row, evolve, time_avg_dissipation, AnomalyOptions, AnomalyRow,
    SolverConfig, Trajectory,
};
use cascade_lab::ModelParams;

use crate::config::{Experiment, ExperimentConfig};
use crate::fit::fit_convergence_rate;
use crate::output::{read_profile, CsvTable};
use crate::pool::map_ordered;
use crate::HarnessError;

type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub report: Vec<String>,
}

impl RunSummary {
    fn say(&mut self, line: impl Into<String>) {
        self.report.push(line.into());
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunSummary> {
    match cfg.experiment {
        Experiment::FixedPoints => fixed_points(cfg),
        Experiment::Inviscid => inviscid(cfg),
        Experiment::Viscous => viscous(cfg),
        Experiment::Leray => leray(cfg),
        Experiment::Shell => shell(cfg),
        Experiment::SweepNu => sweep_nu(cfg),
        Experiment::SweepDelta => sweep_delta(cfg),
        Experiment::SweepRates => sweep_rates(cfg),
        Experiment::SweepKappaD => sweep_kappa_d(cfg),
    }
}

/// Profile file, then seed, then constant `w0`, then `fallback`.
pub fn initial_profile(cfg: &ExperimentConfig, fallback: f64) -> Result<InitialProfile> {
    if let Some(path) = &cfg.profile {
        return read_profile(path);
    }
    if let Some(seed) = cfg.seed {
        return Ok(InitialProfile::random(seed, RANDOM_PIECES));
    }
    Ok(InitialProfile::constant(cfg.w0.unwrap_or(fallback))?)
}

const RANDOM_PIECES: usize = 8;
const MAX_SERIES_ROWS: f64 = 4000.0;

fn solver_config(cfg: &ExperimentConfig) -> SolverConfig {
    let mut sc = SolverConfig::new(cfg.grid_n, cfg.t_end).with_cfl(cfg.cfl).with_snapshots(cfg.snapshots.clone());
    let est_steps = cfg.t_end * cfg.grid_n as f64 / cfg.cfl;
    sc.series_stride = (est_steps / MAX_SERIES_ROWS).ceil().max(1.0) as usize;
    sc
}

fn snapshot_table(cfg: &ExperimentConfig, traj: &Trajectory) -> CsvTable {
    let mut t = CsvTable::new(&cfg.header_lines(), &["t", "xi", "w"]);
    for snap in &traj.snapshots {
        for (x, w) in snap.grid.centers().zip(&snap.values) {
            t.row(&[snap.time, x, *w]);
        }
    }
    t
}

fn series_table(cfg: &ExperimentConfig, traj: &Trajectory) -> CsvTable {
    let mut t = CsvTable::new(&cfg.header_lines(), &["t", "energy", "dissipation"]);
    for k in 0..traj.series_times.len() {
        t.row(&[traj.series_times[k], traj.energy_series[k], traj.dissipation_series[k]]);
    }
    t
}

/// Quarter-octave wavenumbers from 1 to `kappa_max`; includes every power of two.
fn quarter_octaves(kappa_max: f64) -> Vec<f64> {
    let top = (4.0 * kappa_max.log2()).ceil().max(4.0) as i32;
    (0..=top).map(|k| 2f64.powf(k as f64 / 4.0)).collect()
}

fn fixed_points(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let p = &cfg.params;
    let mut out = RunSummary::default();
    let viscous = p.nu > 0.0;
    let kappa_d = if viscous { Some(dissipation_wavenumber(p)?) } else { None };
    let kappa_max = kappa_d.map_or(1e6, |(k, _)| (4.0 * k).min(1e12));
    let kappas = quarter_octaves(kappa_max);

    let columns: &[&str] = if viscous { &["kappa", "xi", "a0", "anu", "w"] } else { &["kappa", "xi", "a0"] };
    let mut table = CsvTable::new(&cfg.header_lines(), columns);
    let mut spec = CsvTable::new(&cfg.header_lines(), if viscous { &["kappa", "a0_sq", "anu_sq"] } else { &["kappa", "a0_sq"] });
    let mut a0_pairs = Vec::new();
    for &k in &kappas {
        let xi = k.powf(-1.0 / p.gamma);
        let a0 = inviscid_a0(p, k)?;
        a0_pairs.push((k, a0 * a0));
        if viscous {
            let anu = viscous_anu(p, k)?;
            table.row(&[k, xi, a0, anu, rescaled_w(p, xi)?]);
            spec.row(&[k, a0 * a0, anu * anu]);
        } else {
            table.row(&[k, xi, a0]);
            spec.row(&[k, a0 * a0]);
        }
    }
    let a0_fit = fit_log_log(&a0_pairs)?;
    spec.note(format!("a0-spectrum-slope = {}", a0_fit.slope));
    out.say(format!("A0 spectrum slope {:.12} (expected {:.12})", a0_fit.slope, -p.alpha));
    if let Some((kd, xid)) = kappa_d {
        let balance = p.nu * enstrophy_viscous(p)? / p.epsilon;
        let energy = energy_viscous(p)?;
        let dist = l2_distance_sq_fixed_points(p)?;
        for t in [&mut table, &mut spec] {
            t.note(format!("kappa-d = {kd}"));
            t.note(format!("xi-d = {xid}"));
        }
        table.note(format!("dissipation-over-epsilon = {balance}"));
        table.note(format!("energy-anu = {energy}"));
        table.note(format!("l2-distance-sq = {dist}"));
        if let Ok(slope) = inertial_slope(p, kd) {
            spec.note(format!("anu-inertial-slope = {slope}"));
            out.say(format!("A^nu inertial slope {slope:.6}"));
        }
        out.say(format!("kappa_d = {kd}, xi_d = {xid}"));
        out.say(format!("nu ||A^nu||^2 / eps = {balance:.15}"));
        out.say(format!("|A^nu|^2 = {energy}, ||A^nu - A0||^2 = {dist}"));
    }
    out.files.push(table.write(&cfg.out, "fixed_points.csv")?);
    out.files.push(spec.write(&cfg.out, "spectrum.csv")?);
    Ok(out)
}

/// Spectrum slope of `A^nu` over the inertial window `[1, kappa_d / 10]`.
pub fn inertial_slope(params: &ModelParams, kappa_d: f64) -> std::result::Result<f64, cascade_lab::Error> {
    let hi = kappa_d / 10.0;
    if hi < 10.0 {
        return Err(cascade_lab::Error::Fit(format!("no inertial window below kappa_d = {kappa_d}")));
    }
    let pairs = log_spaced(1.0, hi, 64)
        .into_iter()
        .map(|k| viscous_anu(params, k).map(|a| (k, a * a)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(fit_log_log(&pairs)?.slope)
}

fn inviscid(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let mut out = RunSummary::default();
    let profile = initial_profile(cfg, 0.0)?;
    let grid = XiGrid::new(cfg.grid_n)?;
    let solver = LaxOleinik::new(&profile);
    let mut table = CsvTable::new(&cfg.header_lines(), &["t", "xi", "w"]);
    for &t in &cfg.snapshots {
        for x in grid.centers() {
            let w = if t == 0.0 { profile.sample(x) } else { solver.eval(x, t)? };
            table.row(&[t, x, w]);
        }
    }
    let margin = if cfg.t_end > 2.0 { cfg.t_end - 2.0 } else { 0.05 };
    let report = verify_attraction(&profile, &cfg.params, &grid, margin, 1e-12)?;
    table.note(format!("attraction-t-eval = {}", report.t_eval));
    table.note(format!("attraction-max-deviation = {}", report.max_deviation));
    table.note(format!("attraction-measured-time = {}", report.measured_time));
    table.note(format!("attraction-physical-bound = {}", report.physical_bound));
    out.say(format!(
        "max |w(., {}) - 1| = {:.3e}; grid equals 1 from t = {:.6} (bound 2, physical {:.6})",
        report.t_eval, report.max_deviation, report.measured_time, report.physical_bound
    ));
    out.files.push(table.write(&cfg.out, "inviscid_snapshots.csv")?);
    Ok(out)
}

fn viscous(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let mut out = RunSummary::default();
    let profile = initial_profile(cfg, 0.0)?;
    let traj = evolve(&profile, &cfg.params, &solver_config(cfg))?;
    let mut series = series_table(cfg, &traj);
    if cfg.t_end > cfg.burn_in {
        let avg = time_avg_dissipation(&traj, cfg.burn_in)?;
        series.note(format!("avg-dissipation = {avg}"));
        out.say(format!("time-averaged dissipation on [{}, {}]: {avg:.6} (eps = {})", cfg.burn_in, cfg.t_end, cfg.params.epsilon));
    }
    out.say(format!("{} steps", traj.steps));
    out.files.push(snapshot_table(cfg, &traj).write(&cfg.out, "viscous_snapshots.csv")?);
    out.files.push(series.write(&cfg.out, "viscous_series.csv")?);
    Ok(out)
}

/// `sup |W_delta - W|` over grid points in `[0.3, 1]`.
pub fn regularized_sup_deviation(params: &ModelParams, delta: f64, grid: &XiGrid) -> Result<(f64, f64)> {
    let fp = fixed_point_regularized(params, &Mollifier::new(delta)?, grid)?;
    let mut sup: f64 = 0.0;
    for (i, x) in grid.centers().enumerate() {
        if x >= 0.3 {
            sup = sup.max((fp.values[i] - rescaled_w(params, x)?).abs());
        }
    }
    Ok((sup, fp.eval(0.5)))
}

const CHARACTERISTIC_STARTS: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];

fn leray(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let mut out = RunSummary::default();
    let p = &cfg.params;
    let mollifier = Mollifier::new(cfg.delta)?;
    let grid = XiGrid::new(cfg.grid_n)?;
    let fp = fixed_point_regularized(p, &mollifier, &grid)?;
    let mut fixed = CsvTable::new(&cfg.header_lines(), &["xi", "w_delta", "w"]);
    for (i, x) in grid.centers().enumerate() {
        fixed.row(&[x, fp.values[i], rescaled_w(p, x)?]);
    }
    let (sup, _) = regularized_sup_deviation(p, cfg.delta, &grid)?;
    fixed.note(format!("sup-deviation-0.3-1 = {sup}"));
    fixed.note(format!("cutoff-xi = {}", fp.cutoff_index.map_or(0.0, |i| grid.center(i))));
    out.say(format!("sup over [0.3, 1] of |W_delta - W| = {sup:.4e}"));

    let profile = initial_profile(cfg, 1.0)?;
    let sc = solver_config(cfg);
    let (traj, history) = evolve_regularized_with_history(&profile, p, &mollifier, &sc, 1)?;
    let chars = CHARACTERISTIC_STARTS
        .iter()
        .map(|&s| trace_characteristic(&history, p, s))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let crossings = count_crossings(&chars);
    let boundary = chars.last().expect("boundary start listed");
    let deviation = attractor_deviation(&history, boundary, &fp, 2)?;
    let mut ctable = CsvTable::new(&cfg.header_lines(), &["start_xi", "t", "eta", "carried", "field"]);
    ctable.note(format!("crossings = {crossings}"));
    ctable.note(format!("deviation-behind-boundary = {deviation}"));
    let stride = (history.times.len() / 400).max(1);
    for c in &chars {
        for k in (0..c.times.len()).step_by(stride) {
            ctable.row(&[c.start_xi, c.times[k], c.positions[k], c.carried[k], c.field_values[k]]);
        }
    }
    out.say(format!("characteristic crossings: {crossings}"));
    out.say(format!("max |w_delta - W_delta| behind the boundary characteristic: {deviation:.3e}"));
    out.files.push(fixed.write(&cfg.out, "leray_fixed_point.csv")?);
    out.files.push(snapshot_table(cfg, &traj).write(&cfg.out, "leray_snapshots.csv")?);
    out.files.push(series_table(cfg, &traj).write(&cfg.out, "leray_series.csv")?);
    out.files.push(ctable.write(&cfg.out, "characteristics.csv")?);
    Ok(out)
}

fn shell(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let mut out = RunSummary::default();
    let state = ShellState::zeros(cfg.shells, cfg.d, cfg.params.nu)?;
    let dt = cfg.dt.min(0.9 * state.max_stable_dt());
    let mut sc = ShellConfig::new(cfg.t_end, dt);
    sc.pin = cfg.pin;
    let est = cfg.t_end / dt;
    sc.record_every = (est / MAX_SERIES_ROWS).ceil().max(1.0) as usize;
    let traj = shell_evolve(&state, &sc)?;
    let fin = &traj.final_state;
    let mut spectrum = CsvTable::new(&cfg.header_lines(), &["j", "a_j", "k_j", "a_j_sq_over_k_j"]);
    let j_hi = fin.dissipation_shell().saturating_sub(3);
    match shell_steady_slope(fin, 2, j_hi) {
        Ok(s) => {
            spectrum.note(format!("slope = {}", s.slope()));
            spectrum.note(format!("slope-window = 2..={j_hi}"));
            spectrum.note(format!("slope-flagged = {}", s.flagged));
            out.say(format!("inertial slope over shells 2..={j_hi}: {:.4} (expected {:.4})", s.slope(), -cfg.d / 3.0));
        }
        Err(e) => out.say(format!("no inertial slope: {e}")),
    }
    spectrum.note(format!("dissipation-shell = {}", fin.dissipation_shell()));
    for (j, a, k, e) in shell_spectrum(fin) {
        spectrum.row(&[j as f64, a, k, e]);
    }
    let mut series = CsvTable::new(&cfg.header_lines(), &["t", "energy", "production", "dissipation"]);
    for s in &traj.samples {
        series.row(&[s.t, s.energy, s.production, s.dissipation]);
    }
    out.say(format!("{} RK4 steps", traj.steps));
    out.files.push(spectrum.write(&cfg.out, "shell_spectrum.csv")?);
    out.files.push(series.write(&cfg.out, "shell_series.csv")?);
    Ok(out)
}

pub fn anomaly_rows(cfg: &ExperimentConfig) -> Result<Vec<AnomalyRow>> {
    check_decreasing(&cfg.nu_list)?;
    let sc = solver_config(cfg);
    let options = AnomalyOptions {
        burn_in: cfg.burn_in,
        cells_per_xi_d: cfg.cells_per_xi_d,
        extrapolate: cfg.extrapolate,
    };
    map_ordered(&cfg.nu_list, |&nu| dissipation_anomaly_row(&cfg.params, nu, &sc, &options))
        .into_iter()
        .map(|r| r.map_err(HarnessError::from))
        .collect()
}

fn sweep_nu(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let mut out = RunSummary::default();
    let rows = anomaly_rows(cfg)?;
    let mut t = CsvTable::new(
        &cfg.header_lines(),
        &["nu", "avg_dissipation", "extrapolated", "n", "kappa_d", "xi_d", "resolved"],
    );
    for r in &rows {
        t.row(&[
            r.nu,
            r.avg_dissipation,
            r.extrapolated.unwrap_or(f64::NAN),
            r.n as f64,
            r.kappa_d,
            r.xi_d,
            if r.resolved { 1.0 } else { 0.0 },
        ]);
        out.say(format!(
            "nu = {:e}: average {:.6}{} (n = {}, kappa_d = {:.4e}{})",
            r.nu,
            r.avg_dissipation,
            r.extrapolated.map_or(String::new(), |e| format!(", extrapolated {e:.6}")),
            r.n,
            r.kappa_d,
            if r.resolved { "" } else { ", under-resolved" }
        ));
    }
    out.files.push(t.write(&cfg.out, "anomaly.csv")?);
    Ok(out)
}

fn sweep_delta(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let mut out = RunSummary::default();
    let grid = XiGrid::new(cfg.grid_n)?;
    let rows = map_ordered(&cfg.delta_list, |&d| regularized_sup_deviation(&cfg.params, d, &grid))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut t = CsvTable::new(&cfg.header_lines(), &["delta", "sup_deviation", "w_delta_half"]);
    let pairs: Vec<(f64, f64)> = cfg.delta_list.iter().zip(&rows).map(|(&d, r)| (d, r.0)).collect();
    if let Ok(fit) = fit_convergence_rate(&pairs) {
        t.note(format!("rate-fit: {}", fit.describe()));
        out.say(format!("sup deviation ~ delta^{:.3}", fit.exponent));
    }
    for (&d, (sup, half)) in cfg.delta_list.iter().zip(&rows) {
        t.row(&[d, *sup, *half]);
        out.say(format!("delta = {d:e}: sup |W_delta - W| = {sup:.4e}, W_delta(1/2) = {half:.6}"));
    }
    out.files.push(t.write(&cfg.out, "regularized.csv")?);
    Ok(out)
}

/// Derived exponent of `||A^nu - A0||^2` in `nu`.
pub fn predicted_rate(alpha: f64) -> f64 {
    ((alpha - 1.0) / (3.0 - alpha)).min(2.0)
}

fn sweep_rates(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let mut out = RunSummary::default();
    let mut t = CsvTable::new(&cfg.header_lines(), &["alpha", "nu", "l2_distance_sq"]);
    for &alpha in &cfg.alpha_list {
        let mut pairs = Vec::new();
        for &nu in &cfg.nu_list {
            let p = ModelParams::from_alpha(alpha, cfg.params.epsilon, nu)?;
            let d = l2_distance_sq_fixed_points(&p)?;
            pairs.push((nu, d));
            t.row(&[alpha, nu, d]);
        }
        let fit = fit_convergence_rate(&pairs)?;
        t.note(format!("alpha {alpha}: predicted {} fit {}", predicted_rate(alpha), fit.describe()));
        out.say(format!("alpha = {alpha}: exponent {:.4} (predicted {:.4}, residual {:.2e})", fit.exponent, predicted_rate(alpha), fit.residual));
    }
    out.files.push(t.write(&cfg.out, "rates.csv")?);
    Ok(out)
}

/// `kappa_d / (eps^(1/3) / nu)^(1/(3 - alpha))`, which tends to `(3(3 - alpha))^(1/(3 - alpha))`.
pub fn scaled_kappa_d(params: &ModelParams) -> Result<f64> {
    let (kd, _) = dissipation_wavenumber(params)?;
    let base = params.epsilon.cbrt() / params.nu;
    Ok(kd / base.powf(1.0 / (3.0 - params.alpha)))
}

fn sweep_kappa_d(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let mut out = RunSummary::default();
    let mut t = CsvTable::new(&cfg.header_lines(), &["nu", "kappa_d", "scaled", "k41_ratio"]);
    let mut scaled = Vec::new();
    for &nu in &cfg.nu_list {
        let p = cfg.params.with_nu(nu)?;
        let (kd, _) = dissipation_wavenumber(&p)?;
        let s = scaled_kappa_d(&p)?;
        scaled.push(s);
        t.row(&[nu, kd, s, kd / (p.epsilon / nu.powi(3)).powf(0.25)]);
        out.say(format!("nu = {nu:e}: kappa_d = {kd:.6e}, scaled {s:.6}"));
    }
    let (lo, hi) = scaled.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
    t.note(format!("scaled-spread = {}", hi / lo - 1.0));
    out.files.push(t.write(&cfg.out, "kappa_d.csv")?);
    Ok(out)
}
