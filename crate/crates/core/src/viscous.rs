//! Finite-volume evolution of the damped Burgers equation
//! `w_t = w w_xi - mu xi^(-2 gamma) w` on `(0, 1)` with `w(1, t) = 1`.
//!
//! Each step advects with the Godunov flux for `F(w) = -w^2/2` and then
//! applies the exact damping factor `exp(-mu xi^(-2 gamma) dt)` per cell.

use crate::error::{Error, Result};
use crate::field::{WField, XiGrid};
use crate::fixed_point::dissipation_wavenumber;
use crate::inviscid::InitialProfile;
use crate::params::ModelParams;

/// Rescaled time after which transients are excluded from long-time averages.
pub const DEFAULT_BURN_IN: f64 = 2.0;

/// Minimum cells per dissipation length `xi_d` for a sweep row to count as resolved.
pub const RESOLVED_CELLS_PER_XI_D: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub cfl: f64,
    pub n: usize,
    pub t_end: f64,
    /// Rescaled times at which full snapshots are stored; `t_end` is always added.
    pub snapshot_times: Vec<f64>,
    /// Smallest `xi` used in the damping weight; `None` means the first cell center.
    pub xi_min_clamp: Option<f64>,
    /// Record the energy and dissipation series every this many steps.
    pub series_stride: usize,
}

impl SolverConfig {
    pub fn new(n: usize, t_end: f64) -> Self {
        Self {
            cfl: 0.9,
            n,
            t_end,
            snapshot_times: Vec::new(),
            xi_min_clamp: None,
            series_stride: 1,
        }
    }

    pub fn with_snapshots(mut self, times: Vec<f64>) -> Self {
        self.snapshot_times = times;
        self
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn grid(&self) -> Result<XiGrid> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::Domain(format!("cfl = {} not in (0, 1)", self.cfl)));
        }
        if self.n < 16 {
            return Err(Error::Domain(format!("n = {} < 16", self.n)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Domain(format!("t_end = {} invalid", self.t_end)));
        }
        if self.series_stride == 0 {
            return Err(Error::Domain("series_stride must be >= 1".into()));
        }
        let grid = XiGrid::new(self.n)?;
        if let Some(clamp) = self.xi_min_clamp {
            if clamp < 0.5 * grid.dxi() * (1.0 - 1e-12) {
                return Err(Error::Domain(format!("xi_min_clamp = {clamp} < dxi/2")));
            }
        }
        Ok(grid)
    }

    pub(crate) fn clamp(&self, grid: &XiGrid) -> f64 {
        self.xi_min_clamp.unwrap_or(0.5 * grid.dxi())
    }

    /// Sorted snapshot targets in `(t0, t_end]`, always ending with `t_end`.
    pub(crate) fn targets(&self, t0: f64) -> Vec<f64> {
        let mut ts: Vec<f64> = self
            .snapshot_times
            .iter()
            .copied()
            .filter(|&t| t > t0 && t < self.t_end)
            .collect();
        ts.push(self.t_end);
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts
    }
}

/// Stored output of an evolution.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub snapshots: Vec<WField>,
    /// Sample times of the series below (rescaled).
    pub series_times: Vec<f64>,
    /// `|a|^2`
    pub energy_series: Vec<f64>,
    /// `nu ||a||^2`
    pub dissipation_series: Vec<f64>,
    pub steps: usize,
}

impl Trajectory {
    pub fn final_field(&self) -> Option<&WField> {
        self.snapshots.last()
    }

}

/// Series sampler with the per-cell weights of both functionals precomputed.
#[derive(Debug, Clone)]
pub(crate) struct Recorder {
    energy_weight: f64,
    dissipation_weights: Vec<f64>,
}

impl Recorder {
    pub(crate) fn new(grid: &XiGrid, params: &ModelParams) -> Self {
        let dxi = grid.dxi();
        let g2 = 2.0 * params.gamma;
        let scale = 3.0 * params.mu * params.epsilon * dxi;
        Self {
            energy_weight: params.gamma * params.epsilon.powf(2.0 / 3.0) * dxi,
            dissipation_weights: grid.centers().map(|x| scale * x.powf(-g2)).collect(),
        }
    }

    pub(crate) fn record(&self, traj: &mut Trajectory, field: &WField) {
        let (mut e, mut d) = (0.0, 0.0);
        for (w, k) in field.values.iter().zip(&self.dissipation_weights) {
            let w2 = w * w;
            e += w2;
            d += k * w2;
        }
        traj.series_times.push(field.time);
        traj.energy_series.push(self.energy_weight * e);
        traj.dissipation_series.push(d);
    }
}

/// `dt = cfl dxi / max(w, 1)`; the floor 1 is the inflow speed at `xi = 1`.
pub fn cfl_dt(field: &WField, config: &SolverConfig) -> f64 {
    config.cfl * field.grid.dxi() / field.max().max(1.0)
}

/// Godunov flux for `F(w) = -w^2/2` between left and right states.
pub fn godunov_flux(left: f64, right: f64) -> f64 {
    let f = |w: f64| -0.5 * w * w;
    if left <= right {
        // F is concave, so its minimum over [left, right] sits at an end
        f(left).min(f(right))
    } else if right <= 0.0 && 0.0 <= left {
        0.0
    } else {
        f(left).max(f(right))
    }
}

/// Per-cell damping rates `mu xi_i^(-2 gamma)` with cached exponential factors.
#[derive(Debug, Clone)]
pub(crate) struct Damping {
    rates: Vec<f64>,
    factors: Vec<f64>,
    dt: f64,
}

impl Damping {
    pub(crate) fn new(grid: &XiGrid, params: &ModelParams, clamp: f64) -> Self {
        let g2 = 2.0 * params.gamma;
        let rates = grid.centers().map(|x| params.mu * x.max(clamp).powf(-g2)).collect();
        Self { rates, factors: vec![1.0; grid.len()], dt: 0.0 }
    }

    pub(crate) fn apply(&mut self, w: &mut [f64], dt: f64) {
        if dt != self.dt {
            for (f, r) in self.factors.iter_mut().zip(&self.rates) {
                *f = (-r * dt).exp();
            }
            self.dt = dt;
        }
        for (v, f) in w.iter_mut().zip(&self.factors) {
            *v *= f;
        }
    }
}

/// Upwind Godunov advection in place; the ghost beyond `xi = 1` holds 1 and
/// the left boundary is zero-gradient outflow.
fn advect(w: &mut [f64], lambda: f64) {
    let n = w.len();
    let mut flux_left = godunov_flux(w[0], w[0]);
    for i in 0..n {
        let right = if i + 1 < n { w[i + 1] } else { 1.0 };
        let flux_right = godunov_flux(w[i], right);
        w[i] -= lambda * (flux_right - flux_left);
        flux_left = flux_right;
    }
}

fn check_cfl(field_max: f64, dxi: f64, dt: f64) -> Result<()> {
    let courant = dt * field_max.max(1.0) / dxi;
    if !(dt > 0.0) || courant > 1.0 + 1e-12 {
        return Err(Error::Stability(format!("dt = {dt} gives Courant number {courant} > 1")));
    }
    Ok(())
}

/// One advection + damping step.
pub fn godunov_step(field: &WField, params: &ModelParams, dt: f64) -> Result<WField> {
    let dxi = field.grid.dxi();
    check_cfl(field.max(), dxi, dt)?;
    let mut values = field.values.clone();
    advect(&mut values, dt / dxi);
    Damping::new(&field.grid, params, 0.5 * dxi).apply(&mut values, dt);
    for v in &mut values {
        *v = v.max(0.0);
    }
    WField::new(field.grid, values, field.time + dt)
}

/// Evolves `profile` sampled at cell centers.
pub fn evolve(profile: &InitialProfile, params: &ModelParams, config: &SolverConfig) -> Result<Trajectory> {
    let grid = config.grid()?;
    let initial = WField::from_fn(grid, 0.0, |x| profile.sample(x))?;
    evolve_from(initial, params, config)
}

/// Evolves a grid field from its own time to `config.t_end`.
pub fn evolve_from(initial: WField, params: &ModelParams, config: &SolverConfig) -> Result<Trajectory> {
    let grid = config.grid()?;
    if initial.grid != grid {
        return Err(Error::InconsistentField("initial field grid differs from solver grid".into()));
    }
    let dxi = grid.dxi();
    let mut damping = Damping::new(&grid, params, config.clamp(&grid));
    let recorder = Recorder::new(&grid, params);
    let mut traj = Trajectory::default();
    let mut field = initial;
    recorder.record(&mut traj, &field);
    if config.snapshot_times.contains(&field.time) {
        traj.snapshots.push(field.clone());
    }
    let mut since_record = 0;
    for target in config.targets(field.time) {
        while field.time < target {
            let mut dt = cfl_dt(&field, config);
            let last = field.time + dt >= target * (1.0 - 1e-14);
            if last {
                dt = target - field.time;
            }
            check_cfl(field.max(), dxi, dt)?;
            advect(&mut field.values, dt / dxi);
            damping.apply(&mut field.values, dt);
            field.time = if last { target } else { field.time + dt };
            traj.steps += 1;
            since_record += 1;
            if last || since_record >= config.series_stride {
                recorder.record(&mut traj, &field);
                since_record = 0;
            }
        }
        traj.snapshots.push(field.clone());
    }
    Ok(traj)
}

/// Trapezoidal time average of `nu ||a||^2` over `[t_from, t_end]`.
///
/// Averages are invariant under the linear physical/rescaled time map, so
/// rescaled times are used throughout.
pub fn time_avg_dissipation(traj: &Trajectory, t_from: f64) -> Result<f64> {
    time_average(&traj.series_times, &traj.dissipation_series, t_from)
}

pub(crate) fn time_average(times: &[f64], values: &[f64], t_from: f64) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::EmptyTrajectory("need at least two samples".into()));
    }
    let t_end = *times.last().expect("nonempty");
    if !(t_from < t_end) {
        return Err(Error::EmptyTrajectory(format!("averaging window [{t_from}, {t_end}] is empty")));
    }
    let mut acc = 0.0;
    let mut span = 0.0;
    for k in 1..times.len() {
        let (ta, tb) = (times[k - 1], times[k]);
        if tb <= t_from {
            continue;
        }
        let (mut a, b) = (values[k - 1], values[k]);
        let mut start = ta;
        if ta < t_from {
            a += (b - a) * (t_from - ta) / (tb - ta);
            start = t_from;
        }
        acc += 0.5 * (a + b) * (tb - start);
        span += tb - start;
    }
    Ok(acc / span)
}

/// `int_0^1 xi^2 w^2 dxi`, the weighted energy whose monotonicity is tracked.
pub fn lyapunov(field: &WField) -> f64 {
    field
        .grid
        .centers()
        .zip(&field.values)
        .map(|(x, w)| x * x * w * w)
        .sum::<f64>()
        * field.grid.dxi()
}

/// Discrete total variation including the jump to the boundary value 1.
pub fn total_variation(field: &WField) -> f64 {
    let n = field.values.len();
    (0..n).map(|i| (field.extended(i + 1) - field.values[i]).abs()).sum()
}

/// How a dissipation-anomaly row is computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnomalyOptions {
    /// Averaging starts here (rescaled time).
    pub burn_in: f64,
    /// Refine the grid per viscosity to at least this many cells per `xi_d`
    /// (power-of-two sizes, never below the configured `n`).
    pub cells_per_xi_d: Option<f64>,
    /// Also run on half the cells and report the first-order Richardson value
    /// `2 D(n) - D(n/2)`, which removes the `O(dxi)` upwind dissipation bias.
    pub extrapolate: bool,
}

impl Default for AnomalyOptions {
    fn default() -> Self {
        Self { burn_in: DEFAULT_BURN_IN, cells_per_xi_d: None, extrapolate: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyRow {
    pub nu: f64,
    /// Time average of `nu ||a||^2` on the row's grid.
    pub avg_dissipation: f64,
    /// Richardson value when requested.
    pub extrapolated: Option<f64>,
    pub n: usize,
    pub kappa_d: f64,
    pub xi_d: f64,
    /// `n xi_d >= RESOLVED_CELLS_PER_XI_D`
    pub resolved: bool,
}

impl AnomalyRow {
    /// The extrapolated average if present, else the raw one.
    pub fn best_estimate(&self) -> f64 {
        self.extrapolated.unwrap_or(self.avg_dissipation)
    }
}

/// Smallest power of two `>= n_min` with at least `cells_per_xi_d` cells per `xi_d`.
pub fn resolved_grid_size(xi_d: f64, cells_per_xi_d: f64, n_min: usize) -> usize {
    let want = (cells_per_xi_d / xi_d).ceil().max(n_min as f64);
    (want as usize).next_power_of_two()
}

fn averaged_run(params: &ModelParams, config: &SolverConfig, burn_in: f64) -> Result<f64> {
    let traj = evolve(&InitialProfile::constant(0.0)?, params, config)?;
    time_avg_dissipation(&traj, burn_in)
}

/// Long-time-averaged dissipation from `w0 = 0` at one viscosity.
pub fn dissipation_anomaly_row(
    params_base: &ModelParams,
    nu: f64,
    config: &SolverConfig,
    options: &AnomalyOptions,
) -> Result<AnomalyRow> {
    if !(nu > 0.0) {
        return Err(Error::ViscosityRequired);
    }
    let params = params_base.with_nu(nu)?;
    let (kappa_d, xi_d) = dissipation_wavenumber(&params)?;
    let mut cfg = config.clone();
    if let Some(c) = options.cells_per_xi_d {
        cfg.n = resolved_grid_size(xi_d, c, config.n);
    }
    let avg = averaged_run(&params, &cfg, options.burn_in)?;
    let extrapolated = if options.extrapolate {
        let mut coarse = cfg.clone();
        coarse.n = cfg.n / 2;
        Some(2.0 * avg - averaged_run(&params, &coarse, options.burn_in)?)
    } else {
        None
    };
    Ok(AnomalyRow {
        nu,
        avg_dissipation: avg,
        extrapolated,
        n: cfg.n,
        kappa_d,
        xi_d,
        resolved: cfg.n as f64 * xi_d >= RESOLVED_CELLS_PER_XI_D,
    })
}

/// One row per viscosity, in the order given. Rows are independent, so
/// callers may also run [`dissipation_anomaly_row`] concurrently.
pub fn dissipation_anomaly_sweep(
    params_base: &ModelParams,
    nu_list: &[f64],
    config: &SolverConfig,
    options: &AnomalyOptions,
) -> Result<Vec<AnomalyRow>> {
    check_decreasing(nu_list)?;
    nu_list.iter().map(|&nu| dissipation_anomaly_row(params_base, nu, config, options)).collect()
}

pub fn check_decreasing(nu_list: &[f64]) -> Result<()> {
    if nu_list.is_empty() || nu_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("nu list must be nonempty and strictly decreasing".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_point::rescaled_w;
    use crate::norms::{dissipation_rate, energy};
    use approx::assert_abs_diff_eq;

    fn params(alpha: f64, nu: f64) -> ModelParams {
        ModelParams::from_alpha(alpha, 1.0, nu).unwrap()
    }

    #[test]
    fn cfl_examples() {
        let cfg = SolverConfig::new(100, 1.0);
        let g = XiGrid::new(100).unwrap();
        assert_abs_diff_eq!(cfl_dt(&WField::constant(g, 1.0, 0.0).unwrap(), &cfg), 0.009, epsilon = 1e-15);
        assert_abs_diff_eq!(cfl_dt(&WField::constant(g, 0.0, 0.0).unwrap(), &cfg), 0.009, epsilon = 1e-15);
        let g2 = XiGrid::new(200).unwrap();
        assert_abs_diff_eq!(cfl_dt(&WField::constant(g2, 0.5, 0.0).unwrap(), &cfg), 0.0045, epsilon = 1e-15);
        assert_abs_diff_eq!(cfl_dt(&WField::constant(g, 2.0, 0.0).unwrap(), &cfg), 0.0045, epsilon = 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::new(8, 1.0).grid().is_err());
        assert!(SolverConfig::new(64, 1.0).with_cfl(1.0).grid().is_err());
        let mut c = SolverConfig::new(64, 1.0);
        c.xi_min_clamp = Some(1e-4);
        assert!(c.grid().is_err());
        c.xi_min_clamp = Some(0.5 / 64.0);
        assert!(c.grid().is_ok());
    }

    #[test]
    fn godunov_flux_cases() {
        assert_eq!(godunov_flux(0.0, 1.0), -0.5);
        assert_eq!(godunov_flux(1.0, 0.0), 0.0);
        assert_abs_diff_eq!(godunov_flux(0.3, 0.7), -0.245, epsilon = 1e-16);
        assert_abs_diff_eq!(godunov_flux(0.7, 0.3), -0.045, epsilon = 1e-16);
        // transonic expansion through w = 0
        assert_eq!(godunov_flux(1.0, -1.0), 0.0);
    }

    #[test]
    fn constant_state_is_preserved_without_damping() {
        let g = XiGrid::new(32).unwrap();
        let w = WField::constant(g, 1.0, 0.0).unwrap();
        let next = godunov_step(&w, &params(2.0, 0.0), 0.02).unwrap();
        assert!(next.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn cfl_violation_is_an_error() {
        let g = XiGrid::new(32).unwrap();
        let w = WField::constant(g, 1.0, 0.0).unwrap();
        assert!(matches!(godunov_step(&w, &params(2.0, 0.0), 0.05), Err(Error::Stability(_))));
    }

    #[test]
    fn one_step_residual_at_fixed_point_is_small() {
        let p = params(2.0, 1.0);
        let g = XiGrid::new(1024).unwrap();
        let w = WField::from_fn(g, 0.0, |x| rescaled_w(&p, x).unwrap()).unwrap();
        let dt = cfl_dt(&w, &SolverConfig::new(1024, 1.0));
        let next = godunov_step(&w, &p, dt).unwrap();
        let change = next.values.iter().zip(&w.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(change < g.dxi(), "{change}");
    }

    #[test]
    fn snapshots_land_on_requested_times() {
        let p = params(2.0, 0.1);
        let cfg = SolverConfig::new(64, 1.0).with_snapshots(vec![0.0, 0.25, 0.5]);
        let traj = evolve(&InitialProfile::constant(0.0).unwrap(), &p, &cfg).unwrap();
        let times: Vec<f64> = traj.snapshots.iter().map(|s| s.time).collect();
        assert_eq!(times, vec![0.0, 0.25, 0.5, 1.0]);
        assert!(traj.series_times.windows(2).all(|w| w[1] > w[0]));
        assert!(traj.energy_series.iter().chain(&traj.dissipation_series).all(|&v| v >= 0.0));
    }

    #[test]
    fn time_average_of_constant_series() {
        let times = [0.0, 1.0, 2.0, 4.0];
        assert_abs_diff_eq!(time_average(&times, &[3.0; 4], 0.5).unwrap(), 3.0, epsilon = 1e-15);
        // linear ramp v = t averaged over [1, 4] is 2.5
        assert_abs_diff_eq!(time_average(&times, &times, 1.0).unwrap(), 2.5, epsilon = 1e-15);
        assert!(time_average(&[0.0], &[1.0], 0.0).is_err());
        assert!(time_average(&times, &times, 4.0).is_err());
    }

    #[test]
    fn pinned_trajectories() {
        // a trajectory that never leaves W at alpha = 2, nu = 1
        let p = params(2.0, 1.0);
        let xs = crate::quadrature::GaussLegendre::new(20);
        let exact = 3.0 * p.mu * xs.integrate_panels(
            |x| x.powi(-2) * rescaled_w(&p, x).unwrap().powi(2),
            &crate::quadrature::geometric_edges(0.25, 1.0, 1.2),
        );
        assert_abs_diff_eq!(exact, 1.0, epsilon = 1e-13);
        let g = XiGrid::new(1 << 14).unwrap();
        let w = WField::from_fn(g, 0.0, |x| rescaled_w(&p, x).unwrap()).unwrap();
        let traj = Trajectory {
            snapshots: vec![],
            series_times: vec![0.0, 1.0],
            energy_series: vec![energy(&w, &p); 2],
            dissipation_series: vec![dissipation_rate(&w, &p); 2],
            steps: 0,
        };
        assert_abs_diff_eq!(time_avg_dissipation(&traj, 0.0).unwrap(), 1.0, epsilon = 1e-3);
        let zero = Trajectory {
            series_times: vec![0.0, 1.0],
            dissipation_series: vec![0.0, 0.0],
            ..Default::default()
        };
        assert_eq!(time_avg_dissipation(&zero, 0.0).unwrap(), 0.0);
        assert!(time_avg_dissipation(&Trajectory::default(), 0.0).is_err());
    }

    #[test]
    fn sweep_requires_decreasing_viscosities() {
        let cfg = SolverConfig::new(64, 3.0);
        let opts = AnomalyOptions::default();
        assert!(dissipation_anomaly_sweep(&params(2.0, 1.0), &[0.1, 0.2], &cfg, &opts).is_err());
        assert!(dissipation_anomaly_sweep(&params(2.0, 1.0), &[], &cfg, &opts).is_err());
    }

    #[test]
    fn grid_sizes_are_resolving_powers_of_two() {
        assert_eq!(resolved_grid_size(0.1, 4.0, 64), 64);
        assert_eq!(resolved_grid_size(3.3322e-4, 10.0, 1024), 32768);
        let n = resolved_grid_size(3.3223e-3, 10.0, 16);
        assert!(n.is_power_of_two() && n as f64 * 3.3223e-3 >= 10.0);
    }

    #[test]
    fn strong_damping_dissipates_the_input() {
        // kappa_d < 2: the steady state is reached quickly and dissipates exactly eps
        let base = params(2.0, 1.0);
        let row = dissipation_anomaly_row(&base, 10.0, &SolverConfig::new(2048, 4.0), &AnomalyOptions::default()).unwrap();
        assert!(row.kappa_d < 2.0 && row.resolved);
        assert!((row.avg_dissipation - 1.0).abs() < 0.02, "{row:?}");
    }
}
