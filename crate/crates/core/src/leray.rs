//! Leray-type regularization `w_t = v_delta w_xi - mu xi^(-2 gamma) w` with
//! `v_delta = w * phi_delta`, where `phi_delta` is supported on `(-delta, 0)`.
//!
//! Because the kernel only looks to the right, `v_delta(xi)` depends on `w`
//! over `(xi, xi + delta)`. This makes the steady state computable by a single
//! right-to-left sweep from `W_delta(1) = 1`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::{interpolate_centers, WField, XiGrid};
use crate::inviscid::InitialProfile;
use crate::params::ModelParams;
use crate::quadrature::{power_integral, GaussLegendre};
use crate::viscous::{Damping, Recorder, SolverConfig, Trajectory};

/// Below this mollified speed the steady-state sweep stops and sets `W_delta = 0`.
pub const V_MIN: f64 = 1e-14;

/// Smallest allowed ratio `delta / dxi`.
pub const MIN_CELLS_PER_DELTA: f64 = 4.0;

/// Unnormalized bump `exp(1 / ((2s + 1)^2 - 1))` on `(-1, 0)`.
fn raw_bump(s: f64) -> f64 {
    let u = 2.0 * s + 1.0;
    if u.abs() >= 1.0 {
        return 0.0;
    }
    (1.0 / (u * u - 1.0)).exp()
}

/// `1 / int_{-1}^0 raw_bump`.
fn bump_normalization() -> f64 {
    static NORM: OnceLock<f64> = OnceLock::new();
    *NORM.get_or_init(|| {
        let gl = GaussLegendre::new(24);
        let edges: Vec<f64> = (0..=256).map(|k| -1.0 + k as f64 / 256.0).collect();
        1.0 / gl.integrate_panels(raw_bump, &edges)
    })
}

/// One-sided mollifier `phi_delta(x) = phi(x / delta) / delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    delta: f64,
}

impl Mollifier {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::Domain(format!("delta = {delta} must be > 0")));
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Unit-width kernel `phi` on `(-1, 0)`.
    pub fn unit(s: f64) -> f64 {
        bump_normalization() * raw_bump(s)
    }

    pub fn eval(&self, x: f64) -> f64 {
        Self::unit(x / self.delta) / self.delta
    }

    /// `int (-y) phi_delta(y) dy`; the bump is symmetric about `-delta/2`.
    pub fn first_moment(&self) -> f64 {
        0.5 * self.delta
    }

    /// Discrete weights `K_m`, `m = 1, 2, ...`, for the shifts `m dxi` inside
    /// the window, normalized so that constants are preserved exactly.
    pub fn weights(&self, dxi: f64) -> Result<Vec<f64>> {
        if self.delta < MIN_CELLS_PER_DELTA * dxi * (1.0 - 1e-12) {
            return Err(Error::Resolution(format!(
                "delta = {} needs dxi <= delta / {MIN_CELLS_PER_DELTA}, got {dxi}",
                self.delta
            )));
        }
        let mut w: Vec<f64> = (1..)
            .map(|m| m as f64 * dxi)
            .take_while(|&s| s < self.delta)
            .map(|s| self.eval(-s))
            .collect();
        let total: f64 = w.iter().sum();
        for k in &mut w {
            *k /= total;
        }
        Ok(w)
    }
}

pub fn make_mollifier(delta: f64) -> Result<Mollifier> {
    Mollifier::new(delta)
}

fn convolve_into(values: &[f64], weights: &[f64], out: &mut [f64]) {
    let n = values.len();
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (m, k) in weights.iter().enumerate() {
            let j = i + m + 1;
            acc += k * if j < n { values[j] } else { 1.0 };
        }
        *o = acc;
    }
}

/// `v_delta` at the cell centers, with `w` extended by 1 beyond `xi = 1`.
pub fn mollify(field: &WField, mollifier: &Mollifier) -> Result<Vec<f64>> {
    let weights = mollifier.weights(field.grid.dxi())?;
    let mut out = vec![0.0; field.values.len()];
    convolve_into(&field.values, &weights, &mut out);
    Ok(out)
}

/// Tabulated steady state `W_delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizedFixedPoint {
    pub grid: XiGrid,
    pub delta: f64,
    pub values: Vec<f64>,
    /// Cells at and below this index were zeroed because `v_delta < V_MIN`.
    pub cutoff_index: Option<usize>,
}

impl RegularizedFixedPoint {
    pub fn eval(&self, xi: f64) -> f64 {
        interpolate_centers(&self.grid, &self.values, 1.0, xi)
    }
}

/// Marches `v_delta W' = mu xi^(-2 gamma) W` from `W(1) = 1` toward `xi = 0`.
///
/// Between neighboring nodes `log W` drops by `mu int xi^(-2 gamma)` (exact)
/// times the mean of `1 / v_delta` at the two nodes.
pub fn fixed_point_regularized(
    params: &ModelParams,
    mollifier: &Mollifier,
    grid: &XiGrid,
) -> Result<RegularizedFixedPoint> {
    if !(params.mu > 0.0) {
        return Err(Error::ViscosityRequired);
    }
    let weights = mollifier.weights(grid.dxi())?;
    let n = grid.len();
    let g2 = 2.0 * params.gamma;
    let mut values = vec![0.0; n];
    let (mut prev_x, mut prev_v, mut prev_w) = (1.0, 1.0, 1.0);
    let mut cutoff_index = None;
    for i in (0..n).rev() {
        let mut v = 0.0;
        for (m, k) in weights.iter().enumerate() {
            let j = i + m + 1;
            v += k * if j < n { values[j] } else { 1.0 };
        }
        if v < V_MIN {
            cutoff_index = Some(i);
            break;
        }
        let x = grid.center(i);
        let drop = params.mu * power_integral(-g2, x, prev_x) * 0.5 * (1.0 / v + 1.0 / prev_v);
        let w = prev_w * (-drop).exp();
        values[i] = w;
        (prev_x, prev_v, prev_w) = (x, v, w);
    }
    Ok(RegularizedFixedPoint { grid: *grid, delta: mollifier.delta(), values, cutoff_index })
}

/// `w` and `v_delta` frames recorded during a regularized evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldHistory {
    pub grid: XiGrid,
    pub times: Vec<f64>,
    pub w: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
}

/// Evolves the regularized equation; see [`evolve_regularized_with_history`].
pub fn evolve_regularized(
    profile: &InitialProfile,
    params: &ModelParams,
    mollifier: &Mollifier,
    config: &SolverConfig,
) -> Result<Trajectory> {
    Ok(run_regularized(profile, params, mollifier, config, None)?.0)
}

/// Evolves the regularized equation and stores `(w, v_delta)` every
/// `history_stride` steps for characteristic tracing.
///
/// Each step freezes `v_delta` from the current field, upwinds the transport
/// from the right neighbor (ghost value 1 beyond `xi = 1`), then applies the
/// exact damping factor.
pub fn evolve_regularized_with_history(
    profile: &InitialProfile,
    params: &ModelParams,
    mollifier: &Mollifier,
    config: &SolverConfig,
    history_stride: usize,
) -> Result<(Trajectory, FieldHistory)> {
    let (traj, hist) = run_regularized(profile, params, mollifier, config, Some(history_stride.max(1)))?;
    Ok((traj, hist.expect("history requested")))
}

fn run_regularized(
    profile: &InitialProfile,
    params: &ModelParams,
    mollifier: &Mollifier,
    config: &SolverConfig,
    history_stride: Option<usize>,
) -> Result<(Trajectory, Option<FieldHistory>)> {
    let grid = config.grid()?;
    let weights = mollifier.weights(grid.dxi())?;
    let dxi = grid.dxi();
    let n = grid.len();
    let mut damping = Damping::new(&grid, params, config.clamp(&grid));
    let mut field = WField::from_fn(grid, 0.0, |x| profile.sample(x))?;
    let mut v = vec![0.0; n];
    convolve_into(&field.values, &weights, &mut v);

    let recorder = Recorder::new(&grid, params);
    let mut traj = Trajectory::default();
    recorder.record(&mut traj, &field);
    if config.snapshot_times.contains(&0.0) {
        traj.snapshots.push(field.clone());
    }
    let mut history = history_stride.map(|_| FieldHistory {
        grid,
        times: vec![0.0],
        w: vec![field.values.clone()],
        v: vec![v.clone()],
    });
    let (mut since_record, mut since_frame) = (0, 0);
    for target in config.targets(0.0) {
        while field.time < target {
            let vmax = v.iter().copied().fold(1.0, f64::max);
            let mut dt = config.cfl * dxi / vmax;
            let last = field.time + dt >= target * (1.0 - 1e-14);
            if last {
                dt = target - field.time;
            }
            if dt * vmax / dxi > 1.0 + 1e-12 {
                return Err(Error::Stability(format!("dt = {dt} exceeds the transport CFL bound")));
            }
            let lambda = dt / dxi;
            let w = &mut field.values;
            for i in 0..n {
                let right = if i + 1 < n { w[i + 1] } else { 1.0 };
                w[i] += lambda * v[i] * (right - w[i]);
            }
            damping.apply(w, dt);
            field.time = if last { target } else { field.time + dt };
            convolve_into(&field.values, &weights, &mut v);
            traj.steps += 1;
            since_record += 1;
            since_frame += 1;
            if last || since_record >= config.series_stride {
                recorder.record(&mut traj, &field);
                since_record = 0;
            }
            if let (Some(h), Some(stride)) = (history.as_mut(), history_stride) {
                if last || since_frame >= stride {
                    h.times.push(field.time);
                    h.w.push(field.values.clone());
                    h.v.push(v.clone());
                    since_frame = 0;
                }
            }
        }
        traj.snapshots.push(field.clone());
    }
    Ok((traj, history))
}

/// Curve `eta(t)` with `d eta / dt = -v_delta(eta, t)` and the value carried along it.
#[derive(Debug, Clone, PartialEq)]
pub struct Characteristic {
    pub start_xi: f64,
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    /// Solution of `dw/dt = -mu eta^(-2 gamma) w` along the curve.
    pub carried: Vec<f64>,
    /// Interpolated field value `w(eta(t), t)` for comparison.
    pub field_values: Vec<f64>,
}

impl Characteristic {
    /// Position at time `t`, linear between stored times; `None` outside the trace.
    pub fn position_at(&self, t: f64) -> Option<f64> {
        let k = self.times.partition_point(|&s| s < t);
        if k == self.times.len() {
            return None;
        }
        if self.times[k] == t || k == 0 {
            return (self.times[k] == t).then_some(self.positions[k]);
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let f = (t - t0) / (t1 - t0);
        Some(self.positions[k - 1] + f * (self.positions[k] - self.positions[k - 1]))
    }
}

/// Integrates a characteristic from `start_xi` at `t = 0` on the history's
/// time grid with the explicit midpoint rule. Once the curve reaches `xi = 0`
/// it stays there.
pub fn trace_characteristic(
    history: &FieldHistory,
    params: &ModelParams,
    start_xi: f64,
) -> Result<Characteristic> {
    if !(start_xi > 0.0 && start_xi <= 1.0) {
        return Err(Error::Domain(format!("start_xi = {start_xi} not in (0, 1]")));
    }
    let grid = &history.grid;
    let at = |frames: &[Vec<f64>], k: usize, x: f64| interpolate_centers(grid, &frames[k], 1.0, x);
    let g2 = 2.0 * params.gamma;
    let mut eta = start_xi;
    let mut carried = at(&history.w, 0, eta);
    let mut out = Characteristic {
        start_xi,
        times: vec![history.times[0]],
        positions: vec![eta],
        carried: vec![carried],
        field_values: vec![carried],
    };
    for k in 0..history.times.len() - 1 {
        let dt = history.times[k + 1] - history.times[k];
        if eta > 0.0 {
            let half = (eta - 0.5 * dt * at(&history.v, k, eta)).max(0.0);
            let v_half = 0.5 * (at(&history.v, k, half) + at(&history.v, k + 1, half));
            if half > 0.0 {
                carried *= (-dt * params.mu * half.powf(-g2)).exp();
            } else {
                carried = 0.0;
            }
            eta = (eta - dt * v_half).max(0.0);
        }
        out.times.push(history.times[k + 1]);
        out.positions.push(eta);
        out.carried.push(carried);
        out.field_values.push(at(&history.w, k + 1, eta));
    }
    Ok(out)
}

/// Number of (pair, time) samples where two characteristics, ordered by
/// their starting points, fail to stay strictly ordered while both are
/// inside `(0, 1)`.
pub fn count_crossings(characteristics: &[Characteristic]) -> usize {
    let mut sorted: Vec<&Characteristic> = characteristics.iter().collect();
    sorted.sort_by(|a, b| a.start_xi.total_cmp(&b.start_xi));
    let mut count = 0;
    for (k, lower) in sorted.iter().enumerate() {
        for upper in &sorted[k + 1..] {
            for (x, y) in lower.positions.iter().zip(&upper.positions) {
                if *x > 0.0 && *y < 1.0 && x >= y {
                    count += 1;
                }
            }
        }
    }
    count
}

/// `max |w - W_delta|` over all stored frames and all cells at least
/// `skip_cells` cells to the right of the boundary characteristic.
pub fn attractor_deviation(
    history: &FieldHistory,
    boundary: &Characteristic,
    fixed: &RegularizedFixedPoint,
    skip_cells: usize,
) -> Result<f64> {
    if boundary.times.len() != history.times.len() || fixed.grid != history.grid {
        return Err(Error::InconsistentField("characteristic, history and fixed point disagree".into()));
    }
    let margin = skip_cells as f64 * history.grid.dxi();
    let mut worst: f64 = 0.0;
    for (frame, &eta) in history.w.iter().zip(&boundary.positions) {
        for (i, x) in history.grid.centers().enumerate() {
            if x >= eta + margin {
                worst = worst.max((frame[i] - fixed.values[i]).abs());
            }
        }
    }
    Ok(worst)
}

/// Characteristic tracing for a history synthesized from a prescribed speed.
pub fn history_from_speed<F: Fn(f64, f64) -> f64>(
    grid: XiGrid,
    times: &[f64],
    speed: F,
) -> FieldHistory {
    let frames = |t: f64| grid.centers().map(|x| speed(x, t)).collect::<Vec<f64>>();
    FieldHistory {
        grid,
        times: times.to_vec(),
        w: times.iter().map(|_| vec![0.0; grid.len()]).collect(),
        v: times.iter().map(|&t| frames(t)).collect(),
    }
}
