//! Dyadic (Desnyanskiy-Novikov) shell model
//! `a_j' = -nu 4^j a_j + 2^(d(j-1)) a_(j-1)^2 - 2^(dj) a_j a_(j+1)`, `j = 0..=N`,
//! with `a_(-1) = a_(N+1) = 0`.
//!
//! The nonlinear terms move energy from shell `j` to `j+1` at the rate
//! `2^(dj) a_j^2 a_(j+1)`, so a constant flux gives `a_j ~ 2^(-dj/3)`.

use crate::error::{Error, Result};
use crate::spectrum::{fit_line, LineFit};

pub const MIN_SHELLS: usize = 8;

/// RK4 is stable for linear decay while `dt * nu * 4^N` stays below this.
pub const STIFFNESS_LIMIT: f64 = 2.5;

/// Step bound `dt * (local nonlinear rate)` for the quadratic terms.
pub const NONLINEAR_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct ShellState {
    pub a: Vec<f64>,
    pub d: f64,
    pub nu: f64,
}

impl ShellState {
    /// `a` holds shells `0..=N`.
    pub fn new(a: Vec<f64>, d: f64, nu: f64) -> Result<Self> {
        if a.len() < MIN_SHELLS + 1 {
            return Err(Error::Domain(format!("need N >= {MIN_SHELLS}, got {}", a.len() as i64 - 1)));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite shell amplitude".into()));
        }
        if !(nu >= 0.0 && nu.is_finite() && d.is_finite()) {
            return Err(Error::Domain(format!("invalid nu = {nu} or d = {d}")));
        }
        Ok(Self { a, d, nu })
    }

    pub fn zeros(n: usize, d: f64, nu: f64) -> Result<Self> {
        Self::new(vec![0.0; n + 1], d, nu)
    }

    /// Truncation index `N`.
    pub fn top(&self) -> usize {
        self.a.len() - 1
    }

    /// `sum a_j^2 / 2`, optionally skipping the pinned shell 0.
    pub fn energy(&self, skip_first: bool) -> f64 {
        let start = usize::from(skip_first);
        0.5 * self.a[start..].iter().map(|v| v * v).sum::<f64>()
    }

    /// `nu sum 4^j a_j^2` over the free shells.
    pub fn dissipation(&self, skip_first: bool) -> f64 {
        let start = usize::from(skip_first);
        (start..self.a.len()).map(|j| self.nu * 4f64.powi(j as i32) * self.a[j] * self.a[j]).sum()
    }

    /// Energy delivered by shell 0 into shell 1.
    pub fn production(&self) -> f64 {
        self.a[0] * self.a[0] * self.a[1]
    }

    /// Largest `dt` the stiffness cap allows (infinite when `nu = 0`).
    pub fn max_stable_dt(&self) -> f64 {
        STIFFNESS_LIMIT / (self.nu * 4f64.powi(self.top() as i32))
    }

    /// First shell where viscous decay outpaces the transfer to the next shell.
    pub fn dissipation_shell(&self) -> usize {
        let n = self.top();
        (1..n)
            .find(|&j| self.nu * 4f64.powi(j as i32) > 2f64.powf(self.d * j as f64) * self.a[j + 1].abs())
            .unwrap_or(n)
    }
}

/// Per-shell coefficients `nu 4^j` and `2^(dj)`.
#[derive(Debug, Clone)]
struct Coefficients {
    decay: Vec<f64>,
    transfer: Vec<f64>,
}

impl Coefficients {
    fn new(n: usize, d: f64, nu: f64) -> Self {
        Self {
            decay: (0..n).map(|j| nu * 4f64.powi(j as i32)).collect(),
            transfer: (0..n).map(|j| 2f64.powf(d * j as f64)).collect(),
        }
    }

    fn rhs_into(&self, a: &[f64], out: &mut [f64]) {
        let n = a.len();
        for j in 0..n {
            let gain = if j > 0 { self.transfer[j - 1] * a[j - 1] * a[j - 1] } else { 0.0 };
            let loss = if j + 1 < n { self.transfer[j] * a[j] * a[j + 1] } else { 0.0 };
            out[j] = -self.decay[j] * a[j] + gain - loss;
        }
    }

    /// Largest local nonlinear rate; bounds the step for the quadratic terms.
    fn nonlinear_rate(&self, a: &[f64]) -> f64 {
        let n = a.len();
        (0..n)
            .map(|j| {
                let next = if j + 1 < n { self.transfer[j] * a[j + 1].abs() } else { 0.0 };
                let prev = if j > 0 { 2.0 * self.transfer[j - 1] * a[j - 1].abs() } else { 0.0 };
                next + prev
            })
            .fold(0.0, f64::max)
    }
}

pub fn shell_rhs(state: &ShellState) -> Vec<f64> {
    let mut out = vec![0.0; state.a.len()];
    Coefficients::new(state.a.len(), state.d, state.nu).rhs_into(&state.a, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShellConfig {
    pub t_end: f64,
    /// Largest step; steps shrink further where the quadratic terms are fast.
    pub dt: f64,
    /// Holds `a_0` at this value when set.
    pub pin: Option<f64>,
    /// Record every this many steps; the final state is always recorded.
    pub record_every: usize,
}

impl ShellConfig {
    pub fn new(t_end: f64, dt: f64) -> Self {
        Self { t_end, dt, pin: None, record_every: 1 }
    }

    pub fn pinned(mut self, value: f64) -> Self {
        self.pin = Some(value);
        self
    }

    pub fn recording_every(mut self, steps: usize) -> Self {
        self.record_every = steps.max(1);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShellSample {
    pub t: f64,
    pub energy: f64,
    pub production: f64,
    pub dissipation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShellTrajectory {
    pub samples: Vec<ShellSample>,
    pub final_state: ShellState,
    pub steps: usize,
}

fn sample(state: &ShellState, t: f64, pinned: bool) -> ShellSample {
    ShellSample {
        t,
        energy: state.energy(pinned),
        production: if pinned { state.production() } else { 0.0 },
        dissipation: state.dissipation(pinned),
    }
}

/// Classical RK4 with steps capped by `config.dt` and by the nonlinear rate. With a pin, shell 0 is reset before the run and its
/// derivative is zeroed in every stage.
pub fn shell_evolve(initial: &ShellState, config: &ShellConfig) -> Result<ShellTrajectory> {
    if !(config.t_end > 0.0) || !(config.dt > 0.0) {
        return Err(Error::Domain(format!(
            "t_end = {} and dt = {} must be positive",
            config.t_end, config.dt
        )));
    }
    if config.dt >= initial.max_stable_dt() {
        return Err(Error::Stability(format!(
            "dt = {} exceeds the RK4 limit {:.3e}; reduce dt or N",
            config.dt,
            initial.max_stable_dt()
        )));
    }
    let mut state = initial.clone();
    let pinned = config.pin.is_some();
    if let Some(v) = config.pin {
        state.a[0] = v;
    }
    let n = state.a.len();
    let coef = Coefficients::new(n, state.d, state.nu);
    let mut k = vec![vec![0.0; n]; 4];
    let mut tmp = vec![0.0; n];
    let eval = |x: &[f64], out: &mut Vec<f64>| {
        coef.rhs_into(x, out);
        if pinned {
            out[0] = 0.0;
        }
    };
    let mut samples = vec![sample(&state, 0.0, pinned)];
    let (mut t, mut steps) = (0.0, 0usize);
    while t < config.t_end {
        let rate = coef.nonlinear_rate(&state.a);
        let mut dt = config.dt.min(NONLINEAR_LIMIT / rate.max(f64::MIN_POSITIVE));
        let last = t + dt >= config.t_end * (1.0 - 1e-14);
        if last {
            dt = config.t_end - t;
        }
        let a = &mut state.a;
        eval(a, &mut k[0]);
        for i in 0..n {
            tmp[i] = a[i] + 0.5 * dt * k[0][i];
        }
        eval(&tmp, &mut k[1]);
        for i in 0..n {
            tmp[i] = a[i] + 0.5 * dt * k[1][i];
        }
        eval(&tmp, &mut k[2]);
        for i in 0..n {
            tmp[i] = a[i] + dt * k[2][i];
        }
        eval(&tmp, &mut k[3]);
        for i in 0..n {
            a[i] += dt / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
        }
        t = if last { config.t_end } else { t + dt };
        steps += 1;
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::Stability(format!("shell amplitudes blew up at t = {t}")));
        }
        if steps % config.record_every == 0 || last {
            samples.push(sample(&state, t, pinned));
        }
    }
    Ok(ShellTrajectory { samples, final_state: state, steps })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShellSlope {
    pub fit: LineFit,
    /// Window reaches the forced shells or the dissipation range.
    pub flagged: bool,
}

impl ShellSlope {
    pub fn slope(&self) -> f64 {
        self.fit.slope
    }
}

/// Least-squares slope of `log2 a_j` over `j_lo..=j_hi`.
pub fn shell_steady_slope(state: &ShellState, j_lo: usize, j_hi: usize) -> Result<ShellSlope> {
    if j_hi < j_lo + 4 || j_hi > state.top() {
        return Err(Error::Fit(format!("window {j_lo}..={j_hi} needs >= 5 shells within 0..={}", state.top())));
    }
    let mut points = Vec::with_capacity(j_hi - j_lo + 1);
    for j in j_lo..=j_hi {
        let v = state.a[j];
        if !(v > 0.0) {
            return Err(Error::Fit(format!("a_{j} = {v} is not positive")));
        }
        points.push((j as f64, v.log2()));
    }
    let fit = fit_line(&points)?;
    let flagged = j_lo < 2 || (state.nu > 0.0 && j_hi + 2 > state.dissipation_shell());
    Ok(ShellSlope { fit, flagged })
}

/// Shell-spectrum rows `(j, a_j, 2^j, a_j^2 / 2^j)`.
pub fn shell_spectrum(state: &ShellState) -> Vec<(usize, f64, f64, f64)> {
    state
        .a
        .iter()
        .enumerate()
        .map(|(j, &a)| {
            let k = 2f64.powi(j as i32);
            (j, a, k, a * a / k)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rhs_examples() {
        let zero = ShellState::zeros(10, 1.0, 1e-3).unwrap();
        assert!(shell_rhs(&zero).iter().all(|&v| v == 0.0));

        let mut a = vec![0.0; 11];
        a[0] = 1.0;
        let r = shell_rhs(&ShellState::new(a, 1.0, 0.0).unwrap());
        assert_eq!(r[0], 0.0);
        assert_eq!(r[1], 1.0);
        assert!(r[2..].iter().all(|&v| v == 0.0));

        let mut a = vec![0.0; 11];
        a[5] = 0.7;
        let r = shell_rhs(&ShellState::new(a, 1.0, 1e-3).unwrap());
        assert_abs_diff_eq!(r[5], -1e-3 * 1024.0 * 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(r[6], 32.0 * 0.49, epsilon = 1e-12);
    }

    #[test]
    fn rhs_matches_direct_formula() {
        let a: Vec<f64> = (0..12).map(|j| ((j * 7 % 5) as f64 - 2.0) * 0.3).collect();
        let s = ShellState::new(a.clone(), 1.5, 1e-4).unwrap();
        let r = shell_rhs(&s);
        for j in 0..12 {
            let jf = j as f64;
            let prev = if j > 0 { a[j - 1] } else { 0.0 };
            let next = if j < 11 { a[j + 1] } else { 0.0 };
            let expect = -1e-4 * 4f64.powf(jf) * a[j] + 2f64.powf(1.5 * (jf - 1.0)) * prev * prev
                - 2f64.powf(1.5 * jf) * a[j] * next;
            assert_abs_diff_eq!(r[j], expect, epsilon = 1e-9 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn nonlinear_terms_conserve_energy_pointwise() {
        let a: Vec<f64> = (0..15).map(|j| (j as f64 * 1.3).sin()).collect();
        let s = ShellState::new(a.clone(), 1.0, 0.0).unwrap();
        let r = shell_rhs(&s);
        let rate: f64 = a.iter().zip(&r).map(|(x, y)| x * y).sum();
        assert!(rate.abs() < 1e-9);
    }

    #[test]
    fn slope_examples() {
        let ansatz: Vec<f64> = (0..=20).map(|j| 2f64.powf(-(j as f64) / 3.0)).collect();
        let s = ShellState::new(ansatz, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(shell_steady_slope(&s, 3, 15).unwrap().slope(), -1.0 / 3.0, epsilon = 1e-12);
        let flat = ShellState::new(vec![0.5; 12], 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(shell_steady_slope(&flat, 2, 10).unwrap().slope(), 0.0, epsilon = 1e-14);
        assert!(shell_steady_slope(&flat, 2, 5).is_err());
        assert!(shell_steady_slope(&flat, 0, 6).unwrap().flagged);
    }

    #[test]
    fn stiffness_cap_rejects_large_steps() {
        let s = ShellState::zeros(24, 1.0, 1e-8).unwrap();
        let err = shell_evolve(&s, &ShellConfig::new(1.0, 1e-5)).unwrap_err();
        assert!(matches!(err, Error::Stability(_)));
        assert!(ShellState::zeros(6, 1.0, 0.0).is_err());
    }

    #[test]
    fn pinned_start_from_rest_fills_up_and_saturates() {
        let s = ShellState::zeros(12, 1.0, 1e-4).unwrap();
        let cfg = ShellConfig::new(40.0, 2e-4).pinned(1.0).recording_every(500);
        let traj = shell_evolve(&s, &cfg).unwrap();
        let e = |t: f64| traj.samples.iter().find(|x| x.t >= t).unwrap().energy;
        assert!(e(1.0) > 0.0 && e(5.0) > e(1.0));
        assert!((e(40.0) - e(30.0)).abs() < 1e-6 * e(40.0));
    }
}
