//! Flux and spectrum diagnostics on physical-variable views, and log-log
//! least-squares fitting.

use crate::error::{Error, Result};
use crate::field::AFieldView;
use crate::params::ModelParams;

/// Minimum number of points a power-law fit accepts.
pub const MIN_FIT_POINTS: usize = 4;

/// Energy flux `Pi(k) = k^(3c + 5/2) a^3` at every wavenumber of the view.
pub fn flux_profile(view: &AFieldView, params: &ModelParams) -> Vec<(f64, f64)> {
    let exponent = 3.0 * params.c + 2.5;
    view.kappas
        .iter()
        .zip(&view.values)
        .map(|(&k, &a)| (k, k.powf(exponent) * a * a * a))
        .collect()
}

/// Spectrum `E(k) = a(k)^2`.
pub fn spectrum(view: &AFieldView) -> Vec<(f64, f64)> {
    view.kappas.iter().zip(&view.values).map(|(&k, &a)| (k, a * a)).collect()
}

/// Result of an ordinary least-squares line fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    pub points: usize,
}

/// Least-squares line through `(x, y)` pairs.
pub fn fit_line(points: &[(f64, f64)]) -> Result<LineFit> {
    let n = points.len();
    if n < MIN_FIT_POINTS {
        return Err(Error::Fit(format!("{n} points, need at least {MIN_FIT_POINTS}")));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit("abscissae are degenerate".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(LineFit { slope, intercept, residual: (ss / nf).sqrt(), points: n })
}

/// Log-log least-squares fit of positive `(x, y)` pairs.
pub fn fit_log_log(pairs: &[(f64, f64)]) -> Result<LineFit> {
    let mut logs = Vec::with_capacity(pairs.len());
    for &(x, y) in pairs {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::Fit(format!("nonpositive pair ({x}, {y})")));
        }
        logs.push((x.ln(), y.ln()));
    }
    fit_line(&logs)
}

/// Slope of `log E` against `log k` over `[kappa_lo, kappa_hi]`.
pub fn fit_power_law(table: &[(f64, f64)], kappa_lo: f64, kappa_hi: f64) -> Result<f64> {
    let window: Vec<(f64, f64)> = table
        .iter()
        .copied()
        .filter(|(k, _)| *k >= kappa_lo && *k <= kappa_hi)
        .collect();
    if window.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(format!(
            "window [{kappa_lo}, {kappa_hi}] holds {} points",
            window.len()
        )));
    }
    Ok(fit_log_log(&window)?.slope)
}

/// `count` log-spaced wavenumbers on `[lo, hi]`, both ends included.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == count - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}
