//! Energy and enstrophy functionals.
//!
//! With the rescaled variables, `|a|^2 = gamma eps^(2/3) int_0^1 w^2 dxi` and
//! `||a||^2 = gamma eps^(2/3) int_0^1 xi^(-2 gamma) w^2 dxi`. Grid fields are
//! integrated with the midpoint rule (the singular weight is only ever
//! evaluated at cell centers); closed-form fixed points use Gauss-Legendre on
//! geometrically graded panels or exact antiderivatives.

use crate::error::{Error, Result};
use crate::field::WField;
use crate::fixed_point::dissipation_wavenumber;
use crate::params::ModelParams;
use crate::quadrature::{geometric_edges, power_integral, GaussLegendre};

/// First-cell amplitude, relative to the field maximum, above which an
/// untruncated enstrophy is reported as divergent.
const DIVERGENCE_FLOOR: f64 = 1e-6;

fn prefactor(params: &ModelParams) -> f64 {
    params.gamma * params.epsilon.powf(2.0 / 3.0)
}

/// `|a|^2` of a grid field.
pub fn energy(field: &WField, params: &ModelParams) -> f64 {
    let dxi = field.grid.dxi();
    prefactor(params) * field.values.iter().map(|w| w * w).sum::<f64>() * dxi
}

/// `int_0^1 xi^(-2 gamma) w^2 dxi` over cells with `xi >= xi_min`.
pub fn weighted_enstrophy_integral(field: &WField, params: &ModelParams, xi_min: f64) -> f64 {
    let g2 = 2.0 * params.gamma;
    field
        .grid
        .centers()
        .zip(&field.values)
        .filter(|(xi, _)| *xi >= xi_min)
        .map(|(xi, w)| xi.powf(-g2) * w * w)
        .sum::<f64>()
        * field.grid.dxi()
}

/// `||a||^2` of a grid field, optionally truncated at `kappa_max`.
///
/// Without truncation the integral over `(0, 1)` only converges if `w`
/// vanishes near `xi = 0`; a field that does not is reported as divergent.
pub fn enstrophy(field: &WField, params: &ModelParams, kappa_max: Option<f64>) -> Result<f64> {
    let xi_min = match kappa_max {
        Some(k) if k >= 1.0 => k.powf(-1.0 / params.gamma),
        Some(k) => return Err(Error::Domain(format!("kappa_max = {k} < 1"))),
        None => {
            let peak = field.max();
            if peak > 0.0 && field.values[0] > DIVERGENCE_FLOOR * peak {
                return Err(Error::Divergent(format!(
                    "w(xi_0) = {} does not vanish; enstrophy integrand ~ kappa^(2 - alpha)",
                    field.values[0]
                )));
            }
            0.0
        }
    };
    Ok(prefactor(params) * weighted_enstrophy_integral(field, params, xi_min))
}

/// Dissipation rate `nu ||a||^2 = 3 mu eps int_0^1 xi^(-2 gamma) w^2 dxi` of a grid field.
pub fn dissipation_rate(field: &WField, params: &ModelParams) -> f64 {
    3.0 * params.mu * params.epsilon * weighted_enstrophy_integral(field, params, 0.0)
}

/// `|A0|^2 = gamma eps^(2/3)`.
pub fn energy_inviscid(params: &ModelParams) -> f64 {
    prefactor(params)
}

/// `||A0||^2` truncated at `kappa_max`; divergent without truncation.
pub fn enstrophy_inviscid(params: &ModelParams, kappa_max: Option<f64>) -> Result<f64> {
    match kappa_max {
        None => Err(Error::Divergent("enstrophy of A0 grows like kappa^(3 - alpha)".into())),
        Some(k) if k < 1.0 => Err(Error::Domain(format!("kappa_max = {k} < 1"))),
        Some(k) => {
            let xi_min = k.powf(-1.0 / params.gamma);
            Ok(prefactor(params) * power_integral(-2.0 * params.gamma, xi_min, 1.0))
        }
    }
}

fn fixed_point_w_integral<F: Fn(f64, f64) -> f64>(params: &ModelParams, weight: F) -> Result<f64> {
    let (_, xi_d) = dissipation_wavenumber(params)?;
    let g = params.two_gamma_minus_one();
    let mu = params.mu;
    let w = move |xi: f64| 1.0 + mu / g * (1.0 - xi.powf(-g));
    let gl = GaussLegendre::new(20);
    let edges = geometric_edges(xi_d, 1.0, 1.5);
    Ok(gl.integrate_panels(|xi| weight(xi, w(xi)), &edges))
}

/// `|A^nu|^2` by Gauss-Legendre quadrature in `xi`.
pub fn energy_viscous(params: &ModelParams) -> Result<f64> {
    Ok(prefactor(params) * fixed_point_w_integral(params, |_, w| w * w)?)
}

/// `||A^nu||^2` by Gauss-Legendre quadrature in `xi`.
pub fn enstrophy_viscous(params: &ModelParams) -> Result<f64> {
    let g2 = 2.0 * params.gamma;
    Ok(prefactor(params) * fixed_point_w_integral(params, |xi, w| xi.powf(-g2) * w * w)?)
}

/// `||A^nu - A0||` in `L^2([1, inf))`, squared.
///
/// Both pieces have exact antiderivatives: the tail beyond `kappa_d`, where
/// `A^nu = 0`, and the inertial part, where the difference is
/// `nu k^(-alpha/2) (1 - k^(3-alpha)) / (3 (3 - alpha))`.
pub fn l2_distance_sq_fixed_points(params: &ModelParams) -> Result<f64> {
    let (kappa_d, _) = dissipation_wavenumber(params)?;
    let a = params.alpha;
    let s = 3.0 - a;
    let tail = params.epsilon.powf(2.0 / 3.0) * kappa_d.powf(1.0 - a) / (a - 1.0);
    let body = power_integral(-a, 1.0, kappa_d) - 2.0 * power_integral(s - a, 1.0, kappa_d)
        + power_integral(2.0 * s - a, 1.0, kappa_d);
    Ok(tail + params.nu * params.nu / (9.0 * s * s) * body)
}

pub fn l2_distance_fixed_points(params: &ModelParams) -> Result<f64> {
    l2_distance_sq_fixed_points(params).map(f64::sqrt)
}
