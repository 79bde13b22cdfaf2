//! Closed-form steady states of the cascade model.

use crate::error::{Error, Result};
use crate::field::{interpolate_centers, XiGrid};
use crate::params::ModelParams;

/// Inviscid fixed point `A0(k) = epsilon^(1/3) k^(-alpha/2)`.
pub fn inviscid_a0(params: &ModelParams, kappa: f64) -> Result<f64> {
    if !(kappa >= 1.0) {
        return Err(Error::Domain(format!("kappa = {kappa} < 1")));
    }
    Ok(params.boundary_amplitude() * kappa.powf(-0.5 * params.alpha))
}

/// Dissipation wavenumber `kappa_d` and its rescaled coordinate `xi_d`.
///
/// `kappa_d` comes from the wavenumber formula and `xi_d` from the rescaled
/// one; the two agree through `kappa_d = xi_d^(-gamma)`.
pub fn dissipation_wavenumber(params: &ModelParams) -> Result<(f64, f64)> {
    if params.nu == 0.0 {
        return Err(Error::InfiniteCutoff);
    }
    let s = 3.0 - params.alpha;
    let kappa_d = (1.0 + 3.0 * s * params.boundary_amplitude() / params.nu).powf(1.0 / s);
    let g = params.two_gamma_minus_one();
    let xi_d = (1.0 + g / params.mu).powf(-1.0 / g);
    Ok((kappa_d, xi_d))
}

/// Viscous fixed point `A^nu`, identically zero beyond `kappa_d`.
pub fn viscous_anu(params: &ModelParams, kappa: f64) -> Result<f64> {
    if params.nu == 0.0 {
        return Err(Error::ViscosityRequired);
    }
    if !(kappa >= 1.0) {
        return Err(Error::Domain(format!("kappa = {kappa} < 1")));
    }
    let (kappa_d, _) = dissipation_wavenumber(params)?;
    if kappa >= kappa_d {
        return Ok(0.0);
    }
    let s = 3.0 - params.alpha;
    let bracket =
        params.boundary_amplitude() + params.nu / (3.0 * s) * (1.0 - kappa.powf(s));
    Ok(kappa.powf(-0.5 * params.alpha) * bracket.max(0.0))
}

/// Rescaled fixed point `W(xi)`, zero on `[0, xi_d]`. With `mu = 0` it is `W = 1`.
pub fn rescaled_w(params: &ModelParams, xi: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::Domain(format!("xi = {xi} not in [0, 1]")));
    }
    if params.mu == 0.0 {
        return Ok(1.0);
    }
    let g = params.two_gamma_minus_one();
    let xi_d = (1.0 + g / params.mu).powf(-1.0 / g);
    if xi <= xi_d {
        return Ok(0.0);
    }
    Ok((1.0 + params.mu / g * (1.0 - xi.powf(-g))).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointKind {
    InviscidA0,
    ViscousAnu,
    RescaledW,
    RegularizedWdelta,
}

/// A steady state together with the parameters it belongs to.
///
/// `A` kinds are evaluated at a wavenumber, `W` kinds at a rescaled
/// coordinate. The regularized state exists only as a table on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    pub kind: FixedPointKind,
    pub params: ModelParams,
    pub kappa_d: Option<f64>,
    pub xi_d: Option<f64>,
    pub table: Option<(XiGrid, Vec<f64>)>,
}

impl FixedPoint {
    pub fn inviscid(params: ModelParams) -> Self {
        Self { kind: FixedPointKind::InviscidA0, params, kappa_d: None, xi_d: None, table: None }
    }

    pub fn viscous(params: ModelParams) -> Result<Self> {
        let (kappa_d, xi_d) = dissipation_wavenumber(&params)?;
        Ok(Self {
            kind: FixedPointKind::ViscousAnu,
            params,
            kappa_d: Some(kappa_d),
            xi_d: Some(xi_d),
            table: None,
        })
    }

    pub fn rescaled(params: ModelParams) -> Result<Self> {
        Ok(Self { kind: FixedPointKind::RescaledW, ..Self::viscous(params)? })
    }

    pub fn regularized(params: ModelParams, grid: XiGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InconsistentField("table length differs from grid".into()));
        }
        let (kappa_d, xi_d) = dissipation_wavenumber(&params)?;
        Ok(Self {
            kind: FixedPointKind::RegularizedWdelta,
            params,
            kappa_d: Some(kappa_d),
            xi_d: Some(xi_d),
            table: Some((grid, values)),
        })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.kind {
            FixedPointKind::InviscidA0 => inviscid_a0(&self.params, x),
            FixedPointKind::ViscousAnu => viscous_anu(&self.params, x),
            FixedPointKind::RescaledW => rescaled_w(&self.params, x),
            FixedPointKind::RegularizedWdelta => {
                if !(0.0..=1.0).contains(&x) {
                    return Err(Error::Domain(format!("xi = {x} not in [0, 1]")));
                }
                let (grid, values) = self.table.as_ref().expect("regularized table");
                Ok(interpolate_centers(grid, values, 1.0, x))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(alpha: f64, epsilon: f64, nu: f64) -> ModelParams {
        ModelParams::from_alpha(alpha, epsilon, nu).unwrap()
    }

    #[test]
    fn a0_examples() {
        assert_abs_diff_eq!(inviscid_a0(&params(2.0, 1.0, 0.0), 1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(inviscid_a0(&params(2.0, 1.0, 0.0), 4.0).unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(inviscid_a0(&params(5.0 / 3.0, 8.0, 0.0), 1.0).unwrap(), 2.0, epsilon = 1e-15);
        assert!(inviscid_a0(&params(2.0, 1.0, 0.0), 0.9).is_err());
    }

    #[test]
    fn anu_examples() {
        let p = params(2.0, 1.0, 1.0);
        assert_abs_diff_eq!(viscous_anu(&p, 2.0).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(viscous_anu(&p, 4.0).unwrap(), 0.0);
        assert_abs_diff_eq!(viscous_anu(&p, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        let p8 = params(7.0 / 3.0, 8.0, 0.3);
        assert_abs_diff_eq!(viscous_anu(&p8, 1.0).unwrap(), 2.0, epsilon = 1e-15);
        assert_eq!(viscous_anu(&params(2.0, 1.0, 0.0), 2.0), Err(Error::ViscosityRequired));
    }

    #[test]
    fn cutoff_examples() {
        let (kd, xd) = dissipation_wavenumber(&params(2.0, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(kd, 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(xd, 0.25, epsilon = 1e-15);
        let (kd, _) = dissipation_wavenumber(&params(2.0, 1.0, 3.0)).unwrap();
        assert_abs_diff_eq!(kd, 2.0, epsilon = 1e-14);
        assert_eq!(dissipation_wavenumber(&params(2.0, 1.0, 0.0)), Err(Error::InfiniteCutoff));
    }

    #[test]
    fn k41_cutoff_asymptotics() {
        for nu in [1e-6, 1e-8, 1e-10] {
            let (kd, _) = dissipation_wavenumber(&params(5.0 / 3.0, 1.0, nu)).unwrap();
            let ratio = kd / (1.0 / nu.powi(3)).powf(0.25);
            assert!((ratio - 4f64.powf(0.75)).abs() < 1e-3, "{ratio}");
        }
    }

    #[test]
    fn w_examples() {
        let p = params(2.0, 1.0, 1.0);
        assert_abs_diff_eq!(rescaled_w(&p, 0.5).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rescaled_w(&p, 0.25).unwrap(), 0.0);
        assert_abs_diff_eq!(rescaled_w(&p, 1.0).unwrap(), 1.0);
        assert!(rescaled_w(&p, 1.5).is_err());
        assert_eq!(rescaled_w(&params(2.0, 1.0, 0.0), 0.1).unwrap(), 1.0);
    }

    #[test]
    fn kinds_dispatch() {
        let p = params(2.0, 1.0, 1.0);
        let fp = FixedPoint::viscous(p).unwrap();
        assert_eq!(fp.kappa_d, Some(4.0));
        assert_abs_diff_eq!(fp.eval(2.0).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        let fw = FixedPoint::rescaled(p).unwrap();
        assert_abs_diff_eq!(fw.eval(0.5).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert!(FixedPoint::inviscid(p).kappa_d.is_none());
        let g = XiGrid::new(4).unwrap();
        let fr = FixedPoint::regularized(p, g, vec![0.0, 0.2, 0.6, 0.9]).unwrap();
        assert_abs_diff_eq!(fr.eval(1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(fr.eval(0.5).unwrap(), 0.4, epsilon = 1e-15);
    }
}
