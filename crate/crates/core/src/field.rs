//! Grids and fields in the rescaled `(xi, w)` coordinates, and the
//! physical `(kappa, a)` view computed from them.
//!
//! The change of variables is `xi = kappa^(-1/gamma)` and
//! `w = epsilon^(-1/3) kappa^(alpha/2) a`, which maps `[1, inf)` onto `(0, 1]`
//! and the inviscid fixed point onto `w = 1`.

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Relative tolerance on the boundary value `a(1) = epsilon^(1/3)`.
const BOUNDARY_TOL: f64 = 1e-9;

/// Uniform cell-centered grid on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiGrid {
    n: usize,
    dxi: f64,
}

impl XiGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("grid needs at least one cell".into()));
        }
        Ok(Self { n, dxi: 1.0 / n as f64 })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dxi(&self) -> f64 {
        self.dxi
    }

    /// `xi_i = (i + 1/2) dxi`
    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dxi
    }

    pub fn centers(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.center(i))
    }
}

/// Rescaled solution `w(xi, t)` sampled at cell centers.
#[derive(Debug, Clone, PartialEq)]
pub struct WField {
    pub grid: XiGrid,
    pub values: Vec<f64>,
    /// Rescaled time.
    pub time: f64,
}

impl WField {
    pub fn new(grid: XiGrid, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InconsistentField(format!(
                "{} values for {} cells",
                values.len(),
                grid.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InconsistentField(format!("w must be finite and >= 0, got {bad}")));
        }
        Ok(Self { grid, values, time })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: XiGrid, time: f64, f: F) -> Result<Self> {
        Self::new(grid, grid.centers().map(f).collect(), time)
    }

    pub fn constant(grid: XiGrid, value: f64, time: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.len()], time)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Value including the boundary extension `w = 1` for `xi >= 1`.
    #[inline]
    pub fn extended(&self, i: usize) -> f64 {
        if i < self.values.len() {
            self.values[i]
        } else {
            1.0
        }
    }

    /// Piecewise-linear interpolant through the cell centers, with `w(1) = 1`
    /// and constant extrapolation below the first center.
    pub fn interpolate(&self, xi: f64) -> f64 {
        interpolate_centers(&self.grid, &self.values, 1.0, xi)
    }
}

/// Linear interpolation of cell-centered data, closing the right end with
/// `right_value` at `xi = 1`.
pub fn interpolate_centers(grid: &XiGrid, values: &[f64], right_value: f64, xi: f64) -> f64 {
    let n = grid.len();
    let s = xi / grid.dxi() - 0.5;
    if s <= 0.0 {
        return values[0];
    }
    let i = s.floor() as usize;
    let frac = s - i as f64;
    if i + 1 < n {
        values[i] * (1.0 - frac) + values[i + 1] * frac
    } else if i < n {
        // between the last center and the boundary node at xi = 1
        let frac = (xi - grid.center(n - 1)) / (0.5 * grid.dxi());
        let frac = frac.clamp(0.0, 1.0);
        values[n - 1] * (1.0 - frac) + right_value * frac
    } else {
        right_value
    }
}

/// Physical-variable view `a(kappa, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AFieldView {
    pub kappas: Vec<f64>,
    pub values: Vec<f64>,
    /// Physical time.
    pub time: f64,
}

impl AFieldView {
    pub fn new(kappas: Vec<f64>, values: Vec<f64>, time: f64) -> Result<Self> {
        if kappas.len() != values.len() || kappas.is_empty() {
            return Err(Error::InconsistentField("kappa/value length mismatch or empty".into()));
        }
        if kappas[0] != 1.0 {
            return Err(Error::InconsistentField(format!(
                "first wavenumber must be 1, got {}",
                kappas[0]
            )));
        }
        if kappas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InconsistentField("wavenumbers must increase strictly".into()));
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InconsistentField(format!("a must be finite and >= 0, got {bad}")));
        }
        Ok(Self { kappas, values, time })
    }

    /// Samples `a` on the wavenumbers of `grid` (plus the boundary `kappa = 1`).
    pub fn sample<F: Fn(f64) -> f64>(
        grid: &XiGrid,
        params: &ModelParams,
        time: f64,
        a: F,
    ) -> Result<Self> {
        let kappas = grid_kappas(grid, params);
        let values = kappas.iter().map(|&k| a(k)).collect();
        Self::new(kappas, values, time)
    }
}

/// Wavenumbers of the cell centers in increasing order, preceded by `kappa = 1`.
pub fn grid_kappas(grid: &XiGrid, params: &ModelParams) -> Vec<f64> {
    std::iter::once(1.0)
        .chain((0..grid.len()).rev().map(|i| grid.center(i).powf(-params.gamma)))
        .collect()
}

pub fn kappa_to_xi(kappa: f64, params: &ModelParams) -> Result<f64> {
    if !(kappa >= 1.0) {
        return Err(Error::Domain(format!("kappa = {kappa} < 1")));
    }
    Ok(kappa.powf(-1.0 / params.gamma))
}

pub fn xi_to_kappa(xi: f64, params: &ModelParams) -> Result<f64> {
    if !(xi > 0.0 && xi <= 1.0) {
        return Err(Error::Domain(format!("xi = {xi} not in (0, 1]")));
    }
    Ok(xi.powf(-params.gamma))
}

/// `w = epsilon^(-1/3) kappa^(alpha/2) a` at a single point.
#[inline]
pub fn w_from_a(kappa: f64, a: f64, params: &ModelParams) -> f64 {
    a * kappa.powf(0.5 * params.alpha) / params.epsilon.cbrt()
}

/// `a = epsilon^(1/3) kappa^(-alpha/2) w` at a single point.
#[inline]
pub fn a_from_w(kappa: f64, w: f64, params: &ModelParams) -> f64 {
    w * params.epsilon.cbrt() * kappa.powf(-0.5 * params.alpha)
}

/// Transforms a physical view onto `grid`, interpolating linearly in `xi`
/// when the view's wavenumbers are not the grid's own.
pub fn a_to_w(view: &AFieldView, params: &ModelParams, grid: &XiGrid) -> Result<WField> {
    let boundary = params.boundary_amplitude();
    if (view.values[0] - boundary).abs() > BOUNDARY_TOL * boundary {
        return Err(Error::InconsistentField(format!(
            "a(1) = {} but epsilon^(1/3) = {boundary}",
            view.values[0]
        )));
    }
    // (xi, w) pairs in increasing xi order; xi = 1 comes last.
    let mut xs = Vec::with_capacity(view.kappas.len());
    let mut ws = Vec::with_capacity(view.kappas.len());
    for (&k, &a) in view.kappas.iter().zip(&view.values).rev() {
        xs.push(kappa_to_xi(k, params)?);
        ws.push(w_from_a(k, a, params));
    }
    let last = ws.len() - 1;
    ws[last] = 1.0;
    let values = grid.centers().map(|x| interp_sorted(&xs, &ws, x)).collect();
    WField::new(*grid, values, params.rescaled_time(view.time))
}

/// Physical view of `field` on its own grid wavenumbers plus `kappa = 1`.
pub fn w_to_a(field: &WField, params: &ModelParams) -> Result<AFieldView> {
    let kappas = grid_kappas(&field.grid, params);
    let n = field.grid.len();
    let values = kappas
        .iter()
        .enumerate()
        .map(|(j, &k)| {
            let w = if j == 0 { 1.0 } else { field.values[n - j] };
            a_from_w(k, w, params)
        })
        .collect();
    AFieldView::new(kappas, values, params.physical_time(field.time))
}

fn interp_sorted(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    match xs.partition_point(|&v| v < x) {
        0 => ys[0],
        i if i == xs.len() => ys[xs.len() - 1],
        i => {
            if xs[i] == x {
                return ys[i];
            }
            let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            ys[i - 1] + t * (ys[i] - ys[i - 1])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_point::inviscid_a0;
    use approx::assert_abs_diff_eq;

    fn p(alpha: f64) -> ModelParams {
        ModelParams::from_alpha(alpha, 1.0, 0.0).unwrap()
    }

    #[test]
    fn kappa_xi_examples() {
        assert_eq!(kappa_to_xi(1.0, &p(2.3)).unwrap(), 1.0);
        assert_abs_diff_eq!(kappa_to_xi(4.0, &p(2.0)).unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(kappa_to_xi(8.0, &p(5.0 / 3.0)).unwrap(), 0.25, epsilon = 1e-15);
        assert!(matches!(kappa_to_xi(0.5, &p(2.0)), Err(Error::Domain(_))));
        assert!(matches!(xi_to_kappa(0.0, &p(2.0)), Err(Error::Domain(_))));
        assert!(matches!(xi_to_kappa(1.5, &p(2.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn grid_centers() {
        let g = XiGrid::new(4).unwrap();
        let c: Vec<f64> = g.centers().collect();
        assert_eq!(c, vec![0.125, 0.375, 0.625, 0.875]);
        assert!(XiGrid::new(0).is_err());
    }

    #[test]
    fn inviscid_fixed_point_maps_to_unit_w() {
        for alpha in [5.0 / 3.0, 2.0, 7.0 / 3.0, 8.0 / 3.0] {
            let params = ModelParams::from_alpha(alpha, 3.0, 0.0).unwrap();
            let grid = XiGrid::new(64).unwrap();
            let view = AFieldView::sample(&grid, &params, 0.0, |k| inviscid_a0(&params, k).unwrap()).unwrap();
            let w = a_to_w(&view, &params, &grid).unwrap();
            for v in &w.values {
                assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn hand_substitution_alpha_two() {
        let params = ModelParams::from_alpha(2.0, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(w_from_a(2.0, 1.0 / 3.0, &params), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a_from_w(2.0, 2.0 / 3.0, &params), 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn unit_w_maps_to_a0() {
        let params = ModelParams::from_alpha(7.0 / 3.0, 8.0, 0.0).unwrap();
        let grid = XiGrid::new(32).unwrap();
        let w = WField::constant(grid, 1.0, 0.0).unwrap();
        let a = w_to_a(&w, &params).unwrap();
        for (k, v) in a.kappas.iter().zip(&a.values) {
            assert_abs_diff_eq!(*v, 2.0 * k.powf(-7.0 / 6.0), epsilon = 1e-13);
        }
    }

    #[test]
    fn boundary_mismatch_is_rejected() {
        let params = p(2.0);
        let grid = XiGrid::new(8).unwrap();
        let view = AFieldView::sample(&grid, &params, 0.0, |k| 0.5 / k).unwrap();
        assert!(matches!(a_to_w(&view, &params, &grid), Err(Error::InconsistentField(_))));
    }

    #[test]
    fn view_validation() {
        assert!(AFieldView::new(vec![2.0, 3.0], vec![1.0, 1.0], 0.0).is_err());
        assert!(AFieldView::new(vec![1.0, 1.0], vec![1.0, 1.0], 0.0).is_err());
        assert!(AFieldView::new(vec![1.0, 2.0], vec![1.0, -1.0], 0.0).is_err());
        assert!(WField::new(XiGrid::new(2).unwrap(), vec![0.0, -0.1], 0.0).is_err());
    }

    #[test]
    fn interpolation_hits_boundary() {
        let g = XiGrid::new(4).unwrap();
        let v = [0.0, 0.25, 0.5, 0.75];
        assert_eq!(interpolate_centers(&g, &v, 1.0, 0.05), 0.0);
        assert_abs_diff_eq!(interpolate_centers(&g, &v, 1.0, 0.25), 0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(interpolate_centers(&g, &v, 1.0, 1.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(interpolate_centers(&g, &v, 1.0, 0.9375), 0.875, epsilon = 1e-15);
    }
}
