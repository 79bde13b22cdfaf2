//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a flat `Float64Array` that the page slices into
//! rows. The plain functions in [`frames`] carry the logic so they can be
//! tested natively; the exports only convert errors.

use wasm_bindgen::prelude::*;

pub mod frames {
    use cascade_lab::field::XiGrid;
    use cascade_lab::fixed_point::{dissipation_wavenumber, inviscid_a0, rescaled_w, viscous_anu};
    use cascade_lab::inviscid::{InitialProfile, LaxOleinik};
    use cascade_lab::leray::{fixed_point_regularized, Mollifier};
    use cascade_lab::spectrum::log_spaced;
    use cascade_lab::{ModelParams, Result};

    /// Rows `(kappa, A0(kappa)^2, A^nu(kappa)^2)` on `points` log-spaced
    /// wavenumbers from 1 to `4 kappa_d`, followed by `kappa_d`.
    pub fn spectra(alpha: f64, nu: f64, points: usize) -> Result<Vec<f64>> {
        let p = ModelParams::from_alpha(alpha, 1.0, nu)?;
        let (kd, _) = dissipation_wavenumber(&p)?;
        let mut out = Vec::with_capacity(3 * points + 1);
        for k in log_spaced(1.0, 4.0 * kd, points.max(2)) {
            let (a0, anu) = (inviscid_a0(&p, k)?, viscous_anu(&p, k)?);
            out.extend([k, a0 * a0, anu * anu]);
        }
        out.push(kd);
        Ok(out)
    }

    /// Initial data for the exact solver: `seed = 0` is `w0 = 0`, otherwise
    /// a seeded random piecewise-linear profile.
    pub fn initial(seed: u32) -> InitialProfile {
        if seed == 0 {
            InitialProfile::constant(0.0).expect("zero profile")
        } else {
            InitialProfile::random(u64::from(seed), 8)
        }
    }

    /// Exact inviscid `w(xi, t)` at `n` cell centers.
    pub fn inviscid_frame(seed: u32, t: f64, n: usize) -> Result<Vec<f64>> {
        let profile = initial(seed);
        let grid = XiGrid::new(n)?;
        if t <= 0.0 {
            return Ok(grid.centers().map(|x| profile.sample(x)).collect());
        }
        Ok(LaxOleinik::new(&profile).eval_grid(&grid, t)?.values)
    }

    /// Rows `(xi, W_delta(xi), W(xi))` at `n` cell centers.
    pub fn regularized(alpha: f64, nu: f64, delta: f64, n: usize) -> Result<Vec<f64>> {
        let p = ModelParams::from_alpha(alpha, 1.0, nu)?;
        let grid = XiGrid::new(n)?;
        let fp = fixed_point_regularized(&p, &Mollifier::new(delta)?, &grid)?;
        let mut out = Vec::with_capacity(3 * n);
        for (i, x) in grid.centers().enumerate() {
            out.extend([x, fp.values[i], rescaled_w(&p, x)?]);
        }
        Ok(out)
    }
}

fn js(r: cascade_lab::Result<Vec<f64>>) -> Result<Vec<f64>, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn spectra(alpha: f64, nu: f64, points: usize) -> Result<Vec<f64>, JsError> {
    js(frames::spectra(alpha, nu, points))
}

#[wasm_bindgen(js_name = inviscidFrame)]
pub fn inviscid_frame(seed: u32, t: f64, n: usize) -> Result<Vec<f64>, JsError> {
    js(frames::inviscid_frame(seed, t, n))
}

#[wasm_bindgen]
pub fn regularized(alpha: f64, nu: f64, delta: f64, n: usize) -> Result<Vec<f64>, JsError> {
    js(frames::regularized(alpha, nu, delta, n))
}
