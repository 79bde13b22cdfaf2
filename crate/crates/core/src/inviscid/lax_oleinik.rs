//! Exact entropy solution of `w_t = w w_xi` on the whole line by the
//! Lax-Oleinik formula.
//!
//! With `h(y) = int_0^y w~0`, the solution is `w(xi, t) = (y* - xi) / t` where
//! `y*` minimizes `f(y) = (xi - y)^2 / (2t) - h(y)`. Since `h` is piecewise
//! quadratic, `f` is too, and its global minimum is found by comparing the
//! stationary points and endpoints of every piece.

use crate::error::{Error, Result};
use crate::field::{WField, XiGrid};
use crate::params::ModelParams;

use super::profile::{ExtendedProfile, InitialProfile, Segment};

/// Quadratic piece of the potential: `h(y) = h0 + w0 (y - x0) + slope (y - x0)^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct QuadPiece {
    x0: f64,
    x1: f64,
    h0: f64,
    w0: f64,
    slope: f64,
}

impl QuadPiece {
    fn eval(&self, y: f64) -> f64 {
        let d = y - self.x0;
        self.h0 + self.w0 * d + 0.5 * self.slope * d * d
    }
}

/// Antiderivative `h(y) = int_0^y w~0` of the extended datum.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfPotential {
    pieces: Vec<QuadPiece>,
    /// `h(1)`
    total: f64,
}

impl HopfPotential {
    pub fn eval(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y >= 1.0 {
            return self.total + (y - 1.0);
        }
        let i = self.pieces.partition_point(|p| p.x1 <= y).min(self.pieces.len() - 1);
        self.pieces[i].eval(y)
    }

    /// `h(1) = int_0^1 w0`.
    pub fn total(&self) -> f64 {
        self.total
    }
}

pub fn hopf_potential(extended: &ExtendedProfile) -> HopfPotential {
    let mut h = 0.0;
    let mut pieces = Vec::with_capacity(extended.profile.segments().len());
    for s in extended.profile.segments() {
        pieces.push(QuadPiece { x0: s.x0, x1: s.x1, h0: h, w0: s.w0, slope: s.slope() });
        h += s.integral_to(s.x1);
    }
    HopfPotential { pieces, total: h }
}

/// Which branch of `f` a minimizer came from; `w` is affine in `xi` on each.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Branch {
    /// `y = xi` on `y < 0`, where `h = 0`.
    Left,
    /// Stationary point inside piece `k`.
    Interior(usize),
    /// A piece endpoint at the given abscissa.
    Corner(f64),
    /// `y = xi + t` on `y > 1`.
    Right,
}

impl Branch {
    /// `(A, B)` with `w = A + B xi` on this branch.
    fn affine(&self, potential: &HopfPotential, t: f64) -> (f64, f64) {
        match *self {
            Branch::Left => (0.0, 0.0),
            Branch::Right => (1.0, 0.0),
            Branch::Corner(x) => (x / t, -1.0 / t),
            Branch::Interior(k) => {
                let p = &potential.pieces[k];
                let den = 1.0 - t * p.slope;
                ((p.w0 - p.slope * p.x0) / den, p.slope / den)
            }
        }
    }
}

/// Exact solver for one initial datum.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxOleinik {
    potential: HopfPotential,
    sup: f64,
}

impl LaxOleinik {
    pub fn new(profile: &InitialProfile) -> Self {
        let extended = super::profile::extend_profile(profile);
        Self { potential: hopf_potential(&extended), sup: profile.sup() }
    }

    pub fn potential(&self) -> &HopfPotential {
        &self.potential
    }

    /// `f(y) = (xi - y)^2 / (2t) - h(y)`.
    pub fn objective(&self, xi: f64, t: f64, y: f64) -> f64 {
        (xi - y).powi(2) / (2.0 * t) - self.potential.eval(y)
    }

    fn argmin(&self, xi: f64, t: f64) -> Result<(f64, Branch)> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("t = {t} must be > 0")));
        }
        if !xi.is_finite() {
            return Err(Error::Domain(format!("xi = {xi} is not finite")));
        }
        let mut best = (f64::INFINITY, 0.0, Branch::Left);
        // Candidates are visited in increasing y, so a strict comparison keeps
        // the smallest of several exactly tied minimizers.
        let mut visit = |y: f64, branch: Branch| {
            let f = self.objective(xi, t, y);
            if f < best.0 {
                best = (f, y, branch);
            }
        };
        if xi < 0.0 {
            visit(xi, Branch::Left);
        }
        for (k, p) in self.potential.pieces.iter().enumerate() {
            visit(p.x0, Branch::Corner(p.x0));
            let curvature = 1.0 - t * p.slope;
            if curvature > 0.0 {
                // (y - xi)/t = w0 + slope (y - x0)
                let y = (xi + t * (p.w0 - p.slope * p.x0)) / curvature;
                if y > p.x0 && y < p.x1 {
                    visit(y, Branch::Interior(k));
                }
            }
        }
        visit(1.0, Branch::Corner(1.0));
        if xi + t > 1.0 {
            visit(xi + t, Branch::Right);
        }
        Ok((best.1, best.2))
    }

    /// Smallest global minimizer `y*(xi, t)`.
    pub fn minimizer(&self, xi: f64, t: f64) -> Result<f64> {
        self.argmin(xi, t).map(|(y, _)| y)
    }

    /// `w(xi, t)`.
    pub fn eval(&self, xi: f64, t: f64) -> Result<f64> {
        let (y, branch) = self.argmin(xi, t)?;
        Ok(match branch {
            Branch::Left => 0.0,
            Branch::Right => 1.0,
            _ => ((y - xi) / t).max(0.0),
        })
    }

    pub fn eval_grid(&self, grid: &XiGrid, t: f64) -> Result<WField> {
        let values = grid.centers().map(|x| self.eval(x, t)).collect::<Result<Vec<_>>>()?;
        WField::new(*grid, values, t)
    }

    /// Upper bound from the maximum principle, `max(sup w0, 1)`.
    pub fn max_bound(&self) -> f64 {
        self.sup.max(1.0)
    }

    /// Exact snapshot `w(., t)` on `[0, 1]` as a piecewise-linear profile.
    ///
    /// The solution is affine in `xi` on every interval where the minimizing
    /// branch does not change, so locating the switches (by bisection between
    /// `samples` probes) gives the snapshot up to the rounding of the switch
    /// abscissae. Shocks appear as jumps between segments.
    pub fn snapshot(&self, t: f64, samples: usize) -> Result<InitialProfile> {
        let m = samples.max(16);
        let probe = |x: f64| self.argmin(x, t).map(|(_, b)| b);
        let mut cuts = vec![0.0];
        let mut branches = vec![probe(0.0)?];
        let mut prev_x = 0.0;
        for i in 1..=m {
            let x = i as f64 / m as f64;
            let b = probe(x)?;
            if b != *branches.last().expect("nonempty") {
                let (mut lo, mut hi) = (prev_x, x);
                let left = *branches.last().expect("nonempty");
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if probe(mid)? == left {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                cuts.push(hi);
                branches.push(probe(hi)?);
                // a second switch inside (hi, x] would be missed; refine the probes if so
                if branches.last() != Some(&b) {
                    cuts.push(x);
                    branches.push(b);
                }
            }
            prev_x = x;
        }
        cuts.push(1.0);
        let mut segments = Vec::with_capacity(branches.len());
        for (k, b) in branches.iter().enumerate() {
            let (x0, x1) = (cuts[k], cuts[k + 1]);
            if !(x1 > x0) {
                continue;
            }
            let (a, s) = b.affine(&self.potential, t);
            let seg = Segment { x0, x1, w0: (a + s * x0).max(0.0), w1: (a + s * x1).max(0.0) };
            // different branches can share the same affine law (a corner and its neighbor)
            if let Some(prev) = segments.last_mut() {
                let p: &mut Segment = prev;
                let joined = (p.w1 - seg.w0).abs() <= 1e-13;
                let tiny = p.x1 - p.x0 <= 1e-12 || seg.x1 - seg.x0 <= 1e-12;
                if joined && (tiny || (p.slope() - seg.slope()).abs() <= 1e-12) {
                    p.x1 = seg.x1;
                    p.w1 = seg.w1;
                    continue;
                }
            }
            segments.push(seg);
        }
        InitialProfile::from_segments(segments)
    }
}

pub fn lax_oleinik_minimizer(potential: &HopfPotential, xi: f64, t: f64) -> Result<f64> {
    LaxOleinik { potential: potential.clone(), sup: f64::NAN }.minimizer(xi, t)
}

pub fn lax_oleinik_eval(potential: &HopfPotential, xi: f64, t: f64) -> Result<f64> {
    LaxOleinik { potential: potential.clone(), sup: f64::NAN }.eval(xi, t)
}

/// Outcome of a finite-time-attraction check.
#[derive(Debug, Clone, PartialEq)]
pub struct AttractionReport {
    /// Rescaled time at which the grid was evaluated.
    pub t_eval: f64,
    /// `max_i |w(xi_i, t_eval) - 1|`.
    pub max_deviation: f64,
    /// Rescaled attraction bound, 2.
    pub rescaled_bound: f64,
    /// Physical attraction bound, `(2/3) eps^(-1/3) gamma`.
    pub physical_bound: f64,
    /// Smallest rescaled time after which the grid equals 1 to `tolerance`.
    pub measured_time: f64,
    pub measured_physical_time: f64,
    pub tolerance: f64,
}

impl AttractionReport {
    pub fn attracted(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

/// Evaluates the exact solution at `t = 2 + margin` on `grid` and measures
/// when the grid first equals the fixed point `w = 1`.
pub fn verify_attraction(
    profile: &InitialProfile,
    params: &ModelParams,
    grid: &XiGrid,
    margin: f64,
    tolerance: f64,
) -> Result<AttractionReport> {
    let solver = LaxOleinik::new(profile);
    let deviation = |t: f64| -> Result<f64> {
        if t == 0.0 {
            return Ok(grid.centers().map(|x| (profile.sample(x) - 1.0).abs()).fold(0.0, f64::max));
        }
        Ok(grid
            .centers()
            .map(|x| solver.eval(x, t).map(|w| (w - 1.0).abs()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max))
    };
    let t_eval = 2.0 + margin;
    let max_deviation = deviation(t_eval)?;
    // Once w = 1 on (0, 1) it stays there, so the predicate is monotone in t.
    let measured_time = if deviation(0.0)? <= tolerance {
        0.0
    } else if max_deviation > tolerance {
        f64::INFINITY
    } else {
        let (mut lo, mut hi) = (0.0, t_eval);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if deviation(mid)? <= tolerance {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Ok(AttractionReport {
        t_eval,
        max_deviation,
        rescaled_bound: 2.0,
        physical_bound: params.physical_time(2.0),
        measured_time,
        measured_physical_time: params.physical_time(measured_time),
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inviscid::profile::extend_profile;
    use approx::assert_abs_diff_eq;

    fn potential(p: &InitialProfile) -> HopfPotential {
        hopf_potential(&extend_profile(p))
    }

    #[test]
    fn potential_examples() {
        let zero = potential(&InitialProfile::constant(0.0).unwrap());
        assert_eq!(zero.eval(2.0), 1.0);
        assert_eq!(zero.eval(0.5), 0.0);
        let one = potential(&InitialProfile::constant(1.0).unwrap());
        for y in [0.0, 0.3, 1.0, 4.5] {
            assert_abs_diff_eq!(one.eval(y), y, epsilon = 1e-15);
        }
        let r = potential(&InitialProfile::random(3, 5));
        assert_eq!(r.eval(-5.0), 0.0);
        assert_eq!(r.eval(0.0), 0.0);
    }

    #[test]
    fn minimizer_examples() {
        let one = potential(&InitialProfile::constant(1.0).unwrap());
        for (xi, t) in [(0.1, 0.2), (0.5, 1.0), (0.9, 3.0)] {
            assert_abs_diff_eq!(lax_oleinik_minimizer(&one, xi, t).unwrap(), xi + t, epsilon = 1e-15);
        }
        let zero = potential(&InitialProfile::constant(0.0).unwrap());
        assert_abs_diff_eq!(lax_oleinik_minimizer(&zero, 0.75, 1.0).unwrap(), 1.75, epsilon = 1e-15);
        assert_abs_diff_eq!(lax_oleinik_minimizer(&zero, 0.25, 1.0).unwrap(), 0.25, epsilon = 1e-15);
        assert!(matches!(lax_oleinik_minimizer(&zero, 0.25, 0.0), Err(Error::Domain(_))));
        assert!(matches!(lax_oleinik_minimizer(&zero, 0.25, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn eval_examples() {
        let zero = potential(&InitialProfile::constant(0.0).unwrap());
        assert_eq!(lax_oleinik_eval(&zero, 0.75, 1.0).unwrap(), 1.0);
        assert_eq!(lax_oleinik_eval(&zero, 0.25, 1.0).unwrap(), 0.0);
        let ramp = potential(&InitialProfile::ramp());
        assert_abs_diff_eq!(lax_oleinik_eval(&ramp, 0.4, 0.5).unwrap(), 0.8, epsilon = 1e-14);
        let r = potential(&InitialProfile::random(11, 7));
        assert_abs_diff_eq!(lax_oleinik_eval(&r, 0.5, 2.1).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn tie_at_shock_returns_smallest_minimizer() {
        // w0 = 0: minima at y = xi and y = xi + t tie where 1 - xi - t/2 = 0
        let zero = potential(&InitialProfile::constant(0.0).unwrap());
        let y = lax_oleinik_minimizer(&zero, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(y, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn attraction_report() {
        let params = ModelParams::from_alpha(2.0, 1.0, 0.0).unwrap();
        let grid = XiGrid::new(256).unwrap();
        let r = verify_attraction(&InitialProfile::constant(0.0).unwrap(), &params, &grid, 0.05, 1e-12).unwrap();
        assert!(r.max_deviation < 1e-12);
        assert_abs_diff_eq!(r.physical_bound, 2.0 / 3.0, epsilon = 1e-15);
        // the shock xi = 1 - t/2 leaves the last grid cell at t = 2 (1 - xi_0)
        assert_abs_diff_eq!(r.measured_time, 2.0 * (1.0 - grid.center(0)), epsilon = 1e-9);
        let r1 = verify_attraction(&InitialProfile::constant(1.0).unwrap(), &params, &grid, 0.05, 1e-12).unwrap();
        assert_eq!(r1.measured_time, 0.0);
    }

    #[test]
    fn snapshot_of_zero_datum_is_a_step() {
        let s = LaxOleinik::new(&InitialProfile::constant(0.0).unwrap()).snapshot(1.0, 64).unwrap();
        assert_eq!(s.segments().len(), 2);
        assert_abs_diff_eq!(s.segments()[0].x1, 0.5, epsilon = 1e-15);
        assert_eq!(s.sample(0.3), 0.0);
        assert_eq!(s.sample(0.7), 1.0);
    }
}
