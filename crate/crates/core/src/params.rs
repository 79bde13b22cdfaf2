//! Parameter algebra for the cascade model.
//!
//! Everything is generated from the intermittency exponent `c` (or the
//! spectrum exponent `alpha = 5/3 + 2c`): the coordinate exponent
//! `gamma = 1/(alpha - 1)`, the intermittency dimension `D = 3 - 6c`, and the
//! rescaled damping `mu = nu * epsilon^(-1/3) * gamma / 3`.

use crate::error::{Error, Result};

pub const ALPHA_MIN: f64 = 5.0 / 3.0;
pub const ALPHA_MAX: f64 = 8.0 / 3.0;

/// Slack allowed when checking `alpha` against its closed range, so that
/// values such as `5.0 / 3.0 + 2.0 * 0.5` are accepted.
const RANGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Intermittency exponent.
    pub c: f64,
    /// Spectrum exponent, `E(k) ~ k^-alpha`.
    pub alpha: f64,
    /// Coordinate exponent of `xi = k^(-1/gamma)`.
    pub gamma: f64,
    /// Intermittency dimension.
    pub dim: f64,
    /// Energy input rate.
    pub epsilon: f64,
    /// Viscosity.
    pub nu: f64,
    /// Rescaled damping coefficient.
    pub mu: f64,
}

impl ModelParams {
    pub fn from_c(c: f64, epsilon: f64, nu: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&c) {
            return Err(Error::ParameterDomain(format!("c = {c} not in [0, 1/2]")));
        }
        // Routed through alpha so that both constructors agree bit for bit.
        Self::from_alpha(ALPHA_MIN + 2.0 * c, epsilon, nu)
    }

    pub fn from_alpha(alpha: f64, epsilon: f64, nu: f64) -> Result<Self> {
        if !(ALPHA_MIN - RANGE_SLACK..=ALPHA_MAX + RANGE_SLACK).contains(&alpha) {
            return Err(Error::ParameterDomain(format!(
                "alpha = {alpha} not in [5/3, 8/3]"
            )));
        }
        let alpha = alpha.clamp(ALPHA_MIN, ALPHA_MAX);
        let c = ((alpha - ALPHA_MIN) / 2.0).clamp(0.0, 0.5);
        Self::build(c, alpha, epsilon, nu)
    }

    fn build(c: f64, alpha: f64, epsilon: f64, nu: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::ParameterDomain(format!("epsilon = {epsilon} must be > 0")));
        }
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(Error::ParameterDomain(format!("nu = {nu} must be >= 0")));
        }
        let gamma = 1.0 / (alpha - 1.0);
        Ok(Self {
            c,
            alpha,
            gamma,
            dim: 3.0 - 6.0 * c,
            epsilon,
            nu,
            mu: nu * epsilon.powf(-1.0 / 3.0) * gamma / 3.0,
        })
    }

    /// Same model with a different viscosity.
    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        Self::build(self.c, self.alpha, self.epsilon, nu)
    }

    /// Boundary amplitude `a(1, t) = epsilon^(1/3)`.
    pub fn boundary_amplitude(&self) -> f64 {
        self.epsilon.cbrt()
    }

    /// Physical time corresponding to rescaled time `t`.
    pub fn physical_time(&self, t: f64) -> f64 {
        t * self.time_scale()
    }

    /// Rescaled time corresponding to physical time `t`.
    pub fn rescaled_time(&self, t: f64) -> f64 {
        t / self.time_scale()
    }

    /// Ratio of physical to rescaled time, `gamma * epsilon^(-1/3) / 3`.
    pub fn time_scale(&self) -> f64 {
        self.gamma / (3.0 * self.epsilon.cbrt())
    }

    /// `2 gamma - 1`, which equals `(3 - alpha) / (alpha - 1)` and is at least 1/5.
    pub fn two_gamma_minus_one(&self) -> f64 {
        2.0 * self.gamma - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn k41_endpoint() {
        let p = ModelParams::from_c(0.0, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(p.alpha, 5.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.gamma, 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(p.dim, 3.0);
        assert_eq!(p.mu, 0.0);
    }

    #[test]
    fn fully_intermittent_endpoint() {
        let p = ModelParams::from_c(0.5, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(p.alpha, 8.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.gamma, 0.6, epsilon = 1e-14);
        assert_abs_diff_eq!(p.dim, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn sixth_intermittency() {
        let p = ModelParams::from_c(1.0 / 6.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(p.alpha, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.gamma, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.dim, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.mu, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn c_and_alpha_constructors_agree() {
        for k in 0..=50 {
            let c = k as f64 / 100.0;
            let a = ModelParams::from_c(c, 1.3, 0.01).unwrap();
            let b = ModelParams::from_alpha(5.0 / 3.0 + 2.0 * c, 1.3, 0.01).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(ModelParams::from_c(-0.1, 1.0, 0.0), Err(Error::ParameterDomain(_))));
        assert!(matches!(ModelParams::from_c(0.6, 1.0, 0.0), Err(Error::ParameterDomain(_))));
        assert!(matches!(ModelParams::from_c(0.1, 0.0, 0.0), Err(Error::ParameterDomain(_))));
        assert!(matches!(ModelParams::from_c(0.1, 1.0, -1.0), Err(Error::ParameterDomain(_))));
        assert!(matches!(ModelParams::from_alpha(1.5, 1.0, 0.0), Err(Error::ParameterDomain(_))));
        assert!(matches!(ModelParams::from_alpha(2.7, 1.0, 0.0), Err(Error::ParameterDomain(_))));
    }

    #[test]
    fn derived_ranges_hold_at_endpoints() {
        for c in [0.0, 0.25, 0.5] {
            let p = ModelParams::from_c(c, 2.0, 0.3).unwrap();
            assert!(p.two_gamma_minus_one() >= 0.2 - 1e-15);
            assert!(3.0 - p.alpha >= 1.0 / 3.0 - 1e-15);
            assert!((0.6 - 1e-15..=1.5 + 1e-15).contains(&p.gamma));
        }
    }

    #[test]
    fn time_scale_round_trip() {
        let p = ModelParams::from_alpha(2.0, 8.0, 0.1).unwrap();
        assert_abs_diff_eq!(p.physical_time(2.0), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.rescaled_time(p.physical_time(1.7)), 1.7, epsilon = 1e-14);
    }
}
