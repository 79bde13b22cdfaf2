use cascade_lab::spectrum::{fit_log_log, MIN_FIT_POINTS};
use cascade_lab::Error;

/// Log-log least-squares fit `error ~ C parameter^exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFitResult {
    pub exponent: f64,
    /// `ln C`
    pub intercept: f64,
    /// RMS residual in log space.
    pub residual: f64,
    /// Smallest and largest parameter used.
    pub window: (f64, f64),
    pub points: usize,
}

pub fn fit_convergence_rate(pairs: &[(f64, f64)]) -> Result<RateFitResult, Error> {
    if pairs.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(format!("need >= {MIN_FIT_POINTS} pairs, got {}", pairs.len())));
    }
    let fit = fit_log_log(pairs)?;
    let lo = pairs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pairs.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(RateFitResult {
        exponent: fit.slope,
        intercept: fit.intercept,
        residual: fit.residual,
        window: (lo, hi),
        points: pairs.len(),
    })
}

impl RateFitResult {
    pub fn describe(&self) -> String {
        format!(
            "exponent = {} intercept = {} residual = {} window = [{}, {}] points = {}",
            self.exponent, self.intercept, self.residual, self.window.0, self.window.1, self.points
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn synthetic_quadratic_rate() {
        let pairs: Vec<(f64, f64)> = [1e-1, 1e-2, 1e-3, 1e-4].iter().map(|&n| (n, 3.0 * n * n)).collect();
        let r = fit_convergence_rate(&pairs).unwrap();
        assert_abs_diff_eq!(r.exponent, 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(r.intercept, 3f64.ln(), epsilon = 1e-9);
        assert!(r.residual < 1e-12);
        assert_eq!(r.window, (1e-4, 1e-1));
    }

    #[test]
    fn rejects_short_or_nonpositive_input() {
        assert!(fit_convergence_rate(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).is_err());
        assert!(fit_convergence_rate(&[(1.0, 1.0), (2.0, 0.0), (3.0, 3.0), (4.0, 4.0)]).is_err());
    }
}
