//! Piecewise-linear initial data on `[0, 1]` and its whole-line extension.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Linear piece `w(x) = w0 + (w1 - w0) (x - x0) / (x1 - x0)` on `[x0, x1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub x0: f64,
    pub x1: f64,
    pub w0: f64,
    pub w1: f64,
}

impl Segment {
    pub fn slope(&self) -> f64 {
        (self.w1 - self.w0) / (self.x1 - self.x0)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.w0 + self.slope() * (x - self.x0)
    }

    /// `int_{x0}^{x} w`.
    pub fn integral_to(&self, x: f64) -> f64 {
        let d = x - self.x0;
        self.w0 * d + 0.5 * self.slope() * d * d
    }
}

/// Nonnegative piecewise-linear profile `w0` covering `[0, 1]`.
///
/// Tables built with [`InitialProfile::new`] are continuous. Profiles built
/// from segments may jump at breakpoints, which is how exact snapshots of
/// shocked solutions are represented.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialProfile {
    segments: Vec<Segment>,
}

impl InitialProfile {
    /// Continuous table through `(breakpoints[i], values[i])`.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() || breakpoints.len() < 2 {
            return Err(Error::Domain("profile needs >= 2 matching breakpoints and values".into()));
        }
        let segments = breakpoints
            .windows(2)
            .zip(values.windows(2))
            .map(|(x, w)| Segment { x0: x[0], x1: x[1], w0: w[0], w1: w[1] })
            .collect();
        Self::from_segments(segments)
    }

    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        let (first, last) = match (segments.first(), segments.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(Error::Domain("profile has no segments".into())),
        };
        if first.x0 != 0.0 || last.x1 != 1.0 {
            return Err(Error::Domain(format!(
                "profile must span [0, 1], spans [{}, {}]",
                first.x0, last.x1
            )));
        }
        for s in &segments {
            if !(s.x1 > s.x0) {
                return Err(Error::Domain("breakpoints must increase strictly".into()));
            }
            if !(s.w0 >= 0.0 && s.w1 >= 0.0 && s.w0.is_finite() && s.w1.is_finite()) {
                return Err(Error::Domain("profile values must be finite and >= 0".into()));
            }
        }
        if segments.windows(2).any(|p| p[0].x1 != p[1].x0) {
            return Err(Error::Domain("segments must be contiguous".into()));
        }
        Ok(Self { segments })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![value, value])
    }

    /// `w0(xi) = xi`.
    pub fn ramp() -> Self {
        Self::new(vec![0.0, 1.0], vec![0.0, 1.0]).expect("valid ramp")
    }

    /// Seeded random table with `pieces` linear pieces and values in `[0, 2]`.
    pub fn random(seed: u64, pieces: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pieces = pieces.max(1);
        let mut xs: Vec<f64> = (0..pieces - 1).map(|_| rng.gen_range(0.02..0.98)).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        xs.insert(0, 0.0);
        xs.push(1.0);
        let ws = (0..xs.len()).map(|_| rng.gen_range(0.0..=2.0)).collect();
        Self::new(xs, ws).expect("random profile is valid")
    }

    /// Samples `f` at `count + 1` uniform breakpoints.
    pub fn from_fn<F: Fn(f64) -> f64>(count: usize, f: F) -> Result<Self> {
        let count = count.max(1);
        let xs: Vec<f64> = (0..=count).map(|i| i as f64 / count as f64).collect();
        let ws = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, ws)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Right-continuous evaluation on `[0, 1]`.
    pub fn sample(&self, x: f64) -> f64 {
        let i = self.segments.partition_point(|s| s.x1 <= x).min(self.segments.len() - 1);
        let s = &self.segments[i];
        s.value(x.clamp(s.x0, s.x1))
    }

    pub fn sup(&self) -> f64 {
        self.segments.iter().map(|s| s.w0.max(s.w1)).fold(0.0, f64::max)
    }

    pub fn integral(&self) -> f64 {
        self.segments.iter().map(|s| s.integral_to(s.x1)).sum()
    }
}

/// Whole-line datum: 0 left of the domain, the profile on `[0, 1]`, 1 right of it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedProfile {
    pub profile: InitialProfile,
}

impl ExtendedProfile {
    pub fn value(&self, y: f64) -> f64 {
        if y < 0.0 {
            0.0
        } else if y > 1.0 {
            1.0
        } else {
            self.profile.sample(y)
        }
    }
}

pub fn extend_profile(profile: &InitialProfile) -> ExtendedProfile {
    ExtendedProfile { profile: profile.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_of_constants() {
        let one = extend_profile(&InitialProfile::constant(1.0).unwrap());
        assert_eq!(one.value(-0.5), 0.0);
        assert_eq!(one.value(0.0), 1.0);
        assert_eq!(one.value(0.7), 1.0);
        assert_eq!(one.value(3.0), 1.0);
        let zero = extend_profile(&InitialProfile::constant(0.0).unwrap());
        assert_eq!(zero.value(-1.0), 0.0);
        assert_eq!(zero.value(1.0), 0.0);
        assert_eq!(zero.value(1.0 + 1e-12), 1.0);
    }

    #[test]
    fn ramp_matches_both_ends() {
        let r = extend_profile(&InitialProfile::ramp());
        assert_eq!(r.value(0.0), 0.0);
        assert_eq!(r.value(0.25), 0.25);
        assert_eq!(r.value(1.0), 1.0);
        assert_eq!(r.value(1.5), 1.0);
        assert_eq!(r.value(-1e-9), 0.0);
    }

    #[test]
    fn validation() {
        assert!(InitialProfile::new(vec![0.0, 0.5], vec![1.0, 1.0]).is_err());
        assert!(InitialProfile::new(vec![0.0, 0.5, 0.5, 1.0], vec![1.0; 4]).is_err());
        assert!(InitialProfile::new(vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
        assert!(InitialProfile::new(vec![0.0], vec![1.0]).is_err());
        let gap = vec![
            Segment { x0: 0.0, x1: 0.4, w0: 0.0, w1: 0.0 },
            Segment { x0: 0.5, x1: 1.0, w0: 0.0, w1: 0.0 },
        ];
        assert!(InitialProfile::from_segments(gap).is_err());
    }

    #[test]
    fn random_profiles_are_seeded_and_admissible() {
        let a = InitialProfile::random(7, 6);
        let b = InitialProfile::random(7, 6);
        assert_eq!(a, b);
        assert_ne!(a, InitialProfile::random(8, 6));
        assert!(a.sup() <= 2.0);
        assert!(a.segments().iter().all(|s| s.w0 >= 0.0 && s.w1 >= 0.0));
    }

    #[test]
    fn sample_is_right_continuous_at_jumps() {
        let p = InitialProfile::from_segments(vec![
            Segment { x0: 0.0, x1: 0.5, w0: 0.0, w1: 0.0 },
            Segment { x0: 0.5, x1: 1.0, w0: 1.0, w1: 1.0 },
        ])
        .unwrap();
        assert_eq!(p.sample(0.49), 0.0);
        assert_eq!(p.sample(0.5), 1.0);
        assert_eq!(p.sample(1.0), 1.0);
        assert_eq!(p.integral(), 0.5);
    }
}
