//! Numerical laboratory for a continuous model of the turbulent energy
//! cascade: a Burgers-type equation for the energy density `a(kappa, t)` in
//! wavenumber space, forced by the boundary value `a(1, t) = epsilon^(1/3)`.
//!
//! All dynamics run in the compact coordinates `xi = kappa^(-1/gamma)` on
//! `(0, 1)`, where the model becomes a damped Burgers equation for `w(xi, t)`.
//!
//! - [`params`], [`field`], [`fixed_point`], [`norms`], [`spectrum`]: parameter
//!   algebra, transforms, closed-form steady states and diagnostics.
//! - [`inviscid`]: exact inviscid solutions by the Lax-Oleinik formula.
//! - [`viscous`]: Godunov finite-volume solver and dissipation averages.
//! - [`leray`]: one-sided mollifier regularization and its steady state.
//! - [`shell`]: the dyadic shell model used as a discrete comparator.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field;
pub mod fixed_point;
pub mod inviscid;
pub mod leray;
pub mod norms;
pub mod params;
pub mod quadrature;
pub mod shell;
pub mod spectrum;
pub mod viscous;

pub use error::{Error, Result};
pub use field::{AFieldView, WField, XiGrid};
pub use fixed_point::{FixedPoint, FixedPointKind};
pub use params::ModelParams;
