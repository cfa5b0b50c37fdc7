//! Pseudo-spectral toolkit for the two-dimensional dissipative surface
//! quasi-geostrophic (SQG) equation
//!
//! ```text
//! ∂ₜθ + u·∇θ + Λ^κ θ = 0,    u = (−R₂θ, R₁θ),
//! ```
//!
//! on a periodic square, together with the harmonic-analysis machinery used
//! to study its Gevrey regularity: Littlewood–Paley blocks, homogeneous
//! Besov norms, the Gevrey multiplier `exp(γ|ξ|^α)`, bilinear Fourier
//! multipliers, and a harness that measures the constants of the associated
//! functional inequalities.
//!
//! Module map:
//!
//! * [`spectral`]: grids, transforms, multipliers, L^p quadrature.
//! * [`littlewood_paley`]: dyadic bump system, `Δ_j`, `S_k`, Besov norms.
//! * [`gevrey`]: `G_γ`, `Λ^s`, heat semigroup, Riesz velocity, X_T norms,
//!   analyticity-radius estimation.
//! * [`solver`]: integrating-factor time stepping and the Picard iterates.
//! * [`bilinear`]: direct bilinear multipliers, Marcinkiewicz checks,
//!   rotation and dilation of symbols, Gevrey commutators.
//! * [`verify`]: one check per inequality, producing [`verify::InequalityReport`]s.
//! * [`io`]: snapshot files, flat `key=value` run configs, CSV emitters.

// `!(x > 0.0)` guards are written that way to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bilinear;
pub mod error;
pub mod fit;
pub mod gevrey;
pub mod io;
pub mod littlewood_paley;
pub mod solver;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use spectral::{Grid, RealField, SpectralField};

/// Two-dimensional wavevector or physical point.
pub type Vec2 = [f64; 2];
