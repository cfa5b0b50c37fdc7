//! Periodic grids, real/spectral transforms, Fourier multipliers and L^p
//! quadrature.
//!
//! Normalization: `f(x) = Σ_k f̂(k) e^{ik·x}`, so that `cos(x₁)` has exactly
//! two nonzero coefficients of value `1/2` and Parseval reads
//! `‖f‖²_{L²} = L² Σ_k |f̂(k)|²`.

mod fft;
mod field;
mod grid;
mod random;

pub(crate) use field::check_same_grid;
pub use field::{
    apply_multiplier, apply_real_multiplier, forward_transform, inverse_transform,
    inverse_transform_unchecked, lp_norm, pad_to, RealField, SpectralField, HERMITIAN_TOL,
};
pub use grid::Grid;
pub use random::{random_band_limited, random_field, random_phase_field};
