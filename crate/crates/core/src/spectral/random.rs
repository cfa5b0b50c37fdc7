//! Seeded generators for real test fields.
//!
//! All generators leave the mean and the Nyquist row/column empty, so the
//! outputs are exactly Hermitian and survive padding without splitting.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::field::SpectralField;
use super::grid::Grid;
use crate::{Error, Result};

fn fill_hermitian(
    grid: Grid,
    seed: u64,
    mut draw: impl FnMut(&mut ChaCha8Rng, f64) -> Option<Complex64>,
) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid);
    let coeffs = f.coeffs_mut();
    for idx in 1..grid.len() {
        let conj = grid.conjugate_index(idx);
        if conj <= idx || grid.on_nyquist_line(idx) {
            continue;
        }
        if let Some(c) = draw(&mut rng, grid.wavenumber(idx)) {
            coeffs[idx] = c;
            coeffs[conj] = c.conj();
        }
    }
    f
}

/// Complex Gaussian coefficients scaled by `amplitude(|k|)`; modes where
/// the amplitude vanishes stay exactly zero.
pub fn random_field(grid: Grid, seed: u64, amplitude: impl Fn(f64) -> f64) -> SpectralField {
    fill_hermitian(grid, seed, |rng, r| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let a = amplitude(r);
        (a != 0.0).then(|| Complex64::new(re, im) * (a / std::f64::consts::SQRT_2))
    })
}

/// Coefficients of modulus exactly `amplitude(|k|)` with uniform random phases.
pub fn random_phase_field(grid: Grid, seed: u64, amplitude: impl Fn(f64) -> f64) -> SpectralField {
    fill_hermitian(grid, seed, |rng, r| {
        let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let a = amplitude(r);
        (a != 0.0).then(|| Complex64::from_polar(a, phase))
    })
}

/// Unit-L² random field with spectrum inside the open annulus
/// `2^{j−1} < |k| < 2^{j+1}`.
pub fn random_band_limited(grid: Grid, j: i32, seed: u64) -> Result<SpectralField> {
    let (lo, hi) = (2f64.powi(j - 1), 2f64.powi(j + 1));
    let f = random_field(grid, seed, |r| if r > lo && r < hi { 1.0 } else { 0.0 });
    if f.is_zero() {
        return Err(Error::Band {
            j,
            reason: format!(
                "annulus ({lo}, {hi}) contains no resolved lattice point on a {}-grid",
                grid.n()
            ),
        });
    }
    let norm = f.l2_norm();
    Ok(f.scaled(1.0 / norm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_limited_support_and_errors() {
        let g = Grid::periodic(64).unwrap();
        assert!(random_band_limited(g, -3, 1).is_err());
        assert!(random_band_limited(g, 7, 1).is_err());
        let f = random_band_limited(g, 3, 1).unwrap();
        assert!(f.is_hermitian());
        assert!((f.l2_norm() - 1.0).abs() < 1e-12);
        for i in 0..g.len() {
            let r = g.wavenumber(i);
            if !(r > 4.0 && r < 16.0) {
                assert_eq!(f.coeffs()[i], Complex64::default());
            }
        }
    }

    #[test]
    fn seeds_are_deterministic_and_distinct() {
        let g = Grid::periodic(32).unwrap();
        let a = random_band_limited(g, 2, 11).unwrap();
        let b = random_band_limited(g, 2, 11).unwrap();
        let c = random_band_limited(g, 2, 12).unwrap();
        assert_eq!(a, b);
        assert!(a.sub(&c).unwrap().max_abs() > 1e-3);
    }

    #[test]
    fn phase_field_has_exact_moduli() {
        let g = Grid::periodic(16).unwrap();
        let f = random_phase_field(g, 5, |r| (-r).exp());
        for i in 1..g.len() {
            if g.on_nyquist_line(i) {
                continue;
            }
            assert!((f.coeffs()[i].norm() - (-g.wavenumber(i)).exp()).abs() < 1e-15);
        }
    }
}
