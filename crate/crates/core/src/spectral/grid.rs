use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec2};

/// Square periodic collocation grid `[0, L)²` with `n` points per axis.
///
/// Spectral index `a ∈ [0, n)` maps to the integer frequency `a` for
/// `a < n/2` and `a − n` otherwise; the physical wavenumber is
/// `(2π/L)·frequency`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    box_length: f64,
}

impl Grid {
    pub fn new(n: usize, box_length: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid size must be a power of two >= 8, got {n}"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::Config(format!(
                "box length must be positive and finite, got {box_length}"
            )));
        }
        Ok(Grid { n, box_length })
    }

    /// `n`-point grid on the default `2π` box, where wavenumbers are integers.
    pub fn periodic(n: usize) -> Result<Self> {
        Grid::new(n, 2.0 * PI)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lattice spacing `2π/L`.
    pub fn k0(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    pub fn dx(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Quadrature weight of one collocation point, `(L/n)²`.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dx()
    }

    pub fn area(&self) -> f64 {
        self.box_length * self.box_length
    }

    /// Wavenumber magnitude of the Nyquist row, `k0·n/2`.
    pub fn nyquist(&self) -> f64 {
        self.k0() * (self.n / 2) as f64
    }

    /// Largest wavenumber magnitude on the lattice (the Nyquist corner).
    pub fn k_max(&self) -> f64 {
        self.nyquist() * std::f64::consts::SQRT_2
    }

    #[inline]
    pub fn frequency(&self, a: usize) -> i64 {
        if a < self.n / 2 {
            a as i64
        } else {
            a as i64 - self.n as i64
        }
    }

    /// Spectral index of an integer frequency, if it is on this grid.
    #[inline]
    pub fn index_of_frequency(&self, m: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if m >= -half && m < half {
            Some(m.rem_euclid(self.n as i64) as usize)
        } else {
            None
        }
    }

    #[inline]
    pub fn is_nyquist(&self, a: usize) -> bool {
        a == self.n / 2
    }

    /// Index of the mode `−k` for flat index `idx`.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let (a, b) = (idx / self.n, idx % self.n);
        ((self.n - a) % self.n) * self.n + (self.n - b) % self.n
    }

    #[inline]
    pub fn frequencies(&self, idx: usize) -> (i64, i64) {
        (self.frequency(idx / self.n), self.frequency(idx % self.n))
    }

    #[inline]
    pub fn wavevector(&self, idx: usize) -> Vec2 {
        let (m1, m2) = self.frequencies(idx);
        let k0 = self.k0();
        [k0 * m1 as f64, k0 * m2 as f64]
    }

    #[inline]
    pub fn wavenumber(&self, idx: usize) -> f64 {
        let k = self.wavevector(idx);
        k[0].hypot(k[1])
    }

    /// Magnitudes `|k|` for every flat index.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.wavenumber(i)).collect()
    }

    pub fn point(&self, idx: usize) -> Vec2 {
        let dx = self.dx();
        [(idx / self.n) as f64 * dx, (idx % self.n) as f64 * dx]
    }

    /// Grid with the same box and `factor` times as many points per axis.
    pub fn refined(&self, factor: usize) -> Result<Grid> {
        Grid::new(self.n * factor, self.box_length)
    }

    /// True when the flat index lies in the Nyquist row or column.
    pub fn on_nyquist_line(&self, idx: usize) -> bool {
        self.is_nyquist(idx / self.n) || self.is_nyquist(idx % self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::periodic(4).is_err());
        assert!(Grid::periodic(24).is_err());
        assert!(Grid::new(16, 0.0).is_err());
        assert!(Grid::periodic(16).is_ok());
    }

    #[test]
    fn lattice_is_symmetric_except_nyquist() {
        let g = Grid::periodic(16).unwrap();
        for idx in 0..g.len() {
            let c = g.conjugate_index(idx);
            let (k, kc) = (g.wavevector(idx), g.wavevector(c));
            if g.on_nyquist_line(idx) {
                continue;
            }
            assert_eq!(k[0], -kc[0]);
            assert_eq!(k[1], -kc[1]);
        }
        assert_eq!(g.frequency(8), -8);
        assert_eq!(g.index_of_frequency(-8), Some(8));
        assert_eq!(g.index_of_frequency(8), None);
    }

    #[test]
    fn integer_wavenumbers_on_default_box() {
        let g = Grid::periodic(32).unwrap();
        assert!((g.k0() - 1.0).abs() < 1e-15);
        assert!((g.nyquist() - 16.0).abs() < 1e-12);
    }
}
