use num_complex::Complex64;
use rustfft::FftDirection;

use super::fft::fft2;
use super::grid::Grid;
use crate::{Error, Result, Vec2};

/// Relative Hermitian defect accepted by [`inverse_transform`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Fourier coefficients `f̂(k)` of a scalar field on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

/// Values of a real scalar field at the collocation points.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Grid,
    values: Vec<f64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        SpectralField {
            grid,
            coeffs: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        Ok(SpectralField { grid, coeffs })
    }

    /// Field with the given `(frequency pair, coefficient)` entries; entries
    /// off the grid are ignored.
    pub fn from_modes(grid: Grid, modes: &[((i64, i64), Complex64)]) -> Self {
        let mut f = SpectralField::zeros(grid);
        for &((m1, m2), c) in modes {
            if let (Some(a), Some(b)) = (grid.index_of_frequency(m1), grid.index_of_frequency(m2)) {
                f.coeffs[a * grid.n() + b] += c;
            }
        }
        f
    }

    /// `amplitude·cos(m·x)` in spectral form.
    pub fn cosine(grid: Grid, m: (i64, i64), amplitude: f64) -> Self {
        let half = Complex64::new(amplitude / 2.0, 0.0);
        SpectralField::from_modes(grid, &[(m, half), ((-m.0, -m.1), half)])
    }

    /// `amplitude·sin(m·x)` in spectral form.
    pub fn sine(grid: Grid, m: (i64, i64), amplitude: f64) -> Self {
        let c = Complex64::new(0.0, -amplitude / 2.0);
        SpectralField::from_modes(grid, &[(m, c), ((-m.0, -m.1), c.conj())])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at integer frequency `(m1, m2)`, zero when off the grid.
    pub fn coeff(&self, m1: i64, m2: i64) -> Complex64 {
        match (
            self.grid.index_of_frequency(m1),
            self.grid.index_of_frequency(m2),
        ) {
            (Some(a), Some(b)) => self.coeffs[a * self.grid.n() + b],
            _ => Complex64::default(),
        }
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    pub fn without_mean(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = Complex64::default();
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &SpectralField, b: f64) -> Result<Self> {
        check_same_grid(&self.grid, &other.grid)?;
        Ok(SpectralField {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x * a + y * b)
                .collect(),
        })
    }

    pub fn add(&self, other: &SpectralField) -> Result<Self> {
        self.combine(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<Self> {
        self.combine(1.0, other, -1.0)
    }

    /// `max_k |f̂(k) − conj f̂(−k)|`.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.grid.len())
            .map(|i| (self.coeffs[i] - self.coeffs[self.grid.conjugate_index(i)].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= HERMITIAN_TOL * self.max_abs()
    }

    /// `L² Σ |f̂(k)|²`, which equals `‖f‖²_{L²}` by Parseval.
    pub fn energy(&self) -> f64 {
        self.grid.area() * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.energy().sqrt()
    }

    /// Number of nonzero coefficients.
    pub fn occupied(&self) -> usize {
        self.coeffs
            .iter()
            .filter(|c| **c != Complex64::default())
            .count()
    }

    pub fn is_zero(&self) -> bool {
        self.occupied() == 0
    }

    /// Multiplies every coefficient by a precomputed per-mode factor.
    pub fn mul_elementwise(&self, factors: &[f64]) -> Self {
        debug_assert_eq!(factors.len(), self.coeffs.len());
        SpectralField {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(factors)
                .map(|(c, m)| {
                    if *c == Complex64::default() {
                        *c
                    } else {
                        c * m
                    }
                })
                .collect(),
        }
    }
}

impl RealField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite value {} at collocation point {i}",
                values[i]
            )));
        }
        Ok(RealField { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        RealField {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(Vec2) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        RealField::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Collocation integral `Σ f(x_i)·(L/n)²`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        RealField::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn mul(&self, other: &RealField) -> Result<Self> {
        check_same_grid(&self.grid, &other.grid)?;
        RealField::new(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &RealField) -> Result<Self> {
        check_same_grid(&self.grid, &other.grid)?;
        RealField::new(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

pub(crate) fn check_same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch(format!(
            "{}x{} (L = {}) vs {}x{} (L = {})",
            a.n(),
            a.n(),
            a.box_length(),
            b.n(),
            b.n(),
            b.box_length()
        )));
    }
    Ok(())
}

pub fn forward_transform(f: &RealField) -> SpectralField {
    let grid = f.grid;
    let mut buf: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2(&mut buf, grid.n(), FftDirection::Forward);
    let scale = 1.0 / grid.len() as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    // Rounding leaves a tiny asymmetry; project it out so real data stays
    // exactly Hermitian.
    for idx in 0..grid.len() {
        let conj = grid.conjugate_index(idx);
        if conj >= idx {
            let avg = (buf[idx] + buf[conj].conj()) * 0.5;
            buf[idx] = avg;
            buf[conj] = avg.conj();
        }
    }
    SpectralField { grid, coeffs: buf }
}

/// Inverse transform of a Hermitian field.
pub fn inverse_transform(f: &SpectralField) -> Result<RealField> {
    let defect = f.hermitian_defect();
    if defect > HERMITIAN_TOL * f.max_abs() {
        return Err(Error::Symmetry { defect });
    }
    let values = inverse_transform_unchecked(f)
        .into_iter()
        .map(|c| c.re)
        .collect();
    RealField::new(f.grid, values)
}

/// Complex-valued inverse transform, no symmetry requirement.
pub fn inverse_transform_unchecked(f: &SpectralField) -> Vec<Complex64> {
    let mut buf = f.coeffs.clone();
    fft2(&mut buf, f.grid.n(), FftDirection::Inverse);
    buf
}

/// `coeffs_out(k) = symbol(k)·coeffs_in(k)`. The symbol is only evaluated on
/// occupied modes; a non-finite value there is an error.
pub fn apply_multiplier(
    f: &SpectralField,
    symbol: impl Fn(Vec2) -> Complex64,
) -> Result<SpectralField> {
    let mut out = SpectralField::zeros(f.grid);
    for (i, c) in f.coeffs.iter().enumerate() {
        if *c == Complex64::default() {
            continue;
        }
        let k = f.grid.wavevector(i);
        let m = symbol(k);
        if !(m.re.is_finite() && m.im.is_finite()) {
            return Err(Error::MultiplierOverflow { k });
        }
        out.coeffs[i] = m * c;
    }
    Ok(out)
}

/// Real-valued variant of [`apply_multiplier`].
pub fn apply_real_multiplier(
    f: &SpectralField,
    symbol: impl Fn(Vec2) -> f64,
) -> Result<SpectralField> {
    let mut out = SpectralField::zeros(f.grid);
    for (i, c) in f.coeffs.iter().enumerate() {
        if *c == Complex64::default() {
            continue;
        }
        let k = f.grid.wavevector(i);
        let m = symbol(k);
        if !m.is_finite() {
            return Err(Error::MultiplierOverflow { k });
        }
        out.coeffs[i] = c * m;
    }
    Ok(out)
}

/// Collocation L^p norm `(Σ |f(x_i)|^p (L/n)²)^{1/p}`, max norm for `p = ∞`.
pub fn lp_norm(f: &RealField, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain(format!("L^p norm needs p >= 1, got {p}")));
    }
    let max = f.max_abs();
    if p.is_infinite() || max == 0.0 {
        return Ok(max);
    }
    let sum: f64 = if p == 2.0 {
        f.values.iter().map(|v| (v / max) * (v / max)).sum()
    } else {
        f.values.iter().map(|v| (v.abs() / max).powf(p)).sum()
    };
    Ok(max * (sum * f.grid.cell_area()).powf(1.0 / p))
}

/// Trigonometric interpolation onto a finer grid with the same box.
///
/// Nyquist coefficients of the coarse grid are split evenly between `±n/2`
/// so that real fields stay real.
pub fn pad_to(f: &SpectralField, target: &Grid) -> Result<SpectralField> {
    let g = f.grid;
    if target.box_length() != g.box_length() || target.n() < g.n() {
        return Err(Error::GridMismatch(format!(
            "cannot pad a {}-grid onto a {}-grid (L = {} vs {})",
            g.n(),
            target.n(),
            g.box_length(),
            target.box_length()
        )));
    }
    if target.n() == g.n() {
        return Ok(f.clone());
    }
    let half = (g.n() / 2) as i64;
    let split = |m: i64| -> Vec<(i64, f64)> {
        if m == -half {
            vec![(-half, 0.5), (half, 0.5)]
        } else {
            vec![(m, 1.0)]
        }
    };
    let mut out = SpectralField::zeros(*target);
    for (i, c) in f.coeffs.iter().enumerate() {
        if *c == Complex64::default() {
            continue;
        }
        let (m1, m2) = g.frequencies(i);
        for (t1, w1) in split(m1) {
            for (t2, w2) in split(m2) {
                let a = target
                    .index_of_frequency(t1)
                    .expect("padded grid holds coarse modes");
                let b = target
                    .index_of_frequency(t2)
                    .expect("padded grid holds coarse modes");
                out.coeffs[a * target.n() + b] += c * (w1 * w2);
            }
        }
    }
    Ok(out)
}
