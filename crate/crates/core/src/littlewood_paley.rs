//! Littlewood–Paley decomposition on the periodic lattice.
//!
//! The radial bump `ψ₀` equals 1 on `r ≤ 1/2`, vanishes for `r ≥ 1`, and
//! blends in between with the smooth step `H(t) = h(t)/(h(t)+h(1−t))`,
//! `h(t) = exp(−σ/t)`. From it `φ₀(r) = ψ₀(r/2) − ψ₀(r)`, supported in
//! `[1/2, 2]`, and the dilates `φ_j(r) = φ₀(2^{−j} r)`.

use serde::{Deserialize, Serialize};

use crate::spectral::{inverse_transform, lp_norm, Grid, SpectralField};
use crate::{Error, Result};

/// The smooth radial profile `ψ₀` and everything derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpProfile {
    sharpness: f64,
}

impl Default for BumpProfile {
    fn default() -> Self {
        BumpProfile { sharpness: 1.0 }
    }
}

impl BumpProfile {
    pub fn new(sharpness: f64) -> Result<Self> {
        if !(sharpness.is_finite() && sharpness > 0.0) {
            return Err(Error::Config(format!(
                "transition sharpness must be positive, got {sharpness}"
            )));
        }
        Ok(BumpProfile { sharpness })
    }

    pub fn sharpness(&self) -> f64 {
        self.sharpness
    }

    fn h(&self, t: f64) -> f64 {
        if t > 0.0 {
            (-self.sharpness / t).exp()
        } else {
            0.0
        }
    }

    /// Smooth step: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
    pub fn step(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            1.0
        } else {
            let (a, b) = (self.h(t), self.h(1.0 - t));
            a / (a + b)
        }
    }

    pub fn psi0(&self, r: f64) -> f64 {
        self.step(2.0 * (1.0 - r))
    }

    pub fn phi0(&self, r: f64) -> f64 {
        self.psi0(0.5 * r) - self.psi0(r)
    }

    pub fn psi(&self, j: i32, r: f64) -> f64 {
        self.psi0(r * 2f64.powi(-j))
    }

    pub fn phi(&self, j: i32, r: f64) -> f64 {
        self.phi0(r * 2f64.powi(-j))
    }

    /// Five-block window `Σ_{|ℓ−j|≤2} φ_ℓ = ψ_{j+3} − ψ_{j−2}`, unclipped.
    pub fn tilde_phi(&self, j: i32, r: f64) -> f64 {
        self.psi(j + 3, r) - self.psi(j - 2, r)
    }

    /// Radial derivative `ψ₀'(r)`, used by the commutator symbols.
    pub fn dpsi0(&self, r: f64) -> f64 {
        let t = 2.0 * (1.0 - r);
        if t <= 0.0 || t >= 1.0 {
            return 0.0;
        }
        let (a, b) = (self.h(t), self.h(1.0 - t));
        // h'(t) = σ/t²·h(t)
        let da = self.sharpness / (t * t) * a;
        let db = -self.sharpness / ((1.0 - t) * (1.0 - t)) * b;
        let dh = (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
        -2.0 * dh
    }

    /// Gradient of `φ₀` at the point `x ∈ ℝ²`.
    pub fn grad_phi0(&self, x: [f64; 2]) -> [f64; 2] {
        let r = x[0].hypot(x[1]);
        if r == 0.0 {
            return [0.0, 0.0];
        }
        let d = 0.5 * self.dpsi0(0.5 * r) - self.dpsi0(r);
        [d * x[0] / r, d * x[1] / r]
    }
}

/// A [`BumpProfile`] bound to a grid, with the resolved dyadic range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DyadicSystem {
    grid: Grid,
    profile: BumpProfile,
    j_min: i32,
    j_max: i32,
}

/// Builds the dyadic system for `grid`.
///
/// `j_min` is the first block that reaches the lowest nonzero lattice
/// wavenumber and `j_max` the last block whose annulus lies inside the
/// Nyquist circle (`2^{j_max+1} ≤ k_Nyquist`).
pub fn build_system(grid: Grid, transition_sharpness: f64) -> Result<DyadicSystem> {
    let profile = BumpProfile::new(transition_sharpness)?;
    let j_min = grid.k0().log2().floor() as i32;
    let j_max = grid.nyquist().log2().floor() as i32 - 1;
    if j_max < j_min {
        return Err(Error::Config(format!(
            "a {}-grid with L = {} resolves no dyadic annulus",
            grid.n(),
            grid.box_length()
        )));
    }
    Ok(DyadicSystem {
        grid,
        profile,
        j_min,
        j_max,
    })
}

impl DyadicSystem {
    pub fn new(grid: Grid) -> Result<Self> {
        build_system(grid, 1.0)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn profile(&self) -> &BumpProfile {
        &self.profile
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn blocks(&self) -> std::ops::RangeInclusive<i32> {
        self.j_min..=self.j_max
    }

    pub fn psi0(&self, r: f64) -> f64 {
        self.profile.psi0(r)
    }

    pub fn phi0(&self, r: f64) -> f64 {
        self.profile.phi0(r)
    }

    pub fn phi(&self, j: i32, r: f64) -> f64 {
        self.profile.phi(j, r)
    }

    /// `Σ_{j_min ≤ j ≤ j_max} φ_j(r)`.
    pub fn partition_sum(&self, r: f64) -> f64 {
        self.blocks().map(|j| self.phi(j, r)).sum()
    }

    fn check_block(&self, j: i32) -> Result<()> {
        if j < self.j_min || j > self.j_max {
            return Err(Error::Band {
                j,
                reason: format!("resolved range is [{}, {}]", self.j_min, self.j_max),
            });
        }
        Ok(())
    }

    fn radial(&self, f: &SpectralField, symbol: impl Fn(f64) -> f64) -> Result<SpectralField> {
        crate::spectral::check_same_grid(f.grid(), &self.grid)?;
        let factors: Vec<f64> = (0..self.grid.len())
            .map(|i| symbol(self.grid.wavenumber(i)))
            .collect();
        Ok(f.mul_elementwise(&factors))
    }

    /// `Δ_j f`: multiply by `φ_j(|k|)`.
    pub fn delta_j(&self, f: &SpectralField, j: i32) -> Result<SpectralField> {
        self.check_block(j)?;
        self.radial(f, |r| self.phi(j, r))
    }

    /// `S_k f = Σ_{j_min ≤ ℓ ≤ k−3} Δ_ℓ f`; an empty sum gives the zero field.
    pub fn s_k(&self, f: &SpectralField, k: i32) -> Result<SpectralField> {
        let top = (k - 3).min(self.j_max);
        if top < self.j_min {
            crate::spectral::check_same_grid(f.grid(), &self.grid)?;
            return Ok(SpectralField::zeros(self.grid));
        }
        self.radial(f, |r| (self.j_min..=top).map(|l| self.phi(l, r)).sum())
    }

    /// `Δ̃_j f = Σ_{|ℓ−j|≤2} Δ_ℓ f`, window clipped to the resolved range.
    pub fn tilde_delta_j(&self, f: &SpectralField, j: i32) -> Result<SpectralField> {
        self.check_block(j)?;
        let (lo, hi) = ((j - 2).max(self.j_min), (j + 2).min(self.j_max));
        self.radial(f, |r| (lo..=hi).map(|l| self.phi(l, r)).sum())
    }

    /// L^p norms of every resolved block, `(j, ‖Δ_j f‖_{L^p})`.
    pub fn block_norms(&self, f: &SpectralField, p: f64) -> Result<Vec<(i32, f64)>> {
        self.blocks()
            .map(|j| {
                let b = self.delta_j(f, j)?;
                Ok((j, lp_norm(&inverse_transform(&b)?, p)?))
            })
            .collect()
    }

    /// Fraction of `Σ|f̂|²` outside the resolved partition, weighted by
    /// `(1 − Σ_j φ_j)²`; includes the mean.
    pub fn discarded_energy_fraction(&self, f: &SpectralField) -> f64 {
        let total: f64 = f.coeffs().iter().map(|c| c.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let lost: f64 = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let w = 1.0 - self.partition_sum(self.grid.wavenumber(i));
                c.norm_sqr() * w * w
            })
            .sum();
        lost / total
    }
}

/// Exponents of a homogeneous Besov norm `Ḃ^s_{p,q}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovParams {
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl BesovParams {
    pub fn new(s: f64, p: f64, q: f64) -> Result<Self> {
        if !s.is_finite() || p.is_nan() || q.is_nan() || p < 1.0 || q < 1.0 {
            return Err(Error::Domain(format!(
                "Besov exponents need finite s and p, q >= 1 (got s={s}, p={p}, q={q})"
            )));
        }
        Ok(BesovParams { s, p, q })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesovBlock {
    pub j: i32,
    /// `2^{js}·‖Δ_j f‖_{L^p}`
    pub weighted_norm: f64,
    /// ℓ^q sum (or running max for `q = ∞`) up to and including `j`.
    pub cumulative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesovNorm {
    pub params: BesovParams,
    pub value: f64,
    pub blocks: Vec<BesovBlock>,
    pub discarded_energy_fraction: f64,
    pub mean: f64,
    /// Set when the field has a mean beyond `1e−12`, which a homogeneous
    /// norm cannot see.
    pub homogeneity_warning: bool,
}

impl BesovNorm {
    /// CSV rows `j,weighted_norm,cumulative` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,weighted_block_norm,cumulative\n");
        for b in &self.blocks {
            out.push_str(&format!(
                "{},{:.17e},{:.17e}\n",
                b.j, b.weighted_norm, b.cumulative
            ));
        }
        out
    }
}

/// Collapses block norms into the ℓ^q sum of `2^{js}·norm_j`.
pub fn besov_sum(blocks: &[(i32, f64)], s: f64, q: f64) -> Vec<BesovBlock> {
    let mut acc = 0.0;
    blocks
        .iter()
        .map(|&(j, norm)| {
            let w = 2f64.powf(j as f64 * s) * norm;
            let cumulative = if q.is_infinite() {
                acc = f64::max(acc, w);
                acc
            } else {
                acc += w.powf(q);
                acc.powf(1.0 / q)
            };
            BesovBlock {
                j,
                weighted_norm: w,
                cumulative,
            }
        })
        .collect()
}

pub fn besov_norm(sys: &DyadicSystem, f: &SpectralField, bp: BesovParams) -> Result<BesovNorm> {
    let norms = sys.block_norms(f, bp.p)?;
    let blocks = besov_sum(&norms, bp.s, bp.q);
    let value = blocks.last().map_or(0.0, |b| b.cumulative);
    let mean = f.mean();
    Ok(BesovNorm {
        params: bp,
        value,
        blocks,
        discarded_energy_fraction: sys.discarded_energy_fraction(f),
        mean,
        homogeneity_warning: mean.abs() > 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{random_band_limited, random_field};
    use num_complex::Complex64;

    fn sys(n: usize) -> DyadicSystem {
        DyadicSystem::new(Grid::periodic(n).unwrap()).unwrap()
    }

    #[test]
    fn profile_plateau_and_support() {
        let p = BumpProfile::default();
        assert_eq!(p.psi0(0.4), 1.0);
        assert_eq!(p.psi0(0.5), 1.0);
        assert_eq!(p.psi0(1.1), 0.0);
        assert_eq!(p.psi0(1.0), 0.0);
        assert_eq!(p.phi0(0.3), 0.0);
        assert_eq!(p.phi0(3.0), 0.0);
        for i in 0..=1000 {
            let r = 3.0 * i as f64 / 1000.0;
            let (a, b) = (p.psi0(r), p.phi0(r));
            assert!((0.0..=1.0).contains(&a));
            assert!((0.0..=1.0).contains(&b));
        }
        // φ₀(1) = ψ₀(1/2) − ψ₀(1) = 1
        assert_eq!(p.phi0(1.0), 1.0);
    }

    #[test]
    fn dpsi0_matches_finite_difference() {
        let p = BumpProfile::default();
        for &r in &[0.55, 0.62, 0.75, 0.9, 0.97] {
            let h = 1e-6;
            let fd = (p.psi0(r + h) - p.psi0(r - h)) / (2.0 * h);
            assert!(
                (fd - p.dpsi0(r)).abs() < 1e-6,
                "r={r}: {fd} vs {}",
                p.dpsi0(r)
            );
        }
    }

    #[test]
    fn resolved_range() {
        let s = sys(256);
        assert_eq!((s.j_min(), s.j_max()), (0, 6));
        assert_eq!((sys(128).j_min(), sys(128).j_max()), (0, 5));
        assert_eq!((sys(16).j_min(), sys(16).j_max()), (0, 2));
        let big = DyadicSystem::new(Grid::new(64, 8.0 * std::f64::consts::PI).unwrap()).unwrap();
        assert_eq!((big.j_min(), big.j_max()), (-2, 2));
    }

    #[test]
    fn partition_of_unity_by_direct_summation() {
        let s = sys(256);
        let direct: f64 = (s.j_min()..=s.j_max()).map(|j| s.phi(j, 5.37)).sum();
        assert!((direct - 1.0).abs() < 1e-10);
        let lo = 2f64.powi(s.j_min());
        let hi = 2f64.powi(s.j_max() - 1);
        for i in 0..=2000 {
            let r = lo + (hi - lo) * i as f64 / 2000.0;
            assert!((s.partition_sum(r) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn delta_j_single_mode() {
        let s = sys(32);
        let f = SpectralField::cosine(*s.grid(), (1, 0), 1.0);
        let d = s.delta_j(&f, 0).unwrap();
        let expected = s.profile().phi0(1.0) * 0.5;
        assert!((d.coeff(1, 0).re - expected).abs() < 1e-15);
        assert!(s.delta_j(&f, 9).is_err());
        assert!(s.delta_j(&f, -1).is_err());
    }

    #[test]
    fn disjoint_blocks_annihilate() {
        let s = sys(128);
        let f = random_field(*s.grid(), 1, |_| 1.0);
        for i in s.blocks() {
            for j in s.blocks() {
                if (i - j).abs() >= 2 {
                    let dd = s.delta_j(&s.delta_j(&f, i).unwrap(), j).unwrap();
                    assert_eq!(dd.max_abs(), 0.0);
                }
            }
        }
    }

    #[test]
    fn blocks_sum_to_field_inside_resolved_annuli() {
        let s = sys(128);
        let f = random_field(*s.grid(), 2, |r| {
            if (1.0..=32.0).contains(&r) {
                1.0
            } else {
                0.0
            }
        });
        let mut sum = SpectralField::zeros(*s.grid());
        for j in s.blocks() {
            sum = sum.add(&s.delta_j(&f, j).unwrap()).unwrap();
        }
        assert!(sum.sub(&f).unwrap().max_abs() < 1e-10 * f.max_abs());
    }

    #[test]
    fn s_k_cases() {
        let s = sys(128);
        let g = *s.grid();
        let f = random_field(g, 3, |_| 1.0);
        assert!(s.s_k(&f, s.j_min()).unwrap().is_zero());
        let band = random_band_limited(g, 1, 9).unwrap();
        let sk = s.s_k(&band, 5).unwrap();
        assert!(sk.sub(&band).unwrap().max_abs() < 1e-10 * band.max_abs());
        let sk = s.s_k(&f, 4).unwrap();
        for i in 0..g.len() {
            if g.wavenumber(i) > 4.0 {
                assert_eq!(sk.coeffs()[i], Complex64::default());
            }
        }
    }

    #[test]
    fn tilde_window() {
        let s = sys(128);
        let f = random_field(*s.grid(), 4, |_| 1.0);
        // the top block loses φ_{j_max+1} to clipping
        for j in s.j_min()..s.j_max() {
            let d = s.delta_j(&f, j).unwrap();
            let td = s.tilde_delta_j(&d, j).unwrap();
            assert!(td.sub(&d).unwrap().max_abs() < 1e-10 * d.max_abs());
        }
        let p = s.profile();
        for i in 0..=400 {
            let r = 0.25 + 100.0 * i as f64 / 400.0;
            for j in -2..=6 {
                assert!((p.phi(j, r) * p.tilde_phi(j, r) - p.phi(j, r)).abs() < 1e-15);
            }
        }
        let z = SpectralField::zeros(*s.grid());
        assert!(s.tilde_delta_j(&z, s.j_min()).unwrap().is_zero());
        // clipped window at the bottom edge only sums existing blocks
        let edge = s.tilde_delta_j(&f, s.j_min()).unwrap();
        let manual = (s.j_min()..=s.j_min() + 2)
            .map(|l| s.delta_j(&f, l).unwrap())
            .fold(SpectralField::zeros(*s.grid()), |a, b| a.add(&b).unwrap());
        assert!(edge.sub(&manual).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn besov_single_block_collapse_and_homogeneity() {
        let s = sys(64);
        let g = *s.grid();
        let f = SpectralField::cosine(g, (4, 0), 1.0);
        let bp = BesovParams::new(0.7, 3.0, 1.0).unwrap();
        let b1 = besov_norm(&s, &f, bp).unwrap();
        let binf = besov_norm(
            &s,
            &f,
            BesovParams {
                q: f64::INFINITY,
                ..bp
            },
        )
        .unwrap();
        // |k| = 4 lies only in block j = 2 (φ₂(4) = 1)
        let expected =
            2f64.powf(2.0 * 0.7) * lp_norm(&inverse_transform(&f).unwrap(), 3.0).unwrap();
        assert!((b1.value - expected).abs() < 1e-12 * expected);
        assert!((binf.value - expected).abs() < 1e-12 * expected);
        let scaled = besov_norm(&s, &f.scaled(-2.5), bp).unwrap();
        assert!((scaled.value - 2.5 * b1.value).abs() < 1e-12 * b1.value);
        assert!(!b1.homogeneity_warning);
        let shifted = f
            .add(&SpectralField::from_modes(
                g,
                &[((0, 0), Complex64::new(1.0, 0.0))],
            ))
            .unwrap();
        assert!(besov_norm(&s, &shifted, bp).unwrap().homogeneity_warning);
        assert!(BesovParams::new(0.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn besov_l2_matches_weighted_parseval() {
        let s = sys(128);
        let g = *s.grid();
        let f = random_field(g, 5, |r| {
            if (1.0..=32.0).contains(&r) {
                r.powf(-1.0)
            } else {
                0.0
            }
        });
        let b = besov_norm(&s, &f, BesovParams::new(0.0, 2.0, 2.0).unwrap()).unwrap();
        // Σ_j ‖Δ_j f‖² = L² Σ_k |f̂(k)|² Σ_j φ_j(|k|)²
        let oracle: f64 = (0..g.len())
            .map(|i| {
                let r = g.wavenumber(i);
                let w: f64 = s.blocks().map(|j| s.phi(j, r).powi(2)).sum();
                f.coeffs()[i].norm_sqr() * w
            })
            .sum::<f64>()
            * g.area();
        assert!((b.value - oracle.sqrt()).abs() < 1e-10 * b.value);
        let l2 = f.l2_norm();
        assert!(b.value <= l2 * (1.0 + 1e-12));
        assert!(b.value >= l2 / std::f64::consts::SQRT_2);
        assert!(b.discarded_energy_fraction < 1e-12);
    }

    #[test]
    fn q_monotonicity() {
        let s = sys(64);
        let f = random_field(*s.grid(), 8, |_| 1.0);
        for p in [1.0, 2.0, 5.0] {
            let a = besov_norm(&s, &f, BesovParams::new(0.3, p, f64::INFINITY).unwrap()).unwrap();
            let b = besov_norm(&s, &f, BesovParams::new(0.3, p, 1.0).unwrap()).unwrap();
            assert!(a.value <= b.value);
        }
    }
}
