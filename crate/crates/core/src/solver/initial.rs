use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::littlewood_paley::{besov_norm, BesovParams, DyadicSystem};
use crate::spectral::{forward_transform, random_phase_field, Grid, RealField, SpectralField};
use crate::{Error, Result};

/// Initial condition for a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialData {
    Zero,
    /// `amplitude·cos(m·x)`
    Mode {
        m: (i64, i64),
        amplitude: f64,
    },
    /// Two Gaussian blobs of opposite sign, centred symmetrically about the
    /// middle of the box along the first axis.
    VortexPair {
        amplitude: f64,
        width: f64,
        separation: f64,
    },
    /// Flat-spectrum random-phase data on the dealiased square
    /// `0 < max(|m₁|, |m₂|) ≤ n/3`, rescaled so that
    /// its `Ḃ^σ_{p,q}` norm equals `norm`.
    RandomBand {
        norm: f64,
        besov: BesovParams,
        seed: u64,
    },
    /// Real coefficient `amplitude/2` on every mode of the integer ring
    /// `round(|m|) = radius`.
    Ring {
        radius: usize,
        amplitude: f64,
    },
    Snapshot {
        path: PathBuf,
    },
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::RandomBand {
            norm: 0.1,
            besov: BesovParams {
                s: 1.2,
                p: 2.0,
                q: 2.0,
            },
            seed: 1,
        }
    }
}

impl InitialData {
    pub fn name(&self) -> &'static str {
        match self {
            InitialData::Zero => "zero",
            InitialData::Mode { .. } => "mode",
            InitialData::VortexPair { .. } => "vortex-pair",
            InitialData::RandomBand { .. } => "random-band",
            InitialData::Ring { .. } => "ring",
            InitialData::Snapshot { .. } => "snapshot",
        }
    }

    /// Builds the field on `grid`. The mean is always removed.
    pub fn build(&self, grid: Grid) -> Result<SpectralField> {
        let f = match self {
            InitialData::Zero => SpectralField::zeros(grid),
            InitialData::Mode { m, amplitude } => {
                if grid.index_of_frequency(m.0).is_none() || grid.index_of_frequency(m.1).is_none()
                {
                    return Err(Error::Config(format!(
                        "mode ({}, {}) is not resolved on a {}-grid",
                        m.0,
                        m.1,
                        grid.n()
                    )));
                }
                SpectralField::cosine(grid, *m, *amplitude)
            }
            InitialData::VortexPair {
                amplitude,
                width,
                separation,
            } => vortex_pair(grid, *amplitude, *width, *separation)?,
            InitialData::RandomBand { norm, besov, seed } => {
                let square: Vec<f64> = super::Dealias::TwoThirds
                    .mask(&grid)
                    .into_iter()
                    .map(|keep| if keep { 1.0 } else { 0.0 })
                    .collect();
                let raw = random_phase_field(grid, *seed, |_| 1.0).mul_elementwise(&square);
                let sys = DyadicSystem::new(grid)?;
                let b = besov_norm(&sys, &raw, *besov)?.value;
                raw.scaled(norm / b)
            }
            InitialData::Ring { radius, amplitude } => {
                if *radius == 0 || *radius >= grid.n() / 2 {
                    return Err(Error::Config(format!(
                        "ring radius must lie in 1..{}, got {radius}",
                        grid.n() / 2
                    )));
                }
                let mut f = SpectralField::zeros(grid);
                for i in 0..grid.len() {
                    let (a, b) = grid.frequencies(i);
                    if ((a * a + b * b) as f64).sqrt().round() as usize == *radius {
                        f.coeffs_mut()[i].re = amplitude / 2.0;
                    }
                }
                f
            }
            InitialData::Snapshot { path } => {
                let snap = crate::io::read_snapshot(path)?;
                if snap.grid.n() != grid.n() || snap.grid.box_length() != grid.box_length() {
                    return Err(Error::GridMismatch(format!(
                        "snapshot {} is on a {}-grid with L = {}, run uses n = {}, L = {}",
                        path.display(),
                        snap.grid.n(),
                        snap.grid.box_length(),
                        grid.n(),
                        grid.box_length()
                    )));
                }
                snap.into_spectral()?
            }
        };
        Ok(f.without_mean())
    }
}

fn vortex_pair(grid: Grid, amplitude: f64, width: f64, separation: f64) -> Result<SpectralField> {
    if !(width > 0.0) {
        return Err(Error::Config(format!(
            "vortex width must be positive, got {width}"
        )));
    }
    let l = grid.box_length();
    let c = 0.5 * l;
    // minimum-image distance so the blobs are periodic
    let wrap = |d: f64| d - l * (d / l).round();
    let blob = |x: [f64; 2], x0: f64| {
        let (d1, d2) = (wrap(x[0] - x0), wrap(x[1] - c));
        (-(d1 * d1 + d2 * d2) / (width * width)).exp()
    };
    let real = RealField::from_fn(grid, |x| {
        amplitude * (blob(x, c - 0.5 * separation) - blob(x, c + 0.5 * separation))
    })?;
    Ok(forward_transform(&real))
}
