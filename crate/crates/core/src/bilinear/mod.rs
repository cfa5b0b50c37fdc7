//! Bilinear Fourier multipliers
//!
//! ```text
//! T_m(f, g)(x) = Σ_{ξ,η} m(ξ, η) f̂(ξ) ĝ(η) e^{i x·(ξ+η)}
//! ```
//!
//! evaluated by direct double sums onto the doubled grid, where the sum
//! `ξ + η` of two resolved modes is always resolved, so no aliasing occurs.

mod marcinkiewicz;
mod norm;
mod registry;

pub use marcinkiewicz::{marcinkiewicz_check, MarcinkiewiczEntry, MarcinkiewiczReport, ProbeSpec};
pub use norm::{estimate_operator_norm, NormEstimate};
pub use registry::{build_symbol, parse_symbol_spec, registry, SymbolInfo};

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gevrey::max_gevrey_gamma;
use crate::littlewood_paley::DyadicSystem;
use crate::spectral::{
    apply_real_multiplier, forward_transform, inverse_transform, pad_to, RealField, SpectralField,
};
use crate::{Error, Result, Vec2};

/// Largest number of `(ξ, η)` pairs a direct bilinear sum may visit.
pub const MAX_PAIRS: u64 = 100_000_000;

/// Closed annulus `inner ≤ |η| ≤ outer`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub fn contains(&self, r: f64) -> bool {
        r >= self.inner && r <= self.outer
    }

    /// Support of `φ_k`.
    pub fn dyadic(k: i32) -> Self {
        Annulus {
            inner: 2f64.powi(k - 1),
            outer: 2f64.powi(k + 1),
        }
    }

    fn scaled(&self, c: f64) -> Self {
        Annulus {
            inner: self.inner * c,
            outer: self.outer * c,
        }
    }
}

type SymbolFn = dyn Fn(Vec2, Vec2) -> Complex64 + Send + Sync;

/// A symbol `m(ξ, η)` with an optional annulus outside which it vanishes
/// in `η`.
#[derive(Clone)]
pub struct BilinearSymbol {
    eval: Arc<SymbolFn>,
    support_hint: Option<Annulus>,
    description: String,
}

impl fmt::Debug for BilinearSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BilinearSymbol")
            .field("description", &self.description)
            .field("support_hint", &self.support_hint)
            .finish()
    }
}

impl BilinearSymbol {
    pub fn new(
        description: impl Into<String>,
        support_hint: Option<Annulus>,
        eval: impl Fn(Vec2, Vec2) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        BilinearSymbol {
            eval: Arc::new(eval),
            support_hint,
            description: description.into(),
        }
    }

    pub fn real(
        description: impl Into<String>,
        support_hint: Option<Annulus>,
        eval: impl Fn(Vec2, Vec2) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(description, support_hint, move |a, b| {
            Complex64::new(eval(a, b), 0.0)
        })
    }

    pub fn constant(c: f64) -> Self {
        Self::real(format!("constant({c})"), None, move |_, _| c)
    }

    pub fn eval(&self, xi: Vec2, eta: Vec2) -> Complex64 {
        (self.eval)(xi, eta)
    }

    pub fn support_hint(&self) -> Option<Annulus> {
        self.support_hint
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

/// `T_m(f, g)` on the doubled grid (same box, `2n` points per axis).
///
/// When the symbol carries a support hint, modes of `g` outside the
/// annulus are skipped. Fails with a cost-guard error past [`MAX_PAIRS`].
pub fn apply_bilinear(
    m: &BilinearSymbol,
    f: &SpectralField,
    g: &SpectralField,
) -> Result<SpectralField> {
    crate::spectral::check_same_grid(f.grid(), g.grid())?;
    let grid = *f.grid();
    let out_grid = grid.refined(2)?;
    let zero = Complex64::default();
    let modes = |h: &SpectralField, hint: Option<Annulus>| -> Vec<(Vec2, (i64, i64), Complex64)> {
        h.coeffs()
            .iter()
            .enumerate()
            .filter(|(i, c)| **c != zero && hint.is_none_or(|a| a.contains(grid.wavenumber(*i))))
            .map(|(i, c)| (grid.wavevector(i), grid.frequencies(i), *c))
            .collect()
    };
    let fm = modes(f, None);
    let gm = modes(g, m.support_hint);
    let pairs = fm.len() as u64 * gm.len() as u64;
    if pairs > MAX_PAIRS {
        return Err(Error::CostGuard {
            pairs,
            limit: MAX_PAIRS,
        });
    }
    let mut out = SpectralField::zeros(out_grid);
    let n2 = out_grid.n();
    for &(xi, (a1, a2), fc) in &fm {
        for &(eta, (b1, b2), gc) in &gm {
            let v = m.eval(xi, eta);
            if v == zero {
                continue;
            }
            let i = out_grid
                .index_of_frequency(a1 + b1)
                .expect("doubled grid holds sums");
            let j = out_grid
                .index_of_frequency(a2 + b2)
                .expect("doubled grid holds sums");
            out.coeffs_mut()[i * n2 + j] += v * fc * gc;
        }
    }
    Ok(out)
}

/// `⟨F, H⟩ = ∫ F H dx = L² Σ_k F̂(k) Ĥ(−k)` for fields on grids with the same
/// box; frequencies missing from either grid contribute nothing.
pub fn pairing(a: &SpectralField, b: &SpectralField) -> Result<Complex64> {
    let (ga, gb) = (a.grid(), b.grid());
    if ga.box_length() != gb.box_length() {
        return Err(Error::GridMismatch(format!(
            "pairing needs equal boxes, got L = {} and L = {}",
            ga.box_length(),
            gb.box_length()
        )));
    }
    let mut sum = Complex64::default();
    for (i, c) in a.coeffs().iter().enumerate() {
        if *c == Complex64::default() {
            continue;
        }
        let (m1, m2) = ga.frequencies(i);
        if let (Some(x), Some(y)) = (gb.index_of_frequency(-m1), gb.index_of_frequency(-m2)) {
            sum += c * b.coeffs()[x * gb.n() + y];
        }
    }
    Ok(sum * ga.area())
}

/// `m̃(ξ, η) = (−1)^d m(ξ, −ξ−η)` with `d = 2`.
///
/// With it, `⟨T_m(f, g), h⟩ = ⟨T_m̃(f, h), g⟩`.
pub fn rotation_dual(m: &BilinearSymbol) -> BilinearSymbol {
    let inner = m.eval.clone();
    BilinearSymbol {
        eval: Arc::new(move |xi: Vec2, eta: Vec2| inner(xi, [-xi[0] - eta[0], -xi[1] - eta[1]])),
        support_hint: None,
        description: format!("rotated[{}]", m.description),
    }
}

/// `m_λ(ξ, η) = m(λξ, λη)`; the support hint shrinks by `1/λ`.
pub fn dilate(m: &BilinearSymbol, lambda: f64) -> Result<BilinearSymbol> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "dilation factor must be positive, got {lambda}"
        )));
    }
    let inner = m.eval.clone();
    Ok(BilinearSymbol {
        eval: Arc::new(move |xi: Vec2, eta: Vec2| {
            inner(
                [lambda * xi[0], lambda * xi[1]],
                [lambda * eta[0], lambda * eta[1]],
            )
        }),
        support_hint: m.support_hint.map(|a| a.scaled(1.0 / lambda)),
        description: format!("dilated[{}; {lambda}]", m.description),
    })
}

/// `[G_γΔ_j, f]g = G_γΔ_j(fg) − f·G_γΔ_j g`, evaluated on the doubled grid
/// where both products are exact.
pub fn gevrey_commutator(
    sys: &DyadicSystem,
    f: &SpectralField,
    g: &SpectralField,
    j: i32,
    gamma: f64,
    alpha: f64,
) -> Result<RealField> {
    crate::spectral::check_same_grid(f.grid(), g.grid())?;
    crate::spectral::check_same_grid(f.grid(), sys.grid())?;
    if j < sys.j_min() || j > sys.j_max() {
        return Err(Error::Band {
            j,
            reason: format!("resolved range is [{}, {}]", sys.j_min(), sys.j_max()),
        });
    }
    let fine = f.grid().refined(2)?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "Gevrey exponent must lie in (0, 1], got {alpha}"
        )));
    }
    let max_gamma = max_gevrey_gamma(&fine, alpha);
    if gamma > max_gamma {
        return Err(Error::GevreyOverflow {
            gamma,
            max_gamma,
            time: None,
        });
    }
    let profile = *sys.profile();
    let op = |h: &SpectralField| {
        apply_real_multiplier(h, |k| {
            let r = k[0].hypot(k[1]);
            (gamma * r.powf(alpha)).exp() * profile.phi(j, r)
        })
    };
    let f_fine = inverse_transform(&pad_to(f, &fine)?)?;
    let g_fine = inverse_transform(&pad_to(g, &fine)?)?;
    let fg = forward_transform(&f_fine.mul(&g_fine)?);
    let first = inverse_transform(&op(&fg)?)?;
    let opg = inverse_transform(&pad_to(&op(g)?, &fine)?)?;
    first.sub(&f_fine.mul(&opg)?)
}

/// Symbol of `[G_γΔ_j, f]g` acting on `(f, g)`:
/// `G_γ(ξ+η)φ_j(ξ+η) − G_γ(η)φ_j(η)`.
pub fn commutator_symbol(sys: &DyadicSystem, j: i32, gamma: f64, alpha: f64) -> BilinearSymbol {
    registry::commutator(*sys.profile(), j, gamma, alpha, None)
}
