//! Randomized lower bounds for `‖T_m‖_{L^p × L^q → L^r}`.

use serde::{Deserialize, Serialize};

use super::{apply_bilinear, BilinearSymbol};
use crate::spectral::{
    inverse_transform, inverse_transform_unchecked, lp_norm, pad_to, random_field, Grid, RealField,
    SpectralField,
};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    /// Largest observed `‖T_m(f,g)‖_{L^r} / (‖f‖_{L^p}‖g‖_{L^q})`: a lower
    /// bound on the operator norm, not the norm itself.
    pub value: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    /// Whether `(p, q)` lies in `1 < p < ∞, 1 ≤ q ≤ ∞`.
    pub in_theorem_range: bool,
    pub trial_values: Vec<f64>,
}

/// Output exponent `r` with `1/r = 1/p + 1/q`.
pub fn holder_exponent(p: f64, q: f64) -> Result<f64> {
    if p.is_nan() || q.is_nan() || p < 1.0 || q < 1.0 {
        return Err(Error::Domain(format!(
            "exponents must be >= 1, got p={p}, q={q}"
        )));
    }
    let r = 1.0 / (1.0 / p + 1.0 / q);
    if r < 1.0 {
        return Err(Error::Domain(format!(
            "1/p + 1/q = {} gives r = {r} < 1, outside the normed range",
            1.0 / r
        )));
    }
    Ok(r)
}

/// Probes `T_m` with seeded random pairs on `grid`.
///
/// `f` is broadband; `g` is broadband or confined to the symbol's support
/// hint. Trial 0 uses the aligned pair `f = g`, where Hölder is sharp for
/// `p = q`. All norms are evaluated on the doubled grid, so the discrete
/// Hölder inequality holds exactly.
pub fn estimate_operator_norm(
    m: &BilinearSymbol,
    grid: Grid,
    p: f64,
    q: f64,
    trials: usize,
    seed: u64,
) -> Result<NormEstimate> {
    let r = holder_exponent(p, q)?;
    if trials == 0 {
        return Err(Error::Domain(
            "operator norm estimate needs at least one trial".into(),
        ));
    }
    let fine = grid.refined(2)?;
    let hint = m.support_hint();
    let g_amp = |k: f64| match hint {
        Some(a) if !a.contains(k) => 0.0,
        _ => 1.0,
    };
    let norm = |h: &SpectralField, e: f64| -> Result<f64> {
        lp_norm(&inverse_transform(&pad_to(h, &fine)?)?, e)
    };
    let mut trial_values = Vec::with_capacity(trials);
    for t in 0..trials {
        let s = seed.wrapping_add(2 * t as u64);
        let g = random_field(grid, s.wrapping_add(1), g_amp);
        let f = if t == 0 {
            g.clone()
        } else {
            random_field(grid, s, |_| 1.0)
        };
        let (nf, ng) = (norm(&f, p)?, norm(&g, q)?);
        if nf == 0.0 || ng == 0.0 {
            return Err(Error::Domain(format!(
                "no lattice mode of the {}-grid lies in the support of {}",
                grid.n(),
                m.description()
            )));
        }
        let out = apply_bilinear(m, &f, &g)?;
        let value = if out.is_zero() {
            0.0
        } else {
            lp_norm(&modulus(&out)?, r)? / (nf * ng)
        };
        trial_values.push(value);
    }
    Ok(NormEstimate {
        value: trial_values.iter().copied().fold(0.0, f64::max),
        p,
        q,
        r,
        in_theorem_range: p > 1.0 && p.is_finite(),
        trial_values,
    })
}

/// Pointwise modulus of a possibly complex-valued field; odd real symbols
/// produce imaginary outputs.
fn modulus(f: &SpectralField) -> Result<RealField> {
    let values = inverse_transform_unchecked(f)
        .into_iter()
        .map(|c| c.norm())
        .collect();
    RealField::new(*f.grid(), values)
}
