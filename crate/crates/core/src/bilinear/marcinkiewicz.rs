//! Weighted finite-difference derivatives of bilinear symbols.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::BilinearSymbol;
use crate::Vec2;

/// Relative finite-difference step.
pub const RELATIVE_STEP: f64 = 1e-3;

/// Where to probe: `|ξ|` and `|η|` magnitudes and the number of angles for
/// each. With `paired`, scales are zipped instead of crossed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSpec {
    pub xi_scales: Vec<f64>,
    pub eta_scales: Vec<f64>,
    pub directions: usize,
    pub paired: bool,
}

impl Default for ProbeSpec {
    fn default() -> Self {
        let scales: Vec<f64> = (-4..=4).map(|e| 2f64.powi(e)).collect();
        ProbeSpec {
            xi_scales: scales.clone(),
            eta_scales: scales,
            directions: 8,
            paired: false,
        }
    }
}

impl ProbeSpec {
    fn scale_pairs(&self) -> Vec<(f64, f64)> {
        if self.paired {
            self.xi_scales
                .iter()
                .copied()
                .zip(self.eta_scales.iter().copied())
                .collect()
        } else {
            self.xi_scales
                .iter()
                .flat_map(|&a| self.eta_scales.iter().map(move |&b| (a, b)))
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarcinkiewiczEntry {
    pub beta_xi: [u32; 2],
    pub beta_eta: [u32; 2],
    /// `max |∂^{β₁}_ξ ∂^{β₂}_η m|·|ξ|^{|β₁|}|η|^{|β₂|}` over all finite probes.
    pub max_weighted: f64,
    /// The same maximum restricted to each probe scale pair.
    pub per_scale: Vec<f64>,
    /// Probes where the difference quotient was not finite.
    pub non_finite: usize,
}

impl MarcinkiewiczEntry {
    pub fn order(&self) -> u32 {
        self.beta_xi[0] + self.beta_xi[1] + self.beta_eta[0] + self.beta_eta[1]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarcinkiewiczReport {
    pub symbol: String,
    pub max_order: u32,
    pub scales: Vec<(f64, f64)>,
    pub entries: Vec<MarcinkiewiczEntry>,
}

impl MarcinkiewiczReport {
    pub fn entry(&self, beta_xi: [u32; 2], beta_eta: [u32; 2]) -> Option<&MarcinkiewiczEntry> {
        self.entries
            .iter()
            .find(|e| e.beta_xi == beta_xi && e.beta_eta == beta_eta)
    }

    /// Largest weighted value over every entry of order at least 1.
    pub fn max_derivative_entry(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.order() > 0)
            .map(|e| e.max_weighted)
            .fold(0.0, f64::max)
    }

    pub fn flagged(&self) -> bool {
        self.entries.iter().any(|e| e.non_finite > 0)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Central stencil for the `n`-th derivative: offsets in units of `h` and
/// weights (before division by `h^n`).
fn stencil(n: u32) -> Vec<(f64, f64)> {
    (0..=n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            (n as f64 / 2.0 - i as f64, sign * binomial(n, i))
        })
        .collect()
}

/// Mixed derivative `∂^{β}` of `m` at `(ξ, η)` by tensor-product central
/// differences with steps `h_ξ`, `h_η`.
fn derivative(m: &BilinearSymbol, xi: Vec2, eta: Vec2, beta: [u32; 4], h: [f64; 2]) -> Complex64 {
    let stencils: Vec<Vec<(f64, f64)>> = beta.iter().map(|&b| stencil(b)).collect();
    let steps = [h[0], h[0], h[1], h[1]];
    let mut sum = Complex64::default();
    for &(o0, w0) in &stencils[0] {
        for &(o1, w1) in &stencils[1] {
            for &(o2, w2) in &stencils[2] {
                for &(o3, w3) in &stencils[3] {
                    let x = [xi[0] + o0 * steps[0], xi[1] + o1 * steps[1]];
                    let y = [eta[0] + o2 * steps[2], eta[1] + o3 * steps[3]];
                    sum += m.eval(x, y) * (w0 * w1 * w2 * w3);
                }
            }
        }
    }
    let scale: f64 = (0..4).map(|i| steps[i].powi(beta[i] as i32)).product();
    sum / scale
}

/// Tabulates `|∂^{β₁}_ξ ∂^{β₂}_η m|·|ξ|^{|β₁|}|η|^{|β₂|}` for every
/// `|β₁|+|β₂| ≤ max_order` over the probe set.
pub fn marcinkiewicz_check(
    m: &BilinearSymbol,
    max_order: u32,
    probes: &ProbeSpec,
) -> MarcinkiewiczReport {
    let scales = probes.scale_pairs();
    let mut betas = Vec::new();
    for total in 0..=max_order {
        for a in 0..=total {
            for b in 0..=total - a {
                for c in 0..=total - a - b {
                    betas.push([a, b, c, total - a - b - c]);
                }
            }
        }
    }
    let d = probes.directions.max(1);
    let angle = |i: usize, shift: f64| (i as f64 + shift) * std::f64::consts::TAU / d as f64;
    let entries = betas
        .into_iter()
        .map(|beta| {
            let mut per_scale = Vec::with_capacity(scales.len());
            let mut non_finite = 0;
            for &(rx, ry) in &scales {
                let mut best: f64 = 0.0;
                for a in 0..d {
                    let (sa, ca) = angle(a, 0.37).sin_cos();
                    let xi = [rx * ca, rx * sa];
                    for b in 0..d {
                        let (sb, cb) = angle(b, 0.61).sin_cos();
                        let eta = [ry * cb, ry * sb];
                        let h = [RELATIVE_STEP * rx, RELATIVE_STEP * ry];
                        let v = derivative(m, xi, eta, beta, h).norm();
                        let weighted = v
                            * rx.powi((beta[0] + beta[1]) as i32)
                            * ry.powi((beta[2] + beta[3]) as i32);
                        if weighted.is_finite() {
                            best = best.max(weighted);
                        } else {
                            non_finite += 1;
                        }
                    }
                }
                per_scale.push(best);
            }
            MarcinkiewiczEntry {
                beta_xi: [beta[0], beta[1]],
                beta_eta: [beta[2], beta[3]],
                max_weighted: per_scale.iter().copied().fold(0.0, f64::max),
                per_scale,
                non_finite,
            }
        })
        .collect();
    MarcinkiewiczReport {
        symbol: m.description().to_string(),
        max_order,
        scales,
        entries,
    }
}
