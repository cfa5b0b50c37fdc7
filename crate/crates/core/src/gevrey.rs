//! Gevrey multiplier, fractional powers of the Laplacian, the fractional
//! heat semigroup, Riesz transforms, `X_T` norms and radius estimates.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fit::{fit_line, LineFit};
use crate::littlewood_paley::{besov_norm, BesovParams, DyadicSystem};
use crate::spectral::{apply_multiplier, apply_real_multiplier, Grid, SpectralField};
use crate::{Error, Result};

/// Largest exponent `γ|k|^α` the Gevrey multiplier accepts.
pub const GEVREY_EXPONENT_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevreyParams {
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub beta: f64,
}

impl GevreyParams {
    /// Checks `0 < α < κ ≤ 1`, `γ ≥ 0`, `λ ≥ 0` and `0 ≤ β < κ/2`. `λ = 0`
    /// freezes the radius at zero.
    pub fn validate(&self) -> Result<()> {
        let GevreyParams {
            alpha,
            gamma,
            lambda,
            kappa,
            beta,
        } = *self;
        let bad = |what: &str| Err(Error::Config(format!("Gevrey parameters: {what}")));
        if !(alpha > 0.0 && alpha < kappa && kappa <= 1.0) {
            return bad(&format!(
                "need 0 < alpha < kappa <= 1, got alpha={alpha}, kappa={kappa}"
            ));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return bad(&format!("gamma must be >= 0, got {gamma}"));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return bad(&format!("lambda must be >= 0, got {lambda}"));
        }
        if !(beta >= 0.0 && beta < kappa / 2.0) {
            return bad(&format!("need 0 <= beta < kappa/2, got beta={beta}"));
        }
        Ok(())
    }

    /// Radius `γ(t) = λ t^{α/κ}`.
    pub fn gamma_at(&self, t: f64) -> f64 {
        self.lambda * t.powf(self.alpha / self.kappa)
    }
}

/// Largest `γ` with `γ·k_max^α ≤ 700` on this grid.
pub fn max_gevrey_gamma(grid: &Grid, alpha: f64) -> f64 {
    GEVREY_EXPONENT_LIMIT / grid.k_max().powf(alpha)
}

fn check_gevrey(grid: &Grid, gamma: f64, alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) || gamma.is_nan() {
        return Err(Error::Domain(format!(
            "Gevrey exponent must lie in (0, 1], got alpha={alpha}, gamma={gamma}"
        )));
    }
    let max_gamma = max_gevrey_gamma(grid, alpha);
    if gamma > max_gamma {
        return Err(Error::GevreyOverflow {
            gamma,
            max_gamma,
            time: None,
        });
    }
    Ok(())
}

/// `G_γ f`: coefficients scaled by `exp(γ|k|^α)`. Negative `γ` damps.
pub fn gevrey_multiply(f: &SpectralField, gamma: f64, alpha: f64) -> Result<SpectralField> {
    check_gevrey(f.grid(), gamma, alpha)?;
    if gamma == 0.0 {
        return Ok(f.clone());
    }
    apply_real_multiplier(f, |k| (gamma * k[0].hypot(k[1]).powf(alpha)).exp())
}

/// `Λ^s f` with the convention `|0|^s := 0`.
pub fn fractional_laplacian(f: &SpectralField, s: f64) -> Result<SpectralField> {
    apply_real_multiplier(f, |k| {
        let r = k[0].hypot(k[1]);
        if r == 0.0 {
            0.0
        } else {
            r.powf(s)
        }
    })
}

/// `e^{−tΛ^κ} f`.
pub fn heat_semigroup(f: &SpectralField, t: f64, kappa: f64) -> Result<SpectralField> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "heat semigroup time must be >= 0, got {t}"
        )));
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Domain(format!(
            "dissipation order must be > 0, got {kappa}"
        )));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    apply_real_multiplier(f, |k| (-t * k[0].hypot(k[1]).powf(kappa)).exp())
}

/// `R_j f` with symbol `−i k_j/|k|` (`axis` 0 or 1), zero at `k = 0`.
pub fn riesz_transform(f: &SpectralField, axis: usize) -> Result<SpectralField> {
    if axis > 1 {
        return Err(Error::Domain(format!(
            "Riesz transform axis must be 0 or 1, got {axis}"
        )));
    }
    apply_multiplier(f, |k| {
        let r = k[0].hypot(k[1]);
        if r == 0.0 {
            Complex64::default()
        } else {
            Complex64::new(0.0, -k[axis] / r)
        }
    })
}

/// SQG velocity `u = (−R₂θ, R₁θ)`.
pub fn riesz_velocity(theta: &SpectralField) -> Result<(SpectralField, SpectralField)> {
    let u1 = riesz_transform(theta, 1)?.scaled(-1.0);
    let u2 = riesz_transform(theta, 0)?;
    Ok((u1, u2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XTNormSample {
    pub t: f64,
    pub gamma_t: f64,
    pub besov_norm: f64,
    /// `t^{β/κ}·‖G_{γ(t)}θ(t)‖_{Ḃ^{σ+β}_{p,q}}`
    pub weighted_norm: f64,
    pub radius_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XTNorm {
    pub value: f64,
    /// Time at which the supremum is attained.
    pub argmax: f64,
    pub samples: Vec<XTNormSample>,
}

impl XTNorm {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,gamma_t,besov_norm,weighted_norm,radius_estimate\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                s.t, s.gamma_t, s.besov_norm, s.weighted_norm, s.radius_estimate
            ));
        }
        out
    }
}

/// Evaluates the `X_T` norm on a sampled trajectory. `bp.s` is the base
/// index `σ`; the norm is taken in `Ḃ^{σ+β}_{p,q}`.
pub fn xt_norm(
    sys: &DyadicSystem,
    trajectory: &[(f64, SpectralField)],
    gp: &GevreyParams,
    bp: BesovParams,
) -> Result<XTNorm> {
    gp.validate()?;
    if trajectory.is_empty() {
        return Err(Error::Domain("X_T norm of an empty trajectory".into()));
    }
    let shifted = BesovParams {
        s: bp.s + gp.beta,
        ..bp
    };
    let mut samples = Vec::with_capacity(trajectory.len());
    for (t, theta) in trajectory {
        let t = *t;
        if !(t > 0.0) {
            return Err(Error::Domain(format!("X_T samples need t > 0, got {t}")));
        }
        let gamma_t = gp.gamma_at(t);
        let g = gevrey_multiply(theta, gamma_t, gp.alpha).map_err(|e| match e {
            Error::GevreyOverflow {
                gamma, max_gamma, ..
            } => Error::GevreyOverflow {
                gamma,
                max_gamma,
                time: Some(t),
            },
            other => other,
        })?;
        let b = besov_norm(sys, &g, shifted)?.value;
        let radius_estimate = if theta.is_zero() {
            0.0
        } else {
            analyticity_radius_estimate(theta, gp.alpha)?.gamma
        };
        samples.push(XTNormSample {
            t,
            gamma_t,
            besov_norm: b,
            weighted_norm: t.powf(gp.beta / gp.kappa) * b,
            radius_estimate,
        });
    }
    let best = samples.iter().fold(&samples[0], |a, s| {
        if s.weighted_norm > a.weighted_norm {
            s
        } else {
            a
        }
    });
    Ok(XTNorm {
        value: best.weighted_norm,
        argmax: best.t,
        samples,
    })
}

/// Result of the spectral-decay fit behind [`analyticity_radius_estimate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    /// Fitted decay rate `γ̂ ≥ 0`.
    pub gamma: f64,
    pub low_signal: bool,
    /// Inclusive ring range used by the fit, in units of the lattice spacing.
    pub rings: (usize, usize),
    pub fit: Option<LineFit>,
}

/// Relative amplitude below which a coefficient counts as numerically zero.
const SIGNAL_FLOOR: f64 = 1e-13;

/// Estimates the Gevrey radius as the decay rate of `|θ̂|` in `|k|^α`.
///
/// Coefficients are grouped into integer rings `round(|k|/k₀)`. The cutoff
/// ring `K` is the largest one where at least half the modes exceed
/// `1e−13·max|θ̂|`; over rings `K/2..=K` the ring means of `log|θ̂|` are
/// regressed on the ring means of `|k|^α`, and `γ̂` is minus the slope.
pub fn analyticity_radius_estimate(theta: &SpectralField, alpha: f64) -> Result<RadiusEstimate> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "Gevrey exponent must lie in (0, 1], got {alpha}"
        )));
    }
    let grid = theta.grid();
    let max = theta.max_abs();
    let low = |rings| RadiusEstimate {
        gamma: 0.0,
        low_signal: true,
        rings,
        fit: None,
    };
    if max == 0.0 {
        return Ok(low((0, 0)));
    }
    let top = grid.n() / 2;
    let floor = SIGNAL_FLOOR * max;
    let mut count = vec![0usize; top + 1];
    let mut alive = vec![0usize; top + 1];
    let mut log_sum = vec![0.0; top + 1];
    let mut pow_sum = vec![0.0; top + 1];
    for (i, c) in theta.coeffs().iter().enumerate() {
        let r = grid.wavenumber(i);
        let ring = (r / grid.k0()).round() as usize;
        if ring == 0 || ring > top {
            continue;
        }
        count[ring] += 1;
        let a = c.norm();
        if a > floor {
            alive[ring] += 1;
            log_sum[ring] += a.ln();
            pow_sum[ring] += r.powf(alpha);
        }
    }
    let cutoff = (1..=top)
        .rev()
        .find(|&m| alive[m] > 0 && 2 * alive[m] >= count[m]);
    let Some(cutoff) = cutoff else {
        return Ok(low((0, 0)));
    };
    let start = (cutoff / 2).max(1);
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for m in start..=cutoff {
        if alive[m] > 0 {
            x.push(pow_sum[m] / alive[m] as f64);
            y.push(log_sum[m] / alive[m] as f64);
        }
    }
    match fit_line(&x, &y) {
        Some(fit) if x.len() >= 2 => Ok(RadiusEstimate {
            gamma: (-fit.slope).max(0.0),
            low_signal: false,
            rings: (start, cutoff),
            fit: Some(fit),
        }),
        _ => Ok(low((start, cutoff))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{inverse_transform, lp_norm, random_field, random_phase_field};
    use std::f64::consts::E;

    fn grid(n: usize) -> Grid {
        Grid::periodic(n).unwrap()
    }

    #[test]
    fn gevrey_examples() {
        let g = grid(32);
        let f = SpectralField::cosine(g, (1, 0), 1.0);
        assert_eq!(gevrey_multiply(&f, 0.0, 0.5).unwrap(), f);
        let e = gevrey_multiply(&f, 1.0, 0.5).unwrap();
        assert!((e.coeff(1, 0).re - E / 2.0).abs() < 1e-15);
        let r = random_field(g, 3, |_| 1.0);
        let back = gevrey_multiply(&gevrey_multiply(&r, 0.3, 0.5).unwrap(), -0.3, 0.5).unwrap();
        assert!(back.sub(&r).unwrap().max_abs() < 1e-12 * r.max_abs());
    }

    #[test]
    fn gevrey_overflow_reports_limit() {
        let g = grid(64);
        let f = random_field(g, 1, |_| 1.0);
        match gevrey_multiply(&f, 1000.0, 1.0) {
            Err(Error::GevreyOverflow { max_gamma, .. }) => {
                assert!((max_gamma - 700.0 / g.k_max()).abs() < 1e-12)
            }
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn laplacian_examples() {
        let g = grid(32);
        let f = SpectralField::cosine(g, (1, 0), 1.0);
        assert_eq!(fractional_laplacian(&f, 0.37).unwrap(), f);
        let r = random_field(g, 2, |_| 1.0);
        let round = fractional_laplacian(&fractional_laplacian(&r, 0.8).unwrap(), -0.8).unwrap();
        assert!(round.sub(&r.without_mean()).unwrap().max_abs() < 1e-12 * r.max_abs());
    }

    #[test]
    fn laplacian_squared_matches_finite_differences() {
        let mut errs = Vec::new();
        for n in [32, 64] {
            let g = grid(n);
            let f = SpectralField::from_modes(
                g,
                &[
                    ((1, 2), Complex64::new(0.3, 0.1)),
                    ((-1, -2), Complex64::new(0.3, -0.1)),
                    ((3, -1), Complex64::new(-0.2, 0.4)),
                    ((-3, 1), Complex64::new(-0.2, -0.4)),
                ],
            );
            let u = inverse_transform(&f).unwrap();
            let lap = inverse_transform(&fractional_laplacian(&f, 2.0).unwrap()).unwrap();
            let h = g.dx();
            let v = u.values();
            let at = |a: usize, b: usize| v[(a % n) * n + (b % n)];
            let mut err: f64 = 0.0;
            for a in 0..n {
                for b in 0..n {
                    let fd = (4.0 * at(a, b)
                        - at(a + 1, b)
                        - at(a + n - 1, b)
                        - at(a, b + 1)
                        - at(a, b + n - 1))
                        / (h * h);
                    err = err.max((fd - lap.values()[a * n + b]).abs());
                }
            }
            errs.push(err / u.max_abs());
        }
        // second order: halving h divides the error by about 4
        assert!(errs[0] < 0.2);
        assert!((errs[0] / errs[1] - 4.0).abs() < 0.2);
    }

    #[test]
    fn heat_examples() {
        let g = grid(32);
        let f = SpectralField::cosine(g, (1, 0), 1.0);
        assert_eq!(heat_semigroup(&f, 0.0, 0.5).unwrap(), f);
        let h = heat_semigroup(&f, 1.0, 0.5).unwrap();
        assert!((h.coeff(1, 0).re - 0.5 / E).abs() < 1e-16);
        assert!(heat_semigroup(&f, -1.0, 0.5).is_err());
        let r = random_field(g, 4, |_| 1.0);
        let two = heat_semigroup(&heat_semigroup(&r, 0.2, 0.7).unwrap(), 0.3, 0.7).unwrap();
        let one = heat_semigroup(&r, 0.5, 0.7).unwrap();
        assert!(two.sub(&one).unwrap().max_abs() < 1e-13 * r.max_abs());
    }

    #[test]
    fn velocity_of_sine() {
        let g = grid(16);
        let theta = SpectralField::sine(g, (1, 0), 1.0);
        let (u1, u2) = riesz_velocity(&theta).unwrap();
        assert!(u1.max_abs() < 1e-16);
        let expected = SpectralField::cosine(g, (1, 0), -1.0);
        assert!(u2.sub(&expected).unwrap().max_abs() < 1e-16);
    }

    #[test]
    fn velocity_is_divergence_free_and_bounded() {
        let g = grid(64);
        let theta = random_field(g, 5, |r| (1.0 + r).powi(-1)).without_mean();
        let (u1, u2) = riesz_velocity(&theta).unwrap();
        let scale = u1.max_abs().max(u2.max_abs());
        for i in 0..g.len() {
            let k = g.wavevector(i);
            let div = u1.coeffs()[i] * k[0] + u2.coeffs()[i] * k[1];
            assert!(div.norm() <= 1e-13 * scale);
        }
        let l2 = |f: &SpectralField| lp_norm(&inverse_transform(f).unwrap(), 2.0).unwrap();
        assert!(l2(&riesz_transform(&theta, 0).unwrap()) <= l2(&theta));
        assert!(l2(&riesz_transform(&theta, 1).unwrap()) <= l2(&theta));
    }

    #[test]
    fn radius_of_exact_gevrey_decay() {
        let g = grid(64);
        let alpha = 0.5;
        let f = random_phase_field(g, 6, |r| {
            if r == 0.0 {
                0.0
            } else {
                (-2.0 * r.powf(alpha)).exp()
            }
        });
        let est = analyticity_radius_estimate(&f, alpha).unwrap();
        assert!((est.gamma - 2.0).abs() < 1e-6, "{est:?}");
        assert!(!est.low_signal);
    }

    #[test]
    fn radius_of_white_spectrum_is_zero() {
        let g = grid(64);
        let f = random_phase_field(g, 7, |r| if r == 0.0 { 0.0 } else { 1.0 });
        let est = analyticity_radius_estimate(&f, 0.5).unwrap();
        assert!(est.gamma < 1e-10);
        let z = analyticity_radius_estimate(&SpectralField::zeros(g), 0.5).unwrap();
        assert!(z.low_signal && z.gamma == 0.0);
    }

    #[test]
    fn radius_of_heat_flow_equals_time() {
        let g = grid(128);
        let delta = random_phase_field(g, 8, |r| if r == 0.0 { 0.0 } else { 1.0 });
        for (t, kappa) in [(0.1, 0.6), (0.5, 0.8), (1.0, 1.0)] {
            let h = heat_semigroup(&delta, t, kappa).unwrap();
            let est = analyticity_radius_estimate(&h, kappa).unwrap();
            assert!((est.gamma - t).abs() < 0.02 * t, "t={t}: {est:?}");
        }
    }

    #[test]
    fn xt_norm_cases() {
        let g = grid(64);
        let sys = DyadicSystem::new(g).unwrap();
        let bp = BesovParams::new(1.0, 2.0, 2.0).unwrap();
        let gp = GevreyParams {
            alpha: 0.4,
            gamma: 0.0,
            lambda: 1.0,
            kappa: 0.8,
            beta: 0.0,
        };
        assert!(xt_norm(&sys, &[], &gp, bp).is_err());
        let f = random_field(g, 9, |r| if r == 0.0 { 0.0 } else { (-r).exp() });
        let flat = GevreyParams { lambda: 0.0, ..gp };
        let xt = xt_norm(&sys, &[(0.5, f.clone())], &flat, bp).unwrap();
        let plain = besov_norm(&sys, &f, bp).unwrap().value;
        assert_eq!(xt.value, plain);
        assert!(xt_norm(&sys, &[(0.0, f.clone())], &gp, bp).is_err());
        let huge = GevreyParams { lambda: 1e6, ..gp };
        match xt_norm(&sys, &[(0.5, f)], &huge, bp) {
            Err(Error::GevreyOverflow { time: Some(t), .. }) => assert_eq!(t, 0.5),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn params_validation() {
        let ok = GevreyParams {
            alpha: 0.4,
            gamma: 0.1,
            lambda: 1.0,
            kappa: 0.8,
            beta: 0.3,
        };
        assert!(ok.validate().is_ok());
        assert!(GevreyParams { alpha: 0.9, ..ok }.validate().is_err());
        assert!(GevreyParams { beta: 0.4, ..ok }.validate().is_err());
        assert!(GevreyParams { kappa: 1.0, ..ok }.validate().is_ok());
        assert!(GevreyParams { lambda: -1.0, ..ok }.validate().is_err());
    }
}
