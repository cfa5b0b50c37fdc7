//! Checks for the dyadic-block lemmas: Bernstein, positivity, heat-kernel
//! decay and the linear Gevrey bound.

use super::{check_grid, check_j_range, min_max, CheckConfig, FitRecord, InequalityReport};
use crate::gevrey::{fractional_laplacian, gevrey_multiply, heat_semigroup};
use crate::littlewood_paley::build_system;
use crate::spectral::{
    forward_transform, inverse_transform, lp_norm, pad_to, random_band_limited, random_field,
    RealField, SpectralField,
};
use crate::{Error, Result};

fn exponent_pairs(cfg: &CheckConfig) -> Vec<(f64, f64)> {
    cfg.s
        .iter()
        .flat_map(|&s| cfg.p.iter().map(move |&p| (s, p)))
        .collect()
}

/// `‖Λ^s|h|^{p/2}‖_{L²}^{2/p}`, with the pointwise power taken on `h`'s grid
/// or on a 2× padded one.
fn generalized_norm(h: &SpectralField, s: f64, p: f64, padding: bool) -> Result<f64> {
    let h = if padding {
        pad_to(h, &h.grid().refined(2)?)?
    } else {
        h.clone()
    };
    let power = inverse_transform(&h)?.map(|v| v.abs().powf(p / 2.0))?;
    let lifted = fractional_laplacian(&forward_transform(&power), s)?;
    Ok(lifted.l2_norm().powf(2.0 / p))
}

/// Block ratios `‖Λ^sΔ_jf‖_p / (2^{js}‖Δ_jf‖_p)`, or in generalized mode
/// `‖Λ^s|Δ_jf|^{p/2}‖_2^{2/p} / (2^{2sj/p}‖Δ_jf‖_p)`. The constants must be
/// j-uniform: their spread over all trials stays within `2^{2|s|}·1.1`.
pub fn check_bernstein(cfg: &CheckConfig, generalized: bool) -> Result<InequalityReport> {
    let grid = check_grid(cfg)?;
    let sys = build_system(grid, 1.0)?;
    check_j_range(&sys, cfg)?;
    let pairs = exponent_pairs(cfg);
    if generalized {
        if let Some(&(s, p)) = pairs
            .iter()
            .find(|(s, p)| *p < 2.0 || !(0.0..=1.0).contains(s))
        {
            return Err(Error::Config(format!(
                "generalized Bernstein needs p >= 2 and s in [0, 1], got s={s}, p={p}"
            )));
        }
    }
    let mut report = InequalityReport::new(cfg);
    let mut ratios = vec![Vec::new(); pairs.len()];
    let (lo, hi) = cfg.j_range;
    let span = (hi - lo + 1) as usize;
    for trial in 0..cfg.trials {
        let j = lo + (trial % span) as i32;
        let f = random_band_limited(grid, j, cfg.seed.wrapping_add(trial as u64))?;
        let d = sys.delta_j(&f, j)?;
        let d_real = inverse_transform(&d)?;
        for (slot, &(s, p)) in pairs.iter().enumerate() {
            let base = lp_norm(&d_real, p)?;
            let (lhs, rhs) = if generalized {
                (
                    generalized_norm(&d, s, p, cfg.padding)?,
                    2f64.powf(2.0 * s * j as f64 / p) * base,
                )
            } else {
                let lifted = inverse_transform(&fractional_laplacian(&d, s)?)?;
                (lp_norm(&lifted, p)?, 2f64.powf(s * j as f64) * base)
            };
            report.trial(format!("j={j} s={s} p={p} trial={trial}"), lhs, rhs);
            ratios[slot].push(lhs / rhs);
        }
    }
    for (slot, &(s, p)) in pairs.iter().enumerate() {
        let (c, big_c) = min_max(ratios[slot].iter().copied());
        let tag = format!("s={s} p={p}");
        report.fit(FitRecord::info(format!("lower constant {tag}"), c));
        report.fit(FitRecord::info(format!("upper constant {tag}"), big_c));
        let spread = if c > 0.0 { big_c / c } else { f64::INFINITY };
        report.fit(FitRecord::at_most(
            format!("spread {tag}"),
            spread,
            2f64.powf(2.0 * s.abs()) * 1.1,
        ));
    }
    if generalized && !cfg.padding {
        report.note("pointwise powers evaluated on the unpadded grid");
    }
    Ok(report.finish())
}

/// `∫Λ^s f·|f|^{p−2}f − (2/p)‖Λ^{s/2}|f|^{p/2}‖²`, both terms by quadrature.
pub fn positivity_difference(
    f: &SpectralField,
    s: f64,
    p: f64,
    padding: bool,
) -> Result<(f64, f64)> {
    let f = if padding {
        pad_to(f, &f.grid().refined(2)?)?
    } else {
        f.clone()
    };
    let values = inverse_transform(&f)?;
    let lifted = inverse_transform(&fractional_laplacian(&f, s)?)?;
    let power = values.map(|v| v.abs().powf(p - 2.0) * v)?;
    let lhs = lifted.mul(&power)?.integral();
    let half = values.map(|v| v.abs().powf(p / 2.0))?;
    let rhs = 2.0 / p * fractional_laplacian(&forward_transform(&half), s / 2.0)?.energy();
    Ok((lhs, rhs))
}

/// Smooth random field with a strictly positive offset when `positive`.
fn positivity_field(cfg: &CheckConfig, trial: usize, positive: bool) -> Result<SpectralField> {
    let grid = check_grid(cfg)?;
    let cutoff = grid.nyquist() / 4.0;
    let f = random_field(grid, cfg.seed.wrapping_add(trial as u64), |k| {
        if k <= cutoff {
            (1.0 + k).powi(-3)
        } else {
            0.0
        }
    });
    if !positive {
        return Ok(f);
    }
    let values = inverse_transform(&f)?;
    let shift = 1.5 * values.max_abs() + 1e-3;
    Ok(forward_transform(&RealField::new(
        grid,
        values.values().iter().map(|v| v + shift).collect(),
    )?))
}

/// Trials alternate sign-changing and strictly positive fields. Every
/// difference must be `≥ −1e−10·scale`; at `p = 2` on positive fields the
/// two sides coincide and the difference must vanish to `1e−12·scale`.
pub fn check_positivity(cfg: &CheckConfig) -> Result<InequalityReport> {
    if let Some(&p) = cfg.p.iter().find(|p| **p < 2.0) {
        return Err(Error::Config(format!("positivity needs p >= 2, got {p}")));
    }
    if let Some(&s) = cfg.s.iter().find(|s| !(0.0..=1.0).contains(*s)) {
        return Err(Error::Config(format!(
            "positivity needs s in [0, 1], got {s}"
        )));
    }
    let mut report = InequalityReport::new(cfg);
    let pairs = exponent_pairs(cfg);
    let mut worst = f64::INFINITY;
    let mut equality_defect = 0.0f64;
    for trial in 0..cfg.trials {
        let positive = trial % 2 == 1;
        let f = positivity_field(cfg, trial, positive)?;
        for &(s, p) in &pairs {
            let (lhs, rhs) = positivity_difference(&f, s, p, cfg.padding)?;
            let scale = lhs.abs() + rhs.abs();
            let rel = if scale > 0.0 {
                (lhs - rhs) / scale
            } else {
                0.0
            };
            worst = worst.min(rel);
            if p == 2.0 && positive {
                equality_defect = equality_defect.max(rel.abs());
            }
            let kind = if positive { "positive" } else { "signed" };
            report.trial(format!("s={s} p={p} field={kind} trial={trial}"), lhs, rhs);
        }
    }
    report.fit(FitRecord::at_least(
        "min relative difference",
        worst,
        -1e-10,
    ));
    if cfg.p.contains(&2.0) && cfg.trials > 1 {
        report.fit(FitRecord::at_most(
            "p=2 equality defect (one-signed f)",
            equality_defect,
            1e-12,
        ));
    }
    report.note("at p = 2 the two sides agree only for one-signed f; sign-changing f are tested for the inequality");
    Ok(report.finish())
}

/// Decay rates `r = −log(‖e^{−tΛ^κ}Δ_ju‖_p/‖Δ_ju‖_p)/t` normalized by
/// `2^{κj}`. For each `(t, p, κ)` the largest and smallest normalized rate
/// over `j` and trials give `c₁` and `c₂`; `c₁/c₂` must stay within `2^κ·1.1`.
pub fn check_heat_kernel(cfg: &CheckConfig) -> Result<InequalityReport> {
    let grid = check_grid(cfg)?;
    let sys = build_system(grid, 1.0)?;
    check_j_range(&sys, cfg)?;
    if let Some(&t) = cfg.times.iter().find(|t| !(**t > 0.0)) {
        return Err(Error::Config(format!(
            "heat-kernel times must be positive, got {t}"
        )));
    }
    let mut report = InequalityReport::new(cfg);
    let (lo, hi) = cfg.j_range;
    let mut skipped = 0usize;
    for &kappa in &cfg.kappa {
        let mut all_rates = Vec::new();
        for &p in &cfg.p {
            for &t in &cfg.times {
                let mut rates = Vec::new();
                for trial in 0..cfg.trials {
                    for j in lo..=hi {
                        let seed = cfg.seed.wrapping_add((trial * 64) as u64 + (j - lo) as u64);
                        let u = random_field(grid, seed, |_| 1.0);
                        let d = sys.delta_j(&u, j)?;
                        let before = lp_norm(&inverse_transform(&d)?, p)?;
                        if before == 0.0 {
                            skipped += 1;
                            continue;
                        }
                        let after =
                            lp_norm(&inverse_transform(&heat_semigroup(&d, t, kappa)?)?, p)?;
                        let r = -(after / before).ln() / t;
                        report.trial(
                            format!("kappa={kappa} p={p} t={t} j={j} trial={trial}"),
                            after,
                            before,
                        );
                        rates.push(r / 2f64.powf(kappa * j as f64));
                    }
                }
                all_rates.extend_from_slice(&rates);
                let (c2, c1) = min_max(rates);
                let tag = format!("kappa={kappa} p={p} t={t}");
                report.fit(FitRecord::info(format!("c1 {tag}"), c1));
                report.fit(FitRecord::at_least(
                    format!("c2 {tag}"),
                    c2,
                    f64::MIN_POSITIVE,
                ));
                report.fit(FitRecord::at_most(
                    format!("c1/c2 {tag}"),
                    c1 / c2,
                    2f64.powf(kappa) * 1.1,
                ));
            }
        }
        let (c2, c1) = min_max(all_rates);
        report.fit(FitRecord::at_most(
            format!("c1/c2 kappa={kappa} over all p and t"),
            c1 / c2,
            2f64.powf(kappa) * 1.1,
        ));
    }
    if skipped > 0 {
        report.note(format!("{skipped} trials skipped with zero block norm"));
    }
    Ok(report.finish())
}

/// `‖G_γΛ^αΔ_jf‖_p / (‖Λ^αΔ_jf‖_p + γ^{−(1−κ/α)}‖G_γΛ^κΔ_jf‖_p)` over the
/// `(j, γ)` sweep, capped by `constant_cap`. The smallest prefactor of the
/// second term that makes the ratio at most 1 is fitted against `γ` and its
/// log-log slope reported.
pub fn check_lin_gevrey(cfg: &CheckConfig) -> Result<InequalityReport> {
    let grid = check_grid(cfg)?;
    let sys = build_system(grid, 1.0)?;
    check_j_range(&sys, cfg)?;
    let (alpha, kappa) = match (cfg.alpha.as_slice(), cfg.kappa.as_slice()) {
        ([a], [k]) => (*a, *k),
        _ => {
            return Err(Error::Config(
                "lin-gevrey takes a single alpha and a single kappa".into(),
            ))
        }
    };
    if !(0.0 < alpha && alpha < kappa) {
        return Err(Error::Config(format!(
            "lin-gevrey needs 0 < alpha < kappa, got alpha={alpha}, kappa={kappa}"
        )));
    }
    let mut report = InequalityReport::new(cfg);
    let (lo, hi) = cfg.j_range;
    let mut worst = 0.0f64;
    let mut overflow = 0usize;
    let mut prefactors: Vec<(f64, f64)> = Vec::new();
    for &gamma in &cfg.gamma {
        let weight = gamma.powf(-(1.0 - kappa / alpha));
        let mut needed = 0.0f64;
        for j in lo..=hi {
            for trial in 0..cfg.trials {
                let f = random_band_limited(
                    grid,
                    j,
                    cfg.seed.wrapping_add((trial * 64) as u64 + (j - lo) as u64),
                )?;
                let d = sys.delta_j(&f, j)?;
                let la = fractional_laplacian(&d, alpha)?;
                let lk = fractional_laplacian(&d, kappa)?;
                let (gla, glk) = match (
                    gevrey_multiply(&la, gamma, alpha),
                    gevrey_multiply(&lk, gamma, alpha),
                ) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(Error::GevreyOverflow { .. }), _)
                    | (_, Err(Error::GevreyOverflow { .. })) => {
                        overflow += 1;
                        continue;
                    }
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                };
                let (la, gla, glk) = (
                    inverse_transform(&la)?,
                    inverse_transform(&gla)?,
                    inverse_transform(&glk)?,
                );
                for &p in &cfg.p {
                    let lhs = lp_norm(&gla, p)?;
                    let a = lp_norm(&la, p)?;
                    let b = lp_norm(&glk, p)?;
                    let rhs = a + weight * b;
                    worst = worst.max(lhs / rhs);
                    needed = needed.max(((lhs - a) / b).max(0.0));
                    report.trial(format!("gamma={gamma} j={j} p={p} trial={trial}"), lhs, rhs);
                }
            }
        }
        report.fit(FitRecord::info(
            format!("needed prefactor gamma={gamma}"),
            needed,
        ));
        if needed > 0.0 {
            prefactors.push((gamma.ln(), needed.ln()));
        }
    }
    report.fit(FitRecord::at_most("max ratio", worst, cfg.constant_cap));
    if prefactors.len() >= 2 {
        let (x, y): (Vec<f64>, Vec<f64>) = prefactors.into_iter().unzip();
        if let Some(fit) = crate::fit::fit_line(&x, &y) {
            report.fit(
                FitRecord::info("fitted gamma exponent of prefactor", fit.slope)
                    .with_residual(fit.residual),
            );
            report.fit(FitRecord::info(
                "stated gamma exponent",
                -(1.0 - kappa / alpha),
            ));
        }
    }
    if overflow > 0 {
        report.note(format!(
            "{overflow} trials skipped by the Gevrey overflow guard"
        ));
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use crate::verify::CheckId;

    fn small(check: CheckId) -> CheckConfig {
        CheckConfig {
            n: 32,
            j_range: (0, 3),
            trials: 8,
            ..CheckConfig::default_for(check)
        }
    }

    #[test]
    fn bernstein_s_zero_gives_unit_ratio() {
        let cfg = CheckConfig {
            s: vec![0.0],
            ..small(CheckId::Bernstein)
        };
        let r = check_bernstein(&cfg, false).unwrap();
        for t in &r.trials {
            assert!((t.ratio - 1.0).abs() < 1e-12);
        }
        assert!(r.passed());
    }

    #[test]
    fn bernstein_single_mode_ratio() {
        // Single mode at |k| = 3 in block j = 1: ratio is (3/2)^s.
        let grid = Grid::periodic(32).unwrap();
        let f = SpectralField::cosine(grid, (3, 0), 1.0);
        let s = 0.5;
        let lifted = inverse_transform(&fractional_laplacian(&f, s).unwrap()).unwrap();
        let base = lp_norm(&inverse_transform(&f).unwrap(), 4.0).unwrap();
        let ratio = lp_norm(&lifted, 4.0).unwrap() / (2f64.powf(s) * base);
        assert!((ratio - 1.5f64.powf(s)).abs() < 1e-12);
    }

    #[test]
    fn bernstein_rejects_unresolved_band() {
        let cfg = CheckConfig {
            j_range: (0, 9),
            ..small(CheckId::Bernstein)
        };
        assert!(matches!(
            check_bernstein(&cfg, false),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn positivity_equality_for_positive_field_at_p2() {
        let cfg = small(CheckId::Positivity);
        let f = positivity_field(&cfg, 3, true).unwrap();
        let (lhs, rhs) = positivity_difference(&f, 0.5, 2.0, false).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12 * (lhs + rhs));
    }

    #[test]
    fn positivity_single_mode_p4() {
        let grid = Grid::periodic(32).unwrap();
        let f = SpectralField::cosine(grid, (2, 1), 1.0);
        let (lhs, rhs) = positivity_difference(&f, 0.5, 4.0, true).unwrap();
        assert!(lhs - rhs >= 0.0);
    }

    #[test]
    fn heat_kernel_single_mode_rate() {
        let grid = Grid::periodic(32).unwrap();
        let f = SpectralField::cosine(grid, (4, 0), 1.0);
        let (t, kappa) = (0.3, 0.8);
        let after = lp_norm(
            &inverse_transform(&heat_semigroup(&f, t, kappa).unwrap()).unwrap(),
            4.0,
        )
        .unwrap();
        let before = lp_norm(&inverse_transform(&f).unwrap(), 4.0).unwrap();
        let r = -(after / before).ln() / t;
        assert!((r - 4f64.powf(kappa)).abs() < 1e-10);
    }

    #[test]
    fn lin_gevrey_single_mode_closed_form() {
        // Single mode |k| = r: left/right = G/(r^{α}·... ) in closed form.
        let grid = Grid::periodic(32).unwrap();
        let (alpha, kappa, gamma) = (0.3, 0.8, 0.1);
        let f = SpectralField::cosine(grid, (5, 0), 1.0);
        let la = fractional_laplacian(&f, alpha).unwrap();
        let gla = gevrey_multiply(&la, gamma, alpha).unwrap();
        let glk = gevrey_multiply(&fractional_laplacian(&f, kappa).unwrap(), gamma, alpha).unwrap();
        let n2 = |h: &SpectralField| h.l2_norm();
        let measured = n2(&gla) / (n2(&la) + gamma.powf(kappa / alpha - 1.0) * n2(&glk));
        let r: f64 = 5.0;
        let g = (gamma * r.powf(alpha)).exp();
        let expected = g * r.powf(alpha)
            / (r.powf(alpha) + gamma.powf(kappa / alpha - 1.0) * g * r.powf(kappa));
        assert!((measured - expected).abs() < 1e-12 * expected);
    }
}
