//! Decay of the Gevrey commutator `[G_γΔ_j, f]g` in `j`.

use super::{check_grid, check_j_range, CheckConfig, FitRecord, InequalityReport};
use crate::bilinear::gevrey_commutator;
use crate::fit::fit_line;
use crate::gevrey::gevrey_multiply;
use crate::littlewood_paley::{besov_norm, build_system, BesovParams, DyadicSystem};
use crate::spectral::{lp_norm, random_field, SpectralField};
use crate::{Error, Result};

/// Names the first violated hypothesis on `(s, t, p, δ)`, if any.
pub fn violated_hypothesis(s: f64, t: f64, p: f64, delta: f64) -> Option<(&'static str, String)> {
    let b = 2.0 / p;
    if !(b < s && s < 1.0 + b - delta) {
        return Some((
            "(i)",
            format!("need 2/p < s < 1 + 2/p - delta, got s={s}, 2/p={b}, delta={delta}"),
        ));
    }
    if !(t < b) {
        return Some(("(ii)", format!("need t < 2/p, got t={t}, 2/p={b}")));
    }
    if !(s + t > b) {
        return Some((
            "(iii)",
            format!("need s + t > 2/p, got s+t={}, 2/p={b}", s + t),
        ));
    }
    None
}

/// `‖[G_γΔ_j, f]g‖_{L^p}` for every `j` in `range`.
pub fn commutator_profile(
    sys: &DyadicSystem,
    f: &SpectralField,
    g: &SpectralField,
    gamma: f64,
    alpha: f64,
    p: f64,
    range: (i32, i32),
) -> Result<Vec<f64>> {
    (range.0..=range.1)
        .map(|j| lp_norm(&gevrey_commutator(sys, f, g, j, gamma, alpha)?, p))
        .collect()
}

/// Seeded pair with `|f̂| ∼ |k|^{−s−1}`, `|ĝ| ∼ |k|^{−t−1}`, both damped by
/// `G_{−γ'}` so every Gevrey norm the check uses is finite.
fn test_pair(
    cfg: &CheckConfig,
    s: f64,
    t: f64,
    damping: f64,
    alpha: f64,
    trial: usize,
) -> Result<(SpectralField, SpectralField)> {
    let grid = check_grid(cfg)?;
    let seed = cfg.seed.wrapping_add(2 * trial as u64);
    let f = random_field(grid, seed, |k| k.powf(-s - 1.0));
    let g = random_field(grid, seed + 1, |k| k.powf(-t - 1.0));
    Ok((
        gevrey_multiply(&f, -damping, alpha)?,
        gevrey_multiply(&g, -damping, alpha)?,
    ))
}

/// Mean `log₂‖[G_γΔ_j, f]g‖_{L^p}` over trials, regressed on `j`. The
/// slope must not exceed `−(s+t−2/p) + slack` at `γ = 0` and
/// `−(s+t−2/p) + (α−δ) + slack` for `γ > 0`.
pub fn check_commutator_decay(cfg: &CheckConfig) -> Result<InequalityReport> {
    let grid = check_grid(cfg)?;
    let sys = build_system(grid, 1.0)?;
    check_j_range(&sys, cfg)?;
    let alpha = match cfg.alpha.as_slice() {
        [a] => *a,
        _ => {
            return Err(Error::Config(
                "commutator-decay takes a single alpha".into(),
            ))
        }
    };
    if cfg.triples.is_empty() || cfg.gamma.is_empty() {
        return Err(Error::Config(
            "commutator-decay needs at least one (s, t, p) triple and one gamma".into(),
        ));
    }
    if !(cfg.delta > 0.0 && cfg.delta < alpha) {
        return Err(Error::Config(format!(
            "need 0 < delta < alpha, got delta={}",
            cfg.delta
        )));
    }
    let mut report = InequalityReport::new(cfg);
    for &[s, t, p] in &cfg.triples {
        if let Some((item, detail)) = violated_hypothesis(s, t, p, cfg.delta) {
            if cfg.enforce_hypotheses {
                return Err(Error::Hypothesis { item, detail });
            }
            report.note(format!("(s, t, p) = ({s}, {t}, {p}) violates hypothesis {item}: {detail}; run with hypotheses unenforced"));
        }
    }
    let max_gamma = cfg.gamma.iter().copied().fold(0.0, f64::max);
    let damping = max_gamma + 0.1;
    let (lo, hi) = cfg.j_range;
    let js: Vec<f64> = (lo..=hi).map(f64::from).collect();
    for &[s, t, p] in &cfg.triples {
        let critical = s + t - 2.0 / p;
        let pairs: Vec<_> = (0..cfg.trials)
            .map(|trial| test_pair(cfg, s, t, damping, alpha, trial))
            .collect::<Result<_>>()?;
        for &gamma in &cfg.gamma {
            let tag = format!("s={s} t={t} p={p} gamma={gamma}");
            let mut sums = vec![0.0; js.len()];
            let mut counts = vec![0usize; js.len()];
            let mut constant = 0.0f64;
            for (trial, (f, g)) in pairs.iter().enumerate() {
                let profile = commutator_profile(&sys, f, g, gamma, alpha, p, cfg.j_range)?;
                let fb = besov_norm(
                    &sys,
                    &gevrey_multiply(f, gamma, alpha)?,
                    BesovParams::new(s, p, 2.0)?,
                )?
                .value;
                let gb = besov_norm(
                    &sys,
                    &gevrey_multiply(g, gamma, alpha)?,
                    BesovParams::new(t, p, 2.0)?,
                )?
                .value;
                for (i, &v) in profile.iter().enumerate() {
                    let j = js[i];
                    let rhs = 2f64.powf(-critical * j) * fb * gb;
                    report.trial(format!("{tag} j={j} trial={trial}"), v, rhs);
                    constant = constant.max(v / rhs);
                    if v > 0.0 {
                        sums[i] += v.log2();
                        counts[i] += 1;
                    }
                }
            }
            report.fit(FitRecord::info(format!("fitted constant {tag}"), constant));
            if counts.iter().all(|&c| c == 0) {
                report.note(format!(
                    "{tag}: every commutator vanished; slope fit skipped"
                ));
                continue;
            }
            let (x, y): (Vec<f64>, Vec<f64>) = js
                .iter()
                .zip(sums.iter().zip(&counts))
                .filter(|(_, (_, &c))| c > 0)
                .map(|(&j, (&sum, &c))| (j, sum / c as f64))
                .unzip();
            let allowance = if gamma > 0.0 { alpha - cfg.delta } else { 0.0 };
            let bound = -critical + allowance + cfg.slope_slack;
            report.fit(FitRecord::slope_at_most(
                format!("log2 slope {tag}"),
                fit_line(&x, &y),
                bound,
            ));
        }
        if cfg.gamma.contains(&0.0) {
            let (f, g) = &pairs[0];
            let plain = commutator_profile(&sys, f, g, 0.0, alpha, p, cfg.j_range)?;
            let tiny = commutator_profile(&sys, f, g, 1e-4, alpha, p, cfg.j_range)?;
            let change = plain
                .iter()
                .zip(&tiny)
                .filter(|(a, _)| **a > 0.0)
                .map(|(a, b)| (b / a - 1.0).abs())
                .fold(0.0, f64::max);
            report.fit(FitRecord::at_most(
                format!("gamma=0 vs gamma=1e-4 s={s} t={t} p={p}"),
                change,
                0.01,
            ));
        }
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use crate::verify::CheckId;

    #[test]
    fn hypotheses_are_named() {
        assert!(violated_hypothesis(1.2, 0.3, 2.0, 0.1).is_none());
        assert_eq!(violated_hypothesis(0.9, 0.3, 2.0, 0.1).unwrap().0, "(i)");
        assert_eq!(violated_hypothesis(1.3, 0.5, 4.0, 0.1).unwrap().0, "(ii)");
        assert_eq!(violated_hypothesis(1.2, -0.5, 2.0, 0.1).unwrap().0, "(iii)");
    }

    #[test]
    fn enforced_hypothesis_is_a_config_error() {
        let cfg = CheckConfig {
            triples: vec![[1.3, 0.5, 4.0]],
            ..CheckConfig::default_for(CheckId::CommutatorDecay)
        };
        assert!(matches!(
            check_commutator_decay(&cfg),
            Err(Error::Hypothesis { item: "(ii)", .. })
        ));
    }

    #[test]
    fn constant_f_gives_zero_profile() {
        let grid = Grid::periodic(32).unwrap();
        let sys = build_system(grid, 1.0).unwrap();
        let f = SpectralField::from_modes(grid, &[((0, 0), 2.0.into())]);
        let g = random_field(grid, 4, |_| 1.0);
        let profile = commutator_profile(&sys, &f, &g, 0.1, 0.5, 2.0, (1, 3)).unwrap();
        assert!(profile.iter().all(|v| *v < 1e-12));
    }
}
