//! Checks on explicit symbols: the concavity bound, derivative bounds for
//! the Gevrey exponent difference, and the bilinear multiplier identities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{min_max, CheckConfig, FitRecord, InequalityReport};
use crate::bilinear::{
    apply_bilinear, build_symbol, dilate, estimate_operator_norm, marcinkiewicz_check, pairing,
    rotation_dual, BilinearSymbol, ProbeSpec,
};
use crate::spectral::{random_field, Grid};
use crate::{Error, Result, Vec2};

fn norm(v: Vec2) -> f64 {
    v[0].hypot(v[1])
}

/// `g(x) = |x|^α + 1 − |x+1|^α`.
pub fn concavity_g(alpha: f64, x: f64) -> f64 {
    x.abs().powf(alpha) + 1.0 - (x + 1.0).abs().powf(alpha)
}

/// `|ξ|^α + |η|^α − |ξ+η|^α`.
pub fn concavity_f(alpha: f64, xi: Vec2, eta: Vec2) -> f64 {
    norm(xi).powf(alpha) + norm(eta).powf(alpha)
        - norm([xi[0] + eta[0], xi[1] + eta[1]]).powf(alpha)
}

/// Whether `(ξ, η)` lies in the scanned region `|ξ| ≥ c|η|`.
pub fn in_concavity_region(xi: Vec2, eta: Vec2, c: f64) -> bool {
    norm(xi) >= c * norm(eta)
}

const RADII: usize = 400;
const ANGLES: usize = 720;
const DECADES: f64 = 4.0;

/// Brute-force minima of `f(ξ,η)/|η|^α` over a polar grid with `|ξ|/|η| ≥ c`
/// and of `g` over `|x| ≥ c`. The closed-form minimum of `g` on that set is
/// `min{g(−c), g(c)}`, which the scan must reproduce; `ε > 0` is the verdict.
pub fn check_concavity(cfg: &CheckConfig) -> Result<InequalityReport> {
    if let Some(&a) = cfg.alpha.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        return Err(Error::Config(format!(
            "concavity needs 0 < alpha < 1, got {a}"
        )));
    }
    if let Some(&c) = cfg.c.iter().find(|c| !(**c > 0.0)) {
        return Err(Error::Config(format!("concavity needs c > 0, got {c}")));
    }
    let mut report = InequalityReport::new(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for &alpha in &cfg.alpha {
        for &c in &cfg.c {
            let tag = format!("alpha={alpha} c={c}");
            let eta = [1.0, 0.0];
            let mut eps_2d = f64::INFINITY;
            let mut eps_1d = f64::INFINITY;
            for i in 0..RADII {
                let rho = c * 10f64.powf(DECADES * i as f64 / (RADII - 1) as f64);
                for a in 0..ANGLES {
                    let th = std::f64::consts::TAU * a as f64 / ANGLES as f64;
                    let xi = [rho * th.cos(), rho * th.sin()];
                    eps_2d = eps_2d.min(concavity_f(alpha, xi, eta));
                }
                eps_1d = eps_1d
                    .min(concavity_g(alpha, rho))
                    .min(concavity_g(alpha, -rho));
            }
            let closed = concavity_g(alpha, c).min(concavity_g(alpha, -c));
            report.trial(format!("{tag} plane"), eps_2d, closed);
            report.trial(format!("{tag} line"), eps_1d, closed);
            report.fit(FitRecord::at_least(
                format!("epsilon {tag}"),
                eps_2d,
                f64::MIN_POSITIVE,
            ));
            report.fit(FitRecord::at_most(
                format!("line minimum vs min(g(-c), g(c)) {tag}"),
                (eps_1d - closed).abs(),
                1e-12,
            ));
            report.fit(FitRecord::at_least(
                format!("plane minimum minus closed form {tag}"),
                eps_2d - closed,
                -1e-12,
            ));
        }
    }
    if cfg.alpha.contains(&0.5) {
        let g1 = concavity_g(0.5, 1.0);
        report.trial("g(1) at alpha=1/2", g1, 2.0 - 2f64.sqrt());
        report.fit(FitRecord::at_most(
            "|g(1) - (2 - sqrt 2)| at alpha=1/2",
            (g1 - (2.0 - 2f64.sqrt())).abs(),
            1e-12,
        ));
    }
    let mut rotation_defect = 0.0f64;
    for _ in 0..cfg.trials.max(10) {
        let alpha = cfg.alpha[rng.gen_range(0..cfg.alpha.len())];
        let xi = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        let eta = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let rot = |v: Vec2| {
            [
                th.cos() * v[0] - th.sin() * v[1],
                th.sin() * v[0] + th.cos() * v[1],
            ]
        };
        let a = concavity_f(alpha, xi, eta);
        let b = concavity_f(alpha, rot(xi), rot(eta));
        let scale = norm(xi).powf(alpha) + norm(eta).powf(alpha);
        rotation_defect = rotation_defect.max((a - b).abs() / scale);
    }
    report.fit(FitRecord::at_most(
        "rotation invariance defect",
        rotation_defect,
        1e-12,
    ));
    Ok(report.finish())
}

/// `R_{α,σ}(ξ,η) = |ξ+ησ|^α − |ξ|^α − |η|^α`.
pub fn r_symbol(alpha: f64, sigma: f64) -> BilinearSymbol {
    BilinearSymbol::real(
        format!("R(alpha={alpha}, sigma={sigma})"),
        None,
        move |xi, eta| {
            norm([xi[0] + sigma * eta[0], xi[1] + sigma * eta[1]]).powf(alpha)
                - norm(xi).powf(alpha)
                - norm(eta).powf(alpha)
        },
    )
}

/// `R_{α,1}(ξ, −ξ−η) = |η|^α − |ξ|^α − |ξ+η|^α`.
pub fn r_symbol_reflected(alpha: f64) -> BilinearSymbol {
    BilinearSymbol::real(
        format!("R(alpha={alpha}, sigma=1)(xi, -xi-eta)"),
        None,
        move |xi, eta| {
            norm(eta).powf(alpha)
                - norm(xi).powf(alpha)
                - norm([xi[0] + eta[0], xi[1] + eta[1]]).powf(alpha)
        },
    )
}

fn dyadic_scales(k: i32) -> Vec<f64> {
    [0.5, 1.0, 2.0].iter().map(|f| f * 2f64.powi(k)).collect()
}

/// Weighted derivative maxima of `R_{α,σ}` with `|ξ| ∼ 2^k`, `|η| ∼ 2^ℓ`,
/// divided by `2^{ℓα}`, and of the reflected variant with `|ξ| ∼ 2^k`,
/// `|η| ∼ 2^j`, divided by `2^{kα}`. Every normalized maximum must stay
/// under `constant_cap` over the whole `(k−ℓ, ℓ, σ, α)` sweep.
pub fn check_r_derivatives(cfg: &CheckConfig) -> Result<InequalityReport> {
    if let Some(&d) = cfg.separations.iter().find(|d| **d < 3) {
        return Err(Error::Config(format!(
            "scale separation k - l must be at least 3, got {d}"
        )));
    }
    if let Some(&s) = cfg.sigma.iter().find(|s| !(0.0..=1.0).contains(*s)) {
        return Err(Error::Config(format!("sigma must lie in [0, 1], got {s}")));
    }
    let mut report = InequalityReport::new(cfg);
    let directions = cfg.trials.max(1);
    let mut main = Vec::new();
    let mut reflected = Vec::new();
    let mut by_order = vec![0.0f64; cfg.max_order as usize + 1];
    let mut flagged = 0usize;
    let (lo, hi) = cfg.j_range;
    for &alpha in &cfg.alpha {
        for &sep in &cfg.separations {
            for low in lo..=hi {
                let high = low + sep;
                let probes = ProbeSpec {
                    xi_scales: dyadic_scales(high),
                    eta_scales: dyadic_scales(low),
                    directions,
                    paired: false,
                };
                for &sigma in &cfg.sigma {
                    let table =
                        marcinkiewicz_check(&r_symbol(alpha, sigma), cfg.max_order, &probes);
                    flagged += usize::from(table.flagged());
                    let weight = 2f64.powf(low as f64 * alpha);
                    for e in &table.entries {
                        let o = e.order() as usize;
                        by_order[o] = by_order[o].max(e.max_weighted / weight);
                    }
                    let worst = table
                        .entries
                        .iter()
                        .map(|e| e.max_weighted)
                        .fold(0.0, f64::max);
                    report.trial(
                        format!("R alpha={alpha} sigma={sigma} k-l={sep} l={low}"),
                        worst,
                        weight,
                    );
                    main.push(worst / weight);
                }
                let table = marcinkiewicz_check(&r_symbol_reflected(alpha), cfg.max_order, &probes);
                flagged += usize::from(table.flagged());
                let weight = 2f64.powf(high as f64 * alpha);
                let worst = table
                    .entries
                    .iter()
                    .map(|e| e.max_weighted)
                    .fold(0.0, f64::max);
                report.trial(
                    format!("R-reflected alpha={alpha} k-j={sep} j={low}"),
                    worst,
                    weight,
                );
                reflected.push(worst / weight);
            }
        }
    }
    let (main_lo, main_hi) = min_max(main);
    let (_, refl_hi) = min_max(reflected);
    for (o, v) in by_order.iter().enumerate() {
        report.fit(FitRecord::info(
            format!("max normalized entry of order {o}"),
            *v,
        ));
    }
    report.fit(FitRecord::info("smallest normalized maximum", main_lo));
    report.fit(FitRecord::at_most(
        "normalized maximum",
        main_hi,
        cfg.constant_cap,
    ));
    report.fit(FitRecord::at_most(
        "normalized maximum, reflected variant",
        refl_hi,
        cfg.constant_cap,
    ));
    report.fit(FitRecord::at_most(
        "non-finite probe tables",
        flagged as f64,
        0.0,
    ));
    Ok(report.finish())
}

/// Duality identity on random triples, dilation invariance of the norm
/// estimate, and grid stability of the norm estimates for the registered
/// localized symbols.
pub fn check_bilinear(cfg: &CheckConfig) -> Result<InequalityReport> {
    let grid = Grid::new(cfg.n, cfg.box_length)?;
    let mut report = InequalityReport::new(cfg);
    let p = *cfg
        .p
        .first()
        .ok_or_else(|| Error::Config("bilinear check needs an exponent p".into()))?;
    let gamma = cfg.gamma.first().copied().unwrap_or(0.1);
    let alpha = cfg.alpha.first().copied().unwrap_or(0.5);
    let params = |extra: &[(&str, f64)]| -> Vec<(String, f64)> {
        let mut v = vec![("gamma".to_string(), gamma), ("alpha".to_string(), alpha)];
        v.extend(extra.iter().map(|(k, x)| (k.to_string(), *x)));
        v
    };
    let symbols = [
        build_symbol("kgtrj", &params(&[]))?,
        build_symbol("ksimj", &params(&[]))?,
        build_symbol("mA", &params(&[]))?,
        build_symbol("mB", &params(&[]))?,
    ];

    // Duality: <T_m(f,g), h> = <T_m~(f,h), g>. The variant with the first
    // and third slots exchanged is reported alongside.
    let asymmetric = BilinearSymbol::real("asymmetric test symbol", None, |xi, eta| {
        (1.0 + xi[0] - 0.5 * eta[1]).exp() / (1.0 + norm(xi) + 2.0 * norm(eta))
    });
    let mut defect = 0.0f64;
    let mut swapped_defect = 0.0f64;
    for trial in 0..cfg.trials {
        let m = if trial % 2 == 0 {
            &asymmetric
        } else {
            &symbols[trial / 2 % symbols.len()]
        };
        let dual = rotation_dual(m);
        let seed = cfg.seed.wrapping_add(3 * trial as u64);
        let f = random_field(grid, seed, |_| 1.0);
        let g = random_field(grid, seed + 1, |_| 1.0);
        let h = random_field(grid, seed + 2, |_| 1.0);
        let lhs = pairing(&apply_bilinear(m, &f, &g)?, &h)?;
        let rhs = pairing(&apply_bilinear(&dual, &f, &h)?, &g)?;
        let swapped = pairing(&apply_bilinear(&dual, &h, &g)?, &f)?;
        let scale = lhs.norm().max(rhs.norm()).max(1e-300);
        defect = defect.max((lhs - rhs).norm() / scale);
        swapped_defect = swapped_defect.max((lhs - swapped).norm() / scale);
        report.trial(
            format!("duality trial={trial} {}", m.description()),
            lhs.re,
            rhs.re,
        );
    }
    report.fit(FitRecord::at_most("duality defect", defect, 1e-10));
    report.fit(FitRecord::info(
        "defect with h and f exchanged",
        swapped_defect,
    ));

    // Dilation: T_{m_λ} on the box λL against T_m on the box L, same seed.
    let base = &symbols[0];
    let reference = estimate_operator_norm(base, grid, p, p, cfg.trials, cfg.seed)?;
    for lambda in [0.25, 4.0] {
        let scaled_grid = Grid::new(cfg.n, cfg.box_length * lambda)?;
        let est = estimate_operator_norm(
            &dilate(base, lambda)?,
            scaled_grid,
            p,
            p,
            cfg.trials,
            cfg.seed,
        )?;
        report.trial(
            format!("dilation lambda={lambda}"),
            est.value,
            reference.value,
        );
        report.fit(FitRecord::at_most(
            format!("dilation relative change lambda={lambda}"),
            (est.value / reference.value - 1.0).abs(),
            0.1,
        ));
    }
    let reseeded = estimate_operator_norm(base, grid, p, p, cfg.trials, cfg.seed.wrapping_add(17))?;
    report.fit(FitRecord::info(
        "estimator seed spread (relative change under a new seed)",
        (reseeded.value / reference.value - 1.0).abs(),
    ));

    // Grid stability: the same physical frequencies sampled twice as densely.
    let fine = Grid::new(2 * cfg.n, 2.0 * cfg.box_length)?;
    for m in &symbols {
        let coarse = estimate_operator_norm(m, grid, p, p, cfg.trials, cfg.seed)?;
        let dense = estimate_operator_norm(m, fine, p, p, cfg.trials, cfg.seed)?;
        report.trial(
            format!(
                "norm estimate {} n={} vs n={}",
                m.description(),
                cfg.n,
                2 * cfg.n
            ),
            dense.value,
            coarse.value,
        );
        let ratio = dense.value.max(coarse.value) / dense.value.min(coarse.value);
        report.fit(FitRecord::info(
            format!("norm estimate {} n={}", m.description(), cfg.n),
            coarse.value,
        ));
        report.fit(FitRecord::at_most(
            format!("grid spread {}", m.description()),
            ratio,
            2.0,
        ));
    }

    let table = marcinkiewicz_check(base, 2, &ProbeSpec::default());
    report.fit(FitRecord::info(
        format!("largest weighted derivative of {}", base.description()),
        table.max_derivative_entry(),
    ));
    report.note("dilated symbols are compared on the correspondingly rescaled box with the same seed, where both sample the same frequencies");
    Ok(report.finish())
}
