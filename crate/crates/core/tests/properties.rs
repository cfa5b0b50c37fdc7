use approx::assert_relative_eq;
use proptest::prelude::*;

use sqg_core::bilinear::{
    apply_bilinear, dilate, marcinkiewicz_check, rotation_dual, BilinearSymbol, ProbeSpec,
};
use sqg_core::gevrey::{fractional_laplacian, gevrey_multiply, heat_semigroup};
use sqg_core::littlewood_paley::{besov_norm, BesovParams, DyadicSystem};
use sqg_core::solver::{solve_from, Dealias, SolverConfig};
use sqg_core::spectral::{forward_transform, inverse_transform, random_field, Grid};
use sqg_core::verify::{concavity_f, concavity_g, in_concavity_region};
use sqg_core::SpectralField;

fn field(n: usize, seed: u64) -> SpectralField {
    random_field(Grid::periodic(n).unwrap(), seed, |k| 1.0 / (1.0 + k * k))
}

fn close(a: &SpectralField, b: &SpectralField, tol: f64) -> bool {
    a.sub(b).unwrap().max_abs() <= tol * a.max_abs().max(b.max_abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval_and_round_trip(seed in any::<u64>(), log_n in 3u32..7) {
        let n = 1usize << log_n;
        let f = field(n, seed);
        let real = inverse_transform(&f).unwrap();
        let sum: f64 = real.values().iter().map(|v| v * v).sum::<f64>() * f.grid().cell_area();
        assert_relative_eq!(sum, f.energy(), max_relative = 1e-12);
        prop_assert!(close(&forward_transform(&real), &f, 1e-12));
    }

    #[test]
    fn fractional_powers_compose(seed in any::<u64>(), a in -1.0f64..2.0, b in -1.0f64..2.0) {
        let f = field(16, seed);
        let two_step = fractional_laplacian(&fractional_laplacian(&f, a).unwrap(), b).unwrap();
        let one_step = fractional_laplacian(&f, a + b).unwrap();
        prop_assert!(close(&two_step, &one_step, 1e-12));
    }

    #[test]
    fn heat_semigroup_property(seed in any::<u64>(), s in 0.0f64..1.0, t in 0.0f64..1.0, kappa in 0.2f64..1.0) {
        let f = field(16, seed);
        let lhs = heat_semigroup(&heat_semigroup(&f, s, kappa).unwrap(), t, kappa).unwrap();
        let rhs = heat_semigroup(&f, s + t, kappa).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn gevrey_multipliers_invert(seed in any::<u64>(), gamma in 0.0f64..1.0, alpha in 0.1f64..1.0) {
        let f = field(32, seed);
        let there = gevrey_multiply(&f, gamma, alpha).unwrap();
        let back = gevrey_multiply(&there, -gamma, alpha).unwrap();
        prop_assert!(close(&back, &f, 1e-12));
    }

    #[test]
    fn blocks_are_linear(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0, j in 0i32..4) {
        let sys = DyadicSystem::new(Grid::periodic(32).unwrap()).unwrap();
        let (f, g) = (field(32, seed), field(32, seed.wrapping_add(1)));
        let lhs = sys.delta_j(&f.combine(a, &g, b).unwrap(), j).unwrap();
        let rhs = sys.delta_j(&f, j).unwrap().combine(a, &sys.delta_j(&g, j).unwrap(), b).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn besov_q_monotone_and_homogeneous(seed in any::<u64>(), s in -1.0f64..2.0, p in 1.0f64..6.0, c in 0.1f64..10.0) {
        let sys = DyadicSystem::new(Grid::periodic(32).unwrap()).unwrap();
        let f = field(32, seed);
        let norm = |q: f64, h: &SpectralField| besov_norm(&sys, h, BesovParams::new(s, p, q).unwrap()).unwrap().value;
        let (n1, n2, ninf) = (norm(1.0, &f), norm(2.0, &f), norm(f64::INFINITY, &f));
        prop_assert!(n1 >= n2 * (1.0 - 1e-12) && n2 >= ninf * (1.0 - 1e-12));
        assert_relative_eq!(norm(2.0, &f.scaled(c)), c * n2, max_relative = 1e-12);
    }

    #[test]
    fn bilinear_operator_is_bilinear(seed in any::<u64>(), a in -2.0f64..2.0) {
        let m = BilinearSymbol::real("test", None, |xi, eta| 1.0 / (1.0 + xi[0] * xi[0] + 2.0 * eta[1].abs()));
        let (f, h, g) = (field(8, seed), field(8, seed ^ 1), field(8, seed ^ 2));
        let lhs = apply_bilinear(&m, &f.combine(1.0, &h, a).unwrap(), &g).unwrap();
        let rhs = apply_bilinear(&m, &f, &g).unwrap().combine(1.0, &apply_bilinear(&m, &h, &g).unwrap(), a).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
        let lhs = apply_bilinear(&m, &g, &f.combine(1.0, &h, a).unwrap()).unwrap();
        let rhs = apply_bilinear(&m, &g, &f).unwrap().combine(1.0, &apply_bilinear(&m, &g, &h).unwrap(), a).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn rotation_dual_substitution_twice(x in prop::array::uniform4(-5.0f64..5.0)) {
        let m = BilinearSymbol::real("test", None, |xi, eta| (xi[0] - 2.0 * eta[1]).sin() + eta[0]);
        let twice = rotation_dual(&rotation_dual(&m));
        let (xi, eta) = ([x[0], x[1]], [x[2], x[3]]);
        prop_assert!((twice.eval(xi, eta) - m.eval(xi, eta)).norm() < 1e-12);
    }

    #[test]
    fn concavity_lower_bound(x in prop::array::uniform4(-10.0f64..10.0), alpha in 0.1f64..0.95, c in 0.25f64..3.0) {
        let (xi, eta) = ([x[0], x[1]], [x[2], x[3]]);
        prop_assume!(eta[0].hypot(eta[1]) > 1e-3);
        prop_assume!(in_concavity_region(xi, eta, c));
        let eps = concavity_g(alpha, c).min(concavity_g(alpha, -c));
        let scale = eta[0].hypot(eta[1]).powf(alpha);
        prop_assert!(concavity_f(alpha, xi, eta) >= eps * scale - 1e-12 * scale);
    }

    #[test]
    fn solver_keeps_mean_zero_and_dissipates(seed in 0u64..1000, amplitude in 0.01f64..2.0) {
        let grid = Grid::periodic(32).unwrap();
        let config = SolverConfig {
            grid,
            kappa: 0.8,
            dt: 0.01,
            t_end: 0.1,
            dealias: Dealias::TwoThirds,
            record_every: 1,
            ..SolverConfig::default()
        };
        let theta0 = random_field(grid, seed, |k| if k < 8.0 { amplitude / (1.0 + k) } else { 0.0 });
        let traj = solve_from(&config, theta0).unwrap();
        for (_, f) in &traj.snapshots {
            prop_assert_eq!(f.coeffs()[0].norm(), 0.0);
        }
        for w in traj.diagnostics.windows(2) {
            prop_assert!(w[1].l2 <= w[0].l2 + 1e-8 * (w[1].t - w[0].t));
        }
    }
}

#[test]
fn marcinkiewicz_table_is_dilation_invariant() {
    let m = BilinearSymbol::real("angle", None, |xi, eta| {
        xi[0] / xi[0].hypot(xi[1]) + (eta[1] / eta[0].hypot(eta[1])).powi(2)
    });
    let probes = ProbeSpec::default();
    let base = marcinkiewicz_check(&m, 2, &probes);
    for lambda in [0.25, 4.0] {
        let table = marcinkiewicz_check(&dilate(&m, lambda).unwrap(), 2, &probes);
        for (a, b) in base.entries.iter().zip(&table.entries) {
            assert!((a.max_weighted - b.max_weighted).abs() <= 1e-4 * (1.0 + a.max_weighted));
        }
    }
}
