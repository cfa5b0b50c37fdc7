use sqg_core::verify::{run_check, CheckConfig, CheckId, Verdict, SUMMARY_HEADER};
use sqg_core::Error;

fn quick(id: CheckId) -> CheckConfig {
    let base = CheckConfig::default_for(id);
    match id {
        CheckId::Bernstein | CheckId::GeneralizedBernstein => CheckConfig {
            n: 32,
            j_range: (0, 3),
            trials: 24,
            ..base
        },
        CheckId::Positivity => CheckConfig { trials: 6, ..base },
        CheckId::HeatKernel => CheckConfig {
            n: 32,
            j_range: (1, 3),
            trials: 2,
            ..base
        },
        CheckId::LinGevrey => CheckConfig {
            n: 32,
            j_range: (0, 3),
            trials: 3,
            ..base
        },
        CheckId::CommutatorDecay => CheckConfig {
            n: 64,
            j_range: (1, 4),
            trials: 4,
            ..base
        },
        CheckId::Wellposedness => CheckConfig {
            n: 32,
            t_end: 0.5,
            picard_depth: 3,
            amplitudes: vec![0.01, 0.1],
            times: vec![1.0, 0.1, 0.01],
            ..base
        },
        CheckId::Bilinear => CheckConfig { trials: 6, ..base },
        _ => base,
    }
}

#[test]
fn every_check_passes_on_a_reduced_sweep() {
    for id in CheckId::ALL {
        let report = run_check(&quick(id)).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "{id}: {:#?}", report.fits);
        assert!(report.summary_row().starts_with(&format!("{id},pass,")));
        assert!(!report.trials.is_empty(), "{id}");
    }
    assert_eq!(SUMMARY_HEADER.split(',').count(), 4);
}

#[test]
fn reports_are_deterministic() {
    for id in [CheckId::Bernstein, CheckId::Bilinear, CheckId::Positivity] {
        let a = run_check(&quick(id)).unwrap().to_json().unwrap();
        let b = run_check(&quick(id)).unwrap().to_json().unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn gevrey_commutator_at_zero_gamma_is_the_classical_commutator() {
    use sqg_core::bilinear::gevrey_commutator;
    use sqg_core::littlewood_paley::DyadicSystem;
    use sqg_core::spectral::{forward_transform, inverse_transform, pad_to, random_field, Grid};

    let grid = Grid::periodic(32).unwrap();
    let fine = grid.refined(2).unwrap();
    let sys = DyadicSystem::new(grid).unwrap();
    let fine_sys = DyadicSystem::new(fine).unwrap();
    let f = random_field(grid, 5, |k| 1.0 / (1.0 + k * k));
    let g = random_field(grid, 6, |k| 1.0 / (1.0 + k));
    for j in 1..=3 {
        let ours = gevrey_commutator(&sys, &f, &g, j, 0.0, 0.5).unwrap();
        let (ff, gf) = (pad_to(&f, &fine).unwrap(), pad_to(&g, &fine).unwrap());
        let fr = inverse_transform(&ff).unwrap();
        let product = forward_transform(&fr.mul(&inverse_transform(&gf).unwrap()).unwrap());
        let first = inverse_transform(&fine_sys.delta_j(&product, j).unwrap()).unwrap();
        let second = fr
            .mul(&inverse_transform(&fine_sys.delta_j(&gf, j).unwrap()).unwrap())
            .unwrap();
        let oracle = first.sub(&second).unwrap();
        assert!(ours.sub(&oracle).unwrap().max_abs() <= 1e-12 * oracle.max_abs().max(1e-300));
    }
}

#[test]
fn hypothesis_violation_names_the_item() {
    let cfg = CheckConfig {
        triples: vec![[0.9, 0.3, 2.0]],
        ..quick(CheckId::CommutatorDecay)
    };
    match run_check(&cfg) {
        Err(Error::Hypothesis { item, .. }) => assert_eq!(item, "(i)"),
        other => panic!("expected a hypothesis error, got {other:?}"),
    }
}

#[test]
fn unresolved_band_is_a_config_error() {
    let cfg = CheckConfig {
        n: 16,
        j_range: (0, 6),
        ..quick(CheckId::HeatKernel)
    };
    assert!(matches!(run_check(&cfg), Err(Error::Config(_))));
}
