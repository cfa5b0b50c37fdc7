use sqg_core::gevrey::heat_semigroup;
use sqg_core::spectral::apply_real_multiplier;
use sqg_wasm_demo::{to_rgba, Demo, View};

#[test]
fn colormap_is_symmetric_and_opaque() {
    let px = to_rgba(&[2.0, -2.0, 0.0, 1.0]);
    assert_eq!(&px[0..4], [255, 0, 0, 255]);
    assert_eq!(&px[4..8], [0, 0, 255, 255]);
    assert_eq!(&px[8..12], [255, 255, 255, 255]);
    assert_eq!(&px[12..16], [255, 128, 128, 255]);
    assert!(to_rgba(&[0.0; 3])
        .chunks(4)
        .all(|p| p == [255, 255, 255, 255]));
}

#[test]
fn render_has_one_pixel_per_grid_point() {
    let demo = Demo::new(32, 1, 0.8, 0.01).unwrap();
    assert_eq!(demo.render().unwrap().len(), 4 * 32 * 32);
}

#[test]
fn blocks_of_the_state_sum_back_to_it_on_the_resolved_band() {
    let mut demo = Demo::new(32, 2, 0.8, 0.01).unwrap();
    let (lo, hi) = demo.block_range();
    let total = (lo..=hi)
        .map(|j| {
            demo.set_view(View::Block { j });
            demo.shown().unwrap()
        })
        .reduce(|a, b| a.add(&b).unwrap())
        .unwrap();
    demo.set_view(View::State);
    let state = demo.shown().unwrap();
    let (a, b) = (2f64.powi(lo), 2f64.powi(hi));
    let inside = apply_real_multiplier(&total.sub(&state).unwrap(), |k| {
        let r = k[0].hypot(k[1]);
        if r >= a && r <= b {
            1.0
        } else {
            0.0
        }
    })
    .unwrap();
    let err = inside.max_abs();
    assert!(err <= 1e-10 * state.max_abs(), "{err}");
}

#[test]
fn heat_view_matches_the_semigroup_and_smooths() {
    let mut demo = Demo::new(32, 3, 0.8, 0.01).unwrap();
    let state = demo.shown().unwrap();
    demo.set_view(View::Heat { t: 0.3 });
    let heat = demo.shown().unwrap();
    assert!(
        heat.sub(&heat_semigroup(&state, 0.3, 0.8).unwrap())
            .unwrap()
            .max_abs()
            < 1e-15
    );
    assert!(heat.l2_norm() < state.l2_norm());
    assert!(demo.status().unwrap().contains("radius"));
}

#[test]
fn stepping_advances_time_and_does_not_gain_energy() {
    let mut demo = Demo::new(32, 4, 0.8, 0.01).unwrap();
    let before = demo.shown().unwrap().l2_norm();
    demo.step(10).unwrap();
    assert!((demo.time() - 0.1).abs() < 1e-12);
    assert!(demo.shown().unwrap().l2_norm() <= before);
}
