//! Property tests for the torus metric, weight bounds and phase math.

use gridcell_core::integrator::{phase_delta, BumpPhase};
use gridcell_core::network::{build_weights, step};
use gridcell_core::topology::{tri_reduce, PERIOD_Y};
use gridcell_core::{CellGrid, GridConfig, GridState, Vec2};
use proptest::prelude::*;

fn phase(x: f64, y: f64) -> BumpPhase {
    BumpPhase {
        phase_x: x,
        phase_y: y,
        resultant_x: 1.0,
        resultant_y: 1.0,
    }
}

proptest! {
    #[test]
    fn tri_distance_is_symmetric(
        px in 0.0..1.0f64, py in 0.0..PERIOD_Y,
        qx in 0.0..1.0f64, qy in 0.0..PERIOD_Y,
    ) {
        let grid = CellGrid::new(4, 4).unwrap();
        let p = Vec2::new(px, py);
        let q = Vec2::new(qx, qy);
        let (_, d_pq) = grid.tri_displacement(p, q);
        let (_, d_qp) = grid.tri_displacement(q, p);
        prop_assert!((d_pq - d_qp).abs() < 1e-15);
    }

    #[test]
    fn tri_reduction_never_grows_a_displacement(
        dx in -1.0..1.0f64, dy in -PERIOD_Y..PERIOD_Y,
    ) {
        let d = Vec2::new(dx, dy);
        let (reduced, norm) = tri_reduce(d);
        prop_assert!(norm <= d.norm() + 1e-15);
        prop_assert!((reduced.norm() - norm).abs() < 1e-15);
        // the reduced displacement is inside the hexagonal Voronoi cell,
        // whose circumradius is 1/sqrt(3)
        prop_assert!(norm <= 1.0 / 3f64.sqrt() + 1e-12);
    }

    #[test]
    fn weights_stay_inside_their_band(
        sx in -0.2..0.2f64, sy in -0.14..0.14f64,
    ) {
        let cfg = GridConfig { n_x: 8, n_y: 8, ..GridConfig::default() };
        let grid = CellGrid::new(8, 8).unwrap();
        let w = build_weights(&grid, &cfg, Vec2::new(sx, sy)).unwrap();
        for &v in w.values() {
            prop_assert!(v >= -cfg.shift_t - 1e-15);
            prop_assert!(v <= cfg.intensity - cfg.shift_t + 1e-15);
        }
    }

    #[test]
    fn phase_delta_stays_in_the_wrap_window(
        ax in 0.0..1.0f64, ay in 0.0..PERIOD_Y,
        bx in 0.0..1.0f64, by in 0.0..PERIOD_Y,
    ) {
        let d = phase_delta(&phase(ax, ay), &phase(bx, by));
        // each character delta lies in (-period/2, period/2]
        let du = d.x - d.y / 3f64.sqrt();
        prop_assert!(du > -0.5 - 1e-12 && du <= 0.5 + 1e-12);
        prop_assert!(d.y > -PERIOD_Y / 2.0 - 1e-12 && d.y <= PERIOD_Y / 2.0 + 1e-12);
        // identical phases give zero
        let z = phase_delta(&phase(ax, ay), &phase(ax, ay));
        prop_assert!(z.norm() < 1e-15);
    }

    #[test]
    fn activity_never_goes_negative(
        seed in 0u64..1000, steps in 1usize..4,
    ) {
        let cfg = GridConfig { n_x: 8, n_y: 8, seed, ..GridConfig::default() };
        let grid = CellGrid::new(8, 8).unwrap();
        let w = build_weights(&grid, &cfg, Vec2::new(0.01, 0.0)).unwrap();
        let mut state = gridcell_core::network::init_state(&cfg).unwrap();
        for _ in 0..steps {
            state = step(&state, &w, &cfg).unwrap();
            prop_assert!(state.activity().iter().all(|&a| a >= 0.0 && a.is_finite()));
        }
    }
}

#[test]
fn phase_delta_recovers_small_moves_across_the_seam() {
    // a bump crossing the top seam reappears half a period over in x;
    // the wrapped character delta still reports the true small motion
    let before = phase(0.30, PERIOD_Y - 0.01);
    let after = phase(0.80 + 0.003, 0.005); // x representative jumped by ~0.5
    let d = phase_delta(&before, &after);
    assert!((d.x - 0.003).abs() < 1e-12, "dx = {}", d.x);
    assert!((d.y - 0.015).abs() < 1e-12, "dy = {}", d.y);
}

#[test]
fn zero_state_stays_rejected() {
    let cfg = GridConfig {
        n_x: 8,
        n_y: 8,
        ..GridConfig::default()
    };
    let grid = CellGrid::new(8, 8).unwrap();
    let w = build_weights(&grid, &cfg, Vec2::ZERO).unwrap();
    let state = GridState::from_activity(vec![0.0; 64]);
    assert!(step(&state, &w, &cfg).is_err());
}
