//! Gaussian-evaluation cost accounting. Kept in its own test binary so
//! the process-global counter is not disturbed by parallel tests.

use gridcell_core::kernel::{build_relative_kernel, step_fast};
use gridcell_core::network::{build_weights, gauss_evals, init_state, reset_gauss_evals, step};
use gridcell_core::{CellGrid, GridConfig, Vec2};

#[test]
fn per_step_gaussian_evaluation_counts() {
    let cfg = GridConfig::default();
    let grid = CellGrid::new(cfg.n_x, cfg.n_y).unwrap();
    let n = grid.len() as u64;

    reset_gauss_evals();
    let kernel = build_relative_kernel(&grid, &cfg, Vec2::new(0.01, 0.0)).unwrap();
    assert_eq!(gauss_evals(), n, "fast path must cost exactly N evaluations");

    reset_gauss_evals();
    let dense = build_weights(&grid, &cfg, Vec2::new(0.01, 0.0)).unwrap();
    assert_eq!(gauss_evals(), n * n, "dense path costs N^2 evaluations");

    // stepping performs no further Gaussian work
    let state = init_state(&cfg).unwrap();
    reset_gauss_evals();
    let _ = step_fast(&state, &kernel, &grid, &cfg).unwrap();
    let _ = step(&state, &dense, &cfg).unwrap();
    assert_eq!(gauss_evals(), 0);
}
