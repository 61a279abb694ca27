//! Activity state and recurrent dynamics.
//!
//! One update consists of the transfer `B_j = sum_i A_i(t) * w_ij` followed
//! by `A_j(t+1) = f((1 - tau) * B_j + tau * B_j / S)` where `S = sum_i A_i(t)`
//! plays the role of a global stabilization unit and `f` is rectification.
//! The naive weight matrix here evaluates all N^2 pairwise weights; the
//! `kernel` module provides the O(N)-build equivalent used in production,
//! with this path retained as its oracle.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::GridConfig;
use crate::error::{Error, Result};
use crate::topology::{tri_norm_sq, CellGrid};
use crate::vec2::Vec2;

/// Cell-space shifts at or above this norm would alias around the torus
/// (nearest-image decoding becomes ambiguous well before half a period).
pub const MAX_SHIFT_NORM: f64 = 0.25;

/// Total activity below this is treated as a dead network.
pub const MIN_TOTAL_ACTIVITY: f64 = 1e-12;

static GAUSS_EVALS: AtomicU64 = AtomicU64::new(0);

/// Number of Gaussian weight evaluations performed since the last reset.
pub fn gauss_evals() -> u64 {
    GAUSS_EVALS.load(Ordering::Relaxed)
}

pub fn reset_gauss_evals() {
    GAUSS_EVALS.store(0, Ordering::Relaxed);
}

pub(crate) fn record_gauss_evals(n: u64) {
    GAUSS_EVALS.fetch_add(n, Ordering::Relaxed);
}

/// Weight profile at squared tri-distance `d_sq`.
#[inline]
pub(crate) fn weight_value(d_sq: f64, cfg: &GridConfig) -> f64 {
    cfg.intensity * (-d_sq / (cfg.sigma * cfg.sigma)).exp() - cfg.shift_t
}

/// Activity levels of the N cells plus a step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    activity: Vec<f64>,
    step: u64,
}

impl GridState {
    /// Build a state from raw activity levels (test and tooling hook).
    pub fn from_activity(activity: Vec<f64>) -> GridState {
        GridState { activity, step: 0 }
    }

    pub fn activity(&self) -> &[f64] {
        &self.activity
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.activity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.activity.is_empty()
    }
}

/// Random initial state: each activity i.i.d. uniform on [0, 1/sqrt(N)],
/// drawn from a seeded generator so runs are reproducible.
pub fn init_state(cfg: &GridConfig) -> Result<GridState> {
    cfg.validate()?;
    let n = cfg.n();
    let bound = 1.0 / (n as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let activity = (0..n).map(|_| rng.random::<f64>() * bound).collect();
    Ok(GridState { activity, step: 0 })
}

/// Sum of all activity levels; the value reported by the external
/// stabilization unit (its synapses all have weight one).
pub fn total_activity(state: &GridState) -> f64 {
    state.activity.iter().sum()
}

/// Dense pairwise weight matrix for a given cell-space shift.
///
/// `values[i * n + j]` connects presynaptic cell i to postsynaptic cell j.
#[derive(Debug, Clone)]
pub struct WeightKernel {
    values: Vec<f64>,
    shift: Vec2,
    n: usize,
}

impl WeightKernel {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn shift(&self) -> Vec2 {
        self.shift
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

/// Evaluate all N^2 weights `w_ij = I exp(-|c_i - c_j + shift|^2_tri / sigma^2) - T`.
pub fn build_weights(grid: &CellGrid, cfg: &GridConfig, shift: Vec2) -> Result<WeightKernel> {
    let norm = shift.norm();
    if !(norm < MAX_SHIFT_NORM) {
        return Err(Error::ShiftSaturated {
            norm,
            limit: MAX_SHIFT_NORM,
        });
    }
    let n = grid.len();
    let pos = grid.positions();
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        let ci = pos[i];
        for cj in pos {
            let d_sq = tri_norm_sq(ci.x - cj.x + shift.x, ci.y - cj.y + shift.y);
            values.push(weight_value(d_sq, cfg));
        }
    }
    record_gauss_evals((n * n) as u64);
    Ok(WeightKernel { values, shift, n })
}

/// Shared second half of an update: apply the stabilized, rectified
/// dynamics to a transfer vector.
pub(crate) fn apply_dynamics(
    transfer: &[f64],
    total: f64,
    cfg: &GridConfig,
    step: u64,
) -> Result<GridState> {
    if !total.is_finite() {
        return Err(Error::NonFiniteActivity { step });
    }
    if total < MIN_TOTAL_ACTIVITY {
        return Err(Error::DegenerateActivity { step });
    }
    let tau = cfg.tau;
    let activity = transfer
        .iter()
        .map(|&b| ((1.0 - tau) * b + tau * b / total).max(0.0))
        .collect();
    Ok(GridState {
        activity,
        step: step + 1,
    })
}

/// One dynamics update through the dense weight matrix.
pub fn step(state: &GridState, kernel: &WeightKernel, cfg: &GridConfig) -> Result<GridState> {
    let n = state.len();
    if kernel.n != n {
        return Err(Error::DimensionMismatch(format!(
            "kernel holds {} cells, state holds {n}",
            kernel.n
        )));
    }
    let mut transfer = vec![0.0; n];
    for (i, &ai) in state.activity.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        let row = &kernel.values[i * n..(i + 1) * n];
        for (bj, &w) in transfer.iter_mut().zip(row) {
            *bj += ai * w;
        }
    }
    apply_dynamics(&transfer, total_activity(state), cfg, state.step)
}
