//! O(N) weight evaluation via lattice translation invariance.
//!
//! On the cell lattice the weight between two cells depends only on their
//! index offset, provided offsets are reduced on the *twisted* index torus:
//! wrapping a row offset past n_y shifts the column offset by n_x / 2, the
//! index-space image of the half-period twist in the metric. One kernel of
//! n_x * n_y values therefore covers all N^2 pairs, and the transfer
//! becomes a wrapped cross-correlation. The n_x / 2 column shift only
//! exists for even n_x; the builder rejects odd widths.

use crate::config::GridConfig;
use crate::error::{Error, Result};
use crate::network::{
    apply_dynamics, record_gauss_evals, total_activity, weight_value, GridState, MAX_SHIFT_NORM,
};
use crate::topology::{tri_norm_sq, CellGrid};
use crate::vec2::Vec2;

/// Per-offset weight table: entry (d_col, d_row) holds the weight from the
/// cell at twisted index offset (d_col, d_row) onto a reference cell.
#[derive(Debug, Clone)]
pub struct RelativeKernel {
    values: Vec<f64>,
    shift: Vec2,
    n_x: usize,
    n_y: usize,
}

impl RelativeKernel {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn shift(&self) -> Vec2 {
        self.shift
    }

    pub fn at(&self, d_col: usize, d_row: usize) -> f64 {
        self.values[d_row * self.n_x + d_col]
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }
}

/// Evaluate the kernel with exactly N Gaussian evaluations. Entry (d_col,
/// d_row) is computed from the same position difference the dense builder
/// would use for the pair (cell(d_col, d_row), cell(0, 0)).
pub fn build_relative_kernel(
    grid: &CellGrid,
    cfg: &GridConfig,
    shift: Vec2,
) -> Result<RelativeKernel> {
    let norm = shift.norm();
    if !(norm < MAX_SHIFT_NORM) {
        return Err(Error::ShiftSaturated {
            norm,
            limit: MAX_SHIFT_NORM,
        });
    }
    if !grid.n_x().is_multiple_of(2) {
        return Err(Error::InvalidConfig {
            field: "n_x",
            message: "the relative kernel requires an even cell count per row".into(),
        });
    }
    let origin = grid.positions()[0];
    let values: Vec<f64> = grid
        .positions()
        .iter()
        .map(|c| {
            let d_sq = tri_norm_sq(c.x - origin.x + shift.x, c.y - origin.y + shift.y);
            weight_value(d_sq, cfg)
        })
        .collect();
    record_gauss_evals(grid.len() as u64);
    Ok(RelativeKernel {
        values,
        shift,
        n_x: grid.n_x(),
        n_y: grid.n_y(),
    })
}

/// Transfer values `B_j = sum_i A_i * k(offset(i, j))` by wrapped
/// cross-correlation; equal to the dense product within float rounding.
pub fn apply_kernel(
    state: &GridState,
    kernel: &RelativeKernel,
    grid: &CellGrid,
) -> Result<Vec<f64>> {
    let n_x = grid.n_x();
    let n_y = grid.n_y();
    if kernel.n_x != n_x || kernel.n_y != n_y {
        return Err(Error::DimensionMismatch(format!(
            "kernel is {}x{}, grid is {n_x}x{n_y}",
            kernel.n_x, kernel.n_y
        )));
    }
    if state.len() != grid.len() {
        return Err(Error::DimensionMismatch(format!(
            "state holds {} cells, grid holds {}",
            state.len(),
            grid.len()
        )));
    }
    let a = state.activity();
    let mut b = vec![0.0; a.len()];
    // doubling the source row turns every wrapped inner sum into a
    // contiguous dot product
    let mut doubled = vec![0.0; 2 * n_x];
    for j_row in 0..n_y {
        let out = &mut b[j_row * n_x..(j_row + 1) * n_x];
        for d_row in 0..n_y {
            // source row, with the twist applied when wrapping past the top
            let mut s_row = j_row + d_row;
            let mut col_off = 0;
            if s_row >= n_y {
                s_row -= n_y;
                col_off = n_x / 2;
            }
            let src = &a[s_row * n_x..(s_row + 1) * n_x];
            doubled[..n_x].copy_from_slice(src);
            doubled[n_x..].copy_from_slice(src);
            let k_row = &kernel.values[d_row * n_x..(d_row + 1) * n_x];
            for (j_col, o) in out.iter_mut().enumerate() {
                let base = (j_col + col_off) % n_x;
                let window = &doubled[base..base + n_x];
                // four independent accumulator chains so the reduction
                // pipelines; summation order is fixed, so results stay
                // bitwise reproducible
                let mut acc = [0.0f64; 4];
                let mut k_chunks = k_row.chunks_exact(4);
                let mut w_chunks = window.chunks_exact(4);
                for (k4, w4) in (&mut k_chunks).zip(&mut w_chunks) {
                    acc[0] += k4[0] * w4[0];
                    acc[1] += k4[1] * w4[1];
                    acc[2] += k4[2] * w4[2];
                    acc[3] += k4[3] * w4[3];
                }
                let mut total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
                for (kv, v) in k_chunks.remainder().iter().zip(w_chunks.remainder()) {
                    total += kv * v;
                }
                *o += total;
            }
        }
    }
    Ok(b)
}

/// One dynamics update through the relative kernel; the fast equivalent of
/// `network::step`.
pub fn step_fast(
    state: &GridState,
    kernel: &RelativeKernel,
    grid: &CellGrid,
    cfg: &GridConfig,
) -> Result<GridState> {
    let transfer = apply_kernel(state, kernel, grid)?;
    apply_dynamics(&transfer, total_activity(state), cfg, state.step_count())
}
