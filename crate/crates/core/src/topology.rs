//! Cell placement and the twisted-torus metric.
//!
//! Cells tile the rectangle [0, 1) x [0, sqrt(3)/2). Wrapping in x has
//! period 1; wrapping in y has period sqrt(3)/2 *and shifts x by 1/2*, so
//! the identification lattice is triangular and distances between cells are
//! hexagonal. Displacements are reduced to their shortest representative
//! over seven candidate images.

use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// Torus period along x.
pub const PERIOD_X: f64 = 1.0;
/// Torus period along y (sqrt(3)/2).
pub const PERIOD_Y: f64 = 0.8660254037844386;

/// Image shifts tried when reducing a displacement to its shortest
/// twisted-torus representative.
pub const IMAGE_SHIFTS: [(f64, f64); 7] = [
    (0.0, 0.0),
    (-0.5, PERIOD_Y),
    (-0.5, -PERIOD_Y),
    (0.5, PERIOD_Y),
    (0.5, -PERIOD_Y),
    (-1.0, 0.0),
    (1.0, 0.0),
];

/// Reduce a displacement to its minimum-norm image; returns the reduced
/// displacement and its Euclidean norm.
pub fn tri_reduce(d: Vec2) -> (Vec2, f64) {
    let mut best = d;
    let mut best_sq = d.norm_sq();
    for &(sx, sy) in IMAGE_SHIFTS[1..].iter() {
        let cand = Vec2::new(d.x + sx, d.y + sy);
        let sq = cand.norm_sq();
        if sq < best_sq {
            best_sq = sq;
            best = cand;
        }
    }
    (best, best_sq.sqrt())
}

/// Squared tri-norm of a displacement; the hot inner call of every weight
/// evaluation.
#[inline]
pub fn tri_norm_sq(dx: f64, dy: f64) -> f64 {
    let mut best = dx * dx + dy * dy;
    for &(sx, sy) in IMAGE_SHIFTS[1..].iter() {
        let x = dx + sx;
        let y = dy + sy;
        let sq = x * x + y * y;
        if sq < best {
            best = sq;
        }
    }
    best
}

/// The cell lattice: positions of n_x * n_y cells on the twisted torus.
///
/// Flat indexing is row-major: cell (col, row) lives at index
/// `row * n_x + col`, with 0-based col in [0, n_x) and row in [0, n_y).
#[derive(Debug, Clone)]
pub struct CellGrid {
    n_x: usize,
    n_y: usize,
    positions: Vec<Vec2>,
    // per-cell unit phasors of the two torus characters, precomputed for
    // the bump decoder: (cos, sin) of 2 pi (x - y/sqrt(3)) and of
    // 2 pi y / PERIOD_Y
    phasors: Vec<[f64; 4]>,
}

impl CellGrid {
    /// Build the lattice. Columns sit at (col + 0.5)/n_x, rows at
    /// (row + 0.5)/n_y scaled by the y period.
    pub fn new(n_x: usize, n_y: usize) -> Result<CellGrid> {
        if n_x < 2 {
            return Err(Error::InvalidConfig {
                field: "n_x",
                message: "must be at least 2".into(),
            });
        }
        if n_y < 2 {
            return Err(Error::InvalidConfig {
                field: "n_y",
                message: "must be at least 2".into(),
            });
        }
        let mut positions = Vec::with_capacity(n_x * n_y);
        for row in 0..n_y {
            for col in 0..n_x {
                positions.push(Vec2::new(
                    (col as f64 + 0.5) / n_x as f64,
                    PERIOD_Y * (row as f64 + 0.5) / n_y as f64,
                ));
            }
        }
        let tau = std::f64::consts::TAU;
        let sqrt3 = 3f64.sqrt();
        let phasors = positions
            .iter()
            .map(|c| {
                let (su, cu) = (tau * (c.x - c.y / sqrt3)).sin_cos();
                let (sy, cy) = (tau * c.y / PERIOD_Y).sin_cos();
                [cu, su, cy, sy]
            })
            .collect();
        Ok(CellGrid {
            n_x,
            n_y,
            positions,
            phasors,
        })
    }

    /// Per-cell (cos, sin) pairs of the two decoding characters.
    pub(crate) fn phasors(&self) -> &[[f64; 4]] {
        &self.phasors
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Vec2] {
        &self.positions
    }

    pub fn flat_index(&self, col: usize, row: usize) -> usize {
        debug_assert!(col < self.n_x && row < self.n_y);
        row * self.n_x + col
    }

    pub fn position(&self, col: usize, row: usize) -> Vec2 {
        self.positions[self.flat_index(col, row)]
    }

    /// Shortest displacement from `q` to `p` on the twisted torus and its
    /// norm.
    pub fn tri_displacement(&self, p: Vec2, q: Vec2) -> (Vec2, f64) {
        tri_reduce(p - q)
    }

    /// Flat index of the cell reached from flat index `j` by the lattice
    /// offset (d_col, d_row), honoring the twist: wrapping past the top row
    /// lands half a period over in x. Requires even n_x (checked by
    /// the kernel builder).
    #[cfg(test)]
    pub(crate) fn twisted_add(&self, j: usize, d_col: usize, d_row: usize) -> usize {
        let jx = j % self.n_x;
        let jy = j / self.n_x;
        let mut x = jx + d_col;
        let mut y = jy + d_row;
        if y >= self.n_y {
            y -= self.n_y;
            x += self.n_x / 2;
        }
        y * self.n_x + x % self.n_x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_match_closed_form() {
        let grid = CellGrid::new(30, 30).unwrap();
        // first column/row of a 30x30 grid: x = 0.5/30, y = (sqrt(3)/2) * 0.5/30
        let p = grid.position(0, 0);
        assert!((p.x - 0.0166667).abs() < 1e-6);
        assert!((p.y - 0.0144338).abs() < 1e-6);
        let p = grid.position(29, 0);
        assert!((p.x - 0.9833333).abs() < 1e-6);
        assert!((p.y - 0.0144338).abs() < 1e-6);
    }

    #[test]
    fn two_by_two_positions() {
        let grid = CellGrid::new(2, 2).unwrap();
        let got: Vec<(f64, f64)> = grid
            .positions()
            .iter()
            .map(|p| ((p.x * 1e4).round() / 1e4, (p.y * 1e4).round() / 1e4))
            .collect();
        assert_eq!(
            got,
            vec![(0.25, 0.2165), (0.75, 0.2165), (0.25, 0.6495), (0.75, 0.6495)]
        );
    }

    #[test]
    fn rejects_degenerate_dimensions() {
        assert!(CellGrid::new(1, 30).is_err());
        assert!(CellGrid::new(30, 0).is_err());
    }

    #[test]
    fn all_positions_inside_fundamental_domain() {
        let grid = CellGrid::new(7, 5).unwrap();
        for p in grid.positions() {
            assert!(p.x > 0.0 && p.x < 1.0);
            assert!(p.y > 0.0 && p.y < PERIOD_Y);
        }
    }

    #[test]
    fn identity_displacement_is_zero() {
        let grid = CellGrid::new(30, 30).unwrap();
        let p = grid.position(7, 11);
        let (d, norm) = grid.tri_displacement(p, p);
        assert_eq!(d, Vec2::ZERO);
        assert_eq!(norm, 0.0);
    }

    #[test]
    fn wraps_across_the_x_seam() {
        let grid = CellGrid::new(30, 30).unwrap();
        let p = grid.position(0, 0);
        let q = grid.position(29, 0);
        // direct difference is 0.9666667; the (1, 0) image wins
        let (d, norm) = grid.tri_displacement(p, q);
        assert!((norm - 0.0333333).abs() < 1e-6);
        assert!((d.x - 0.0333333).abs() < 1e-6);
        assert!(d.y.abs() < 1e-12);
    }

    #[test]
    fn y_wrap_goes_through_the_twist() {
        let grid = CellGrid::new(30, 30).unwrap();
        // top cell of a column vs bottom cell: nearest image shifts x by 0.5
        let top = grid.position(0, 29);
        let bottom = grid.position(0, 0);
        let (_, norm) = grid.tri_displacement(top, bottom);
        // plain-rectangle wrap would give one row spacing (0.0289);
        // the twisted identification puts them half a period apart in x
        assert!((norm - 0.5008).abs() < 1e-3);
        let (_, norm) = grid.tri_displacement(grid.position(15, 29), bottom);
        assert!((norm - 0.0289).abs() < 1e-3);
    }

    #[test]
    fn twisted_add_round_trips() {
        let grid = CellGrid::new(30, 30).unwrap();
        // offset (0, 1) from the top row lands n_x/2 columns over in row 0
        let i = grid.twisted_add(grid.flat_index(3, 29), 0, 1);
        assert_eq!(i, grid.flat_index(18, 0));
        // interior offsets are plain
        let i = grid.twisted_add(grid.flat_index(3, 4), 2, 5);
        assert_eq!(i, grid.flat_index(5, 9));
    }
}
