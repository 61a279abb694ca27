//! Activity snapshots: n_y rows by n_x columns of activity values,
//! space-separated, 9 significant digits, row-major in the documented cell
//! indexing (row r of the file is lattice row r).

use std::path::Path;

use gridcell_core::{CellGrid, GridState};

use crate::csv_io::write_atomically;
use crate::numfmt::fmt_sig;
use crate::{CliError, Result};

pub fn write_snapshot(state: &GridState, grid: &CellGrid, path: &Path) -> Result<()> {
    if state.len() != grid.len() {
        return Err(CliError(format!(
            "state holds {} cells, grid holds {}",
            state.len(),
            grid.len()
        )));
    }
    let n_x = grid.n_x();
    let mut out = String::new();
    for row in state.activity().chunks(n_x) {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&fmt_sig(*v, 9));
        }
        out.push('\n');
    }
    write_atomically(path, out.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_layout() {
        let grid = CellGrid::new(2, 2).unwrap();
        let state = GridState::from_activity(vec![0.0, 0.1, 0.2, 0.3]);
        let mut p = std::env::temp_dir();
        p.push(format!("gridcell-snap-{}.txt", std::process::id()));
        write_snapshot(&state, &grid, &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text, "0 0.1\n0.2 0.3\n");
        std::fs::remove_file(&p).ok();
    }
}
