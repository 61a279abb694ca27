//! Plain-text CSV formats for trajectories and estimate tracks.
//!
//! Floats are written with 12 significant digits, which round-trips
//! through parsing to the same printed form. Line numbers in errors are
//! physical file lines (the header is line 1).

use std::io::Write;
use std::path::Path;

use gridcell_core::{PositionEstimate, TrajectorySample, Vec2};

use crate::numfmt::fmt_sig;
use crate::{CliError, Result};

const TRAJ_HEADER: &str = "t,vx_body,vy_body,psi";
const TRAJ_HEADER_TRUTH: &str = "t,vx_body,vy_body,psi,truth_x,truth_y";

fn parse_fields(path: &Path, line_no: usize, line: &str, expected: usize) -> Result<Vec<f64>> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != expected {
        return Err(CliError(format!(
            "{}:{line_no}: expected {expected} fields, found {}",
            path.display(),
            fields.len()
        )));
    }
    fields
        .iter()
        .map(|f| {
            f.trim().parse::<f64>().map_err(|_| {
                CliError(format!(
                    "{}:{line_no}: `{f}` is not a number",
                    path.display()
                ))
            })
        })
        .collect()
}

/// Read a trajectory file with header `t,vx_body,vy_body,psi[,truth_x,truth_y]`.
pub fn read_trajectory_csv(path: &Path) -> Result<Vec<TrajectorySample>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError(format!("{}: empty file", path.display())))?;
    let with_truth = match header.trim() {
        TRAJ_HEADER => false,
        TRAJ_HEADER_TRUTH => true,
        other => {
            return Err(CliError(format!(
                "{}:1: unrecognized header `{other}`",
                path.display()
            )))
        }
    };
    let expected = if with_truth { 6 } else { 4 };
    let mut samples = Vec::new();
    let mut prev_t = f64::NEG_INFINITY;
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let v = parse_fields(path, line_no, line, expected)?;
        if v[0] <= prev_t {
            return Err(CliError(format!(
                "{}:{line_no}: non-monotonic t ({} after {})",
                path.display(),
                v[0],
                prev_t
            )));
        }
        prev_t = v[0];
        samples.push(TrajectorySample {
            t: v[0],
            v_body: Vec2::new(v[1], v[2]),
            psi: v[3],
            truth: with_truth.then(|| Vec2::new(v[4], v[5])),
        });
    }
    Ok(samples)
}

/// Write a trajectory file; truth columns are included when every sample
/// carries ground truth.
pub fn write_trajectory_csv(path: &Path, samples: &[TrajectorySample]) -> Result<()> {
    let with_truth = samples.iter().all(|s| s.truth.is_some());
    let mut out = String::new();
    out.push_str(if with_truth { TRAJ_HEADER_TRUTH } else { TRAJ_HEADER });
    out.push('\n');
    for s in samples {
        out.push_str(&fmt_sig(s.t, 12));
        for v in [s.v_body.x, s.v_body.y, s.psi] {
            out.push(',');
            out.push_str(&fmt_sig(v, 12));
        }
        if with_truth {
            let t = s.truth.unwrap();
            out.push(',');
            out.push_str(&fmt_sig(t.x, 12));
            out.push(',');
            out.push_str(&fmt_sig(t.y, 12));
        }
        out.push('\n');
    }
    write_atomically(path, out.as_bytes())
}

/// Write an estimate track file `t,x_est,y_est[,x_dr,y_dr,x_kf,y_kf,truth_x,truth_y]`.
/// The baseline and truth tracks, when given, must be sample-aligned.
pub fn write_estimates_csv(
    path: &Path,
    est: &[PositionEstimate],
    dead_reckoning: Option<&[PositionEstimate]>,
    kalman: Option<&[PositionEstimate]>,
    truth: Option<&[PositionEstimate]>,
) -> Result<()> {
    for (name, track) in [("dead-reckoning", dead_reckoning), ("kalman", kalman), ("truth", truth)]
    {
        if let Some(t) = track {
            if t.len() != est.len() {
                return Err(CliError(format!(
                    "{name} track has {} rows, estimates have {}",
                    t.len(),
                    est.len()
                )));
            }
        }
    }
    let mut header = String::from("t,x_est,y_est");
    if dead_reckoning.is_some() {
        header.push_str(",x_dr,y_dr");
    }
    if kalman.is_some() {
        header.push_str(",x_kf,y_kf");
    }
    if truth.is_some() {
        header.push_str(",truth_x,truth_y");
    }
    let mut out = header;
    out.push('\n');
    for (i, e) in est.iter().enumerate() {
        out.push_str(&fmt_sig(e.t, 12));
        out.push(',');
        out.push_str(&fmt_sig(e.x, 12));
        out.push(',');
        out.push_str(&fmt_sig(e.y, 12));
        for track in [dead_reckoning, kalman, truth].into_iter().flatten() {
            out.push(',');
            out.push_str(&fmt_sig(track[i].x, 12));
            out.push(',');
            out.push_str(&fmt_sig(track[i].y, 12));
        }
        out.push('\n');
    }
    write_atomically(path, out.as_bytes())
}

/// Read any track file that carries a time column and a position pair.
/// Estimate files are read through `x_est,y_est`; trajectory files through
/// `truth_x,truth_y`; a bare `x,y` pair is also accepted.
pub fn read_track_csv(path: &Path) -> Result<Vec<PositionEstimate>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError(format!("{}: empty file", path.display())))?;
    let cols: Vec<&str> = header.trim().split(',').map(str::trim).collect();
    let col = |name: &str| cols.iter().position(|c| *c == name);
    let t_col = col("t").ok_or_else(|| {
        CliError(format!("{}:1: no `t` column in `{header}`", path.display()))
    })?;
    let (x_col, y_col) = [("x_est", "y_est"), ("truth_x", "truth_y"), ("x", "y")]
        .iter()
        .find_map(|(x, y)| Some((col(x)?, col(y)?)))
        .ok_or_else(|| {
            CliError(format!(
                "{}:1: no position columns in `{header}`",
                path.display()
            ))
        })?;
    let mut track = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let v = parse_fields(path, line_no, line, cols.len())?;
        track.push(PositionEstimate {
            x: v[x_col],
            y: v[y_col],
            t: v[t_col],
        });
    }
    Ok(track)
}

/// Write through a temp file and rename, so failed runs do not leave a
/// half-written artifact behind.
pub fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let mut f = std::fs::File::create(&tmp)
        .map_err(|e| CliError(format!("{}: {e}", tmp.display())))?;
    f.write_all(bytes)
        .and_then(|_| f.flush())
        .map_err(|e| CliError(format!("{}: {e}", tmp.display())))?;
    drop(f);
    std::fs::rename(&tmp, path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    Ok(())
}
