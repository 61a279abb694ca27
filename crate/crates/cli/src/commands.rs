//! The four subcommands. All file output is deterministic for a fixed
//! config and seed; failed runs remove whatever they had written.

use std::path::{Path, PathBuf};
use std::time::Instant;

use gridcell_core::harness::{
    add_disturbance, compare, dead_reckon, gen_circle, gen_waypoint_rect, kf_velocity_baseline,
    truth_track,
};
use gridcell_core::integrator::{calibrate_gamma, PathIntegrator};
use gridcell_core::kernel::{build_relative_kernel, step_fast};
use gridcell_core::network::{build_weights, init_state, step};
use gridcell_core::{CellGrid, ErrorReport, TrajectorySample, Vec2};

use crate::config_file::{RunConfig, TrajectorySpec};
use crate::csv_io::{read_track_csv, read_trajectory_csv, write_estimates_csv, write_trajectory_csv};
use crate::numfmt::fmt_sig;
use crate::snapshot::write_snapshot;
use crate::{CliError, Result};

/// Deletes the files it tracks unless the run commits them.
struct OutputGuard {
    files: Vec<PathBuf>,
    committed: bool,
}

impl OutputGuard {
    fn new() -> Self {
        OutputGuard {
            files: Vec::new(),
            committed: false,
        }
    }

    fn track(&mut self, path: PathBuf) {
        self.files.push(path);
    }

    fn commit(mut self) {
        self.committed = true;
    }
}

impl Drop for OutputGuard {
    fn drop(&mut self) {
        if !self.committed {
            for f in &self.files {
                let _ = std::fs::remove_file(f);
            }
        }
    }
}

fn generate_samples(cfg: &RunConfig) -> Result<Vec<TrajectorySample>> {
    let clean = match &cfg.trajectory {
        TrajectorySpec::Circle { radius, speed, laps } => {
            gen_circle(*radius, *speed, cfg.grid.dt, *laps)?
        }
        TrajectorySpec::Rect { width, height, speed } => {
            gen_waypoint_rect(*width, *height, *speed, cfg.grid.dt)?
        }
        TrajectorySpec::Csv(path) => read_trajectory_csv(path)?,
    };
    if cfg.disturbance_on {
        Ok(add_disturbance(&clean, &cfg.disturbance)?)
    } else {
        Ok(clean)
    }
}

/// Render a report as key=value lines; `prefix` distinguishes estimators
/// when several reports share a file ("est_rmse=..." vs plain "rmse=...").
fn report_lines(prefix: &str, report: &ErrorReport) -> String {
    let fields = [
        ("rmse", report.rmse),
        ("final_error", report.final_error),
        ("path_length", report.path_length),
        ("drift_per_meter", report.drift_per_meter),
        ("max_error", report.max_error),
    ];
    let mut out = String::new();
    for (name, value) in fields {
        out.push_str(prefix);
        out.push_str(name);
        out.push('=');
        out.push_str(&fmt_sig(value, 12));
        out.push('\n');
    }
    out
}

/// Generate (or load) the trajectory, run the grid-cell estimator plus the
/// two baselines over it, and write trajectory.csv, estimates.csv, activity
/// snapshots and, when ground truth is available, report.txt.
pub fn simulate(cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| CliError(format!("{}: {e}", cfg.out_dir.display())))?;
    let samples = generate_samples(cfg)?;
    if samples.is_empty() {
        return Err(CliError("trajectory is empty".into()));
    }

    let mut guard = OutputGuard::new();

    let traj_path = cfg.out_dir.join("trajectory.csv");
    write_trajectory_csv(&traj_path, &samples)?;
    guard.track(traj_path);

    let dr = dead_reckon(&samples);
    let kf = kf_velocity_baseline(&samples, cfg.kf_meas_noise, cfg.kf_process_noise)?;

    let mut integrator = PathIntegrator::new(&cfg.grid)?;
    let mut estimates = Vec::with_capacity(samples.len());
    for (k, sample) in samples.iter().enumerate() {
        estimates.push(integrator.process(sample)?);
        if cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0 {
            let path = cfg.out_dir.join(format!("snapshot_{k:06}.txt"));
            write_snapshot(integrator.state(), integrator.grid(), &path)?;
            guard.track(path);
        }
    }

    let truth = truth_track(&samples);
    let est_path = cfg.out_dir.join("estimates.csv");
    write_estimates_csv(
        &est_path,
        &estimates,
        Some(&dr),
        Some(&kf),
        truth.as_deref(),
    )?;
    guard.track(est_path);

    if let Some(truth) = &truth {
        let mut text = String::new();
        text.push_str(&report_lines("est_", &compare(&estimates, truth)?));
        text.push_str(&report_lines("dr_", &compare(&dr, truth)?));
        text.push_str(&report_lines("kf_", &compare(&kf, truth)?));
        let report_path = cfg.out_dir.join("report.txt");
        crate::csv_io::write_atomically(&report_path, text.as_bytes())?;
        guard.track(report_path);
        print!("{text}");
    }

    println!(
        "simulate: {} samples -> {}",
        samples.len(),
        cfg.out_dir.display()
    );
    guard.commit();
    Ok(())
}

/// Measure the displacement gain and print it.
pub fn calibrate(cfg: &RunConfig) -> Result<()> {
    let gamma = calibrate_gamma(&cfg.grid)?;
    println!("gamma={}", fmt_sig(gamma, 12));
    Ok(())
}

/// Compare two track files and print the error report as key=value text.
pub fn compare_files(file_a: &Path, file_b: &Path) -> Result<()> {
    let est = read_track_csv(file_a)?;
    let reference = read_track_csv(file_b)?;
    let report = compare(&est, &reference)?;
    print!("{}", report_lines("", &report));
    Ok(())
}

/// Time the fast relative-kernel step against the dense-matrix step and
/// print steps/second for both.
pub fn bench(cfg: &RunConfig) -> Result<()> {
    let grid = CellGrid::new(cfg.grid.n_x, cfg.grid.n_y)?;
    let mut state = init_state(&cfg.grid)?;
    let shift = Vec2::new(0.01, 0.005);
    // form the bump first so both paths time realistic activity
    let still = build_relative_kernel(&grid, &cfg.grid, Vec2::ZERO)?;
    for _ in 0..200 {
        state = step_fast(&state, &still, &grid, &cfg.grid)?;
    }

    // fast path: rebuild the kernel every step, as the integrator does
    let mut fast_state = state.clone();
    let mut fast_steps = 0u64;
    let start = Instant::now();
    while start.elapsed().as_secs_f64() < 0.6 && fast_steps < 50_000 {
        for _ in 0..100 {
            let kernel = build_relative_kernel(&grid, &cfg.grid, shift)?;
            fast_state = step_fast(&fast_state, &kernel, &grid, &cfg.grid)?;
        }
        fast_steps += 100;
    }
    let fast_rate = fast_steps as f64 / start.elapsed().as_secs_f64();

    let mut slow_state = state;
    let mut slow_steps = 0u64;
    let start = Instant::now();
    while start.elapsed().as_secs_f64() < 0.6 && slow_steps < 2_000 {
        for _ in 0..5 {
            let dense = build_weights(&grid, &cfg.grid, shift)?;
            slow_state = step(&slow_state, &dense, &cfg.grid)?;
        }
        slow_steps += 5;
    }
    let slow_rate = slow_steps as f64 / start.elapsed().as_secs_f64();

    println!("fast_steps_per_sec={}", fmt_sig(fast_rate, 6));
    println!("naive_steps_per_sec={}", fmt_sig(slow_rate, 6));
    println!("speedup={}", fmt_sig(fast_rate / slow_rate, 6));
    Ok(())
}
