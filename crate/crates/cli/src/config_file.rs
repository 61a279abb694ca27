//! Plain `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, unknown keys are
//! rejected. Grid keys mirror the hyperparameter names; trajectory,
//! disturbance and output keys configure the harness around them.

use std::path::{Path, PathBuf};

use gridcell_core::{DisturbanceSpec, GridConfig};

use crate::{CliError, Result};

/// Which ground-truth trajectory to run.
#[derive(Debug, Clone, PartialEq)]
pub enum TrajectorySpec {
    Circle { radius: f64, speed: f64, laps: usize },
    Rect { width: f64, height: f64, speed: f64 },
    Csv(PathBuf),
}

/// Everything a `simulate` run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub disturbance: DisturbanceSpec,
    pub disturbance_on: bool,
    pub trajectory: TrajectorySpec,
    pub out_dir: PathBuf,
    /// Snapshot the network every this many samples; 0 disables snapshots.
    pub snapshot_every: usize,
    /// Velocity measurement variance handed to the Kalman baseline, (m/s)^2.
    pub kf_meas_noise: f64,
    /// Velocity random-walk intensity for the Kalman baseline, (m/s)^2/s.
    pub kf_process_noise: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: GridConfig::default(),
            disturbance: DisturbanceSpec::default(),
            disturbance_on: false,
            trajectory: TrajectorySpec::Circle {
                radius: 1.5,
                speed: 0.1,
                laps: 1,
            },
            out_dir: PathBuf::from("out"),
            snapshot_every: 200,
            kf_meas_noise: 1e-4,
            kf_process_noise: 1e-2,
        }
    }
}

enum TrajectoryKind {
    Circle,
    Rect,
    Csv(PathBuf),
}

/// Parse a config file over the defaults.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    parse_config_str(&text, path)
}

pub fn parse_config_str(text: &str, origin: &Path) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut gamma: Option<f64> = None;
    let mut kind: Option<TrajectoryKind> = None;
    let mut circle = (1.5f64, 1usize); // radius, laps
    let mut rect = (4.0f64, 2.0f64); // width, height
    let mut speed = 0.1f64;

    for (line_no, raw) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let at = |msg: String| CliError(format!("{}:{line_no}: {msg}", origin.display()));
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| at(format!("expected `key = value`, found `{line}`")))?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(at(format!("key `{key}` has no value")));
        }

        let num = || -> Result<f64> {
            value
                .parse::<f64>()
                .map_err(|_| at(format!("key `{key}`: `{value}` is not a number")))
        };
        match key {
            "n_x" => cfg.grid.n_x = num()? as usize,
            "n_y" => cfg.grid.n_y = num()? as usize,
            "tau" => cfg.grid.tau = num()?,
            "alpha" => cfg.grid.alpha = num()?,
            "beta" => cfg.grid.beta = num()?,
            "intensity" => cfg.grid.intensity = num()?,
            "shift_t" => cfg.grid.shift_t = num()?,
            "sigma" => cfg.grid.sigma = num()?,
            "gamma" => gamma = Some(num()?),
            "dt" => cfg.grid.dt = num()?,
            "seed" => {
                cfg.grid.seed = value
                    .parse::<u64>()
                    .map_err(|_| at(format!("key `seed`: `{value}` is not a u64")))?
            }
            "trajectory" => {
                kind = Some(match value {
                    "circle" => TrajectoryKind::Circle,
                    "rect" => TrajectoryKind::Rect,
                    other => {
                        if let Some(p) = other.strip_prefix("csv:") {
                            TrajectoryKind::Csv(PathBuf::from(p))
                        } else {
                            return Err(at(format!(
                                "key `trajectory`: expected circle, rect or csv:<path>, found `{other}`"
                            )));
                        }
                    }
                })
            }
            "radius" => circle.0 = num()?,
            "laps" => circle.1 = num()? as usize,
            "width" => rect.0 = num()?,
            "height" => rect.1 = num()?,
            "speed" => speed = num()?,
            "disturbance" => {
                cfg.disturbance_on = match value {
                    "on" => true,
                    "off" => false,
                    other => {
                        return Err(at(format!(
                            "key `disturbance`: expected on or off, found `{other}`"
                        )))
                    }
                }
            }
            "wave_freq" => cfg.disturbance.wave_freq = num()?,
            "wave_amp" => cfg.disturbance.wave_amp = num()?,
            "wave_dir" => cfg.disturbance.wave_dir = num()?,
            "noise_std" => cfg.disturbance.noise_std = num()?,
            "noise_seed" => {
                cfg.disturbance.seed = value
                    .parse::<u64>()
                    .map_err(|_| at(format!("key `noise_seed`: `{value}` is not a u64")))?
            }
            "kf_meas_noise" => cfg.kf_meas_noise = num()?,
            "kf_process_noise" => cfg.kf_process_noise = num()?,
            "out_dir" => cfg.out_dir = PathBuf::from(value),
            "snapshot_every" => {
                cfg.snapshot_every = value
                    .parse::<usize>()
                    .map_err(|_| at(format!("key `snapshot_every`: `{value}` is not a count")))?
            }
            other => return Err(at(format!("unknown key `{other}`"))),
        }
    }

    cfg.grid.gamma = gamma.unwrap_or(1.0 / cfg.grid.alpha);
    cfg.trajectory = match kind {
        None | Some(TrajectoryKind::Circle) => TrajectorySpec::Circle {
            radius: circle.0,
            speed,
            laps: circle.1,
        },
        Some(TrajectoryKind::Rect) => TrajectorySpec::Rect {
            width: rect.0,
            height: rect.1,
            speed,
        },
        Some(TrajectoryKind::Csv(p)) => TrajectorySpec::Csv(p),
    };

    cfg.grid.validate()?;
    cfg.disturbance.validate()?;
    if cfg.kf_meas_noise <= 0.0 || cfg.kf_process_noise <= 0.0 {
        return Err(CliError(
            "kf_meas_noise and kf_process_noise must be positive".into(),
        ));
    }
    Ok(cfg)
}
