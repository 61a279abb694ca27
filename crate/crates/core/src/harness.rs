//! Synthetic trajectories, sensor disturbances, baseline estimators and
//! error metrics for benchmarking the grid-cell estimator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::integrator::{body_to_world, PositionEstimate, TrajectorySample};
use crate::vec2::Vec2;

/// Wave and sensor-noise model applied to measured velocities.
///
/// The wave is a world-frame sinusoid `amp * sin(2 pi f t)` along a fixed
/// direction; Gaussian noise is added per body axis. Ground truth is never
/// touched: disturbances corrupt what the sensors report, not where the
/// vehicle actually is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisturbanceSpec {
    /// Wave frequency in Hz.
    pub wave_freq: f64,
    /// Wave velocity amplitude in m/s.
    pub wave_amp: f64,
    /// World-frame wave direction in radians.
    pub wave_dir: f64,
    /// Gaussian velocity noise std per body axis, m/s.
    pub noise_std: f64,
    /// Seed for the noise stream.
    pub seed: u64,
}

impl Default for DisturbanceSpec {
    fn default() -> Self {
        DisturbanceSpec {
            wave_freq: 1.0,
            wave_amp: 0.02,
            wave_dir: 0.0,
            noise_std: 0.0,
            seed: 1,
        }
    }
}

impl DisturbanceSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.wave_freq > 0.0) {
            return Err(Error::InvalidConfig {
                field: "wave_freq",
                message: "must be positive".into(),
            });
        }
        if self.wave_amp < 0.0 || self.noise_std < 0.0 {
            return Err(Error::InvalidConfig {
                field: "wave_amp/noise_std",
                message: "amplitudes must be non-negative".into(),
            });
        }
        Ok(())
    }
}

/// Summary metrics of an estimate track against ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// Root-mean-square position error over all samples, meters.
    pub rmse: f64,
    /// Error at the final sample, meters.
    pub final_error: f64,
    /// Length of the ground-truth path, meters.
    pub path_length: f64,
    /// final_error / path_length.
    pub drift_per_meter: f64,
    /// Largest pointwise error, meters.
    pub max_error: f64,
}

fn check_motion_step(speed: f64, dt: f64) -> Result<()> {
    if !(speed > 0.0) {
        return Err(Error::InvalidConfig {
            field: "speed",
            message: "must be positive".into(),
        });
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig {
            field: "dt",
            message: "must be positive".into(),
        });
    }
    // keep the nominal (alpha = 1) cell-space step under the aliasing bound
    if speed * dt >= 0.25 {
        return Err(Error::InvalidConfig {
            field: "speed",
            message: format!(
                "per-step motion {} m aliases on the torus (limit 0.25)",
                speed * dt
            ),
        });
    }
    Ok(())
}

/// Counterclockwise circle of the given radius, centered at (0, radius),
/// starting at the origin heading +x. Pure surge: body velocity is
/// (speed, 0) and the heading turns with the tangent.
pub fn gen_circle(radius: f64, speed: f64, dt: f64, laps: usize) -> Result<Vec<TrajectorySample>> {
    if !(radius > 0.0) {
        return Err(Error::InvalidConfig {
            field: "radius",
            message: "must be positive".into(),
        });
    }
    check_motion_step(speed, dt)?;
    let circumference = std::f64::consts::TAU * radius;
    let steps = (laps as f64 * circumference / (speed * dt)).ceil() as usize;
    let omega = speed / radius;
    let samples = (0..steps)
        .map(|k| {
            let t_end = (k as f64 + 1.0) * dt;
            TrajectorySample {
                t: t_end,
                v_body: Vec2::new(speed, 0.0),
                psi: omega * k as f64 * dt,
                truth: Some(Vec2::new(
                    radius * (omega * t_end).sin(),
                    radius * (1.0 - (omega * t_end).cos()),
                )),
            }
        })
        .collect();
    Ok(samples)
}

/// Axis-aligned rectangle from the origin: east along the width, north up
/// the height, back west, then south home. Heading changes instantaneously
/// at the corners; the final sample of each edge lands exactly on the
/// waypoint.
pub fn gen_waypoint_rect(
    width: f64,
    height: f64,
    speed: f64,
    dt: f64,
) -> Result<Vec<TrajectorySample>> {
    if !(width > 0.0) || !(height > 0.0) {
        return Err(Error::InvalidConfig {
            field: "width/height",
            message: "must be positive".into(),
        });
    }
    check_motion_step(speed, dt)?;
    let step = speed * dt;
    let corners = [
        Vec2::new(0.0, 0.0),
        Vec2::new(width, 0.0),
        Vec2::new(width, height),
        Vec2::new(0.0, height),
        Vec2::new(0.0, 0.0),
    ];
    let headings = [
        0.0,
        std::f64::consts::FRAC_PI_2,
        std::f64::consts::PI,
        3.0 * std::f64::consts::FRAC_PI_2,
    ];
    let mut samples = Vec::new();
    let mut t = 0.0;
    for edge in 0..4 {
        let from = corners[edge];
        let to = corners[edge + 1];
        let psi = headings[edge];
        let len = (to - from).norm();
        let n = (len / step).round().max(1.0) as usize;
        let dir = Vec2::new(psi.cos(), psi.sin());
        for i in 0..n {
            t += dt;
            let truth = if i + 1 == n {
                to
            } else {
                from + dir * (step * (i as f64 + 1.0))
            };
            samples.push(TrajectorySample {
                t,
                v_body: Vec2::new(speed, 0.0),
                psi,
                truth: Some(truth),
            });
        }
    }
    Ok(samples)
}

/// Corrupt measured velocities with the wave and noise model. Timestamps,
/// headings and ground truth pass through untouched.
pub fn add_disturbance(
    samples: &[TrajectorySample],
    spec: &DisturbanceSpec,
) -> Result<Vec<TrajectorySample>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = if spec.noise_std > 0.0 {
        Some(Normal::new(0.0, spec.noise_std).map_err(|e| Error::InvalidConfig {
            field: "noise_std",
            message: e.to_string(),
        })?)
    } else {
        None
    };
    let wave_unit = Vec2::new(spec.wave_dir.cos(), spec.wave_dir.sin());
    let out = samples
        .iter()
        .map(|s| {
            let mut v = s.v_body;
            if spec.wave_amp > 0.0 {
                let w = spec.wave_amp * (std::f64::consts::TAU * spec.wave_freq * s.t).sin();
                // world-frame wave seen in the body frame
                v += (wave_unit * w).rotated(-s.psi);
            }
            if let Some(n) = &normal {
                v += Vec2::new(n.sample(&mut rng), n.sample(&mut rng));
            }
            TrajectorySample { v_body: v, ..*s }
        })
        .collect();
    Ok(out)
}

/// Extract the ground-truth track when every sample carries one.
pub fn truth_track(samples: &[TrajectorySample]) -> Option<Vec<PositionEstimate>> {
    samples
        .iter()
        .map(|s| {
            s.truth.map(|p| PositionEstimate {
                x: p.x,
                y: p.y,
                t: s.t,
            })
        })
        .collect()
}

/// Direct integration of the measured velocity rotated by heading.
/// Per-step intervals come from the timestamps, with the first interval
/// measured from t = 0.
pub fn dead_reckon(samples: &[TrajectorySample]) -> Vec<PositionEstimate> {
    let mut pos = Vec2::ZERO;
    let mut prev_t = 0.0;
    samples
        .iter()
        .map(|s| {
            let dt = s.t - prev_t;
            prev_t = s.t;
            pos += body_to_world(s.v_body, s.psi) * dt;
            PositionEstimate {
                x: pos.x,
                y: pos.y,
                t: s.t,
            }
        })
        .collect()
}

/// Scalar velocity filter for one world axis: constant-velocity process
/// (random-walk velocity), velocity measured.
struct AxisFilter {
    v: f64,
    var: f64,
}

impl AxisFilter {
    /// Velocity is initialized from the first measurement.
    fn new(first_meas: f64, meas_noise: f64) -> AxisFilter {
        AxisFilter {
            v: first_meas,
            var: meas_noise,
        }
    }

    fn advance(&mut self, z: f64, dt: f64, q_rate: f64, r: f64) -> f64 {
        self.var += q_rate * dt;
        let gain = self.var / (self.var + r);
        self.v += gain * (z - self.v);
        self.var *= 1.0 - gain;
        self.v
    }
}

/// Kalman-smoothed velocity integration: per world axis, a linear filter
/// with a constant-velocity process model smooths the measured world-frame
/// velocities, and the smoothed velocity is integrated to position from
/// (0, 0).
///
/// `meas_noise` is the velocity measurement variance in (m/s)^2;
/// `process_noise` is the velocity random-walk intensity in (m/s)^2 per
/// second.
pub fn kf_velocity_baseline(
    samples: &[TrajectorySample],
    meas_noise: f64,
    process_noise: f64,
) -> Result<Vec<PositionEstimate>> {
    if !(meas_noise > 0.0) || !(process_noise > 0.0) {
        return Err(Error::InvalidConfig {
            field: "meas_noise/process_noise",
            message: "noise parameters must be positive".into(),
        });
    }
    let mut filters: Option<(AxisFilter, AxisFilter)> = None;
    let mut pos = Vec2::ZERO;
    let mut prev_t = 0.0;
    let mut out = Vec::with_capacity(samples.len());
    for s in samples {
        let z = body_to_world(s.v_body, s.psi);
        let dt = s.t - prev_t;
        prev_t = s.t;
        let smoothed = match &mut filters {
            None => {
                filters = Some((
                    AxisFilter::new(z.x, meas_noise),
                    AxisFilter::new(z.y, meas_noise),
                ));
                z
            }
            Some((fx, fy)) => Vec2::new(
                fx.advance(z.x, dt, process_noise, meas_noise),
                fy.advance(z.y, dt, process_noise, meas_noise),
            ),
        };
        pos += smoothed * dt;
        out.push(PositionEstimate {
            x: pos.x,
            y: pos.y,
            t: s.t,
        });
    }
    Ok(out)
}

/// Pointwise error metrics between an estimate track and a reference track
/// with matching timestamps.
pub fn compare(est: &[PositionEstimate], truth: &[PositionEstimate]) -> Result<ErrorReport> {
    if est.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: est.len(),
            right: truth.len(),
        });
    }
    if est.is_empty() {
        return Err(Error::LengthMismatch { left: 0, right: 0 });
    }
    let mut sum_sq = 0.0;
    let mut max_error: f64 = 0.0;
    let mut final_error = 0.0;
    let mut path_length = 0.0;
    let mut prev_truth: Option<Vec2> = None;
    for (i, (e, t)) in est.iter().zip(truth).enumerate() {
        if (e.t - t.t).abs() > 1e-9 {
            return Err(Error::TimestampMismatch {
                index: i,
                left: e.t,
                right: t.t,
            });
        }
        let err = (e.pos() - t.pos()).norm();
        sum_sq += err * err;
        max_error = max_error.max(err);
        final_error = err;
        if let Some(p) = prev_truth {
            path_length += (t.pos() - p).norm();
        }
        prev_truth = Some(t.pos());
    }
    let rmse = (sum_sq / est.len() as f64).sqrt();
    let drift_per_meter = if path_length > 0.0 {
        final_error / path_length
    } else if final_error == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(ErrorReport {
        rmse,
        final_error,
        path_length,
        drift_per_meter,
        max_error,
    })
}
