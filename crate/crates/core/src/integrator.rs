//! From body-frame velocities to position estimates.
//!
//! Per sample: rotate the body velocity into the world frame, scale it into
//! a per-step cell-space displacement, rebuild the relative kernel with
//! that shift, advance the network one step, decode the bump phase, and
//! accumulate the wrapped phase delta scaled by `gamma` into the position.
//!
//! Bump decoding uses the two torus characters that are single-valued on
//! the twisted topology: `u = x - y / sqrt(3)` with period 1, and `y` with
//! period sqrt(3)/2. A plain circular mean of x alone is not well defined
//! here (wrapping in y displaces x by half a period); the reported
//! `phase_x` is the x coordinate of the representative point `u + y /
//! sqrt(3)`, which agrees with the naive reading whenever the bump is away
//! from the seam.

use crate::config::GridConfig;
use crate::error::{Error, Result};
use crate::kernel::{build_relative_kernel, step_fast};
use crate::network::{init_state, total_activity, GridState, MAX_SHIFT_NORM, MIN_TOTAL_ACTIVITY};
use crate::topology::{CellGrid, PERIOD_Y};
use crate::vec2::Vec2;

const SQRT3: f64 = 1.7320508075688772;

/// Minimum per-axis resultant below which the activity is considered too
/// diffuse to decode.
pub const MIN_RESULTANT: f64 = 0.05;

/// Settling runs zero-velocity steps until the sup-norm step change falls
/// below this tolerance...
pub const SETTLE_SUP_TOL: f64 = 1e-8;
/// ...or until this many steps have elapsed, whichever comes first.
pub const SETTLE_MAX_STEPS: usize = 5000;

/// A per-step cell-space displacement commanded to the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityInput {
    pub nu: Vec2,
}

impl VelocityInput {
    pub fn new(nu: Vec2) -> Result<VelocityInput> {
        let norm = nu.norm();
        if !(norm < MAX_SHIFT_NORM) {
            return Err(Error::ShiftSaturated {
                norm,
                limit: MAX_SHIFT_NORM,
            });
        }
        Ok(VelocityInput { nu })
    }
}

/// Decoded bump location on the torus, with per-axis confidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpPhase {
    /// x coordinate of the bump representative, in [0, 1).
    pub phase_x: f64,
    /// y coordinate, in [0, sqrt(3)/2).
    pub phase_y: f64,
    /// Resultant of the x-character sum, in [0, 1].
    pub resultant_x: f64,
    /// Resultant of the y-character sum, in [0, 1].
    pub resultant_y: f64,
}

/// Planar position estimate in meters at time `t` seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionEstimate {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl PositionEstimate {
    pub const ORIGIN: PositionEstimate = PositionEstimate {
        x: 0.0,
        y: 0.0,
        t: 0.0,
    };

    pub fn pos(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }
}

/// One timestamped sensor reading: body-frame velocity and heading, with
/// optional ground truth for evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    /// Timestamp in seconds; strictly increasing along a trajectory.
    pub t: f64,
    /// Body-frame velocity in m/s (surge, sway).
    pub v_body: Vec2,
    /// Heading in radians, counterclockwise-positive, 0 = world +x.
    pub psi: f64,
    /// Ground-truth position, when known.
    pub truth: Option<Vec2>,
}

/// Rotate a body-frame velocity into the world frame.
pub fn body_to_world(v_body: Vec2, psi: f64) -> Vec2 {
    v_body.rotated(psi)
}

/// Scale a world-frame velocity into the per-step cell-space displacement
/// `nu = alpha * R(beta) * v * dt`.
pub fn modulate(v_world: Vec2, cfg: &GridConfig) -> Result<VelocityInput> {
    VelocityInput::new(v_world.rotated(cfg.beta) * (cfg.alpha * cfg.dt))
}

/// Decode the activity-weighted bump location from the torus characters.
pub fn bump_phase(state: &GridState, grid: &CellGrid) -> Result<BumpPhase> {
    let total = total_activity(state);
    if total < MIN_TOTAL_ACTIVITY {
        return Err(Error::DegenerateActivity {
            step: state.step_count(),
        });
    }
    let tau = std::f64::consts::TAU;
    let (mut ur, mut ui, mut yr, mut yi) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (a, ph) in state.activity().iter().zip(grid.phasors()) {
        ur += a * ph[0];
        ui += a * ph[1];
        yr += a * ph[2];
        yi += a * ph[3];
    }
    let resultant_x = (ur * ur + ui * ui).sqrt() / total;
    let resultant_y = (yr * yr + yi * yi).sqrt() / total;
    if resultant_x < MIN_RESULTANT || resultant_y < MIN_RESULTANT {
        return Err(Error::NoBump {
            resultant_x,
            resultant_y,
            step: state.step_count(),
        });
    }
    let u = (ui.atan2(ur) / tau).rem_euclid(1.0);
    let phase_y = (yi.atan2(yr) / tau).rem_euclid(1.0) * PERIOD_Y;
    let phase_x = (u + phase_y / SQRT3).rem_euclid(1.0);
    Ok(BumpPhase {
        phase_x,
        phase_y,
        resultant_x,
        resultant_y,
    })
}

/// Wrapped difference in (-period/2, period/2].
fn wrap_delta(d: f64, period: f64) -> f64 {
    let w = d.rem_euclid(period);
    if w > period / 2.0 {
        w - period
    } else {
        w
    }
}

/// Nearest-image displacement between two decoded phases, as a cell-space
/// vector. Valid as long as per-step motion stays under the shift bound.
pub fn phase_delta(prev: &BumpPhase, curr: &BumpPhase) -> Vec2 {
    let u_prev = prev.phase_x - prev.phase_y / SQRT3;
    let u_curr = curr.phase_x - curr.phase_y / SQRT3;
    let du = wrap_delta(u_curr - u_prev, 1.0);
    let dy = wrap_delta(curr.phase_y - prev.phase_y, PERIOD_Y);
    Vec2::new(du + dy / SQRT3, dy)
}

/// Advance a position estimate by a decoded cell-space displacement.
pub fn update_position(
    pos: &PositionEstimate,
    delta: Vec2,
    cfg: &GridConfig,
) -> PositionEstimate {
    PositionEstimate {
        x: pos.x + cfg.gamma * delta.x,
        y: pos.y + cfg.gamma * delta.y,
        t: pos.t + cfg.dt,
    }
}

/// The sequential estimator: owns the network state, consumes samples in
/// time order, emits one position estimate per sample.
#[derive(Debug, Clone)]
pub struct PathIntegrator {
    cfg: GridConfig,
    grid: CellGrid,
    state: GridState,
    prev_phase: BumpPhase,
    position: PositionEstimate,
    processed: usize,
}

impl PathIntegrator {
    /// Initialize the network from the configured seed and settle it with
    /// zero velocity until the attractor has formed.
    pub fn new(cfg: &GridConfig) -> Result<PathIntegrator> {
        cfg.validate()?;
        let grid = CellGrid::new(cfg.n_x, cfg.n_y)?;
        let mut state = init_state(cfg)?;
        let still = build_relative_kernel(&grid, cfg, Vec2::ZERO)?;
        for _ in 0..SETTLE_MAX_STEPS {
            let next = step_fast(&state, &still, &grid, cfg)?;
            let sup = state
                .activity()
                .iter()
                .zip(next.activity())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            state = next;
            if sup < SETTLE_SUP_TOL {
                break;
            }
        }
        let prev_phase = bump_phase(&state, &grid)?;
        Ok(PathIntegrator {
            cfg: *cfg,
            grid,
            state,
            prev_phase,
            position: PositionEstimate::ORIGIN,
            processed: 0,
        })
    }

    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    pub fn state(&self) -> &GridState {
        &self.state
    }

    pub fn position(&self) -> PositionEstimate {
        self.position
    }

    pub fn bump(&self) -> BumpPhase {
        self.prev_phase
    }

    /// Consume one sample and return the updated position estimate, stamped
    /// with the sample time.
    pub fn process(&mut self, sample: &TrajectorySample) -> Result<PositionEstimate> {
        let index = self.processed;
        let wrap = |e: Error| e.at_sample(index, sample.t);
        if !sample.v_body.is_finite() || !sample.psi.is_finite() {
            return Err(wrap(Error::InvalidConfig {
                field: "sample",
                message: "non-finite velocity or heading".into(),
            }));
        }
        let v_world = body_to_world(sample.v_body, sample.psi);
        let input = modulate(v_world, &self.cfg).map_err(wrap)?;
        let kernel = build_relative_kernel(&self.grid, &self.cfg, input.nu).map_err(wrap)?;
        self.state = step_fast(&self.state, &kernel, &self.grid, &self.cfg).map_err(wrap)?;
        let current = bump_phase(&self.state, &self.grid).map_err(wrap)?;
        let delta = phase_delta(&self.prev_phase, &current);
        self.prev_phase = current;
        self.position = PositionEstimate {
            x: self.position.x + self.cfg.gamma * delta.x,
            y: self.position.y + self.cfg.gamma * delta.y,
            t: sample.t,
        };
        self.processed += 1;
        Ok(self.position)
    }
}

/// Run a whole trajectory through a fresh integrator.
pub fn integrate_trajectory(
    samples: &[TrajectorySample],
    cfg: &GridConfig,
) -> Result<Vec<PositionEstimate>> {
    for (i, pair) in samples.windows(2).enumerate() {
        if !(pair[1].t > pair[0].t) {
            return Err(Error::TimestampMismatch {
                index: i + 1,
                left: pair[0].t,
                right: pair[1].t,
            });
        }
    }
    let mut integrator = PathIntegrator::new(cfg)?;
    samples.iter().map(|s| integrator.process(s)).collect()
}

/// Measure the network's displacement response on a straight run and return
/// the gain that maps decoded cell-space displacement to meters.
///
/// Drives the network with a fixed per-step shift of 0.01 cell units for
/// 200 steps (using a velocity of 0.01 / (alpha * dt) m/s so the commanded
/// shift is the same for any alpha) and divides true path length by total
/// decoded displacement. Deterministic for a fixed seed.
pub fn calibrate_gamma(cfg: &GridConfig) -> Result<f64> {
    cfg.validate()?;
    let run_cfg = GridConfig { gamma: 1.0, ..*cfg };
    let mut integrator = PathIntegrator::new(&run_cfg)?;
    let steps = 200usize;
    let v0 = 0.01 / (cfg.alpha * cfg.dt);
    let mut last = PositionEstimate::ORIGIN;
    for k in 0..steps {
        let sample = TrajectorySample {
            t: (k as f64 + 1.0) * cfg.dt,
            v_body: Vec2::new(v0, 0.0),
            psi: 0.0,
            truth: None,
        };
        last = integrator.process(&sample)?;
    }
    let decoded = last.pos().norm();
    if decoded < 1e-9 {
        return Err(Error::Calibration(
            "bump did not move during the calibration run".into(),
        ));
    }
    let true_length = v0 * cfg.dt * steps as f64;
    Ok(true_length / decoded)
}
