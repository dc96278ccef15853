//! Closed-loop benchmark harness.
//!
//! Wires the full perception-to-command pipeline to the simulated world and
//! runs episodes: render the camera, plan one command, integrate the unicycle
//! and the pedestrians, repeat until the goal is reached, something is hit,
//! or time runs out. Three planner modes implement the ablation ladder:
//!
//! * `pog_only`: steer at the projected goal at a fixed cruise speed; the
//!   camera image is ignored entirely.
//! * `pog_hog`: extract the horizon, steer at the subgoal pixel and slow down
//!   by proximity, but plan no path and respect no lateral clearance.
//! * `full`: the whole pipeline including path generation and the lookahead
//!   bearing.
//!
//! Physics steps at 20 Hz and the planner runs every other step (10 Hz);
//! per-action latency is measured around the planner call only, never the
//! renderer, since rendering stands in for the real robot's camera stack.

mod env;
mod frames;
mod suite;

pub use env::{build_environment, EnvKind, EnvironmentSpec, DEFAULT_OBSTACLE_RADIUS_M};
pub use frames::{frame_rgb, write_frame_ppm};
pub use suite::{
    ablation_suite, density_sweep_suite, load_suite, parse_suite, run_suite, AggregateRow,
    EpisodeRow, SuiteEnv, SuiteReport, SuiteSpec,
};

use crate::camera::CameraModel;
use crate::goalproj::{in_view_goal_pixel, project_goal, GoalDirection};
use crate::grid::{pixel_angle, to_planning, ImageDims, Navigability, NavigabilityImage, PixelCoord};
use crate::horizon::{extract_horizon, VisualHorizon};
use crate::pathgen::{generate_path_preferring, RobotFootprint, Shift, VisualPath};
use crate::segmentation::{classes_to_navigability, postprocess_navigability, NavigabilityTable, SemanticImage};
use crate::servo::{
    control_command, limit_command, proximity, servo_features, ControlCommand, ControlGains,
    ControlLimits, ServoFeatures,
};
use crate::sim::{
    advance_agents, check_collision, render_camera, step_unicycle, Body, Pose2D, World,
};
use crate::subgoal::{scalarized_cost, select_hog, Hog, ObjectiveWeights};
use crate::{Error, Result};
use std::time::Instant;

/// Physics integration step.
pub const PHYSICS_DT_S: f64 = 0.05;
/// The planner runs every this many physics steps.
pub const CONTROL_EVERY: usize = 2;
/// Robot body radius used for collision checking.
pub const DEFAULT_ROBOT_RADIUS_M: f64 = 0.3;

/// Ablation mode of the planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlMode {
    PogOnly,
    PogHog,
    Full,
}

impl ControlMode {
    pub fn name(self) -> &'static str {
        match self {
            ControlMode::PogOnly => "pog_only",
            ControlMode::PogHog => "pog_hog",
            ControlMode::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pog_only" => Ok(ControlMode::PogOnly),
            "pog_hog" => Ok(ControlMode::PogHog),
            "full" => Ok(ControlMode::Full),
            other => Err(Error::Domain(format!(
                "unknown mode {other:?} (expected pog_only, pog_hog, or full)"
            ))),
        }
    }
}

/// Static planner configuration shared by every control step of an episode.
#[derive(Debug, Clone)]
pub struct PlannerParams {
    pub camera: CameraModel,
    pub table: NavigabilityTable,
    pub weights: ObjectiveWeights,
    pub robot: RobotFootprint,
    pub gains: ControlGains,
    pub limits: ControlLimits,
    /// Lookahead radius ceiling, pixels.
    pub lookahead_max_px: f64,
    /// Fixed forward speed of the `pog_only` mode, m/s.
    pub cruise_speed: f64,
    /// Seconds between planner invocations, used by the rate limiter.
    pub control_dt: f64,
}

impl PlannerParams {
    pub fn defaults_for(dims: ImageDims) -> Self {
        PlannerParams {
            camera: CameraModel::default_for(dims),
            table: crate::sim::default_navigability(),
            weights: ObjectiveWeights::default(),
            robot: RobotFootprint::default(),
            gains: ControlGains::defaults_for_height(dims.height),
            limits: ControlLimits::default(),
            lookahead_max_px: dims.height as f64 * 0.5,
            cruise_speed: 1.0,
            control_dt: PHYSICS_DT_S * CONTROL_EVERY as f64,
        }
    }
}

/// Everything the planner derived in one step, for logging and overlays.
#[derive(Debug, Clone)]
pub struct Diagnostics {
    pub pog: PixelCoord,
    pub hog: Option<PixelCoord>,
    pub path: Option<VisualPath>,
    pub lambda: Option<f64>,
    pub phi: f64,
    pub horizon_heights: Option<Vec<usize>>,
}

/// Optional temporal smoothing of the horizon.
///
/// Per column, the boundary may move at most the running average of recent
/// frame-to-frame movements (floored at one pixel), which suppresses single
/// frame segmentation flicker. The first two frames pass through so the
/// average has something to start from. Off by default.
#[derive(Debug, Clone, Default)]
pub struct HorizonFilter {
    prev: Option<Vec<usize>>,
    mean_abs_change_px: f64,
    learned: bool,
}

impl HorizonFilter {
    pub fn new() -> Self {
        HorizonFilter::default()
    }

    /// Clamps the new horizon against the previous one and re-derives the
    /// processed image when anything moved beyond the cap.
    pub fn apply(
        &mut self,
        horizon: VisualHorizon,
        processed: NavigabilityImage,
    ) -> (VisualHorizon, NavigabilityImage) {
        let dims = horizon.dims();
        let Some(prev) = self.prev.clone() else {
            self.prev = Some(horizon.heights().to_vec());
            return (horizon, processed);
        };

        let raw_mean = horizon
            .heights()
            .iter()
            .zip(&prev)
            .map(|(&h, &p)| h.abs_diff(p) as f64)
            .sum::<f64>()
            / dims.width as f64;
        let cap = if self.learned {
            (self.mean_abs_change_px.round() as usize).max(1)
        } else {
            usize::MAX
        };
        self.mean_abs_change_px = if self.learned {
            0.7 * self.mean_abs_change_px + 0.3 * raw_mean
        } else {
            raw_mean
        };
        self.learned = true;

        let mut clamped = Vec::with_capacity(dims.width);
        let mut changed = false;
        for (&h, &p) in horizon.heights().iter().zip(&prev) {
            let limited = if h > p {
                p + h.abs_diff(p).min(cap)
            } else {
                p - h.abs_diff(p).min(cap)
            };
            changed |= limited != h;
            clamped.push(limited);
        }
        self.prev = Some(clamped.clone());
        if !changed {
            return (horizon, processed);
        }

        let mut synth = NavigabilityImage::new_filled(dims, Navigability::Navigable);
        for col in 0..dims.width {
            for row in 0..=clamped[col] {
                synth.set(row, col, Navigability::NonNavigable);
            }
        }
        extract_horizon(&synth)
    }
}

/// The goal as seen from the robot: rotate the world-frame offset into the
/// robot frame (x forward, y left).
pub fn goal_in_robot_frame(pose: &Pose2D, goal: [f64; 2]) -> [f64; 2] {
    let (dx, dy) = (goal[0] - pose.x, goal[1] - pose.y);
    let (sin, cos) = pose.theta.sin_cos();
    [dx * cos + dy * sin, -dx * sin + dy * cos]
}

/// Frames a committed avoidance side may contradict the subgoal's side
/// before it is dropped. Holding through brief contradiction stops the side
/// from flipping every frame when the subgoal dithers across the image
/// center, which cancels the robot's rotation and strands it; dropping after
/// a sustained contradiction stops a stale side from steering the robot away
/// from a subgoal that has durably moved to the other half of the image. At
/// the default control rate this is 1.5 seconds, enough for a held side to
/// rotate the robot well clear of whatever triggered the detour.
const SHIFT_HOLD_LIMIT_FRAMES: u32 = 15;

/// Cross-frame planner state threaded through [`plan_step`].
///
/// One value lives per episode. It carries the previous command for the rate
/// limiter, the avoidance side the path generator committed to while the
/// current obstruction is being passed (cleared as soon as a frame needs no
/// shift, or after contradicting the subgoal side for
/// [`SHIFT_HOLD_LIMIT_FRAMES`] frames), and the optional temporal horizon
/// filter. A fresh default gives the first frame a standing start.
#[derive(Debug, Default)]
pub struct PlannerMemory {
    pub prev_command: ControlCommand,
    pub shift: Option<Shift>,
    contested_frames: u32,
    pub filter: Option<HorizonFilter>,
}

/// Runs one perception-plan-control step on a semantic image.
///
/// `goal_rel` is the goal in the robot frame, meters. Its bearing drives the
/// goal projection; its length only gates the in-view shortcut, where a goal
/// whose ground point lands inside the processed free space becomes the
/// subgoal directly. `memory` carries the episode state between frames and is
/// updated in place.
pub fn plan_step(
    semantic: &SemanticImage,
    goal_rel: [f64; 2],
    mode: ControlMode,
    params: &PlannerParams,
    memory: &mut PlannerMemory,
) -> Result<(ControlCommand, Diagnostics)> {
    let dims = semantic.dims();
    if goal_rel[0].hypot(goal_rel[1]) < 1e-9 {
        return Err(Error::Domain("goal coincides with the robot".into()));
    }
    let prev = memory.prev_command;
    let dir = GoalDirection::new(goal_rel[1].atan2(goal_rel[0]))?;
    let pog = project_goal(dir, dims);
    // A goal almost directly behind projects onto the origin pixel, which has
    // no bearing of its own; steer by the raw goal bearing there.
    let pog_bearing = pixel_angle(to_planning(pog.pixel(), dims)?).unwrap_or(dir.angle());

    if mode == ControlMode::PogOnly {
        let raw = ControlCommand {
            v: params.cruise_speed,
            omega: params.gains.k_omega * pog_bearing,
        };
        let cmd = limit_command(raw, &params.limits, prev, params.control_dt);
        memory.prev_command = cmd;
        return Ok((
            cmd,
            Diagnostics {
                pog: pog.pixel(),
                hog: None,
                path: None,
                lambda: None,
                phi: pog_bearing,
                horizon_heights: None,
            },
        ));
    }

    let nav = classes_to_navigability(semantic, &params.table);
    let post = postprocess_navigability(&nav);
    let (mut horizon, mut processed) = extract_horizon(&post);
    if let Some(f) = memory.filter.as_mut() {
        (horizon, processed) = f.apply(horizon, processed);
    }

    // Subgoal selection scores candidates against the projected goal's pixel
    // angle, so the target direction lives in the same quantized frame as the
    // candidates themselves.
    let in_view = in_view_goal_pixel(goal_rel, &params.camera, dims)
        .filter(|p| processed.is_navigable(p.row, p.col));
    let hog = match in_view {
        Some(pixel) => Hog {
            pixel,
            cost: scalarized_cost(to_planning(pixel, dims)?, pog_bearing, params.weights, dims),
        },
        None => select_hog(&horizon, pog_bearing, params.weights),
    };

    let (features, path) = match mode {
        ControlMode::Full => {
            let path = generate_path_preferring(
                &processed,
                hog,
                &params.camera,
                &params.robot,
                memory.shift,
            )?;
            let hog_side = match hog.pixel.col.cmp(&dims.origin_pixel().col) {
                std::cmp::Ordering::Less => Some(Shift::Left),
                std::cmp::Ordering::Greater => Some(Shift::Right),
                std::cmp::Ordering::Equal => None,
            };
            match (path.shift, hog_side) {
                (Some(used), Some(side)) if used != side => memory.contested_frames += 1,
                _ => memory.contested_frames = 0,
            }
            if memory.contested_frames >= SHIFT_HOLD_LIMIT_FRAMES {
                memory.shift = None;
                memory.contested_frames = 0;
            } else {
                memory.shift = path.shift;
            }
            let features =
                servo_features(&horizon, &path, params.lookahead_max_px, pog_bearing);
            (features, Some(path))
        }
        ControlMode::PogHog => {
            let lambda = proximity(&horizon);
            let phi = if hog.pixel == dims.origin_pixel() {
                pog_bearing
            } else {
                pixel_angle(to_planning(hog.pixel, dims)?)?
            };
            (
                ServoFeatures {
                    lambda,
                    phi,
                    lookahead_r: 0.0,
                },
                None,
            )
        }
        ControlMode::PogOnly => unreachable!("handled above"),
    };

    let cmd = control_command(&features, &params.gains, &params.limits, prev, params.control_dt);
    memory.prev_command = cmd;
    Ok((
        cmd,
        Diagnostics {
            pog: pog.pixel(),
            hog: Some(hog.pixel),
            path,
            lambda: Some(features.lambda),
            phi: features.phi,
            horizon_heights: Some(horizon.heights().to_vec()),
        },
    ))
}

/// One episode's setup.
#[derive(Debug, Clone)]
pub struct EpisodeConfig {
    pub start: Pose2D,
    pub goal: [f64; 2],
    pub epsilon_m: f64,
    pub t_max_s: f64,
    pub mode: ControlMode,
    pub dims: ImageDims,
    pub robot_radius_m: f64,
    pub params: PlannerParams,
    pub use_horizon_filter: bool,
}

impl EpisodeConfig {
    pub fn new(start: Pose2D, goal: [f64; 2], mode: ControlMode, dims: ImageDims) -> Self {
        EpisodeConfig {
            start,
            goal,
            epsilon_m: 0.5,
            t_max_s: 90.0,
            mode,
            dims,
            robot_radius_m: DEFAULT_ROBOT_RADIUS_M,
            params: PlannerParams::defaults_for(dims),
            use_horizon_filter: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon_m.is_finite() && self.epsilon_m > 0.0) {
            return Err(Error::Domain(format!(
                "goal radius must be positive, got {}",
                self.epsilon_m
            )));
        }
        if !(self.t_max_s.is_finite() && self.t_max_s > 0.0) {
            return Err(Error::Domain(format!(
                "episode time limit must be positive, got {}",
                self.t_max_s
            )));
        }
        if !(self.robot_radius_m.is_finite() && self.robot_radius_m > 0.0) {
            return Err(Error::Domain(format!(
                "robot radius must be positive, got {}",
                self.robot_radius_m
            )));
        }
        Ok(())
    }
}

/// Outcome and logs of one episode. `success` excludes both failure causes
/// by construction; the latency fields are wall-clock measurements and are
/// the only fields exempt from determinism.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    pub success: bool,
    pub collision: bool,
    pub timeout: bool,
    pub path_length_m: f64,
    pub sim_time_s: f64,
    pub mean_latency_s: f64,
    pub max_latency_s: f64,
    pub trajectory: Vec<Pose2D>,
    /// Proximity feature per control step; NaN when the mode has none.
    pub lambda_log: Vec<f64>,
    /// Alignment feature per control step.
    pub phi_log: Vec<f64>,
}

impl EpisodeResult {
    /// Bit-exact equality of everything except the wall-clock latencies.
    pub fn same_outcome(&self, other: &Self) -> bool {
        let bits = |xs: &[f64]| xs.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        let poses = |t: &[Pose2D]| {
            t.iter()
                .map(|p| (p.x.to_bits(), p.y.to_bits(), p.theta.to_bits()))
                .collect::<Vec<_>>()
        };
        self.success == other.success
            && self.collision == other.collision
            && self.timeout == other.timeout
            && self.path_length_m.to_bits() == other.path_length_m.to_bits()
            && self.sim_time_s.to_bits() == other.sim_time_s.to_bits()
            && poses(&self.trajectory) == poses(&other.trajectory)
            && bits(&self.lambda_log) == bits(&other.lambda_log)
            && bits(&self.phi_log) == bits(&other.phi_log)
    }
}

/// What an observer sees after each planner invocation.
pub struct ControlStepRecord<'a> {
    pub control_step: usize,
    pub sim_time_s: f64,
    pub pose: Pose2D,
    pub semantic: &'a SemanticImage,
    pub diagnostics: &'a Diagnostics,
    pub command: ControlCommand,
}

/// Runs one closed-loop episode.
pub fn run_episode(world: &World, config: &EpisodeConfig) -> Result<EpisodeResult> {
    run_episode_observed(world, config, |_| {})
}

/// [`run_episode`] with a callback after every control step, used for frame
/// dumping and feature inspection. The callback does not affect the episode.
pub fn run_episode_observed<F>(
    world: &World,
    config: &EpisodeConfig,
    mut observer: F,
) -> Result<EpisodeResult>
where
    F: FnMut(&ControlStepRecord<'_>),
{
    config.validate()?;
    world.validate()?;

    let mut w = world.clone();
    let mut pose = config.start;
    let mut cmd = ControlCommand::default();
    let mut memory = PlannerMemory {
        filter: config.use_horizon_filter.then(HorizonFilter::new),
        ..PlannerMemory::default()
    };

    let dist_to_goal =
        |p: &Pose2D| (config.goal[0] - p.x).hypot(config.goal[1] - p.y);

    let mut trajectory = vec![pose];
    let mut lambda_log = Vec::new();
    let mut phi_log = Vec::new();
    let mut latencies = Vec::new();
    let mut path_length = 0.0;
    let mut collision = false;
    let mut success = dist_to_goal(&pose) <= config.epsilon_m;

    let max_steps = (config.t_max_s / PHYSICS_DT_S).ceil() as usize;
    let mut step = 0;
    while !success && !collision && step < max_steps {
        if step % CONTROL_EVERY == 0 {
            let (semantic, _depth) = render_camera(&w, &pose, &config.params.camera, config.dims);
            let goal_rel = goal_in_robot_frame(&pose, config.goal);
            let t0 = Instant::now();
            let (next_cmd, diagnostics) = plan_step(
                &semantic,
                goal_rel,
                config.mode,
                &config.params,
                &mut memory,
            )?;
            latencies.push(t0.elapsed().as_secs_f64());
            cmd = next_cmd;
            lambda_log.push(diagnostics.lambda.unwrap_or(f64::NAN));
            phi_log.push(diagnostics.phi);
            observer(&ControlStepRecord {
                control_step: step / CONTROL_EVERY,
                sim_time_s: step as f64 * PHYSICS_DT_S,
                pose,
                semantic: &semantic,
                diagnostics: &diagnostics,
                command: cmd,
            });
        }

        let next = step_unicycle(&pose, cmd.v, cmd.omega, PHYSICS_DT_S);
        path_length += (next.x - pose.x).hypot(next.y - pose.y);
        pose = next;
        advance_agents(
            &mut w,
            Some(Body {
                center: pose.position(),
                radius: config.robot_radius_m,
            }),
            PHYSICS_DT_S,
        );
        trajectory.push(pose);
        step += 1;

        if check_collision(&w, &pose, config.robot_radius_m) {
            collision = true;
        } else if dist_to_goal(&pose) <= config.epsilon_m {
            success = true;
        }
    }

    let timeout = !success && !collision;
    let (mean_latency, max_latency) = if latencies.is_empty() {
        (0.0, 0.0)
    } else {
        (
            latencies.iter().sum::<f64>() / latencies.len() as f64,
            latencies.iter().cloned().fold(0.0, f64::max),
        )
    };
    Ok(EpisodeResult {
        success,
        collision,
        timeout,
        path_length_m: path_length,
        sim_time_s: step as f64 * PHYSICS_DT_S,
        mean_latency_s: mean_latency,
        max_latency_s: max_latency,
        trajectory,
        lambda_log,
        phi_log,
    })
}
