//! Feature extraction and velocity control.
//!
//! Two scalar features drive the robot. Proximity is the pixel distance from
//! the planning origin to the nearest horizon pixel, a monotone stand-in for
//! obstacle clearance. Alignment is the signed bearing of a lookahead point
//! on the visual path, picked where the path first leaves a circle whose
//! radius shrinks as obstacles close in. Linear speed regulates proximity
//! toward a setpoint; angular speed steers the bearing to zero. Both outputs
//! are clamped and rate-limited.

use crate::grid::{pixel_angle, to_planning};
use crate::horizon::VisualHorizon;
use crate::pathgen::VisualPath;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Proportional gains plus the proximity setpoint, all positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlGains {
    /// Linear speed per pixel of proximity error, in (m/s)/pixel.
    pub k_v: f64,
    /// Angular speed per radian of bearing error, in (rad/s)/rad.
    pub k_omega: f64,
    /// Desired proximity in pixels.
    pub lambda_star: f64,
}

impl ControlGains {
    pub fn new(k_v: f64, k_omega: f64, lambda_star: f64) -> Result<Self> {
        if !(k_v > 0.0 && k_omega > 0.0 && lambda_star > 0.0) {
            return Err(Error::Domain(format!(
                "control gains must be positive, got ({k_v}, {k_omega}, {lambda_star})"
            )));
        }
        Ok(ControlGains {
            k_v,
            k_omega,
            lambda_star,
        })
    }

    /// Resolution-scaled defaults: the proximity setpoint is a quarter of the
    /// image height.
    pub fn defaults_for_height(height: usize) -> Self {
        ControlGains {
            k_v: 0.01,
            k_omega: 1.0,
            lambda_star: 0.25 * height as f64,
        }
    }
}

/// Velocity and per-step acceleration bounds, all positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlLimits {
    pub v_max: f64,
    pub omega_max: f64,
    pub dv_max: f64,
    pub domega_max: f64,
}

impl ControlLimits {
    pub fn new(v_max: f64, omega_max: f64, dv_max: f64, domega_max: f64) -> Result<Self> {
        if !(v_max > 0.0 && omega_max > 0.0 && dv_max > 0.0 && domega_max > 0.0) {
            return Err(Error::Domain("control limits must be positive".into()));
        }
        Ok(ControlLimits {
            v_max,
            omega_max,
            dv_max,
            domega_max,
        })
    }
}

impl Default for ControlLimits {
    fn default() -> Self {
        ControlLimits {
            v_max: 2.0,
            omega_max: PI,
            dv_max: 1.0,
            domega_max: 2.0 * PI,
        }
    }
}

/// A single velocity command: linear m/s (negative = reverse) and angular
/// rad/s (positive = counter-clockwise).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlCommand {
    pub v: f64,
    pub omega: f64,
}

/// The extracted feature pair plus the lookahead radius that produced phi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServoFeatures {
    /// Pixel distance to the nearest horizon pixel.
    pub lambda: f64,
    /// Signed bearing of the lookahead point, positive left.
    pub phi: f64,
    /// Lookahead circle radius in pixels.
    pub lookahead_r: f64,
}

/// Minimum planning-frame distance from the origin to the horizon pixel set.
/// Zero when the origin itself is on the horizon (everything blocked).
pub fn proximity(horizon: &VisualHorizon) -> f64 {
    let dims = horizon.dims();
    horizon
        .pixel_set()
        .iter()
        .map(|&px| to_planning(px, dims).expect("horizon pixels are in bounds").norm())
        .fold(f64::INFINITY, f64::min)
}

/// Lookahead bearing along the path.
///
/// The lookahead radius is `max(1, min(lambda / 2, d_max))`; the lookahead
/// point is the first path point, walking start to subgoal, at or beyond that
/// radius, or the final point when the whole path is closer. Returns the
/// signed bearing of that point and the radius used.
///
/// A single-point path (subgoal at the start pixel) carries no direction, so
/// its bearing falls back to `pog_bearing`, the projected-goal direction.
///
/// Path points are interpreted relative to the first point, which path
/// generation pins to the planning origin, so no image dimensions are needed.
pub fn alignment(path: &VisualPath, lambda: f64, d_max: f64, pog_bearing: f64) -> (f64, f64) {
    let r = 1.0f64.max((lambda / 2.0).min(d_max));
    if path.points.len() <= 1 {
        return (pog_bearing, r);
    }
    let start = path.points[0];
    let rel = |px: crate::grid::PixelCoord| {
        crate::grid::PlanarPoint::new(
            start.row as i32 - px.row as i32,
            start.col as i32 - px.col as i32,
        )
    };
    let lookahead = path
        .points
        .iter()
        .find(|&&px| rel(px).norm() >= r)
        .or_else(|| path.points.last())
        .expect("path is non-empty");
    let p = rel(*lookahead);
    let phi = pixel_angle(p).expect("multi-point paths never revisit the start pixel");
    (phi, r)
}

/// Convenience bundle: proximity from the horizon, alignment from the path.
pub fn servo_features(
    horizon: &VisualHorizon,
    path: &VisualPath,
    d_max: f64,
    pog_bearing: f64,
) -> ServoFeatures {
    let lambda = proximity(horizon);
    let (phi, lookahead_r) = alignment(path, lambda, d_max, pog_bearing);
    ServoFeatures {
        lambda,
        phi,
        lookahead_r,
    }
}

/// Proportional control with clamping and rate limiting.
///
/// Raw commands are `k_v * (lambda - lambda_star)` and `k_omega * phi`, with
/// positive phi (lookahead to the left) turning counter-clockwise. Each is
/// clamped to its velocity bound, then pulled toward the previous command so
/// the per-step change respects the acceleration bounds over `dt` seconds.
/// Negative linear speed is allowed: a proximity deficit backs the robot up.
pub fn control_command(
    features: &ServoFeatures,
    gains: &ControlGains,
    limits: &ControlLimits,
    prev: ControlCommand,
    dt: f64,
) -> ControlCommand {
    let raw = ControlCommand {
        v: gains.k_v * (features.lambda - gains.lambda_star),
        omega: gains.k_omega * features.phi,
    };
    limit_command(raw, limits, prev, dt)
}

/// Clamps a raw command to the velocity bounds, then pulls it toward `prev`
/// so the per-step change respects the acceleration bounds over `dt` seconds.
pub fn limit_command(
    raw: ControlCommand,
    limits: &ControlLimits,
    prev: ControlCommand,
    dt: f64,
) -> ControlCommand {
    debug_assert!(dt > 0.0);
    let v_target = raw.v.clamp(-limits.v_max, limits.v_max);
    let omega_target = raw.omega.clamp(-limits.omega_max, limits.omega_max);
    let v = prev.v + (v_target - prev.v).clamp(-limits.dv_max * dt, limits.dv_max * dt);
    let omega = prev.omega
        + (omega_target - prev.omega).clamp(-limits.domega_max * dt, limits.domega_max * dt);
    ControlCommand { v, omega }
}
