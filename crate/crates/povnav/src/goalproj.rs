//! Goal projection onto the image border (the peripheral optic goal, POG).
//!
//! The navigation goal usually lies outside the camera frustum, so it is
//! represented by the border pixel a ray from the planning origin toward the
//! goal would exit through. Goals behind the robot cannot exit through the
//! top/left/right borders at all; their ray is cast into the half-plane
//! mirrored about the bottom edge and the virtual exit point is folded onto
//! the bottom row, which saturates whole ranges of backward directions onto
//! the two bottom corner pixels and makes the robot swing around smoothly.

use crate::angles::wrap_to_pi;
use crate::camera::CameraModel;
use crate::grid::{ImageDims, PixelCoord};
use crate::sim::Pose2D;
use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI};

/// Symmetry-breaking bias applied when the goal bearing is exactly pi.
const BACKWARD_BIAS_RAD: f64 = 0.01;

/// Bearing from the robot to the goal, radians in `[-pi, pi)`,
/// 0 straight ahead, positive to the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoalDirection {
    theta: f64,
}

impl GoalDirection {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::Domain(format!("goal bearing must be finite, got {theta}")));
        }
        Ok(GoalDirection {
            theta: wrap_to_pi(theta),
        })
    }

    pub fn angle(self) -> f64 {
        self.theta
    }
}

/// Peripheral optic goal: the goal as a border pixel of the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pog {
    pixel: PixelCoord,
}

impl Pog {
    pub fn pixel(self) -> PixelCoord {
        self.pixel
    }
}

/// Goal bearing in the robot frame from world-frame robot pose and goal.
/// Rejects a goal coincident with the robot position.
pub fn relative_goal_angle(robot: Pose2D, goal: [f64; 2]) -> Result<GoalDirection> {
    let (dx, dy) = (goal[0] - robot.x, goal[1] - robot.y);
    if dx.hypot(dy) < 1e-9 {
        return Err(Error::Domain(
            "goal coincides with the robot position".into(),
        ));
    }
    GoalDirection::new(wrap_to_pi(dy.atan2(dx) - robot.theta))
}

/// Projects a goal bearing onto the image border.
///
/// Forward bearings (`|theta| <= pi/2`) return the pixel where the ray from
/// the planning origin exits the image; exactly `+pi/2` and `-pi/2` map to
/// the bottom-left and bottom-right corner pixels. Backward bearings are cast
/// into the bottom-mirrored half-plane: a virtual hit on the mirrored top
/// border folds onto the bottom row at its lateral offset, and virtual hits
/// on the mirrored side borders saturate to the corresponding bottom corner.
pub fn project_goal(dir: GoalDirection, dims: ImageDims) -> Pog {
    let mut theta = dir.angle();
    if theta == -PI {
        // Exact-pi goals are ambiguous between the two corners; bias decides.
        theta = -PI + BACKWARD_BIAS_RAD;
    }
    let w = dims.width;
    let h = dims.height;
    let cm = dims.center_col() as f64;
    let x_top = (h - 1) as f64;
    let y_left = cm;
    let y_right = cm - (w - 1) as f64;

    let pixel = if theta.abs() <= FRAC_PI_2 {
        if theta == FRAC_PI_2 {
            PixelCoord::new(h - 1, 0)
        } else if theta == -FRAC_PI_2 {
            PixelCoord::new(h - 1, w - 1)
        } else {
            let tan = theta.tan();
            let y_at_top = x_top * tan;
            if y_at_top > y_left {
                // Exits the left border.
                let x = y_left / tan;
                PixelCoord::new(h - 1 - x.round() as usize, 0)
            } else if y_at_top < y_right {
                let x = y_right / tan;
                PixelCoord::new(h - 1 - x.round() as usize, w - 1)
            } else {
                PixelCoord::new(0, (cm - y_at_top.round()) as usize)
            }
        }
    } else {
        // Mirrored half-plane: the virtual top border sits at x = -(h - 1).
        let y_virtual = -x_top * theta.tan();
        if y_virtual > y_left {
            PixelCoord::new(h - 1, 0)
        } else if y_virtual < y_right {
            PixelCoord::new(h - 1, w - 1)
        } else {
            let mut col = (cm - y_virtual.round()) as usize;
            if col == dims.center_col() {
                // Never let the POG collide with the planning origin; keep it
                // on the side the goal actually lies on.
                col = if y_virtual >= 0.0 { col - 1 } else { col + 1 };
            }
            PixelCoord::new(h - 1, col)
        }
    };
    Pog { pixel }
}

/// Pixel of the goal's ground point when it falls inside the image below the
/// camera's eye level; `None` otherwise. `rel` is the goal in the robot frame
/// (x forward, y left, meters).
pub fn in_view_goal_pixel(
    rel: [f64; 2],
    camera: &CameraModel,
    dims: ImageDims,
) -> Option<PixelCoord> {
    let (row_f, col_f) = camera.project_ground_point(rel[0], rel[1])?;
    let row = row_f.round();
    let col = col_f.round();
    if col < 0.0 || col > (dims.width - 1) as f64 {
        return None;
    }
    if row <= camera.principal_row || row > (dims.height - 1) as f64 {
        return None;
    }
    Some(PixelCoord::new(row as usize, col as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{pixel_angle, to_planning};
    use proptest::prelude::*;

    fn dims(w: usize, h: usize) -> ImageDims {
        ImageDims::new(w, h).unwrap()
    }

    fn is_border(p: PixelCoord, d: ImageDims) -> bool {
        p.row == 0 || p.row == d.height - 1 || p.col == 0 || p.col == d.width - 1
    }

    #[test]
    fn forward_examples() {
        let d = dims(100, 100);
        assert_eq!(
            project_goal(GoalDirection::new(0.0).unwrap(), d).pixel(),
            PixelCoord::new(0, 50)
        );
        assert_eq!(
            project_goal(GoalDirection::new(PI / 4.0).unwrap(), d).pixel(),
            PixelCoord::new(49, 0)
        );
        assert_eq!(
            project_goal(GoalDirection::new(FRAC_PI_2).unwrap(), d).pixel(),
            PixelCoord::new(99, 0)
        );
        assert_eq!(
            project_goal(GoalDirection::new(-FRAC_PI_2).unwrap(), d).pixel(),
            PixelCoord::new(99, 99)
        );
    }

    #[test]
    fn backward_mirror_example() {
        let d = dims(100, 100);
        // Virtual hit on the mirrored left border folds to the bottom-left corner.
        assert_eq!(
            project_goal(GoalDirection::new(3.0 * PI / 4.0).unwrap(), d).pixel(),
            PixelCoord::new(99, 0)
        );
        assert_eq!(
            project_goal(GoalDirection::new(-3.0 * PI / 4.0).unwrap(), d).pixel(),
            PixelCoord::new(99, 99)
        );
    }

    #[test]
    fn exact_backward_bearing_is_biased_not_ambiguous() {
        let d = dims(100, 100);
        let p = project_goal(GoalDirection::new(PI).unwrap(), d).pixel();
        assert_eq!(p.row, 99);
        assert!(p.col != 50, "biased POG must not sit on the origin column");
        let q = project_goal(GoalDirection::new(-PI).unwrap(), d).pixel();
        assert_eq!(p, q, "pi and -pi wrap to the same bearing");
    }

    #[test]
    fn backward_pog_never_collides_with_origin() {
        let d = dims(100, 100);
        for k in 0..2000 {
            let theta = PI / 2.0 + 1e-6 + (k as f64 / 2000.0) * (PI - 1e-5 - PI / 2.0);
            for t in [theta, -theta] {
                let p = project_goal(GoalDirection::new(t).unwrap(), d).pixel();
                assert!(p != d.origin_pixel(), "theta {t} produced the origin pixel");
            }
        }
    }

    #[test]
    fn forward_round_trip_within_one_pixel() {
        let d = dims(100, 100);
        let n = 10_000;
        for k in 0..=n {
            let theta = -FRAC_PI_2 + (k as f64 / n as f64) * PI;
            let pog = project_goal(GoalDirection::new(theta).unwrap(), d);
            let p = to_planning(pog.pixel(), d).unwrap();
            let back = pixel_angle(p).unwrap();
            let bound = (1.0 / p.norm()).atan() + 1e-9;
            assert!(
                (back - theta).abs() <= bound,
                "theta {theta}: back {back}, bound {bound}"
            );
        }
    }

    #[test]
    fn sweep_traverses_border_without_reversal() {
        let d = dims(64, 48);
        // Arc-length parameter along right border -> top -> left border.
        let arc = |p: PixelCoord| -> usize {
            if p.col == d.width - 1 {
                d.height - 1 - p.row
            } else if p.row == 0 {
                (d.height - 1) + (d.width - 1 - p.col)
            } else if p.col == 0 {
                (d.height - 1) + (d.width - 1) + p.row
            } else {
                panic!("POG off border: {p:?}");
            }
        };
        let mut last = 0usize;
        let n = 5000;
        for k in 0..=n {
            let theta = -FRAC_PI_2 + (k as f64 / n as f64) * PI;
            let pog = project_goal(GoalDirection::new(theta).unwrap(), d);
            let s = arc(pog.pixel());
            assert!(s >= last, "reversal at theta {theta}");
            last = s;
        }
    }

    #[test]
    fn backward_corner_saturation_is_exact() {
        let d = dims(640, 480);
        let cm = d.center_col() as f64;
        let x_top = (d.height - 1) as f64;
        // Left saturation holds for all backward bearings whose mirrored ray
        // leaves through the virtual left border.
        let theta_sat = PI - (cm / x_top).atan();
        for k in 1..200 {
            let t = FRAC_PI_2 + (theta_sat - FRAC_PI_2) * 0.999 + k as f64 * 1e-6;
            if t >= PI {
                break;
            }
            let p = project_goal(GoalDirection::new(t).unwrap(), d).pixel();
            if t > theta_sat {
                assert_eq!(p, PixelCoord::new(479, 0));
            }
        }
        let p = project_goal(GoalDirection::new(2.0).unwrap(), d).pixel();
        assert_eq!(p, PixelCoord::new(479, 0));
        let p = project_goal(GoalDirection::new(-2.0).unwrap(), d).pixel();
        assert_eq!(p, PixelCoord::new(479, 639));
    }

    #[test]
    fn relative_angle_examples() {
        let robot = Pose2D::new(0.0, 0.0, 0.0);
        let g = relative_goal_angle(robot, [0.0, 5.0]).unwrap();
        assert!((g.angle() - FRAC_PI_2).abs() < 1e-12);
        let g = relative_goal_angle(robot, [3.0, 0.0]).unwrap();
        assert_eq!(g.angle(), 0.0);
        let rotated = Pose2D::new(1.0, 1.0, FRAC_PI_2);
        let g = relative_goal_angle(rotated, [1.0, 5.0]).unwrap();
        assert!(g.angle().abs() < 1e-12);
        assert!(relative_goal_angle(robot, [0.0, 0.0]).is_err());
    }

    #[test]
    fn in_view_pixel_requires_below_eye_level_and_in_frame() {
        let d = dims(640, 480);
        let cam = CameraModel::new(300.0, 239.5, 319.5, 0.5).unwrap();
        // 2 m ahead on the ground: row = 239.5 + 300*0.5/2 = 314.5.
        let p = in_view_goal_pixel([2.0, 0.0], &cam, d).unwrap();
        assert_eq!(p.row, 315);
        assert_eq!(p.col, 320);
        // Behind the camera.
        assert!(in_view_goal_pixel([-1.0, 0.0], &cam, d).is_none());
        // Too far to the side.
        assert!(in_view_goal_pixel([2.0, 3.0], &cam, d).is_none());
        // So close it projects past the bottom row.
        assert!(in_view_goal_pixel([0.3, 0.0], &cam, d).is_none());
    }

    proptest! {
        #[test]
        fn pog_always_on_border(theta in -PI..PI) {
            let d = dims(64, 48);
            let pog = project_goal(GoalDirection::new(theta).unwrap(), d);
            prop_assert!(is_border(pog.pixel(), d));
        }

        #[test]
        fn pog_side_matches_goal_side(theta in -PI..PI) {
            // A strictly-left goal never projects right of center and vice versa.
            prop_assume!(theta.abs() > 1e-6 && (theta.abs() - PI).abs() > 1e-6);
            let d = dims(101, 77);
            let pog = project_goal(GoalDirection::new(theta).unwrap(), d).pixel();
            if theta > 0.0 {
                prop_assert!(pog.col <= d.center_col());
            } else {
                prop_assert!(pog.col >= d.center_col());
            }
        }
    }
}
