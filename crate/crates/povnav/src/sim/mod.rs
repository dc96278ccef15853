//! 2.5D simulation world.
//!
//! The world is a flat plane carrying classed ground regions, extruded static
//! obstacles (cylinders), axis-aligned walls, and moving pedestrian agents.
//! A unicycle robot drives through it; a pinhole camera renders semantic and
//! depth images from its pose. Geometry is exact (ray intersections, no
//! marching), so rendering is deterministic and order-independent.

mod pedestrian;
mod render;
mod scenario;

pub use pedestrian::{advance_agents, step_pedestrians};
pub use render::render_camera;
pub use scenario::{load_world, parse_world, save_world, world_to_string};

use crate::angles::wrap_to_pi;

/// Semantic class ids used by the renderer. Scenario files may introduce
/// further ids for custom ground regions.
pub const CLASS_GROUND: u16 = 0;
pub const CLASS_SKY: u16 = 1;
pub const CLASS_OBSTACLE: u16 = 2;
pub const CLASS_WALL: u16 = 3;
pub const CLASS_PEDESTRIAN: u16 = 4;

/// Default class navigability: ground is drivable, everything else and any
/// unknown class is not.
pub fn default_navigability() -> crate::segmentation::NavigabilityTable {
    use crate::grid::Navigability;
    let mut table = crate::segmentation::NavigabilityTable::new(Navigability::NonNavigable);
    table.set(CLASS_GROUND, Navigability::Navigable);
    table
}

/// Planar robot pose; `theta` is kept wrapped to [-pi, pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose2D {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose2D {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Pose2D {
            x,
            y,
            theta: wrap_to_pi(theta),
        }
    }

    pub fn position(&self) -> [f64; 2] {
        [self.x, self.y]
    }
}

/// Axis-aligned rectangle on the ground plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Rect {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.x_min && p[0] <= self.x_max && p[1] >= self.y_min && p[1] <= self.y_max
    }

    /// Distance from a point to the rectangle, zero inside.
    pub fn distance(&self, p: [f64; 2]) -> f64 {
        let dx = (self.x_min - p[0]).max(0.0).max(p[0] - self.x_max);
        let dy = (self.y_min - p[1]).max(0.0).max(p[1] - self.y_max);
        dx.hypot(dy)
    }
}

/// Extruded circular obstacle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cylinder {
    pub center: [f64; 2],
    pub radius: f64,
    pub height: f64,
    pub class: u16,
}

/// Extruded axis-aligned wall block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wall {
    pub rect: Rect,
    pub height: f64,
    pub class: u16,
}

/// Ground patch overriding the default ground class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundRegion {
    pub rect: Rect,
    pub class: u16,
}

/// Moving agent driven by the social-force step. `origin` is its original
/// start point, kept so goal swapping can ping-pong the agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pedestrian {
    pub position: [f64; 2],
    pub velocity: [f64; 2],
    pub goal: [f64; 2],
    pub origin: [f64; 2],
    pub v_des: f64,
    pub radius: f64,
    pub height: f64,
}

impl Pedestrian {
    pub fn new(position: [f64; 2], goal: [f64; 2], v_des: f64, radius: f64) -> Self {
        Pedestrian {
            position,
            velocity: [0.0, 0.0],
            goal,
            origin: position,
            v_des,
            radius,
            height: 1.7,
        }
    }
}

/// A circular body, used to expose the robot to the pedestrian model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Body {
    pub center: [f64; 2],
    pub radius: f64,
}

/// The full static-plus-dynamic scene.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct World {
    pub ground_class: u16,
    pub regions: Vec<GroundRegion>,
    pub obstacles: Vec<Cylinder>,
    pub walls: Vec<Wall>,
    pub agents: Vec<Pedestrian>,
}

impl World {
    pub fn empty() -> Self {
        World::default()
    }

    /// Checks the geometric invariants: positive radii and heights, ordered
    /// rectangle bounds.
    pub fn validate(&self) -> crate::Result<()> {
        for o in &self.obstacles {
            if !(o.radius > 0.0 && o.height > 0.0) {
                return Err(crate::Error::Domain(format!(
                    "obstacle at ({}, {}) needs positive radius and height",
                    o.center[0], o.center[1]
                )));
            }
        }
        for w in &self.walls {
            if !(w.height > 0.0 && w.rect.x_min < w.rect.x_max && w.rect.y_min < w.rect.y_max) {
                return Err(crate::Error::Domain(
                    "wall needs positive height and ordered bounds".into(),
                ));
            }
        }
        for a in &self.agents {
            if !(a.radius > 0.0 && a.v_des > 0.0 && a.height > 0.0) {
                return Err(crate::Error::Domain(
                    "agent needs positive radius, speed, and height".into(),
                ));
            }
        }
        Ok(())
    }

    /// Ground class at a point: the last declared region containing it wins,
    /// else the default ground class.
    pub fn ground_class_at(&self, p: [f64; 2]) -> u16 {
        self.regions
            .iter()
            .rev()
            .find(|r| r.rect.contains(p))
            .map(|r| r.class)
            .unwrap_or(self.ground_class)
    }
}

/// One explicit-Euler step of the unicycle model.
pub fn step_unicycle(pose: &Pose2D, v: f64, omega: f64, dt: f64) -> Pose2D {
    debug_assert!(dt > 0.0);
    Pose2D::new(
        pose.x + v * pose.theta.cos() * dt,
        pose.y + v * pose.theta.sin() * dt,
        pose.theta + omega * dt,
    )
}

/// True when the robot disc at `pose` overlaps any obstacle, wall, or agent.
/// Touching exactly (distance equal to the radius) does not count.
pub fn check_collision(world: &World, pose: &Pose2D, robot_radius: f64) -> bool {
    let p = pose.position();
    let hit_circle = |center: [f64; 2], radius: f64| {
        let d = (p[0] - center[0]).hypot(p[1] - center[1]) - radius;
        d < robot_radius
    };
    world
        .obstacles
        .iter()
        .any(|o| hit_circle(o.center, o.radius))
        || world.agents.iter().any(|a| hit_circle(a.position, a.radius))
        || world.walls.iter().any(|w| w.rect.distance(p) < robot_radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn pose_wraps_theta() {
        let p = Pose2D::new(0.0, 0.0, 3.0 * PI);
        assert!((p.theta - (-PI)).abs() < 1e-12);
    }

    #[test]
    fn unicycle_straight_line() {
        let p = step_unicycle(&Pose2D::new(0.0, 0.0, 0.0), 1.0, 0.0, 1.0);
        assert_eq!((p.x, p.y, p.theta), (1.0, 0.0, 0.0));
    }

    #[test]
    fn unicycle_pure_rotation() {
        let p = step_unicycle(&Pose2D::new(2.0, -1.0, 0.0), 0.0, PI, 0.5);
        assert_eq!((p.x, p.y), (2.0, -1.0));
        assert!((p.theta - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn unicycle_quarter_circle_tracks_arc() {
        // v = omega = 1 traces a unit circle; at t = 1.57 the closed form is
        // (sin t, 1 - cos t).
        let mut pose = Pose2D::new(0.0, 0.0, 0.0);
        let dt = 0.01;
        for _ in 0..157 {
            pose = step_unicycle(&pose, 1.0, 1.0, dt);
        }
        let t = 1.57f64;
        let err = (pose.x - t.sin()).hypot(pose.y - (1.0 - t.cos()));
        let arc_len = t;
        assert!(err / arc_len < 0.02, "relative error {}", err / arc_len);
    }

    #[test]
    fn collision_far_obstacle_is_clear() {
        let mut world = World::empty();
        world.obstacles.push(Cylinder {
            center: [10.0, 0.0],
            radius: 0.5,
            height: 1.5,
            class: CLASS_OBSTACLE,
        });
        assert!(!check_collision(&world, &Pose2D::new(0.0, 0.0, 0.0), 0.3));
    }

    #[test]
    fn collision_coincident_centers() {
        let mut world = World::empty();
        world.obstacles.push(Cylinder {
            center: [0.0, 0.0],
            radius: 0.5,
            height: 1.5,
            class: CLASS_OBSTACLE,
        });
        assert!(check_collision(&world, &Pose2D::new(0.0, 0.0, 0.0), 0.3));
    }

    #[test]
    fn collision_boundary_contact_is_clear() {
        let mut world = World::empty();
        world.obstacles.push(Cylinder {
            center: [0.8, 0.0],
            radius: 0.5,
            height: 1.5,
            class: CLASS_OBSTACLE,
        });
        // Surface distance is exactly the robot radius: strict inequality.
        assert!(!check_collision(&world, &Pose2D::new(0.0, 0.0, 0.0), 0.3));
        assert!(check_collision(
            &world,
            &Pose2D::new(0.001, 0.0, 0.0),
            0.3
        ));
    }

    #[test]
    fn collision_with_wall_interior_and_margin() {
        let mut world = World::empty();
        world.walls.push(Wall {
            rect: Rect::new(2.0, 3.0, -1.0, 1.0),
            height: 2.0,
            class: CLASS_WALL,
        });
        assert!(check_collision(&world, &Pose2D::new(2.5, 0.0, 0.0), 0.3));
        assert!(check_collision(&world, &Pose2D::new(1.75, 0.0, 0.0), 0.3));
        assert!(!check_collision(&world, &Pose2D::new(1.7, 0.0, 0.0), 0.3));
    }

    #[test]
    fn collision_with_agent() {
        let mut world = World::empty();
        world
            .agents
            .push(Pedestrian::new([1.0, 0.0], [5.0, 0.0], 1.0, 0.3));
        assert!(check_collision(&world, &Pose2D::new(0.5, 0.0, 0.0), 0.3));
        assert!(!check_collision(&world, &Pose2D::new(-1.0, 0.0, 0.0), 0.3));
    }

    #[test]
    fn ground_class_layers_regions() {
        let mut world = World::empty();
        world.regions.push(GroundRegion {
            rect: Rect::new(0.0, 10.0, -5.0, 5.0),
            class: 7,
        });
        world.regions.push(GroundRegion {
            rect: Rect::new(4.0, 6.0, -1.0, 1.0),
            class: 9,
        });
        assert_eq!(world.ground_class_at([-1.0, 0.0]), CLASS_GROUND);
        assert_eq!(world.ground_class_at([2.0, 0.0]), 7);
        assert_eq!(world.ground_class_at([5.0, 0.0]), 9);
    }

    #[test]
    fn validate_rejects_bad_shapes() {
        let mut world = World::empty();
        world.obstacles.push(Cylinder {
            center: [0.0, 0.0],
            radius: 0.0,
            height: 1.0,
            class: CLASS_OBSTACLE,
        });
        assert!(world.validate().is_err());
    }
}
