//! Pedestrian motion: goal attraction plus exponential repulsion.
//!
//! Each agent accelerates toward its desired velocity and is pushed off
//! nearby agents, the robot, static obstacles, and walls by a force that
//! decays exponentially with surface separation. Speeds are capped. The step
//! is pure; goal ping-ponging is layered on top in [`advance_agents`].

use super::{Body, Pedestrian, World};

/// Hard cap on pedestrian speed, m/s.
pub const MAX_PED_SPEED: f64 = 1.7;
/// Relaxation gain toward the desired velocity, 1/s.
const K_GOAL: f64 = 2.0;
/// Repulsion magnitude at exact surface contact, m/s^2.
const K_REP: f64 = 3.5;
/// Repulsion decay length, meters.
const SIGMA: f64 = 0.3;
/// An agent within this distance of its goal is considered arrived.
const GOAL_RADIUS: f64 = 0.3;

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// One Euler step of every agent against the static world, the other agents,
/// and optionally the robot body. Returns the updated agents; input order is
/// preserved and the update reads only pre-step state, so the result does not
/// depend on agent ordering.
pub fn step_pedestrians(
    agents: &[Pedestrian],
    world: &World,
    robot: Option<Body>,
    dt: f64,
) -> Vec<Pedestrian> {
    debug_assert!(dt > 0.0);
    agents
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut acc = goal_drive(a);
            for (j, other) in agents.iter().enumerate() {
                if i != j {
                    add_repulsion(&mut acc, a, other.position, other.radius);
                }
            }
            if let Some(body) = robot {
                add_repulsion(&mut acc, a, body.center, body.radius);
            }
            for ob in &world.obstacles {
                add_repulsion(&mut acc, a, ob.center, ob.radius);
            }
            for wall in &world.walls {
                add_wall_repulsion(&mut acc, a, &wall.rect);
            }

            let mut v = [a.velocity[0] + acc[0] * dt, a.velocity[1] + acc[1] * dt];
            let speed = norm(v);
            if speed > MAX_PED_SPEED {
                let s = MAX_PED_SPEED / speed;
                v = [v[0] * s, v[1] * s];
            }
            let mut next = *a;
            next.velocity = v;
            next.position = [a.position[0] + v[0] * dt, a.position[1] + v[1] * dt];
            next
        })
        .collect()
}

fn goal_drive(a: &Pedestrian) -> [f64; 2] {
    let to_goal = [a.goal[0] - a.position[0], a.goal[1] - a.position[1]];
    let dist = norm(to_goal);
    let desired = if dist > 1e-9 {
        [
            a.v_des * to_goal[0] / dist,
            a.v_des * to_goal[1] / dist,
        ]
    } else {
        [0.0, 0.0]
    };
    [
        K_GOAL * (desired[0] - a.velocity[0]),
        K_GOAL * (desired[1] - a.velocity[1]),
    ]
}

fn add_repulsion(acc: &mut [f64; 2], a: &Pedestrian, center: [f64; 2], radius: f64) {
    let away = [a.position[0] - center[0], a.position[1] - center[1]];
    let d = norm(away);
    if d < 1e-9 {
        return;
    }
    let mag = K_REP * ((a.radius + radius - d) / SIGMA).exp();
    acc[0] += mag * away[0] / d;
    acc[1] += mag * away[1] / d;
}

fn add_wall_repulsion(acc: &mut [f64; 2], a: &Pedestrian, rect: &super::Rect) {
    // Closest surface point; agents inside a wall get no defined push.
    let cx = a.position[0].clamp(rect.x_min, rect.x_max);
    let cy = a.position[1].clamp(rect.y_min, rect.y_max);
    let away = [a.position[0] - cx, a.position[1] - cy];
    let d = norm(away);
    if d < 1e-9 {
        return;
    }
    let mag = K_REP * ((a.radius - d) / SIGMA).exp();
    acc[0] += mag * away[0] / d;
    acc[1] += mag * away[1] / d;
}

/// Steps the world's own agents in place and ping-pongs arrivals: an agent
/// within the arrival radius of its goal swaps goal and origin, so crossing
/// agents keep crossing for the whole episode.
pub fn advance_agents(world: &mut World, robot: Option<Body>, dt: f64) {
    let stepped = step_pedestrians(&world.agents, world, robot, dt);
    world.agents = stepped;
    for a in &mut world.agents {
        let d = (a.goal[0] - a.position[0]).hypot(a.goal[1] - a.position[1]);
        if d < GOAL_RADIUS {
            std::mem::swap(&mut a.goal, &mut a.origin);
        }
    }
}
