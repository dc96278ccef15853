//! World files: a line-oriented key-value schema.
//!
//! Blank lines and `#` comments are ignored. Each remaining line is a
//! directive followed by whitespace-separated fields:
//!
//! ```text
//! ground_class <class>
//! region   <x_min> <x_max> <y_min> <y_max> <class>
//! obstacle <x> <y> <radius> <height> [class]
//! wall     <x_min> <x_max> <y_min> <y_max> <height> [class]
//! agent    <x> <y> <goal_x> <goal_y> <v_des> <radius>
//! ```
//!
//! Omitted class fields default to the obstacle and wall classes. Agents
//! start at rest with their origin at the listed position.

use super::{Cylinder, GroundRegion, Pedestrian, Rect, Wall, World};
use crate::{Error, Result};
use std::path::Path;

fn parse_field<T: std::str::FromStr>(
    fields: &[&str],
    idx: usize,
    file: &str,
    line: usize,
) -> Result<T> {
    let raw = fields.get(idx).ok_or_else(|| Error::Parse {
        file: file.into(),
        line,
        msg: format!("missing field {}", idx + 1),
    })?;
    raw.parse().map_err(|_| Error::Parse {
        file: file.into(),
        line,
        msg: format!("cannot parse field {} from '{raw}'", idx + 1),
    })
}

/// Parses a world description; `source` names the input in error messages.
pub fn parse_world(text: &str, source: &str) -> Result<World> {
    let mut world = World::empty();
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let args = &fields[1..];
        match fields[0] {
            "ground_class" => {
                world.ground_class = parse_field(args, 0, source, line_no)?;
            }
            "region" => world.regions.push(GroundRegion {
                rect: Rect::new(
                    parse_field(args, 0, source, line_no)?,
                    parse_field(args, 1, source, line_no)?,
                    parse_field(args, 2, source, line_no)?,
                    parse_field(args, 3, source, line_no)?,
                ),
                class: parse_field(args, 4, source, line_no)?,
            }),
            "obstacle" => world.obstacles.push(Cylinder {
                center: [
                    parse_field(args, 0, source, line_no)?,
                    parse_field(args, 1, source, line_no)?,
                ],
                radius: parse_field(args, 2, source, line_no)?,
                height: parse_field(args, 3, source, line_no)?,
                class: if args.len() > 4 {
                    parse_field(args, 4, source, line_no)?
                } else {
                    super::CLASS_OBSTACLE
                },
            }),
            "wall" => world.walls.push(Wall {
                rect: Rect::new(
                    parse_field(args, 0, source, line_no)?,
                    parse_field(args, 1, source, line_no)?,
                    parse_field(args, 2, source, line_no)?,
                    parse_field(args, 3, source, line_no)?,
                ),
                height: parse_field(args, 4, source, line_no)?,
                class: if args.len() > 5 {
                    parse_field(args, 5, source, line_no)?
                } else {
                    super::CLASS_WALL
                },
            }),
            "agent" => world.agents.push(Pedestrian::new(
                [
                    parse_field(args, 0, source, line_no)?,
                    parse_field(args, 1, source, line_no)?,
                ],
                [
                    parse_field(args, 2, source, line_no)?,
                    parse_field(args, 3, source, line_no)?,
                ],
                parse_field(args, 4, source, line_no)?,
                parse_field(args, 5, source, line_no)?,
            )),
            other => {
                return Err(Error::Parse {
                    file: source.into(),
                    line: line_no,
                    msg: format!("unknown directive '{other}'"),
                })
            }
        }
    }
    world.validate()?;
    Ok(world)
}

pub fn load_world(path: &Path) -> Result<World> {
    let text = std::fs::read_to_string(path)?;
    parse_world(&text, &path.display().to_string())
}

/// Serializes a world in the same schema `parse_world` reads.
pub fn world_to_string(world: &World) -> String {
    let mut out = String::new();
    out.push_str(&format!("ground_class {}\n", world.ground_class));
    for r in &world.regions {
        out.push_str(&format!(
            "region {} {} {} {} {}\n",
            r.rect.x_min, r.rect.x_max, r.rect.y_min, r.rect.y_max, r.class
        ));
    }
    for o in &world.obstacles {
        out.push_str(&format!(
            "obstacle {} {} {} {} {}\n",
            o.center[0], o.center[1], o.radius, o.height, o.class
        ));
    }
    for w in &world.walls {
        out.push_str(&format!(
            "wall {} {} {} {} {} {}\n",
            w.rect.x_min, w.rect.x_max, w.rect.y_min, w.rect.y_max, w.height, w.class
        ));
    }
    for a in &world.agents {
        out.push_str(&format!(
            "agent {} {} {} {} {} {}\n",
            a.position[0], a.position[1], a.goal[0], a.goal[1], a.v_des, a.radius
        ));
    }
    out
}

pub fn save_world(world: &World, path: &Path) -> Result<()> {
    std::fs::write(path, world_to_string(world))?;
    Ok(())
}
