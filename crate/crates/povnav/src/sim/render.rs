//! Pinhole semantic and depth rendering.
//!
//! Each image column is a vertical fan of sight lines sharing one horizontal
//! ray on the ground plane. Every obstacle the ray crosses contributes a band
//! of rows; a row shows the nearest band containing it, ground below the
//! principal row otherwise, and sky above. Working per column with exact
//! ray intersections keeps the result deterministic and independent of the
//! order obstacles were declared in.
//!
//! Depth is perpendicular forward distance (ray distance times the cosine of
//! the column angle), so a flat frontal wall has a single constant depth and
//! ground depth depends only on the row.

use super::{Pose2D, World, CLASS_SKY};
use crate::camera::CameraModel;
use crate::grid::ImageDims;
use crate::segmentation::{DepthImage, SemanticImage};

const NEAR_PLANE: f64 = 1e-3;

/// One vertical band of obstacle rows in a column.
struct Band {
    z: f64,
    top_row: usize,
    base_row: usize,
    class: u16,
}

/// Entry and exit ray parameters of a convex shape, if hit.
fn ray_circle(o: [f64; 2], d: [f64; 2], center: [f64; 2], radius: f64) -> Option<(f64, f64)> {
    let m = [center[0] - o[0], center[1] - o[1]];
    let b = m[0] * d[0] + m[1] * d[1];
    let disc = b * b - (m[0] * m[0] + m[1] * m[1] - radius * radius);
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let (t_in, t_out) = (b - sq, b + sq);
    if t_out <= NEAR_PLANE {
        return None;
    }
    Some((t_in.max(NEAR_PLANE), t_out))
}

fn ray_rect(o: [f64; 2], d: [f64; 2], rect: &super::Rect) -> Option<(f64, f64)> {
    let mut t_near = f64::NEG_INFINITY;
    let mut t_far = f64::INFINITY;
    for (oi, di, lo, hi) in [
        (o[0], d[0], rect.x_min, rect.x_max),
        (o[1], d[1], rect.y_min, rect.y_max),
    ] {
        if di.abs() < 1e-12 {
            if oi < lo || oi > hi {
                return None;
            }
        } else {
            let (t1, t2) = ((lo - oi) / di, (hi - oi) / di);
            t_near = t_near.max(t1.min(t2));
            t_far = t_far.min(t1.max(t2));
        }
    }
    if t_near > t_far || t_far <= NEAR_PLANE {
        return None;
    }
    Some((t_near.max(NEAR_PLANE), t_far))
}

/// Converts a crossed shape into the rows it blocks in this column.
///
/// The base row comes from the entry depth. The top row uses the entry depth
/// for shapes taller than the camera (their top is out of sight) and the exit
/// depth for shorter ones, which exposes their top surface and, crucially,
/// blocks every row whose ground point would land inside the footprint.
fn band_for(
    z_in: f64,
    z_out: f64,
    shape_height: f64,
    class: u16,
    camera: &CameraModel,
    dims: ImageDims,
) -> Option<Band> {
    let cy = camera.principal_row;
    let f = camera.focal_px;
    let h = camera.height_m;
    let base = (cy + f * h / z_in).floor();
    let z_top = if shape_height >= h { z_in } else { z_out };
    let top = (cy - f * (shape_height - h) / z_top).ceil();
    let base_row = (base.min((dims.height - 1) as f64)) as isize;
    let top_row = top.max(0.0) as isize;
    if top_row > base_row || base_row < 0 {
        return None;
    }
    Some(Band {
        z: z_in,
        top_row: top_row as usize,
        base_row: base_row as usize,
        class,
    })
}

/// Renders the scene from the robot pose into semantic and depth images.
///
/// Rows below the principal row that no obstacle band covers are ground,
/// classed by the region under their back-projected point, with depth
/// `focal * height / (row - principal_row)`. Uncovered rows above are sky
/// with the no-return depth sentinel. The camera is the level one mounted at
/// the robot pose.
pub fn render_camera(
    world: &World,
    pose: &Pose2D,
    camera: &CameraModel,
    dims: ImageDims,
) -> (SemanticImage, DepthImage) {
    debug_assert_eq!(camera.pitch_rad, 0.0);
    let mut semantic = SemanticImage::new_filled(dims, CLASS_SKY);
    let mut depth = DepthImage::new_filled(dims, DepthImage::NO_RETURN)
        .expect("sentinel fill is valid");

    let o = pose.position();
    let (cy, cx, f, h) = (
        camera.principal_row,
        camera.principal_col,
        camera.focal_px,
        camera.height_m,
    );
    let mut bands: Vec<Band> = Vec::new();

    for col in 0..dims.width {
        let alpha = ((cx - col as f64) / f).atan();
        let cos_a = alpha.cos();
        let world_ang = pose.theta + alpha;
        let d = [world_ang.cos(), world_ang.sin()];

        bands.clear();
        let mut push = |hit: Option<(f64, f64)>, height: f64, class: u16| {
            if let Some((t_in, t_out)) = hit {
                let band = band_for(t_in * cos_a, t_out * cos_a, height, class, camera, dims);
                bands.extend(band);
            }
        };
        for ob in &world.obstacles {
            push(ray_circle(o, d, ob.center, ob.radius), ob.height, ob.class);
        }
        for ag in &world.agents {
            push(
                ray_circle(o, d, ag.position, ag.radius),
                ag.height,
                super::CLASS_PEDESTRIAN,
            );
        }
        for wall in &world.walls {
            push(ray_rect(o, d, &wall.rect), wall.height, wall.class);
        }
        bands.sort_by(|a, b| {
            a.z.partial_cmp(&b.z)
                .expect("depths are finite")
                .then(a.class.cmp(&b.class))
        });

        for row in 0..dims.height {
            if let Some(band) = bands
                .iter()
                .find(|b| (b.top_row..=b.base_row).contains(&row))
            {
                semantic.set_class(row, col, band.class);
                depth.set_depth(row, col, band.z as f32);
            } else if (row as f64) > cy {
                let z_g = f * h / (row as f64 - cy);
                let lat = z_g * (cx - col as f64) / f;
                let (s, c) = pose.theta.sin_cos();
                let p = [o[0] + c * z_g - s * lat, o[1] + s * z_g + c * lat];
                semantic.set_class(row, col, world.ground_class_at(p));
                depth.set_depth(row, col, z_g as f32);
            }
        }
    }
    (semantic, depth)
}
