//! Debug rendering of planner steps: semantic classes as flat colors with
//! the horizon, path, and both goal projections drawn on top.

use super::Diagnostics;
use crate::grid::{ImageDims, PixelCoord};
use crate::imageio::write_ppm;
use crate::segmentation::SemanticImage;
use crate::sim::{CLASS_GROUND, CLASS_OBSTACLE, CLASS_PEDESTRIAN, CLASS_SKY, CLASS_WALL};
use crate::Result;
use std::path::{Path, PathBuf};

const GROUND_RGB: [u8; 3] = [60, 120, 60];
const SKY_RGB: [u8; 3] = [150, 200, 235];
const OBSTACLE_RGB: [u8; 3] = [200, 60, 60];
const WALL_RGB: [u8; 3] = [120, 90, 60];
const PEDESTRIAN_RGB: [u8; 3] = [200, 120, 40];
const UNKNOWN_RGB: [u8; 3] = [230, 40, 230];

const HORIZON_RGB: [u8; 3] = [255, 230, 40];
const PATH_RGB: [u8; 3] = [40, 80, 255];
const HOG_RGB: [u8; 3] = [40, 220, 40];
const POG_RGB: [u8; 3] = [230, 40, 40];

fn class_color(class: u16) -> [u8; 3] {
    match class {
        CLASS_GROUND => GROUND_RGB,
        CLASS_SKY => SKY_RGB,
        CLASS_OBSTACLE => OBSTACLE_RGB,
        CLASS_WALL => WALL_RGB,
        CLASS_PEDESTRIAN => PEDESTRIAN_RGB,
        _ => UNKNOWN_RGB,
    }
}

fn put(rgb: &mut [u8], dims: ImageDims, row: usize, col: usize, color: [u8; 3]) {
    let at = (row * dims.width + col) * 3;
    rgb[at..at + 3].copy_from_slice(&color);
}

/// Paints a 3x3 marker centered on `p`, clipped at the image border.
fn put_marker(rgb: &mut [u8], dims: ImageDims, p: PixelCoord, color: [u8; 3]) {
    for dr in -1i64..=1 {
        for dc in -1i64..=1 {
            let row = p.row as i64 + dr;
            let col = p.col as i64 + dc;
            if row >= 0 && col >= 0 && (row as usize) < dims.height && (col as usize) < dims.width {
                put(rgb, dims, row as usize, col as usize, color);
            }
        }
    }
}

/// One planner step as an RGB image, row-major, 3 bytes per pixel.
///
/// Base colors come from the semantic classes; the horizon boundary is
/// yellow, path pixels blue, the selected subgoal a green marker, and the
/// goal projection a red marker (drawn last, so it wins overlaps).
pub fn frame_rgb(semantic: &SemanticImage, diag: &Diagnostics) -> Vec<u8> {
    let dims = semantic.dims();
    let mut rgb = vec![0u8; dims.pixel_count() * 3];
    for row in 0..dims.height {
        for col in 0..dims.width {
            put(&mut rgb, dims, row, col, class_color(semantic.class(row, col)));
        }
    }
    if let Some(heights) = &diag.horizon_heights {
        for (col, &row) in heights.iter().enumerate().take(dims.width) {
            if row < dims.height {
                put(&mut rgb, dims, row, col, HORIZON_RGB);
            }
        }
    }
    if let Some(path) = &diag.path {
        for p in &path.points {
            put(&mut rgb, dims, p.row, p.col, PATH_RGB);
        }
    }
    if let Some(hog) = diag.hog {
        put_marker(&mut rgb, dims, hog, HOG_RGB);
    }
    put_marker(&mut rgb, dims, diag.pog, POG_RGB);
    rgb
}

/// Writes one step as `frame_00042.ppm` (for `index` 42) under `dir` and
/// returns the full path. Frames number densely from zero, so the sequence
/// feeds straight into video encoders.
pub fn write_frame_ppm(
    dir: &Path,
    index: usize,
    semantic: &SemanticImage,
    diag: &Diagnostics,
) -> Result<PathBuf> {
    let path = dir.join(format!("frame_{index:05}.ppm"));
    write_ppm(&path, semantic.dims(), &frame_rgb(semantic, diag))?;
    Ok(path)
}
