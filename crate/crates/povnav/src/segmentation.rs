//! From raw perception to a binary navigability image.
//!
//! Two routes produce the same output type:
//!
//! * semantic classes through a [`NavigabilityTable`] lookup, or
//! * a depth image through [`surface_normals`] and a slope test against
//!   world-up ([`normals_to_navigability`]).
//!
//! [`postprocess_navigability`] then removes navigable regions the robot
//! cannot reach from its own footing (anything not 4-connected to the bottom
//! image row), so later stages never plan into disconnected islands.

use std::collections::HashMap;

use rand::Rng;

use crate::camera::CameraModel;
use crate::grid::{ImageDims, Navigability, NavigabilityImage};
use crate::{Error, Result};

/// Per-pixel semantic class ids, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticImage {
    dims: ImageDims,
    cells: Vec<u16>,
}

impl SemanticImage {
    pub fn new_filled(dims: ImageDims, class: u16) -> Self {
        SemanticImage {
            dims,
            cells: vec![class; dims.pixel_count()],
        }
    }

    pub fn from_cells(dims: ImageDims, cells: Vec<u16>) -> Result<Self> {
        if cells.len() != dims.pixel_count() {
            return Err(Error::InvalidDims(format!(
                "buffer holds {} cells, dims {}x{} need {}",
                cells.len(),
                dims.width,
                dims.height,
                dims.pixel_count()
            )));
        }
        Ok(SemanticImage { dims, cells })
    }

    pub fn dims(&self) -> ImageDims {
        self.dims
    }

    #[inline]
    pub fn class(&self, row: usize, col: usize) -> u16 {
        self.cells[row * self.dims.width + col]
    }

    pub fn set_class(&mut self, row: usize, col: usize, class: u16) {
        self.cells[row * self.dims.width + col] = class;
    }

    pub fn cells(&self) -> &[u16] {
        &self.cells
    }
}

/// Per-pixel forward depth in meters, row-major.
///
/// Cells are finite non-negative values or [`DepthImage::NO_RETURN`] where
/// the sensor saw nothing (sky).
#[derive(Debug, Clone, PartialEq)]
pub struct DepthImage {
    dims: ImageDims,
    cells: Vec<f32>,
}

impl DepthImage {
    /// Sentinel for pixels with no depth return.
    pub const NO_RETURN: f32 = f32::INFINITY;

    pub fn new_filled(dims: ImageDims, depth: f32) -> Result<Self> {
        Self::from_cells(dims, vec![depth; dims.pixel_count()])
    }

    pub fn from_cells(dims: ImageDims, cells: Vec<f32>) -> Result<Self> {
        if cells.len() != dims.pixel_count() {
            return Err(Error::InvalidDims(format!(
                "buffer holds {} cells, dims {}x{} need {}",
                cells.len(),
                dims.width,
                dims.height,
                dims.pixel_count()
            )));
        }
        for &v in &cells {
            if v.is_nan() || v < 0.0 {
                return Err(Error::Domain(format!(
                    "depth cells must be non-negative or NO_RETURN, got {v}"
                )));
            }
        }
        Ok(DepthImage { dims, cells })
    }

    pub fn dims(&self) -> ImageDims {
        self.dims
    }

    #[inline]
    pub fn depth(&self, row: usize, col: usize) -> f32 {
        self.cells[row * self.dims.width + col]
    }

    #[inline]
    pub fn has_return(&self, row: usize, col: usize) -> bool {
        self.depth(row, col).is_finite()
    }

    pub fn set_depth(&mut self, row: usize, col: usize, depth: f32) {
        self.cells[row * self.dims.width + col] = depth;
    }

    pub fn cells(&self) -> &[f32] {
        &self.cells
    }
}

/// Per-pixel unit surface normals in the gravity-aligned frame
/// (x forward, y left, z up). Pixels where no normal could be estimated
/// hold the zero vector.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalImage {
    dims: ImageDims,
    cells: Vec<[f32; 3]>,
}

impl NormalImage {
    pub const UNDEFINED: [f32; 3] = [0.0, 0.0, 0.0];

    pub fn dims(&self) -> ImageDims {
        self.dims
    }

    #[inline]
    pub fn normal(&self, row: usize, col: usize) -> [f32; 3] {
        self.cells[row * self.dims.width + col]
    }

    #[inline]
    pub fn is_defined(&self, row: usize, col: usize) -> bool {
        self.normal(row, col) != Self::UNDEFINED
    }
}

/// Maps semantic class ids to navigability, with a default for classes the
/// table has never seen.
#[derive(Debug, Clone)]
pub struct NavigabilityTable {
    map: HashMap<u16, Navigability>,
    default: Navigability,
}

impl NavigabilityTable {
    pub fn new(default: Navigability) -> Self {
        NavigabilityTable {
            map: HashMap::new(),
            default,
        }
    }

    pub fn set(&mut self, class: u16, nav: Navigability) -> &mut Self {
        self.map.insert(class, nav);
        self
    }

    pub fn navigability(&self, class: u16) -> Navigability {
        *self.map.get(&class).unwrap_or(&self.default)
    }

    pub fn default_navigability(&self) -> Navigability {
        self.default
    }
}

/// Estimates a surface normal per pixel from the depth image.
///
/// Each pixel is back-projected through the pinhole model together with its
/// upper and left neighbors; the cross product of the two difference vectors,
/// normalized, is the normal. Pixels on the top row, the left column, or with
/// any of the three depths missing get [`NormalImage::UNDEFINED`]. Normals on
/// flat ground point up; a frontal wall yields normals along the camera's
/// backward axis.
pub fn surface_normals(depth: &DepthImage, camera: &CameraModel) -> Result<NormalImage> {
    camera.require_zero_pitch()?;
    let dims = depth.dims();
    let mut cells = vec![NormalImage::UNDEFINED; dims.pixel_count()];
    for row in 1..dims.height {
        for col in 1..dims.width {
            let z0 = depth.depth(row, col);
            let zu = depth.depth(row - 1, col);
            let zl = depth.depth(row, col - 1);
            if !(z0.is_finite() && zu.is_finite() && zl.is_finite()) {
                continue;
            }
            let p0 = camera.back_project(row as f64, col as f64, z0 as f64);
            let pu = camera.back_project(row as f64 - 1.0, col as f64, zu as f64);
            let pl = camera.back_project(row as f64, col as f64 - 1.0, zl as f64);
            let a = [p0[0] - pu[0], p0[1] - pu[1], p0[2] - pu[2]];
            let b = [p0[0] - pl[0], p0[1] - pl[1], p0[2] - pl[2]];
            let n = [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ];
            let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            if len <= f64::EPSILON {
                continue;
            }
            cells[row * dims.width + col] =
                [(n[0] / len) as f32, (n[1] / len) as f32, (n[2] / len) as f32];
        }
    }
    Ok(NormalImage { dims, cells })
}

/// Thresholds normals against world-up: a pixel is navigable iff its normal
/// is defined and within `up_tolerance_deg` degrees of vertical.
/// The tolerance must lie strictly between 0 and 90 degrees.
pub fn normals_to_navigability(
    normals: &NormalImage,
    up_tolerance_deg: f64,
) -> Result<NavigabilityImage> {
    if !(up_tolerance_deg > 0.0 && up_tolerance_deg < 90.0) {
        return Err(Error::Domain(format!(
            "up tolerance must be in (0, 90) degrees, got {up_tolerance_deg}"
        )));
    }
    let cos_tol = up_tolerance_deg.to_radians().cos();
    let dims = normals.dims();
    let mut out = NavigabilityImage::new_filled(dims, Navigability::NonNavigable);
    for row in 0..dims.height {
        for col in 0..dims.width {
            let n = normals.normal(row, col);
            if n != NormalImage::UNDEFINED && n[2] as f64 >= cos_tol {
                out.set(row, col, Navigability::Navigable);
            }
        }
    }
    Ok(out)
}

/// Per-pixel table lookup from semantic classes to navigability.
pub fn classes_to_navigability(
    semantic: &SemanticImage,
    table: &NavigabilityTable,
) -> NavigabilityImage {
    let dims = semantic.dims();
    let mut out = NavigabilityImage::new_filled(dims, Navigability::NonNavigable);
    for row in 0..dims.height {
        for col in 0..dims.width {
            if table.navigability(semantic.class(row, col)) == Navigability::Navigable {
                out.set(row, col, Navigability::Navigable);
            }
        }
    }
    out
}

/// Removes navigable regions the robot cannot reach: every navigable pixel
/// not 4-connected to a navigable bottom-row pixel becomes non-navigable.
/// Never turns a non-navigable pixel navigable; idempotent.
pub fn postprocess_navigability(nav: &NavigabilityImage) -> NavigabilityImage {
    let dims = nav.dims();
    let (w, h) = (dims.width, dims.height);
    let mut reached = vec![false; dims.pixel_count()];
    let mut stack = Vec::new();
    let bottom = h - 1;
    for col in 0..w {
        if nav.is_navigable(bottom, col) {
            let i = bottom * w + col;
            if !reached[i] {
                reached[i] = true;
                stack.push(i);
            }
        }
    }
    while let Some(i) = stack.pop() {
        let (row, col) = (i / w, i % w);
        let mut visit = |r: usize, c: usize| {
            let j = r * w + c;
            if !reached[j] && nav.is_navigable(r, c) {
                reached[j] = true;
                stack.push(j);
            }
        };
        if row > 0 {
            visit(row - 1, col);
        }
        if row + 1 < h {
            visit(row + 1, col);
        }
        if col > 0 {
            visit(row, col - 1);
        }
        if col + 1 < w {
            visit(row, col + 1);
        }
    }
    let cells = reached
        .iter()
        .map(|&r| if r { 0 } else { 1 })
        .collect::<Vec<u8>>();
    NavigabilityImage::from_cells(dims, cells).expect("cells built to size")
}

/// Degrades a navigability image for robustness experiments: every cell flips
/// with probability `flip_prob`, then each column is shifted vertically by a
/// uniform offset in `[-jitter_rows, jitter_rows]` (edge cells repeat), which
/// jitters every free/blocked boundary.
pub fn inject_noise<R: Rng>(
    nav: &NavigabilityImage,
    flip_prob: f64,
    jitter_rows: usize,
    rng: &mut R,
) -> Result<NavigabilityImage> {
    if !(0.0..=1.0).contains(&flip_prob) {
        return Err(Error::Domain(format!(
            "flip probability must be in [0, 1], got {flip_prob}"
        )));
    }
    let dims = nav.dims();
    let (w, h) = (dims.width, dims.height);
    let mut out = nav.clone();
    if jitter_rows > 0 {
        let j = jitter_rows as i64;
        for col in 0..w {
            let shift = rng.gen_range(-j..=j);
            for row in 0..h {
                let src = (row as i64 + shift).clamp(0, h as i64 - 1) as usize;
                out.set(row, col, nav.get(src, col));
            }
        }
    }
    if flip_prob > 0.0 {
        for row in 0..h {
            for col in 0..w {
                if rng.gen_bool(flip_prob) {
                    let flipped = match out.get(row, col) {
                        Navigability::Navigable => Navigability::NonNavigable,
                        Navigability::NonNavigable => Navigability::Navigable,
                    };
                    out.set(row, col, flipped);
                }
            }
        }
    }
    Ok(out)
}
