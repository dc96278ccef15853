//! Image grids and the planning frame.
//!
//! All image-space reasoning happens in a planning frame anchored at the
//! robot's own pixel: the bottom-center of the image. `x` grows upward
//! (away from the robot), `y` grows to the left, so `atan2(y, x)` is a
//! bearing with 0 straight ahead and positive angles to the left.

use crate::{Error, Result};

/// Value stored per cell of a [`NavigabilityImage`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Navigability {
    Navigable,
    NonNavigable,
}

impl Navigability {
    pub fn as_u8(self) -> u8 {
        match self {
            Navigability::Navigable => 0,
            Navigability::NonNavigable => 1,
        }
    }

    pub fn from_u8(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Navigability::Navigable),
            1 => Ok(Navigability::NonNavigable),
            other => Err(Error::Domain(format!(
                "navigability cell must be 0 or 1, got {other}"
            ))),
        }
    }
}

/// Pixel position, row 0 at the top of the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PixelCoord {
    pub row: usize,
    pub col: usize,
}

impl PixelCoord {
    pub fn new(row: usize, col: usize) -> Self {
        PixelCoord { row, col }
    }
}

/// Point in the planning frame: origin at the bottom-center pixel,
/// `x` up (toward row 0), `y` left (toward column 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PlanarPoint {
    pub x: i32,
    pub y: i32,
}

impl PlanarPoint {
    pub fn new(x: i32, y: i32) -> Self {
        PlanarPoint { x, y }
    }

    /// Euclidean distance from the planning origin, in pixels.
    pub fn norm(self) -> f64 {
        (self.x as f64).hypot(self.y as f64)
    }
}

/// Image width and height in pixels; both must be at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageDims {
    pub width: usize,
    pub height: usize,
}

impl ImageDims {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::InvalidDims(format!(
                "need at least 2x2 pixels, got {width}x{height}"
            )));
        }
        Ok(ImageDims { width, height })
    }

    pub fn pixel_count(self) -> usize {
        self.width * self.height
    }

    /// Column of the planning origin: `floor(width / 2)`.
    pub fn center_col(self) -> usize {
        self.width / 2
    }

    /// The planning origin, i.e. the bottom-center pixel.
    pub fn origin_pixel(self) -> PixelCoord {
        PixelCoord::new(self.height - 1, self.center_col())
    }

    pub fn contains(self, p: PixelCoord) -> bool {
        p.row < self.height && p.col < self.width
    }

    pub(crate) fn check(self, p: PixelCoord) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                row: p.row,
                col: p.col,
                width: self.width,
                height: self.height,
            })
        }
    }
}

/// Maps a pixel into the planning frame:
/// `x = (height - 1) - row`, `y = floor(width / 2) - col`.
pub fn to_planning(pixel: PixelCoord, dims: ImageDims) -> Result<PlanarPoint> {
    dims.check(pixel)?;
    Ok(PlanarPoint {
        x: (dims.height - 1 - pixel.row) as i32,
        y: dims.center_col() as i32 - pixel.col as i32,
    })
}

/// Inverse of [`to_planning`]; errors if the point falls outside the image.
pub fn from_planning(p: PlanarPoint, dims: ImageDims) -> Result<PixelCoord> {
    let row = dims.height as i64 - 1 - p.x as i64;
    let col = dims.center_col() as i64 - p.y as i64;
    if row < 0 || col < 0 {
        return Err(Error::OutOfBounds {
            row: row.max(0) as usize,
            col: col.max(0) as usize,
            width: dims.width,
            height: dims.height,
        });
    }
    let pixel = PixelCoord::new(row as usize, col as usize);
    dims.check(pixel)?;
    Ok(pixel)
}

/// Bearing of a planning-frame point, `atan2(y, x)` in `[-pi, pi)`.
/// The zero vector has no bearing and is rejected.
pub fn pixel_angle(p: PlanarPoint) -> Result<f64> {
    if p.x == 0 && p.y == 0 {
        return Err(Error::ZeroVector);
    }
    let a = (p.y as f64).atan2(p.x as f64);
    // atan2 returns (-pi, pi]; fold the single +pi case down.
    Ok(if a >= std::f64::consts::PI { -a } else { a })
}

/// Binary navigability grid: 0 = navigable, 1 = non-navigable, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NavigabilityImage {
    dims: ImageDims,
    cells: Vec<u8>,
}

impl NavigabilityImage {
    pub fn new_filled(dims: ImageDims, value: Navigability) -> Self {
        NavigabilityImage {
            dims,
            cells: vec![value.as_u8(); dims.pixel_count()],
        }
    }

    /// Builds from a row-major buffer of 0/1 cells.
    pub fn from_cells(dims: ImageDims, cells: Vec<u8>) -> Result<Self> {
        if cells.len() != dims.pixel_count() {
            return Err(Error::InvalidDims(format!(
                "buffer holds {} cells, dims {}x{} need {}",
                cells.len(),
                dims.width,
                dims.height,
                dims.pixel_count()
            )));
        }
        if let Some(bad) = cells.iter().find(|&&v| v > 1) {
            return Err(Error::Domain(format!(
                "navigability cell must be 0 or 1, got {bad}"
            )));
        }
        Ok(NavigabilityImage { dims, cells })
    }

    pub fn dims(&self) -> ImageDims {
        self.dims
    }

    #[inline]
    fn idx(&self, row: usize, col: usize) -> usize {
        row * self.dims.width + col
    }

    #[inline]
    pub fn is_navigable(&self, row: usize, col: usize) -> bool {
        self.cells[self.idx(row, col)] == 0
    }

    pub fn get(&self, row: usize, col: usize) -> Navigability {
        if self.cells[self.idx(row, col)] == 0 {
            Navigability::Navigable
        } else {
            Navigability::NonNavigable
        }
    }

    pub fn set(&mut self, row: usize, col: usize, value: Navigability) {
        let i = self.idx(row, col);
        self.cells[i] = value.as_u8();
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// Row `row` as a contiguous slice of cells.
    pub fn row(&self, row: usize) -> &[u8] {
        let start = row * self.dims.width;
        &self.cells[start..start + self.dims.width]
    }
}
