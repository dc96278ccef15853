//! Mapless visual navigation in image space.
//!
//! The planner never builds a metric map. Each camera frame is reduced to a
//! binary navigability image, the free/non-free boundary of that image (the
//! visual horizon) becomes the search space for a Pareto-optimal subgoal, and
//! a safety-widened path through image space is turned directly into clamped,
//! rate-limited unicycle commands. The crate also ships a closed-loop 2.5D
//! simulator (column ray-cast renderer, seeded pedestrians) and a benchmark
//! harness with a CLI so the whole pipeline can be exercised end to end.
//!
//! Pipeline overview, one frame:
//!
//! 1. [`segmentation`] — semantic classes or depth-derived surface normals
//!    become a [`NavigabilityImage`](grid::NavigabilityImage).
//! 2. [`horizon`] — per-column scan extracts the visual horizon.
//! 3. [`goalproj`] — the goal direction is projected onto the image border
//!    (peripheral optic goal, POG).
//! 4. [`subgoal`] — scalarized two-objective argmin over the horizon picks the
//!    horizon optic goal (HOG).
//! 5. [`pathgen`] — a safety-widened visual path connects start to HOG.
//! 6. [`servo`] — proximity and alignment features become velocity commands.
//!
//! The [`sim`] and [`harness`] modules close the loop for benchmarking.

pub mod angles;
pub mod camera;
pub mod goalproj;
pub mod grid;
pub mod guide;
pub mod harness;
pub mod horizon;
pub mod imageio;
pub mod pathgen;
pub mod segmentation;
pub mod servo;
pub mod sim;
pub mod subgoal;

pub use grid::{ImageDims, NavigabilityImage, Navigability, PixelCoord, PlanarPoint};

/// Errors for every fallible operation in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Image dimensions below the 2x2 minimum, or inconsistent buffer sizes.
    #[error("invalid image dimensions: {0}")]
    InvalidDims(String),
    /// A pixel coordinate outside the image.
    #[error("pixel ({row}, {col}) out of bounds for {width}x{height} image")]
    OutOfBounds {
        row: usize,
        col: usize,
        width: usize,
        height: usize,
    },
    /// Angle of the zero vector requested.
    #[error("pixel angle is undefined for the zero vector")]
    ZeroVector,
    /// A scalar parameter outside its documented domain.
    #[error("parameter out of domain: {0}")]
    Domain(String),
    /// A caller-side contract was violated (e.g. subgoal above the horizon).
    #[error("contract violation: {0}")]
    Contract(String),
    /// Malformed configuration, scenario, or suite input.
    #[error("{file}:{line}: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },
    /// Malformed image file.
    #[error("image format error: {0}")]
    ImageFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
