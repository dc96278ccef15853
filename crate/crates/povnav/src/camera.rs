//! Pinhole camera model shared by segmentation, path generation, and the
//! simulator's renderer.
//!
//! The camera is mounted at a fixed height above flat ground with zero pitch.
//! Depth values throughout the crate are forward (perpendicular) distances:
//! the distance along the optical axis, not along the viewing ray. Under that
//! convention a frontal wall has constant depth across the image and ground
//! rows obey the exact similar-triangle relation
//! `row - principal_row = focal * height / depth`.

use crate::{Error, ImageDims, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraModel {
    /// Focal length in pixels (square pixels assumed).
    pub focal_px: f64,
    /// Principal point row; may be sub-pixel.
    pub principal_row: f64,
    /// Principal point column; may be sub-pixel.
    pub principal_col: f64,
    /// Mounting height above the ground plane, meters.
    pub height_m: f64,
    /// Mounting pitch, radians. Only 0 is supported by the renderer and
    /// normal estimation; the field exists so configs can state it.
    pub pitch_rad: f64,
}

impl CameraModel {
    pub fn new(
        focal_px: f64,
        principal_row: f64,
        principal_col: f64,
        height_m: f64,
    ) -> Result<Self> {
        if !(focal_px > 0.0) {
            return Err(Error::Domain(format!("focal length must be > 0, got {focal_px}")));
        }
        if !(height_m > 0.0) {
            return Err(Error::Domain(format!("camera height must be > 0, got {height_m}")));
        }
        Ok(CameraModel {
            focal_px,
            principal_row,
            principal_col,
            height_m,
            pitch_rad: 0.0,
        })
    }

    /// Default rig for the given resolution: focal 300 px, principal point at
    /// the image center, mounted 0.5 m above ground, zero pitch.
    ///
    /// The mount height sets the scale between image rows and ground meters.
    /// A higher camera spreads nearby depths over more rows, which sharpens
    /// the contrast the subgoal selector sees between a shallow obstacle base
    /// and the open space beside it.
    pub fn default_for(dims: ImageDims) -> Self {
        CameraModel {
            focal_px: 300.0,
            principal_row: (dims.height as f64 - 1.0) / 2.0,
            principal_col: (dims.width as f64 - 1.0) / 2.0,
            height_m: 0.5,
            pitch_rad: 0.0,
        }
    }

    pub(crate) fn require_zero_pitch(&self) -> Result<()> {
        if self.pitch_rad != 0.0 {
            return Err(Error::Domain(format!(
                "only zero camera pitch is supported, got {} rad",
                self.pitch_rad
            )));
        }
        Ok(())
    }

    /// Depth of the ground point seen by `row`, if the row lies below the
    /// camera's eye-level row.
    pub fn ground_depth(&self, row: f64) -> Option<f64> {
        let dr = row - self.principal_row;
        if dr > 0.0 {
            Some(self.focal_px * self.height_m / dr)
        } else {
            None
        }
    }

    /// Image row of a ground point at forward depth `z` (meters).
    pub fn ground_row(&self, z: f64) -> f64 {
        self.principal_row + self.focal_px * self.height_m / z
    }

    /// Image row of a point at height `h` meters above ground, depth `z`.
    pub fn row_of_height(&self, h: f64, z: f64) -> f64 {
        self.principal_row - self.focal_px * (h - self.height_m) / z
    }

    /// Back-projects pixel `(row, col)` at forward depth `z` into the local
    /// frame: x forward, y left, z up, origin on the ground under the camera.
    pub fn back_project(&self, row: f64, col: f64, z: f64) -> [f64; 3] {
        let u = (col - self.principal_col) / self.focal_px;
        let v = (row - self.principal_row) / self.focal_px;
        [z, -z * u, self.height_m - z * v]
    }

    /// Projects a local-frame ground point (x forward, y left, meters) to a
    /// pixel; `None` if it is behind the camera.
    pub fn project_ground_point(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        if x <= 0.0 {
            return None;
        }
        let row = self.ground_row(x);
        let col = self.principal_col - self.focal_px * y / x;
        Some((row, col))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_parameters() {
        assert!(CameraModel::new(0.0, 1.0, 1.0, 0.5).is_err());
        assert!(CameraModel::new(300.0, 1.0, 1.0, 0.0).is_err());
        assert!(CameraModel::new(300.0, 239.5, 319.5, 0.5).is_ok());
    }

    #[test]
    fn ground_rows_match_similar_triangles() {
        let d = ImageDims::new(640, 480).unwrap();
        let cam = CameraModel::default_for(d);
        assert_eq!(cam.principal_row, 239.5);
        assert_eq!(cam.principal_col, 319.5);
        // Bottom-row ground point: z = 300 * 0.5 / (479 - 239.5).
        let z = cam.ground_depth(479.0).unwrap();
        assert!((z - 150.0 / 239.5).abs() < 1e-12);
        assert!((z - 0.6263).abs() < 1e-3);
        // ground_row inverts ground_depth.
        assert!((cam.ground_row(z) - 479.0).abs() < 1e-9);
    }

    #[test]
    fn back_projection_lands_on_ground_for_ground_rows() {
        let d = ImageDims::new(640, 480).unwrap();
        let cam = CameraModel::default_for(d);
        for row in [250.0, 300.0, 400.0, 479.0] {
            let z = cam.ground_depth(row).unwrap();
            for col in [0.0, 100.0, 319.5, 639.0] {
                let p = cam.back_project(row, col, z);
                assert!(p[2].abs() < 1e-9, "ground point off the plane: {p:?}");
                assert!((p[0] - z).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ground_projection_round_trip() {
        let d = ImageDims::new(640, 480).unwrap();
        let cam = CameraModel::default_for(d);
        for (x, y) in [(1.0, 0.0), (2.5, 0.7), (5.0, -2.0), (0.7, 0.3)] {
            let (row, col) = cam.project_ground_point(x, y).unwrap();
            let z = cam.ground_depth(row).unwrap();
            let p = cam.back_project(row, col, z);
            assert!((p[0] - x).abs() < 1e-9);
            assert!((p[1] - y).abs() < 1e-9);
        }
        assert!(cam.project_ground_point(-1.0, 0.0).is_none());
        assert!(cam.project_ground_point(0.0, 1.0).is_none());
    }
}
