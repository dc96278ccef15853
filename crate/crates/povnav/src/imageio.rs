//! Image file I/O for the binary formats the tools exchange.
//!
//! Everything is binary netpbm:
//!
//! * navigability: 8-bit `P5` PGM, maxval 255, cell 0 written as 0 (free) and
//!   cell 1 as 255 (blocked); on read any value >= 128 counts as blocked;
//! * class ids: 8-bit `P5` PGM, maxval 255, pixel value = class id;
//! * depth: 16-bit `P5` PGM (big-endian samples, maxval 65535) holding
//!   millimeters, value 0 reserved for "no return";
//! * rendered frames: 24-bit `P6` PPM.
//!
//! Comment lines (`#`) in headers are accepted on read, never written.

use std::fs;
use std::path::Path;

use crate::grid::{ImageDims, NavigabilityImage};
use crate::segmentation::{DepthImage, SemanticImage};
use crate::{Error, Result};

const DEPTH_MM_MAX: f32 = 65535.0;

struct HeaderParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderParser<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        HeaderParser { bytes, pos: 0 }
    }

    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&'a [u8]> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::ImageFormat("truncated header".into()));
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn number(&mut self) -> Result<usize> {
        let tok = self.token()?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                Error::ImageFormat(format!("expected number, got {:?}", String::from_utf8_lossy(tok)))
            })
    }

    /// Consumes the single whitespace byte that terminates the header and
    /// returns the raster.
    fn raster(mut self) -> Result<&'a [u8]> {
        if self.pos >= self.bytes.len() || !self.bytes[self.pos].is_ascii_whitespace() {
            return Err(Error::ImageFormat("missing raster separator".into()));
        }
        self.pos += 1;
        Ok(&self.bytes[self.pos..])
    }
}

fn parse_pgm(bytes: &[u8]) -> Result<(ImageDims, usize, &[u8])> {
    let mut p = HeaderParser::new(bytes);
    let magic = p.token()?;
    if magic != b"P5" {
        return Err(Error::ImageFormat(format!(
            "expected P5 magic, got {:?}",
            String::from_utf8_lossy(magic)
        )));
    }
    let width = p.number()?;
    let height = p.number()?;
    let maxval = p.number()?;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::ImageFormat(format!("bad maxval {maxval}")));
    }
    let dims = ImageDims::new(width, height)?;
    let raster = p.raster()?;
    let sample_bytes = if maxval > 255 { 2 } else { 1 };
    let need = dims.pixel_count() * sample_bytes;
    if raster.len() < need {
        return Err(Error::ImageFormat(format!(
            "raster holds {} bytes, need {need}",
            raster.len()
        )));
    }
    Ok((dims, maxval, &raster[..need]))
}

/// Writes a navigability image as an 8-bit PGM (free = 0, blocked = 255).
pub fn write_navigability_pgm(path: &Path, nav: &NavigabilityImage) -> Result<()> {
    let dims = nav.dims();
    let mut out = format!("P5\n{} {}\n255\n", dims.width, dims.height).into_bytes();
    out.extend(nav.cells().iter().map(|&c| if c == 0 { 0u8 } else { 255 }));
    fs::write(path, out)?;
    Ok(())
}

/// Reads a navigability image from an 8-bit PGM; values >= 128 are blocked.
pub fn read_navigability_pgm(path: &Path) -> Result<NavigabilityImage> {
    let bytes = fs::read(path)?;
    let (dims, maxval, raster) = parse_pgm(&bytes)?;
    if maxval > 255 {
        return Err(Error::ImageFormat(
            "navigability PGM must be 8-bit".into(),
        ));
    }
    let cells = raster.iter().map(|&b| u8::from(b >= 128)).collect();
    NavigabilityImage::from_cells(dims, cells)
}

/// Writes class ids as an 8-bit PGM; ids above 255 are rejected.
pub fn write_class_pgm(path: &Path, semantic: &SemanticImage) -> Result<()> {
    let dims = semantic.dims();
    let mut raster = Vec::with_capacity(dims.pixel_count());
    for &c in semantic.cells() {
        if c > 255 {
            return Err(Error::Domain(format!(
                "class id {c} does not fit an 8-bit PGM"
            )));
        }
        raster.push(c as u8);
    }
    let mut out = format!("P5\n{} {}\n255\n", dims.width, dims.height).into_bytes();
    out.extend(raster);
    fs::write(path, out)?;
    Ok(())
}

/// Reads class ids from an 8-bit PGM.
pub fn read_class_pgm(path: &Path) -> Result<SemanticImage> {
    let bytes = fs::read(path)?;
    let (dims, maxval, raster) = parse_pgm(&bytes)?;
    if maxval > 255 {
        return Err(Error::ImageFormat("class PGM must be 8-bit".into()));
    }
    let cells = raster.iter().map(|&b| b as u16).collect();
    SemanticImage::from_cells(dims, cells)
}

/// Writes depth as a 16-bit PGM in millimeters; no-return pixels become 0 and
/// depths beyond 65.534 m saturate at the maximum stored value.
pub fn write_depth_pgm(path: &Path, depth: &DepthImage) -> Result<()> {
    let dims = depth.dims();
    let mut out = format!("P5\n{} {}\n65535\n", dims.width, dims.height).into_bytes();
    for &d in depth.cells() {
        let mm: u16 = if d.is_finite() {
            let v = (d * 1000.0).round();
            // 0 is reserved for "no return"; genuine zero depth stores as 1 mm.
            v.clamp(1.0, DEPTH_MM_MAX) as u16
        } else {
            0
        };
        out.extend_from_slice(&mm.to_be_bytes());
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads depth from a 16-bit millimeter PGM (0 = no return).
pub fn read_depth_pgm(path: &Path) -> Result<DepthImage> {
    let bytes = fs::read(path)?;
    let (dims, maxval, raster) = parse_pgm(&bytes)?;
    if maxval <= 255 {
        return Err(Error::ImageFormat("depth PGM must be 16-bit".into()));
    }
    let cells = raster
        .chunks_exact(2)
        .map(|ch| {
            let mm = u16::from_be_bytes([ch[0], ch[1]]);
            if mm == 0 {
                DepthImage::NO_RETURN
            } else {
                mm as f32 / 1000.0
            }
        })
        .collect();
    DepthImage::from_cells(dims, cells)
}

/// Writes an interleaved RGB buffer as a binary PPM.
pub fn write_ppm(path: &Path, dims: ImageDims, rgb: &[u8]) -> Result<()> {
    if rgb.len() != dims.pixel_count() * 3 {
        return Err(Error::InvalidDims(format!(
            "rgb buffer holds {} bytes, dims {}x{} need {}",
            rgb.len(),
            dims.width,
            dims.height,
            dims.pixel_count() * 3
        )));
    }
    let mut out = format!("P6\n{} {}\n255\n", dims.width, dims.height).into_bytes();
    out.extend_from_slice(rgb);
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tmp(name: &str) -> std::path::PathBuf {
        let mut p = std::env::temp_dir();
        p.push(format!("povnav-imageio-{}-{name}", std::process::id()));
        p
    }

    #[test]
    fn navigability_round_trip() {
        let dims = ImageDims::new(13, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cells: Vec<u8> = (0..dims.pixel_count()).map(|_| rng.gen_range(0..2)).collect();
        let nav = NavigabilityImage::from_cells(dims, cells).unwrap();
        let path = tmp("nav.pgm");
        write_navigability_pgm(&path, &nav).unwrap();
        let back = read_navigability_pgm(&path).unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(nav, back);
    }

    #[test]
    fn class_round_trip_and_range_check() {
        let dims = ImageDims::new(6, 5).unwrap();
        let mut sem = SemanticImage::new_filled(dims, 3);
        sem.set_class(2, 2, 250);
        let path = tmp("class.pgm");
        write_class_pgm(&path, &sem).unwrap();
        let back = read_class_pgm(&path).unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(sem, back);

        let wide = SemanticImage::new_filled(dims, 300);
        assert!(write_class_pgm(&tmp("bad.pgm"), &wide).is_err());
    }

    #[test]
    fn depth_round_trip_millimeter_quantized() {
        let dims = ImageDims::new(8, 4).unwrap();
        let mut depth = DepthImage::new_filled(dims, 1.5).unwrap();
        depth.set_depth(0, 0, DepthImage::NO_RETURN);
        depth.set_depth(1, 1, 0.626);
        depth.set_depth(2, 2, 42.001);
        let path = tmp("depth.pgm");
        write_depth_pgm(&path, &depth).unwrap();
        let back = read_depth_pgm(&path).unwrap();
        std::fs::remove_file(&path).ok();
        for (a, b) in depth.cells().iter().zip(back.cells().iter()) {
            if a.is_finite() {
                assert!((a - b).abs() <= 0.0005 + 1e-6, "{a} vs {b}");
            } else {
                assert!(!b.is_finite());
            }
        }
    }

    #[test]
    fn header_comments_accepted() {
        let path = tmp("comment.pgm");
        std::fs::write(&path, b"P5\n# a comment\n3 2\n255\n\x00\xff\x00\xff\x00\xff").unwrap();
        let nav = read_navigability_pgm(&path).unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(nav.dims().width, 3);
        assert!(nav.is_navigable(0, 0));
        assert!(!nav.is_navigable(0, 1));
    }

    #[test]
    fn malformed_headers_rejected() {
        let path = tmp("malformed.pgm");
        std::fs::write(&path, b"P2\n3 2\n255\n").unwrap();
        assert!(read_navigability_pgm(&path).is_err());
        std::fs::write(&path, b"P5\n3 2\n255\n\x00\x01").unwrap();
        assert!(read_navigability_pgm(&path).is_err());
        std::fs::remove_file(&path).ok();
    }
}
