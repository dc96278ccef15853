//! Visual horizon extraction.
//!
//! The visual horizon is the boundary between the navigable region the robot
//! stands in and everything beyond it, measured independently per image
//! column: `h[c]` is the row of the first non-navigable pixel found walking
//! up from the bottom of column `c`. Everything at or above the boundary is
//! treated as out of reach, which turns an arbitrarily noisy navigability
//! image into a single closed frontier the planner can search.

use crate::grid::{ImageDims, Navigability, NavigabilityImage, PixelCoord};

/// The per-column horizon and the pixel set that represents it.
///
/// `heights[c]` is the boundary row of column `c`: the largest row whose
/// pixels below it (rows `heights[c]+1..height`) are all navigable while the
/// boundary row itself is not. An all-navigable column reports row 0; a
/// column whose bottom pixel is blocked reports the bottom row.
///
/// `pixel_set` is the horizon as pixels: the boundary pixel of every column,
/// vertical bridging pixels inserted wherever adjacent boundaries differ by
/// more than one row (on the side whose boundary sits higher in the image),
/// and the left/right border-column pixels below their boundaries. The set is
/// 8-connected from the bottom-left of the image to the bottom-right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisualHorizon {
    dims: ImageDims,
    heights: Vec<usize>,
    pixel_set: Vec<PixelCoord>,
}

impl VisualHorizon {
    pub fn dims(&self) -> ImageDims {
        self.dims
    }

    /// Boundary row per column.
    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    /// Horizon pixels: boundaries, bridges, and side borders, deduplicated.
    pub fn pixel_set(&self) -> &[PixelCoord] {
        &self.pixel_set
    }
}

/// Extracts the visual horizon and the processed navigability image.
///
/// In the processed image every pixel at or above its column's boundary is
/// non-navigable and every pixel strictly below it is navigable, so the free
/// region is vertically convex per column. Runs in one pass over the image.
pub fn extract_horizon(nav: &NavigabilityImage) -> (VisualHorizon, NavigabilityImage) {
    let dims = nav.dims();
    let (w, h) = (dims.width, dims.height);

    let mut heights = vec![0usize; w];
    for col in 0..w {
        let mut free_rows = 0usize;
        while free_rows < h && nav.is_navigable(h - 1 - free_rows, col) {
            free_rows += 1;
        }
        heights[col] = if free_rows == h { 0 } else { h - 1 - free_rows };
    }

    let mut processed = NavigabilityImage::new_filled(dims, Navigability::Navigable);
    for row in 0..h {
        for col in 0..w {
            if row <= heights[col] {
                processed.set(row, col, Navigability::NonNavigable);
            }
        }
    }

    let mut in_set = vec![false; dims.pixel_count()];
    let mut pixel_set = Vec::with_capacity(w + 2 * h);
    let mut push = |set: &mut Vec<PixelCoord>, row: usize, col: usize| {
        let i = row * w + col;
        if !in_set[i] {
            in_set[i] = true;
            set.push(PixelCoord::new(row, col));
        }
    };

    for col in 0..w {
        push(&mut pixel_set, heights[col], col);
        if col + 1 < w {
            let (a, b) = (heights[col], heights[col + 1]);
            if a.abs_diff(b) > 1 {
                // Bridge on the column whose boundary sits higher (smaller row).
                let bridge_col = if a < b { col } else { col + 1 };
                for row in a.min(b) + 1..a.max(b) {
                    push(&mut pixel_set, row, bridge_col);
                }
            }
        }
    }
    for row in heights[0] + 1..h {
        push(&mut pixel_set, row, 0);
    }
    for row in heights[w - 1] + 1..h {
        push(&mut pixel_set, row, w - 1);
    }

    (
        VisualHorizon {
            dims,
            heights,
            pixel_set,
        },
        processed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::ImageDims;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn dims(w: usize, h: usize) -> ImageDims {
        ImageDims::new(w, h).unwrap()
    }

    /// Literal restatement of the boundary definition, checked row by row.
    fn boundary_oracle(nav: &NavigabilityImage, col: usize) -> usize {
        let h = nav.dims().height;
        for candidate in (0..h).rev() {
            let below_free = (candidate + 1..h).all(|r| nav.is_navigable(r, col));
            if below_free && !nav.is_navigable(candidate, col) {
                return candidate;
            }
        }
        0 // all-navigable column
    }

    fn random_nav(seed: u64, w: usize, h: usize, p: f64) -> NavigabilityImage {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = dims(w, h);
        let cells = (0..d.pixel_count())
            .map(|_| u8::from(rng.gen_bool(p)))
            .collect();
        NavigabilityImage::from_cells(d, cells).unwrap()
    }

    #[test]
    fn all_navigable_image() {
        let d = dims(9, 7);
        let nav = NavigabilityImage::new_filled(d, Navigability::Navigable);
        let (hz, processed) = extract_horizon(&nav);
        assert!(hz.heights().iter().all(|&b| b == 0));
        for col in 0..9 {
            assert!(!processed.is_navigable(0, col));
            for row in 1..7 {
                assert!(processed.is_navigable(row, col));
            }
        }
    }

    #[test]
    fn blocked_bottom_pixel_pins_boundary_to_bottom_row() {
        let d = dims(5, 6);
        let mut nav = NavigabilityImage::new_filled(d, Navigability::Navigable);
        nav.set(5, 2, Navigability::NonNavigable);
        let (hz, processed) = extract_horizon(&nav);
        assert_eq!(hz.heights()[2], 5);
        for row in 0..6 {
            assert!(!processed.is_navigable(row, 2));
        }
        assert_eq!(hz.heights()[0], 0);
    }

    #[test]
    fn staircase_gap_of_three_inserts_two_bridge_pixels() {
        let d = dims(4, 10);
        let mut nav = NavigabilityImage::new_filled(d, Navigability::Navigable);
        // Column 1 boundary at row 2; column 2 boundary at row 5.
        nav.set(2, 1, Navigability::NonNavigable);
        nav.set(5, 2, Navigability::NonNavigable);
        // Keep columns 0 and 3 free to the top; their boundary is row 0.
        let (hz, _) = extract_horizon(&nav);
        assert_eq!(hz.heights()[1], 2);
        assert_eq!(hz.heights()[2], 5);
        let set: HashSet<_> = hz.pixel_set().iter().copied().collect();
        // Bridge on column 1 (the higher boundary), rows 3 and 4.
        assert!(set.contains(&PixelCoord::new(3, 1)));
        assert!(set.contains(&PixelCoord::new(4, 1)));
        assert!(!set.contains(&PixelCoord::new(3, 2)));
        assert!(!set.contains(&PixelCoord::new(4, 2)));
    }

    #[test]
    fn boundary_matches_oracle_on_random_images() {
        for seed in 0..50 {
            let nav = random_nav(seed, 17, 13, 0.25);
            let (hz, _) = extract_horizon(&nav);
            for col in 0..17 {
                assert_eq!(
                    hz.heights()[col],
                    boundary_oracle(&nav, col),
                    "seed {seed} col {col}"
                );
            }
        }
    }

    fn assert_connected_left_to_right(hz: &VisualHorizon) {
        let set: HashSet<_> = hz.pixel_set().iter().copied().collect();
        let start = PixelCoord::new(hz.dims().height - 1, 0);
        assert!(set.contains(&start), "bottom-left border pixel missing");
        let mut seen = HashSet::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(p) = stack.pop() {
            for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (r, c) = (p.row as i64 + dr, p.col as i64 + dc);
                    if r < 0 || c < 0 {
                        continue;
                    }
                    let q = PixelCoord::new(r as usize, c as usize);
                    if set.contains(&q) && seen.insert(q) {
                        stack.push(q);
                    }
                }
            }
        }
        assert_eq!(
            seen.len(),
            set.len(),
            "horizon pixel set is not 8-connected"
        );
        assert!(seen.contains(&PixelCoord::new(
            hz.dims().height - 1,
            hz.dims().width - 1
        )));
    }

    #[test]
    fn pixel_set_eight_connected_on_random_images() {
        for seed in 0..40 {
            let nav = random_nav(seed + 100, 21, 15, 0.3);
            let (hz, _) = extract_horizon(&nav);
            assert_connected_left_to_right(&hz);
        }
    }

    proptest! {
        #[test]
        fn processed_image_vertically_convex(seed in 0u64..300) {
            let nav = random_nav(seed, 19, 14, 0.3);
            let (hz, processed) = extract_horizon(&nav);
            for col in 0..19 {
                let b = hz.heights()[col];
                for row in 0..14 {
                    prop_assert_eq!(processed.is_navigable(row, col), row > b);
                }
                // Strictly-below pixels were navigable in the raw image too.
                for row in b + 1..14 {
                    prop_assert!(nav.is_navigable(row, col));
                }
            }
        }

        #[test]
        fn pixel_set_members_lie_at_or_below_boundary(seed in 0u64..300) {
            let nav = random_nav(seed + 1000, 16, 12, 0.35);
            let (hz, _) = extract_horizon(&nav);
            let mut unique = HashSet::new();
            for p in hz.pixel_set() {
                prop_assert!(p.row >= hz.heights()[p.col], "set pixel above its column boundary");
                prop_assert!(unique.insert(*p), "duplicate pixel in set");
            }
            // Side borders below the boundary are always present.
            for row in hz.heights()[0] + 1..12 {
                prop_assert!(unique.contains(&PixelCoord::new(row, 0)));
            }
            for row in hz.heights()[15] + 1..12 {
                prop_assert!(unique.contains(&PixelCoord::new(row, 15)));
            }
        }
    }

    #[test]
    fn single_pass_cost_scales_linearly() {
        // Cell-visit linearity shows up as near-constant time per pixel.
        let sizes = [(80usize, 60usize), (320, 240)];
        let mut per_pixel = Vec::new();
        for &(w, h) in &sizes {
            let nav = random_nav(7, w, h, 0.2);
            let reps = 20;
            let start = std::time::Instant::now();
            for _ in 0..reps {
                let _ = extract_horizon(&nav);
            }
            let dt = start.elapsed().as_secs_f64() / reps as f64;
            per_pixel.push(dt / (w * h) as f64);
        }
        let ratio = per_pixel[1] / per_pixel[0];
        assert!(
            ratio < 8.0,
            "per-pixel cost grew {ratio:.2}x across a 16x pixel-count increase"
        );
    }
}
