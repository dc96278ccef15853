//! Visual path generation.
//!
//! Builds a one-pixel-per-row path from the start pixel (bottom center) up to
//! the subgoal pixel, keeping a robot-width clearance at every row. The
//! clearance half-width shrinks with the row's ground depth under the pinhole
//! model, so far rows need only a few pixels of free span while near rows need
//! many.
//!
//! When a row's span is blocked, the row's column shifts sideways until the
//! span clears, and the rest of the path below re-aims at the cleared column:
//! the detour starts at the bottom of the path rather than at the obstruction.
//! That matters for the controller, whose steering looks only a short distance
//! ahead along the path. Everything strictly below the visual horizon is
//! navigable, so a straight drop from any cleared column toward the start row
//! stays obstacle free and the re-aim is always available. Rows whose span
//! cannot be cleared by any shift are skipped and the path is marked as a
//! fallback path.

use crate::camera::CameraModel;
use crate::grid::{ImageDims, NavigabilityImage, PixelCoord};
use crate::subgoal::Hog;
use crate::{Error, Result};

/// Physical lateral extent of the robot plus an extra safety margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotFootprint {
    pub half_width_m: f64,
    pub safety_margin_m: f64,
}

impl RobotFootprint {
    pub fn new(half_width_m: f64, safety_margin_m: f64) -> Result<Self> {
        if !(half_width_m > 0.0 && safety_margin_m > 0.0) {
            return Err(Error::Domain(format!(
                "footprint dimensions must be positive, got ({half_width_m}, {safety_margin_m})"
            )));
        }
        Ok(RobotFootprint {
            half_width_m,
            safety_margin_m,
        })
    }
}

impl Default for RobotFootprint {
    fn default() -> Self {
        RobotFootprint {
            half_width_m: 0.25,
            safety_margin_m: 0.05,
        }
    }
}

/// Whether the path covers every row with a clear span. Sideways shifts keep
/// a path safe; a row that no shift can clear is dropped and demotes the path
/// to fallback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathMode {
    Safe,
    Fallback,
}

/// Image-space path ordered from the start pixel (bottom center) to the
/// subgoal pixel. Rows strictly decrease along the list; in safe mode every
/// row between start and subgoal appears exactly once, in fallback mode
/// untraversable rows are absent.
#[derive(Debug, Clone, PartialEq)]
pub struct VisualPath {
    pub points: Vec<PixelCoord>,
    pub mode: PathMode,
    /// The avoidance side used by this path, when any row needed a shift.
    /// Callers that plan frame after frame feed it back through
    /// [`generate_path_preferring`] so the chosen side persists while one
    /// obstruction is being passed.
    pub shift: Option<Shift>,
}

/// Required free half-span, in pixels, for the robot to occupy a ground pixel
/// at `row`. Under a level camera, one meter at the ground depth of `row`
/// projects to `(row - principal_row) / height_m` pixels, so the span is that
/// times the footprint half-width plus margin, rounded, and clamped to
/// `[1, width / 2]`. Rows at or above the principal row map to unbounded
/// depth and return the clamp floor of 1.
pub fn safe_halfwidth(
    row: usize,
    camera: &CameraModel,
    robot: &RobotFootprint,
    dims: ImageDims,
) -> usize {
    let dr = row as f64 - camera.principal_row;
    let cap = dims.width / 2;
    if dr <= 0.0 {
        return 1;
    }
    let px = (robot.half_width_m + robot.safety_margin_m) * dr / camera.height_m;
    (px.round() as usize).clamp(1, cap)
}

/// Sideways avoidance direction in image space. Left means toward lower
/// column indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shift {
    Left,
    Right,
}

impl Shift {
    fn step(self) -> isize {
        match self {
            Shift::Left => -1,
            Shift::Right => 1,
        }
    }
}

/// Per-row span queries over a prefix-sum of blocked cells, so each test is
/// constant time and a whole row costs one linear pass.
struct RowSpans<'a> {
    nav: &'a NavigabilityImage,
    width: usize,
    prefix: Vec<u32>,
}

impl<'a> RowSpans<'a> {
    fn new(nav: &'a NavigabilityImage) -> Self {
        let width = nav.dims().width;
        RowSpans {
            nav,
            width,
            prefix: vec![0; width + 1],
        }
    }

    fn load_row(&mut self, row: usize) {
        for col in 0..self.width {
            let blocked = !self.nav.is_navigable(row, col) as u32;
            self.prefix[col + 1] = self.prefix[col] + blocked;
        }
    }

    /// True when every pixel of `[col - delta, col + delta]`, clipped to the
    /// image, is navigable in the loaded row.
    fn span_clear(&self, col: usize, delta: usize) -> bool {
        let lo = col.saturating_sub(delta);
        let hi = (col + delta).min(self.width - 1);
        self.prefix[hi + 1] == self.prefix[lo]
    }

    fn is_blocked(&self, col: usize) -> bool {
        self.prefix[col + 1] > self.prefix[col]
    }

    /// Nearest shifted column in `dir` whose span clears, if any.
    fn first_clear(&self, nominal: usize, delta: usize, dir: Shift) -> Option<usize> {
        let mut col = nominal as isize;
        loop {
            col += dir.step();
            if col < 0 || col >= self.width as isize {
                return None;
            }
            if self.span_clear(col as usize, delta) {
                return Some(col as usize);
            }
        }
    }

    /// Distance from `nominal` to the nearest blocked cell in `dir`, or
    /// `usize::MAX` when that side is free all the way to the border.
    fn blocker_distance(&self, nominal: usize, dir: Shift) -> usize {
        let mut col = nominal as isize;
        let mut dist = 0usize;
        loop {
            col += dir.step();
            dist += 1;
            if col < 0 || col >= self.width as isize {
                return usize::MAX;
            }
            if self.is_blocked(col as usize) {
                return dist;
            }
        }
    }
}

/// Picks the shift side for the first blocked row. Only sides where some
/// shifted span clears are eligible. Between two eligible sides the side the
/// subgoal column lies on wins: the path above the obstruction is already
/// heading there, so detouring the same way keeps the bottom of the path,
/// which is what the controller steers by, consistent with the top. Bending
/// the bottom away from the subgoal makes the robot turn away from where the
/// path is going, and against an off-center goal that capture never resolves.
/// When the subgoal sits directly above the blocked column the smaller shift
/// wins, then the side whose nearest blocker is farther, then left. The
/// blocker comparison stays last because it degenerates to a coin flip
/// whenever the nominal column lands inside an obstruction, where both
/// immediate neighbors are blocked.
fn find_shift_direction(
    spans: &RowSpans,
    nominal: usize,
    delta: usize,
    target_col: usize,
) -> Option<(Shift, usize)> {
    let left = spans.first_clear(nominal, delta, Shift::Left);
    let right = spans.first_clear(nominal, delta, Shift::Right);
    match (left, right) {
        (None, None) => None,
        (Some(c), None) => Some((Shift::Left, c)),
        (None, Some(c)) => Some((Shift::Right, c)),
        (Some(lc), Some(rc)) => {
            if target_col < nominal {
                return Some((Shift::Left, lc));
            }
            if target_col > nominal {
                return Some((Shift::Right, rc));
            }
            let lshift = nominal - lc;
            let rshift = rc - nominal;
            if lshift < rshift {
                return Some((Shift::Left, lc));
            }
            if rshift < lshift {
                return Some((Shift::Right, rc));
            }
            let ld = spans.blocker_distance(nominal, Shift::Left);
            let rd = spans.blocker_distance(nominal, Shift::Right);
            if ld >= rd {
                Some((Shift::Left, lc))
            } else {
                Some((Shift::Right, rc))
            }
        }
    }
}

/// Generates the visual path from the bottom-center start pixel to the
/// subgoal.
///
/// `processed_nav` must be the processed image from horizon extraction, where
/// each column is blocked above its boundary row and free below it. Walking
/// rows from the subgoal down to the bottom, the nominal column interpolates
/// linearly between an aim anchor and the start column. The anchor begins at
/// the subgoal; every time a blocked span forces a sideways shift, the anchor
/// moves to the cleared pixel, so all rows below it lean toward the cleared
/// column immediately. Each row below the subgoal is kept only if a clearance
/// span around its column is free: a blocked nominal span is shifted sideways
/// (the side is chosen once, at the first blocked row that any shift can
/// clear, and reused afterwards) and the row is dropped when no shift clears
/// it. The path is safe exactly when every kept span is clear and no row was
/// dropped; shifted rows by themselves do not make it a fallback.
///
/// The subgoal pixel itself is exempt from the span test: it sits on the
/// horizon boundary, where the processed image is blocked by construction.
/// The bottom row always contributes the start pixel, since the robot is
/// already there; a blocked span at that row cannot be shifted away and marks
/// the path as fallback.
///
/// Errors when the subgoal lies above the horizon of `processed_nav`.
pub fn generate_path(
    processed_nav: &NavigabilityImage,
    hog: Hog,
    camera: &CameraModel,
    robot: &RobotFootprint,
) -> Result<VisualPath> {
    generate_path_preferring(processed_nav, hog, camera, robot, None)
}

/// [`generate_path`] with a preferred avoidance side carried over from the
/// previous frame.
///
/// When the first blocked row arrives and `preferred` still has a clearing
/// shift there, that side is taken without comparing against the other one;
/// otherwise the side is decided fresh. Feeding each frame's
/// [`VisualPath::shift`] back in keeps the detour on one side for as long as
/// an obstruction stays in front of the robot. Deciding from scratch every
/// frame instead lets the robot's own turning slide the obstruction back and
/// forth across the aim line, flipping the chosen side and with it the sign
/// of the steering feature, which locks the controller into rotating in
/// place. Once the free side is picked it stays reachable while the
/// obstruction is passed, so honoring the previous choice costs nothing.
pub fn generate_path_preferring(
    processed_nav: &NavigabilityImage,
    hog: Hog,
    camera: &CameraModel,
    robot: &RobotFootprint,
    preferred: Option<Shift>,
) -> Result<VisualPath> {
    let dims = processed_nav.dims();
    dims.check(hog.pixel)?;
    let top = hog.pixel;
    if top.row + 1 < dims.height
        && !processed_nav.is_navigable(top.row, top.col)
        && !processed_nav.is_navigable(top.row + 1, top.col)
    {
        return Err(Error::Contract(format!(
            "subgoal pixel ({}, {}) lies above the horizon",
            top.row, top.col
        )));
    }

    let start = dims.origin_pixel();
    if top.row == start.row {
        return Ok(VisualPath {
            points: vec![top],
            mode: PathMode::Safe,
            shift: None,
        });
    }

    let mut points = vec![top];
    let mut mode = PathMode::Safe;
    let mut direction: Option<Shift> = None;
    let mut anchor = top;
    let mut spans = RowSpans::new(processed_nav);

    for row in top.row + 1..=start.row {
        let t = (row - anchor.row) as f64 / (start.row - anchor.row) as f64;
        let nominal =
            (anchor.col as f64 + (start.col as f64 - anchor.col as f64) * t).round() as usize;
        let delta = safe_halfwidth(row, camera, robot, dims);
        spans.load_row(row);

        if row == start.row {
            if !spans.span_clear(start.col, delta) {
                mode = PathMode::Fallback;
            }
            points.push(start);
            break;
        }

        if spans.span_clear(nominal, delta) {
            points.push(PixelCoord::new(row, nominal));
            continue;
        }
        let shifted = match direction {
            None => {
                let chosen = preferred
                    .and_then(|dir| spans.first_clear(nominal, delta, dir).map(|col| (dir, col)))
                    .or_else(|| find_shift_direction(&spans, nominal, delta, top.col));
                if let Some((dir, col)) = chosen {
                    direction = Some(dir);
                    Some(col)
                } else {
                    None
                }
            }
            Some(dir) => spans.first_clear(nominal, delta, dir),
        };
        match shifted {
            Some(col) => {
                points.push(PixelCoord::new(row, col));
                anchor = PixelCoord::new(row, col);
            }
            None => mode = PathMode::Fallback,
        }
    }

    points.reverse();
    Ok(VisualPath {
        points,
        mode,
        shift: direction,
    })
}
