use povnav::goalproj::{project_goal, GoalDirection};
use povnav::grid::{pixel_angle, to_planning, ImageDims};
use povnav::harness::{build_environment, goal_in_robot_frame, EnvKind, EnvironmentSpec, PlannerParams};
use povnav::horizon::extract_horizon;
use povnav::pathgen::{generate_path, safe_halfwidth};
use povnav::segmentation::{classes_to_navigability, postprocess_navigability};
use povnav::sim::{render_camera, Pose2D};
use povnav::subgoal::select_hog;

fn main() {
    let dims = ImageDims::new(640, 480).unwrap();
    let params = PlannerParams::defaults_for(dims);
    let spec = EnvironmentSpec {
        kind: EnvKind::GridField { spacing_m: 2.0 },
        seed: 0,
        pedestrians: 0,
    };
    let world = build_environment(&spec).unwrap();
    let pose = Pose2D::new(4.28, -1.23, -0.85);
    let goal = [32.0, 0.0];

    let (semantic, _depth) = render_camera(&world, &pose, &params.camera, dims);
    let nav = classes_to_navigability(&semantic, &params.table);
    let post = postprocess_navigability(&nav);
    let (horizon, processed) = extract_horizon(&post);

    let goal_rel = goal_in_robot_frame(&pose, goal);
    let dir = GoalDirection::new(goal_rel[1].atan2(goal_rel[0])).unwrap();
    let pog = project_goal(dir, dims);
    let pog_bearing = pixel_angle(to_planning(pog.pixel(), dims).unwrap()).unwrap_or(dir.angle());
    let hog = select_hog(&horizon, pog_bearing, params.weights);
    println!(
        "goal_rel=({:.2},{:.2}) theta_g={:.3} pog={:?} hog={:?}",
        goal_rel[0], goal_rel[1], pog_bearing, pog.pixel(), hog.pixel
    );

    // Horizon summary: boundary row per 40-column band (max = nearest).
    let h = horizon.heights();
    for band in 0..16 {
        let lo = band * 40;
        let hi = lo + 40;
        let deepest = *h[lo..hi].iter().min().unwrap();
        let nearest = *h[lo..hi].iter().max().unwrap();
        println!("cols {lo:3}-{hi:3}: boundary rows {deepest:3}..{nearest:3}");
    }

    // Walk the aim line from the HOG down; report span state per 10 rows and
    // the first blocked row's left/right alternatives.
    let start = dims.origin_pixel();
    let top = hog.pixel;
    let span_clear = |row: usize, col: usize, delta: usize| -> bool {
        let lo = col.saturating_sub(delta);
        let hi = (col + delta).min(dims.width - 1);
        (lo..=hi).all(|c| processed.is_navigable(row, c))
    };
    let first_clear = |row: usize, nominal: usize, delta: usize, step: isize| -> Option<usize> {
        let mut c = nominal as isize + step;
        while c >= 0 && c < dims.width as isize {
            if span_clear(row, c as usize, delta) {
                return Some(c as usize);
            }
            c += step;
        }
        None
    };
    let mut reported = 0;
    for row in top.row + 1..start.row {
        let t = (row - top.row) as f64 / (start.row - top.row) as f64;
        let nominal = (top.col as f64 + (start.col as f64 - top.col as f64) * t).round() as usize;
        let delta = safe_halfwidth(row, &params.camera, &params.robot, dims);
        if !span_clear(row, nominal, delta) && reported < 8 {
            let l = first_clear(row, nominal, delta, -1);
            let r = first_clear(row, nominal, delta, 1);
            println!(
                "blocked row {row}: nominal {nominal} delta {delta} left {l:?} right {r:?}"
            );
            reported += 1;
        }
    }

    let path = generate_path(&processed, hog, &params.camera, &params.robot).unwrap();
    println!("fresh path: mode {:?} shift {:?}", path.mode, path.shift);
    for p in path.points.iter().take(12) {
        println!("  ({}, {})", p.row, p.col);
    }
}
