//! Benchmark suites: a declared (environment x mode x seed) matrix, a
//! parallel runner, and a versioned CSV report.
//!
//! # Suite file format
//!
//! Line-oriented sections with `key = value` pairs; `#` starts a comment.
//! A `[suite]` section sets the shared protocol, then one `[env NAME]`
//! section per environment:
//!
//! ```text
//! [suite]
//! name = ablation          # free label for the report
//! modes = pog_only, full   # any of pog_only, pog_hog, full
//! seeds = 20               # 0..20, or an explicit range like 5..25
//! epsilon = 0.5            # goal radius, meters
//! t_max = 90               # episode time limit, seconds
//! width = 640              # camera image size, pixels
//! height = 480
//! goal_jitter = 2.0        # lateral start/goal randomization, meters
//! horizon_filter = off
//!
//! [env field]
//! kind = field             # field | corridor | l_corridor | free
//! spacing = 2.0            # minimum obstacle spacing, field only
//! start = 0 0
//! goal = 32 0
//!
//! [env hallway]
//! kind = corridor
//! pedestrians = 6
//! length = 30              # corridor dimensions, meters
//! width = 6
//! start = 1 0
//! goal = 29 0
//! ```
//!
//! Each episode derives its world and its start/goal jitter from the episode
//! seed, so a suite is exactly reproducible. The CSV report starts with the
//! version line `# povnav-suite-csv v1`, then one `episode` row per run and
//! one `aggregate` row per (environment, mode) group; the two row kinds have
//! different columns, each introduced by its own header line. Aggregate mean
//! path length covers successful episodes only, and the latency percentiles
//! are taken over per-episode mean planner latencies.

use super::env::{build_environment, EnvKind, EnvironmentSpec};
use super::{run_episode, ControlMode, EpisodeConfig, EpisodeResult, PlannerParams};
use crate::grid::ImageDims;
use crate::sim::Pose2D;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::path::Path;

/// Version line written at the top of every CSV report.
pub const CSV_VERSION_LINE: &str = "# povnav-suite-csv v1";

/// One environment entry of a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteEnv {
    pub name: String,
    pub spec: EnvironmentSpec,
    pub start: [f64; 2],
    pub goal: [f64; 2],
}

/// A parsed suite: protocol plus environments.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSpec {
    pub name: String,
    pub modes: Vec<ControlMode>,
    pub seeds: Vec<u64>,
    pub epsilon_m: f64,
    pub t_max_s: f64,
    pub dims: ImageDims,
    pub goal_jitter_m: f64,
    pub horizon_filter: bool,
    pub envs: Vec<SuiteEnv>,
}

/// One executed episode with its matrix coordinates.
#[derive(Debug, Clone)]
pub struct EpisodeRow {
    pub env: String,
    pub mode: ControlMode,
    pub seed: u64,
    pub result: EpisodeResult,
}

/// Per (environment, mode) summary.
#[derive(Debug, Clone)]
pub struct AggregateRow {
    pub env: String,
    pub mode: ControlMode,
    pub episodes: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Mean path length over successful episodes; None when all failed.
    pub mean_success_path_m: Option<f64>,
    pub p50_latency_s: f64,
    pub p95_latency_s: f64,
}

/// Everything a suite run produced.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub episodes: Vec<EpisodeRow>,
    pub aggregates: Vec<AggregateRow>,
}

impl SuiteReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_VERSION_LINE);
        out.push('\n');
        out.push_str(
            "row,env,mode,seed,success,collision,timeout,path_length_m,sim_time_s,\
             mean_latency_ms,max_latency_ms\n",
        );
        for row in &self.episodes {
            let r = &row.result;
            out.push_str(&format!(
                "episode,{},{},{},{},{},{},{:.3},{:.2},{:.3},{:.3}\n",
                row.env,
                row.mode.name(),
                row.seed,
                u8::from(r.success),
                u8::from(r.collision),
                u8::from(r.timeout),
                r.path_length_m,
                r.sim_time_s,
                r.mean_latency_s * 1e3,
                r.max_latency_s * 1e3,
            ));
        }
        out.push_str(
            "row,env,mode,episodes,successes,success_rate,mean_success_path_m,\
             p50_latency_ms,p95_latency_ms\n",
        );
        for agg in &self.aggregates {
            let mean_path = agg
                .mean_success_path_m
                .map(|m| format!("{m:.3}"))
                .unwrap_or_default();
            out.push_str(&format!(
                "aggregate,{},{},{},{},{:.3},{},{:.3},{:.3}\n",
                agg.env,
                agg.mode.name(),
                agg.episodes,
                agg.successes,
                agg.success_rate,
                mean_path,
                agg.p50_latency_s * 1e3,
                agg.p95_latency_s * 1e3,
            ));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// The aggregate for one (environment, mode) cell, if it was run.
    pub fn aggregate(&self, env: &str, mode: ControlMode) -> Option<&AggregateRow> {
        self.aggregates
            .iter()
            .find(|a| a.env == env && a.mode == mode)
    }
}

fn parse_err(source: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        file: source.to_string(),
        line,
        msg: msg.into(),
    }
}

fn parse_f64(source: &str, line: usize, key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| parse_err(source, line, format!("{key} expects a number, got {value:?}")))
}

fn parse_usize(source: &str, line: usize, key: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| parse_err(source, line, format!("{key} expects an integer, got {value:?}")))
}

fn parse_point(source: &str, line: usize, key: &str, value: &str) -> Result<[f64; 2]> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(parse_err(
            source,
            line,
            format!("{key} expects two numbers, got {value:?}"),
        ));
    }
    Ok([
        parse_f64(source, line, key, parts[0])?,
        parse_f64(source, line, key, parts[1])?,
    ])
}

fn parse_bool(source: &str, line: usize, key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "on" | "1" => Ok(true),
        "false" | "off" | "0" => Ok(false),
        _ => Err(parse_err(
            source,
            line,
            format!("{key} expects on/off, got {value:?}"),
        )),
    }
}

fn parse_seeds(source: &str, line: usize, value: &str) -> Result<Vec<u64>> {
    let range = if let Some((a, b)) = value.split_once("..") {
        let lo = a.trim().parse::<u64>();
        let hi = b.trim().parse::<u64>();
        match (lo, hi) {
            (Ok(lo), Ok(hi)) if lo < hi => lo..hi,
            _ => {
                return Err(parse_err(
                    source,
                    line,
                    format!("seeds range must be lo..hi with lo < hi, got {value:?}"),
                ))
            }
        }
    } else {
        let n = value.parse::<u64>().map_err(|_| {
            parse_err(
                source,
                line,
                format!("seeds expects a count or a range, got {value:?}"),
            )
        })?;
        if n == 0 {
            return Err(parse_err(source, line, "seeds count must be positive"));
        }
        0..n
    };
    Ok(range.collect())
}

struct PendingEnv {
    header_line: usize,
    name: String,
    spec: EnvironmentSpec,
    start: Option<[f64; 2]>,
    goal: Option<[f64; 2]>,
}

impl PendingEnv {
    fn finish(self, source: &str) -> Result<SuiteEnv> {
        let start = self.start.ok_or_else(|| {
            parse_err(
                source,
                self.header_line,
                format!("env {:?} is missing its start point", self.name),
            )
        })?;
        let goal = self.goal.ok_or_else(|| {
            parse_err(
                source,
                self.header_line,
                format!("env {:?} is missing its goal point", self.name),
            )
        })?;
        Ok(SuiteEnv {
            name: self.name,
            spec: self.spec,
            start,
            goal,
        })
    }
}

enum Section {
    None,
    Suite,
    Env(PendingEnv),
}

/// Parses a suite description; `source` names the input in diagnostics.
pub fn parse_suite(text: &str, source: &str) -> Result<SuiteSpec> {
    let mut suite_seen = false;
    let mut section = Section::None;
    let mut spec = SuiteSpec {
        name: "suite".into(),
        modes: Vec::new(),
        seeds: Vec::new(),
        epsilon_m: 0.5,
        t_max_s: 90.0,
        dims: ImageDims::new(640, 480).expect("static dims"),
        goal_jitter_m: 2.0,
        horizon_filter: false,
        envs: Vec::new(),
    };
    let mut width = 640usize;
    let mut height = 480usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }

        if let Some(header) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            if let Section::Env(pending) = std::mem::replace(&mut section, Section::None) {
                spec.envs.push(pending.finish(source)?);
            }
            let header = header.trim();
            if header == "suite" {
                if suite_seen {
                    return Err(parse_err(source, line_no, "duplicate [suite] section"));
                }
                suite_seen = true;
                section = Section::Suite;
            } else if let Some(name) = header.strip_prefix("env ") {
                let name = name.trim();
                if name.is_empty() {
                    return Err(parse_err(source, line_no, "[env] needs a name"));
                }
                section = Section::Env(PendingEnv {
                    header_line: line_no,
                    name: name.to_string(),
                    spec: EnvironmentSpec::free(),
                    start: None,
                    goal: None,
                });
            } else {
                return Err(parse_err(
                    source,
                    line_no,
                    format!("unknown section [{header}]"),
                ));
            }
            continue;
        }

        let Some((key, value)) = line.split_once('=') else {
            return Err(parse_err(
                source,
                line_no,
                format!("expected key = value, got {line:?}"),
            ));
        };
        let key = key.trim();
        let value = value.trim();

        match &mut section {
            Section::None => {
                return Err(parse_err(
                    source,
                    line_no,
                    "keys must appear inside a [suite] or [env] section",
                ));
            }
            Section::Suite => match key {
                "name" => spec.name = value.to_string(),
                "modes" => {
                    spec.modes = value
                        .split(',')
                        .map(|m| {
                            ControlMode::parse(m.trim()).map_err(|e| {
                                parse_err(source, line_no, e.to_string())
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                }
                "seeds" => spec.seeds = parse_seeds(source, line_no, value)?,
                "epsilon" => spec.epsilon_m = parse_f64(source, line_no, key, value)?,
                "t_max" => spec.t_max_s = parse_f64(source, line_no, key, value)?,
                "width" => width = parse_usize(source, line_no, key, value)?,
                "height" => height = parse_usize(source, line_no, key, value)?,
                "goal_jitter" => spec.goal_jitter_m = parse_f64(source, line_no, key, value)?,
                "horizon_filter" => spec.horizon_filter = parse_bool(source, line_no, key, value)?,
                _ => {
                    return Err(parse_err(
                        source,
                        line_no,
                        format!("unknown [suite] key {key:?}"),
                    ))
                }
            },
            Section::Env(pending) => match key {
                "kind" => {
                    pending.spec.kind = EnvKind::parse(value)
                        .map_err(|e| parse_err(source, line_no, e.to_string()))?;
                }
                "spacing" => pending.spec.spacing_m = parse_f64(source, line_no, key, value)?,
                "length" => {
                    pending.spec.corridor_length_m = parse_f64(source, line_no, key, value)?
                }
                "width" => {
                    pending.spec.corridor_width_m = parse_f64(source, line_no, key, value)?
                }
                "pedestrians" => {
                    pending.spec.pedestrians = parse_usize(source, line_no, key, value)?
                }
                "seed" => {
                    pending.spec.seed = value.parse::<u64>().map_err(|_| {
                        parse_err(source, line_no, format!("seed expects an integer, got {value:?}"))
                    })?;
                }
                "start" => pending.start = Some(parse_point(source, line_no, key, value)?),
                "goal" => pending.goal = Some(parse_point(source, line_no, key, value)?),
                _ => {
                    return Err(parse_err(
                        source,
                        line_no,
                        format!("unknown [env] key {key:?}"),
                    ))
                }
            },
        }
    }

    if let Section::Env(pending) = section {
        spec.envs.push(pending.finish(source)?);
    }
    if !suite_seen {
        return Err(parse_err(source, 1, "missing [suite] section"));
    }
    if spec.envs.is_empty() {
        return Err(parse_err(source, 1, "suite declares no [env] sections"));
    }
    spec.dims = ImageDims::new(width, height)
        .map_err(|e| parse_err(source, 1, e.to_string()))?;
    if spec.modes.is_empty() {
        spec.modes = vec![ControlMode::Full];
    }
    if spec.seeds.is_empty() {
        spec.seeds = (0..10).collect();
    }
    Ok(spec)
}

pub fn load_suite(path: &Path) -> Result<SuiteSpec> {
    let text = std::fs::read_to_string(path)?;
    parse_suite(&text, &path.display().to_string())
}

/// The episode a matrix cell describes. Both the pedestrian layout and the
/// lateral start/goal jitter derive from the episode seed.
fn episode_for(suite: &SuiteSpec, env: &SuiteEnv, mode: ControlMode, seed: u64) -> Result<EpisodeRow> {
    let mut env_spec = env.spec;
    env_spec.seed ^= seed;
    let world = build_environment(&env_spec)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let j = suite.goal_jitter_m;
    let (u1, u2) = if j > 0.0 {
        (rng.gen_range(-j..j), rng.gen_range(-j..j))
    } else {
        (0.0, 0.0)
    };
    let start = [env.start[0], env.start[1] + u1];
    let goal = [env.goal[0], env.goal[1] + u2];
    let heading = (goal[1] - start[1]).atan2(goal[0] - start[0]);

    let mut config = EpisodeConfig::new(
        Pose2D::new(start[0], start[1], heading),
        goal,
        mode,
        suite.dims,
    );
    config.epsilon_m = suite.epsilon_m;
    config.t_max_s = suite.t_max_s;
    config.use_horizon_filter = suite.horizon_filter;
    config.params = PlannerParams::defaults_for(suite.dims);

    let result = run_episode(&world, &config)?;
    Ok(EpisodeRow {
        env: env.name.clone(),
        mode,
        seed,
        result,
    })
}

/// Nearest-rank percentile of an unsorted sample; `q` in (0, 1].
fn percentile(samples: &[f64], q: f64) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

fn aggregate(suite: &SuiteSpec, episodes: &[EpisodeRow]) -> Vec<AggregateRow> {
    let mut out = Vec::new();
    for env in &suite.envs {
        for &mode in &suite.modes {
            let rows: Vec<&EpisodeRow> = episodes
                .iter()
                .filter(|r| r.env == env.name && r.mode == mode)
                .collect();
            if rows.is_empty() {
                continue;
            }
            let successes = rows.iter().filter(|r| r.result.success).count();
            let success_paths: Vec<f64> = rows
                .iter()
                .filter(|r| r.result.success)
                .map(|r| r.result.path_length_m)
                .collect();
            let latencies: Vec<f64> = rows.iter().map(|r| r.result.mean_latency_s).collect();
            out.push(AggregateRow {
                env: env.name.clone(),
                mode,
                episodes: rows.len(),
                successes,
                success_rate: successes as f64 / rows.len() as f64,
                mean_success_path_m: (!success_paths.is_empty())
                    .then(|| success_paths.iter().sum::<f64>() / success_paths.len() as f64),
                p50_latency_s: percentile(&latencies, 0.50),
                p95_latency_s: percentile(&latencies, 0.95),
            });
        }
    }
    out
}

/// Runs the whole matrix, fanning episodes out across threads. Episode order
/// in the report matches the declared order (environments, then modes, then
/// seeds) regardless of scheduling.
pub fn run_suite(suite: &SuiteSpec) -> Result<SuiteReport> {
    let jobs: Vec<(usize, ControlMode, u64)> = suite
        .envs
        .iter()
        .enumerate()
        .flat_map(|(i, _)| {
            suite
                .modes
                .iter()
                .flat_map(move |&m| suite.seeds.iter().map(move |&s| (i, m, s)))
        })
        .collect();

    let episodes: Vec<EpisodeRow> = jobs
        .par_iter()
        .map(|&(i, mode, seed)| episode_for(suite, &suite.envs[i], mode, seed))
        .collect::<Result<Vec<_>>>()?;

    let aggregates = aggregate(suite, &episodes);
    Ok(SuiteReport {
        episodes,
        aggregates,
    })
}

/// The built-in three-scenario ablation matrix: open plane, scattered
/// obstacle field, pedestrian corridor; every mode, twenty seeds each.
pub fn ablation_suite() -> SuiteSpec {
    SuiteSpec {
        name: "ablation".into(),
        modes: vec![ControlMode::PogOnly, ControlMode::PogHog, ControlMode::Full],
        seeds: (0..20).collect(),
        epsilon_m: 0.5,
        t_max_s: 90.0,
        dims: ImageDims::new(640, 480).expect("static dims"),
        goal_jitter_m: 2.0,
        horizon_filter: false,
        envs: vec![
            SuiteEnv {
                name: "free".into(),
                spec: EnvironmentSpec::free(),
                start: [0.0, 0.0],
                goal: [32.0, 0.0],
            },
            SuiteEnv {
                name: "field_2m".into(),
                spec: EnvironmentSpec::field(2.0),
                start: [0.0, 0.0],
                goal: [32.0, 0.0],
            },
            SuiteEnv {
                name: "corridor".into(),
                spec: EnvironmentSpec::corridor(6, 0),
                start: [1.0, 0.0],
                goal: [29.0, 0.0],
            },
        ],
    }
}

/// The built-in density sweep: full mode across obstacle spacings from open
/// (3 m) to barely passable (1 m).
pub fn density_sweep_suite() -> SuiteSpec {
    let spacings = [3.0, 2.5, 2.0, 1.5, 1.0];
    SuiteSpec {
        name: "density".into(),
        modes: vec![ControlMode::Full],
        seeds: (0..20).collect(),
        epsilon_m: 0.5,
        t_max_s: 90.0,
        dims: ImageDims::new(640, 480).expect("static dims"),
        goal_jitter_m: 2.0,
        horizon_filter: false,
        envs: spacings
            .iter()
            .map(|&s| SuiteEnv {
                name: format!("field_{s}m"),
                spec: EnvironmentSpec::field(s),
                start: [0.0, 0.0],
                goal: [32.0, 0.0],
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL_SUITE: &str = "\
# quick regression matrix
[suite]
name = smoke
modes = full, pog_only
seeds = 2
epsilon = 0.5
# at this image height the proximity feature spans 24 px, so the commanded
# speed tops out near 0.12 m/s and the 2 m hop needs a generous budget
t_max = 30
width = 64
height = 48
goal_jitter = 0

[env open]
kind = free
start = 0 0
goal = 2 0
";

    #[test]
    fn parses_every_field() {
        let text = "\
[suite]
name = demo
modes = pog_hog
seeds = 3..5
epsilon = 0.4
t_max = 12
width = 320
height = 240
goal_jitter = 1.5
horizon_filter = on

[env hallway]
kind = corridor
pedestrians = 4
length = 20
width = 5
seed = 9
start = 1 0
goal = 19 0
";
        let spec = parse_suite(text, "demo.suite").unwrap();
        assert_eq!(spec.name, "demo");
        assert_eq!(spec.modes, vec![ControlMode::PogHog]);
        assert_eq!(spec.seeds, vec![3, 4]);
        assert_eq!(spec.epsilon_m, 0.4);
        assert_eq!(spec.t_max_s, 12.0);
        assert_eq!(spec.dims, ImageDims::new(320, 240).unwrap());
        assert_eq!(spec.goal_jitter_m, 1.5);
        assert!(spec.horizon_filter);
        assert_eq!(spec.envs.len(), 1);
        let env = &spec.envs[0];
        assert_eq!(env.name, "hallway");
        assert_eq!(env.spec.kind, EnvKind::Corridor);
        assert_eq!(env.spec.pedestrians, 4);
        assert_eq!(env.spec.corridor_length_m, 20.0);
        assert_eq!(env.spec.corridor_width_m, 5.0);
        assert_eq!(env.spec.seed, 9);
        assert_eq!(env.start, [1.0, 0.0]);
        assert_eq!(env.goal, [19.0, 0.0]);
    }

    #[test]
    fn empty_input_is_a_parse_error() {
        let err = parse_suite("", "empty.suite").unwrap_err();
        match err {
            Error::Parse { file, .. } => assert_eq!(file, "empty.suite"),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let text = "[suite]\nname = x\nseeds = banana\n";
        match parse_suite(text, "s") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
        let text = "[suite]\nwat = 1\n";
        match parse_suite(text, "s") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_sections_and_points_are_rejected() {
        assert!(parse_suite("[suite]\nname = x\n", "s").is_err(), "no envs");
        assert!(
            parse_suite("[env a]\nkind = free\nstart = 0 0\ngoal = 1 0\n", "s").is_err(),
            "no [suite]"
        );
        let text = "[suite]\nname = x\n[env a]\nkind = free\nstart = 0 0\n";
        match parse_suite(text, "s") {
            Err(Error::Parse { line, msg, .. }) => {
                assert_eq!(line, 3, "points at the env header");
                assert!(msg.contains("goal"));
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn small_matrix_runs_and_reports() {
        let spec = parse_suite(SMALL_SUITE, "small.suite").unwrap();
        let report = run_suite(&spec).unwrap();
        assert_eq!(report.episodes.len(), 4);
        assert_eq!(report.aggregates.len(), 2);

        // Declared order: modes outer, seeds inner.
        assert_eq!(report.episodes[0].mode, ControlMode::Full);
        assert_eq!(report.episodes[0].seed, 0);
        assert_eq!(report.episodes[1].seed, 1);
        assert_eq!(report.episodes[2].mode, ControlMode::PogOnly);

        // A 2 m free-space hop succeeds in any seeing mode.
        let full = report.aggregate("open", ControlMode::Full).unwrap();
        assert_eq!(full.episodes, 2);
        assert_eq!(full.success_rate, 1.0);
        assert!(full.mean_success_path_m.unwrap() > 1.0);
        assert!(full.p50_latency_s <= full.p95_latency_s);

        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_VERSION_LINE);
        assert!(lines[1].starts_with("row,env,mode,seed,"));
        assert_eq!(lines.len(), 2 + 4 + 1 + 2);
        assert_eq!(csv.matches("\nepisode,").count(), 4);
        assert_eq!(csv.matches("\naggregate,").count(), 2);
    }

    #[test]
    fn suite_reruns_reproduce_episodes() {
        let spec = parse_suite(SMALL_SUITE, "small.suite").unwrap();
        let a = run_suite(&spec).unwrap();
        let b = run_suite(&spec).unwrap();
        for (x, y) in a.episodes.iter().zip(&b.episodes) {
            assert_eq!(x.env, y.env);
            assert_eq!(x.seed, y.seed);
            assert!(x.result.same_outcome(&y.result));
        }
    }

    #[test]
    fn goal_jitter_varies_by_seed() {
        let mut spec = parse_suite(SMALL_SUITE, "small.suite").unwrap();
        spec.goal_jitter_m = 2.0;
        spec.t_max_s = 0.5;
        spec.modes = vec![ControlMode::PogOnly];
        let report = run_suite(&spec).unwrap();
        let y0 = report.episodes[0].result.trajectory[0].y;
        let y1 = report.episodes[1].result.trajectory[0].y;
        assert_ne!(y0, y1, "different seeds must jitter differently");
    }

    #[test]
    fn percentile_is_nearest_rank() {
        let xs = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(percentile(&xs, 0.5), 2.0);
        assert_eq!(percentile(&xs, 0.95), 4.0);
        assert_eq!(percentile(&xs, 1.0), 4.0);
        assert_eq!(percentile(&[7.0], 0.5), 7.0);
        assert_eq!(percentile(&[], 0.5), 0.0);
    }

    #[test]
    fn builtin_suites_have_the_documented_shape() {
        let ab = ablation_suite();
        assert_eq!(ab.envs.len(), 3);
        assert_eq!(ab.modes.len(), 3);
        assert_eq!(ab.seeds.len(), 20);
        let dens = density_sweep_suite();
        assert_eq!(dens.envs.len(), 5);
        assert_eq!(dens.modes, vec![ControlMode::Full]);
        let spacings: Vec<f64> = dens.envs.iter().map(|e| e.spec.spacing_m).collect();
        assert!(spacings.windows(2).all(|w| w[0] > w[1]));
    }
}
