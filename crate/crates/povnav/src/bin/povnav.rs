//! Command-line front end: single episodes, suite benchmarks, the built-in
//! ablation and density matrices, and frame dumps.
//!
//! Suite files use the line-oriented schema documented in the library's
//! `harness::suite` module (`[suite]` and `[env NAME]` sections of
//! `key = value` pairs). Reports use the `# povnav-suite-csv v1` format.
//! The process exits nonzero whenever an episode or parse contract fails.

use clap::{Args, Parser, Subcommand};
use povnav::grid::ImageDims;
use povnav::harness::{
    ablation_suite, build_environment, density_sweep_suite, load_suite, run_episode,
    run_episode_observed, run_suite, write_frame_ppm, ControlMode, EnvKind, EnvironmentSpec,
    EpisodeConfig, EpisodeResult, SuiteReport,
};
use povnav::sim::Pose2D;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "povnav", about = "Mapless visual navigation benchmark runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one closed-loop episode and print its outcome
    Run(RunArgs),
    /// Run a suite file and emit its CSV report
    Bench(BenchArgs),
    /// Run a built-in matrix: the three-environment ablation, or the
    /// obstacle-density sweep with --density
    Ablate(AblateArgs),
    /// Run one episode and dump every control step as a PPM frame
    Render(RenderArgs),
}

#[derive(Args)]
struct EnvArgs {
    /// Environment kind: free, field, corridor, l_corridor
    #[arg(long, default_value = "free")]
    env: String,
    /// Minimum obstacle spacing in meters (field)
    #[arg(long, default_value_t = 2.0)]
    spacing: f64,
    /// Pedestrian count (corridor kinds)
    #[arg(long, default_value_t = 0)]
    pedestrians: usize,
    /// Corridor length in meters
    #[arg(long, default_value_t = 30.0)]
    length: f64,
    /// Corridor width in meters
    #[arg(long, default_value_t = 6.0)]
    corridor_width: f64,
    /// Seed for obstacle and pedestrian placement
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl EnvArgs {
    fn spec(&self) -> anyhow::Result<EnvironmentSpec> {
        let kind = EnvKind::parse(&self.env)?;
        Ok(EnvironmentSpec {
            kind,
            spacing_m: self.spacing,
            corridor_length_m: self.length,
            corridor_width_m: self.corridor_width,
            pedestrians: self.pedestrians,
            seed: self.seed,
        })
    }
}

#[derive(Args)]
struct EpisodeArgs {
    /// Control mode: pog_only, pog_hog, full
    #[arg(long, default_value = "full")]
    mode: String,
    /// Start position as X,Y meters (heading faces the goal)
    #[arg(long, default_value = "0,0")]
    start: String,
    /// Goal position as X,Y meters
    #[arg(long, default_value = "20,0")]
    goal: String,
    /// Goal radius in meters
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Episode time limit in seconds
    #[arg(long, default_value_t = 90.0)]
    t_max: f64,
    /// Camera image width in pixels
    #[arg(long, default_value_t = 640)]
    width: usize,
    /// Camera image height in pixels
    #[arg(long, default_value_t = 480)]
    height: usize,
    /// Smooth the horizon across frames
    #[arg(long)]
    horizon_filter: bool,
}

impl EpisodeArgs {
    fn config(&self) -> anyhow::Result<EpisodeConfig> {
        let start = parse_point(&self.start)?;
        let goal = parse_point(&self.goal)?;
        let heading = (goal[1] - start[1]).atan2(goal[0] - start[0]);
        let dims = ImageDims::new(self.width, self.height)?;
        let mode = ControlMode::parse(&self.mode)?;
        let mut config = EpisodeConfig::new(Pose2D::new(start[0], start[1], heading), goal, mode, dims);
        config.epsilon_m = self.epsilon;
        config.t_max_s = self.t_max;
        config.use_horizon_filter = self.horizon_filter;
        Ok(config)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    env: EnvArgs,
    #[command(flatten)]
    episode: EpisodeArgs,
    /// Write a per-control-step CSV (time, pose, command, features)
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Suite file to run
    suite: PathBuf,
    /// Write the CSV report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AblateArgs {
    /// Run the obstacle-density sweep instead of the mode ablation
    #[arg(long)]
    density: bool,
    /// Override the number of seeds per cell
    #[arg(long)]
    seeds: Option<u64>,
    /// Write the CSV report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    env: EnvArgs,
    #[command(flatten)]
    episode: EpisodeArgs,
    /// Directory for the frame_NNNNN.ppm sequence
    #[arg(long)]
    out: PathBuf,
    /// Keep every Nth control step only
    #[arg(long, default_value_t = 1)]
    every: usize,
}

fn parse_point(text: &str) -> anyhow::Result<[f64; 2]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        anyhow::bail!("expected X,Y, got {text:?}");
    }
    Ok([parts[0].parse()?, parts[1].parse()?])
}

fn print_result(r: &EpisodeResult) {
    let outcome = if r.success {
        "success"
    } else if r.collision {
        "collision"
    } else {
        "timeout"
    };
    println!("outcome: {outcome}");
    println!("path length: {:.2} m", r.path_length_m);
    println!("sim time: {:.2} s", r.sim_time_s);
    println!(
        "planner latency: mean {:.2} ms, max {:.2} ms",
        r.mean_latency_s * 1e3,
        r.max_latency_s * 1e3
    );
}

fn emit_report(report: &SuiteReport, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            report.write_csv(path)?;
            for agg in &report.aggregates {
                println!(
                    "{:<12} {:<8} success {:>3}/{:<3} p50 latency {:.2} ms",
                    agg.env,
                    agg.mode.name(),
                    agg.successes,
                    agg.episodes,
                    agg.p50_latency_s * 1e3
                );
            }
            eprintln!("report written to {}", path.display());
        }
        None => print!("{}", report.to_csv()),
    }
    Ok(())
}

fn cmd_run(args: &RunArgs) -> anyhow::Result<()> {
    let world = build_environment(&args.env.spec()?)?;
    let config = args.episode.config()?;
    let result = match &args.trace {
        None => run_episode(&world, &config)?,
        Some(path) => {
            let mut rows = String::from(
                "t,x,y,theta,v,omega,lambda,phi,hog_row,hog_col,pog_row,pog_col\n",
            );
            let result = run_episode_observed(&world, &config, |record| {
                let hog = record.diagnostics.hog;
                rows.push_str(&format!(
                    "{:.2},{:.4},{:.4},{:.4},{:.4},{:.4},{:.2},{:.4},{},{},{},{}\n",
                    record.sim_time_s,
                    record.pose.x,
                    record.pose.y,
                    record.pose.theta,
                    record.command.v,
                    record.command.omega,
                    record.diagnostics.lambda.unwrap_or(f64::NAN),
                    record.diagnostics.phi,
                    hog.map_or(String::new(), |p| p.row.to_string()),
                    hog.map_or(String::new(), |p| p.col.to_string()),
                    record.diagnostics.pog.row,
                    record.diagnostics.pog.col,
                ));
            })?;
            std::fs::write(path, rows)?;
            result
        }
    };
    print_result(&result);
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> anyhow::Result<()> {
    let suite = load_suite(&args.suite)?;
    let report = run_suite(&suite)?;
    emit_report(&report, args.out.as_ref())
}

fn cmd_ablate(args: &AblateArgs) -> anyhow::Result<()> {
    let mut suite = if args.density {
        density_sweep_suite()
    } else {
        ablation_suite()
    };
    if let Some(n) = args.seeds {
        anyhow::ensure!(n > 0, "--seeds must be positive");
        suite.seeds = (0..n).collect();
    }
    let report = run_suite(&suite)?;
    emit_report(&report, args.out.as_ref())
}

fn cmd_render(args: &RenderArgs) -> anyhow::Result<()> {
    anyhow::ensure!(args.every > 0, "--every must be positive");
    std::fs::create_dir_all(&args.out)?;
    let world = build_environment(&args.env.spec()?)?;
    let config = args.episode.config()?;

    let mut frames = 0usize;
    let mut write_err = None;
    let result = run_episode_observed(&world, &config, |record| {
        if write_err.is_some() || record.control_step % args.every != 0 {
            return;
        }
        match write_frame_ppm(&args.out, frames, record.semantic, record.diagnostics) {
            Ok(_) => frames += 1,
            Err(e) => write_err = Some(e),
        }
    })?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    println!("wrote {frames} frames to {}", args.out.display());
    print_result(&result);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Ablate(args) => cmd_ablate(args),
        Command::Render(args) => cmd_render(args),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
