mod config;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use rft_walker::metrics::{metrics, CostBreakdown};
use rft_walker::optimizer::{optimize_with, OptimizationReport, Scenario};
use rft_walker::sim::{simulate, SimTrajectory};
use serde::Serialize;

use crate::config::RunConfig;

/// Worker threads for parallel evaluation; defaults to all cores.
const WORKERS_ENV: &str = "RFTWALK_WORKERS";

#[derive(Parser)]
#[command(name = "rftwalk", version, about = "Biped walking on granular terrain with resistive force theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one walk and write trajectory.csv and metrics.json.
    Simulate(Flags),
    /// Simulate every listed foot shape and write comparison.csv/json.
    CompareShapes(Flags),
    /// Search waypoint foot contours with a genetic algorithm.
    Optimize(Flags),
    /// Write the selected stress map as an editable CSV.
    ExportMapTemplate(Flags),
}

/// Flags override the matching keys of the config file.
#[derive(Args, Debug, Default)]
struct Flags {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    zeta: Option<f64>,
    /// generic, test:<magnitude>, or a CSV path
    #[arg(long)]
    map: Option<String>,
    #[arg(long)]
    no_tension: Option<bool>,
    /// synth or a gait CSV path
    #[arg(long)]
    gait: Option<String>,
    /// Shape name, contour JSON path, or genome:k1,k2,...
    #[arg(long)]
    foot: Option<String>,
    /// Comma-separated foot selectors for compare-shapes
    #[arg(long, value_delimiter = ',')]
    shapes: Option<Vec<String>>,
    #[arg(long)]
    contact_length: Option<f64>,
    #[arg(long)]
    foot_width: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    tf: Option<f64>,
    #[arg(long)]
    settle_time: Option<f64>,
    #[arg(long)]
    plates: Option<usize>,
    #[arg(long)]
    levels: Option<u32>,
    #[arg(long)]
    waypoints: Option<usize>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Flags {
    fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = &self.$f { c.$f = v.clone(); })*};
        }
        set!(zeta, map, no_tension, gait, foot, shapes, contact_length, dt, tf, settle_time, plates, levels, waypoints, population, generations, seed, out);
        if self.foot_width.is_some() {
            c.foot_width = self.foot_width;
        }
        c.shapes.retain(|s| !s.trim().is_empty());
        Ok(c)
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = configure_workers().and_then(|_| run(cli.command)) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn configure_workers() -> Result<()> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v.parse().with_context(|| format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))?;
        if n == 0 {
            bail!("{WORKERS_ENV} must be a positive integer");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate(f) => cmd_simulate(&f.resolve()?),
        Command::CompareShapes(f) => cmd_compare_shapes(&f.resolve()?),
        Command::Optimize(f) => cmd_optimize(&f.resolve()?),
        Command::ExportMapTemplate(f) => cmd_export_map(&f.resolve()?),
    }
}

fn prepare_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Appends a timestamped line to the sidecar log; artifacts stay free of timestamps.
fn log_event(dir: &Path, message: &str) {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
    if let Ok(mut f) = fs::OpenOptions::new().create(true).append(true).open(dir.join("run.log")) {
        let _ = writeln!(f, "{secs:.3} {message}");
    }
}

fn summary(label: &str, m: &CostBreakdown) -> String {
    format!(
        "{label}: x_tf={:.4} m z_bar={:.4} m |W|={:.3} J p_max={:.3} W dvx={:.4} m/s J_W={:.6e}",
        m.x_tf, m.z_bar, m.w_abs, m.p_max, m.dvx, m.j_w
    )
}

fn run_single(c: &RunConfig, foot: &str) -> Result<(SimTrajectory, CostBreakdown)> {
    let map = c.stress_map()?;
    let gait = c.gait_profile()?;
    let contour = c.contour(foot)?;
    let params = c.params(contour.width)?;
    let traj = simulate(&gait, &contour, &map, params).with_context(|| format!("simulating foot {foot}"))?;
    let m = metrics(&traj);
    Ok((traj, m))
}

fn cmd_simulate(c: &RunConfig) -> Result<()> {
    prepare_out(&c.out)?;
    log_event(&c.out, &format!("simulate start foot={} map={} zeta={}", c.foot, c.map, c.zeta));
    let (traj, m) = run_single(c, &c.foot)?;
    write(&c.out.join("trajectory.csv"), &traj.to_csv())?;
    write(&c.out.join("metrics.json"), &to_json(&m))?;
    log_event(&c.out, "simulate done");
    println!("{}", summary(&c.foot, &m));
    Ok(())
}

#[derive(Serialize)]
struct ComparisonRow {
    foot: String,
    contact_length: f64,
    x_tf: f64,
    z_bar: f64,
    w_left: f64,
    w_right: f64,
    w_abs: f64,
    p_max: f64,
    dvx: f64,
    j_w: f64,
}

fn cmd_compare_shapes(c: &RunConfig) -> Result<()> {
    if c.shapes.is_empty() {
        bail!("compare-shapes needs at least one shape (--shapes ellipse,rectangle,...)");
    }
    prepare_out(&c.out)?;
    log_event(&c.out, &format!("compare-shapes start shapes={}", c.shapes.join(",")));
    let results: Vec<Result<(SimTrajectory, CostBreakdown)>> = c.shapes.par_iter().map(|s| run_single(c, s)).collect();
    let mut rows = Vec::with_capacity(results.len());
    for (i, (shape, result)) in c.shapes.iter().zip(results).enumerate() {
        let (traj, m) = result?;
        let last = traj.samples.last().copied();
        let [w_left, w_right] = last.map(|s| s.work).unwrap_or([0.0; 2]);
        let stem: String = shape
            .chars()
            .map(|ch| if ch.is_ascii_alphanumeric() || ch == '_' || ch == '-' { ch } else { '_' })
            .collect();
        write(&c.out.join(format!("trajectory_{i}_{stem}.csv")), &traj.to_csv())?;
        println!("{}", summary(shape, &m));
        rows.push(ComparisonRow {
            foot: shape.clone(),
            contact_length: c.contact_length,
            x_tf: m.x_tf,
            z_bar: m.z_bar,
            w_left,
            w_right,
            w_abs: m.w_abs,
            p_max: m.p_max,
            dvx: m.dvx,
            j_w: m.j_w,
        });
    }
    let mut csv = String::from("foot,contact_length,x_tf,z_bar,w_left,w_right,w_abs,p_max,dvx,j_w\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.foot, r.contact_length, r.x_tf, r.z_bar, r.w_left, r.w_right, r.w_abs, r.p_max, r.dvx, r.j_w
        ));
    }
    write(&c.out.join("comparison.csv"), &csv)?;
    write(&c.out.join("comparison.json"), &to_json(&rows))?;
    log_event(&c.out, "compare-shapes done");
    Ok(())
}

fn cmd_optimize(c: &RunConfig) -> Result<()> {
    let domain = c.domain();
    domain.validate()?;
    let ga = c.ga();
    ga.validate()?;
    prepare_out(&c.out)?;
    log_event(&c.out, &format!("optimize start seed={} population={} generations={}", ga.seed, ga.population, ga.generations));
    let scenario = Scenario {
        gait: c.gait_profile()?,
        map: c.stress_map()?,
        params: c.params(c.foot_width.unwrap_or(rft_walker::contour::DEFAULT_FOOT_WIDTH))?,
        domain,
    };
    let result = optimize_with(&ga, &scenario, |g| {
        println!(
            "generation {:3}: best J_W = {:.6e} mean J_W = {:.6e} best k = [{}]",
            g.generation, g.best_j_w, g.mean_j_w, g.best_genome
        );
    })?;
    let mut report = OptimizationReport::new(ga, domain, &result)?;
    report.best_contour.width = scenario.params.foot_width;
    let mut body = report.to_json();
    body.push('\n');
    write(&c.out.join("optimization_report.json"), &body)?;
    write(&c.out.join("best_contour.json"), &report.best_contour.to_json())?;
    log_event(&c.out, &format!("optimize done evaluations={}", result.evaluations));
    println!("{}", summary(&format!("best k = [{}]", result.best), &result.best_cost));
    Ok(())
}

fn cmd_export_map(c: &RunConfig) -> Result<()> {
    let map = c.stress_map()?;
    prepare_out(&c.out)?;
    let path = c.out.join("stress_map.csv");
    write(&path, &map.to_csv())?;
    println!("wrote {}", path.display());
    Ok(())
}
