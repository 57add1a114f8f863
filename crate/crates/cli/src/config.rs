//! Run configuration: a flat JSON document whose keys mirror the CLI flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rft_walker::contour::{make_canonical, DEFAULT_FOOT_WIDTH, DesignDomain, FootContour, ShapeKind};
use rft_walker::gait::{synth_gait, GaitProfile, LegGeometry, SynthGait};
use rft_walker::optimizer::{GaConfig, Genome};
use rft_walker::sim::WalkerParams;
use rft_walker::stress_map::StressMap;
use serde::{Deserialize, Serialize};

/// Every key is optional in the file; missing keys take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `generic`, `test:<magnitude>` or a stress-map CSV path.
    pub map: String,
    pub zeta: f64,
    pub no_tension: bool,
    /// `synth` or a gait CSV path.
    pub gait: String,
    pub step_length: f64,
    pub step_period: f64,
    pub lift_height: f64,
    pub n_steps: usize,
    pub hip_height: f64,
    /// Canonical shape name, contour JSON path, or `genome:k1,k2,...`.
    pub foot: String,
    /// Contact length of canonical shapes, m.
    pub contact_length: f64,
    /// Out-of-plane foot width, m. Defaults to the contour file's width, else 0.08.
    pub foot_width: Option<f64>,
    pub mass: f64,
    pub gravity: f64,
    pub thigh: f64,
    pub shank: f64,
    pub dt: f64,
    /// Walking duration, s.
    pub tf: f64,
    pub settle_time: f64,
    pub log_interval: f64,
    pub plates: usize,
    /// Shapes for `compare-shapes`.
    pub shapes: Vec<String>,
    pub half_length: f64,
    pub half_height: f64,
    pub levels: u32,
    pub waypoints: usize,
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: Option<f64>,
    pub elites: usize,
    pub parallel: bool,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let params = WalkerParams::default();
        let synth = SynthGait::default();
        let domain = DesignDomain::default();
        let ga = GaConfig::default();
        RunConfig {
            map: "generic".into(),
            zeta: 1.0,
            no_tension: false,
            gait: "synth".into(),
            step_length: synth.step_length,
            step_period: synth.step_period,
            lift_height: synth.lift_height,
            n_steps: synth.n_steps,
            hip_height: synth.hip_height,
            foot: "rectangle".into(),
            contact_length: 2.0 * domain.half_length,
            foot_width: None,
            mass: params.mass,
            gravity: params.gravity,
            thigh: params.legs.thigh,
            shank: params.legs.shank,
            dt: params.dt,
            tf: params.t_final,
            settle_time: params.settle_time,
            log_interval: params.log_interval,
            plates: params.plates,
            shapes: ShapeKind::ALL.iter().map(|k| k.name().to_string()).collect(),
            half_length: domain.half_length,
            half_height: domain.half_height,
            levels: domain.levels,
            waypoints: domain.waypoints,
            population: ga.population,
            generations: ga.generations,
            crossover_rate: ga.crossover_rate,
            mutation_rate: ga.mutation_rate,
            elites: ga.elites,
            parallel: ga.parallel,
            seed: ga.seed,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn legs(&self) -> LegGeometry {
        LegGeometry {
            thigh: self.thigh,
            shank: self.shank,
        }
    }

    pub fn domain(&self) -> DesignDomain {
        DesignDomain {
            half_length: self.half_length,
            half_height: self.half_height,
            levels: self.levels,
            waypoints: self.waypoints,
        }
    }

    pub fn ga(&self) -> GaConfig {
        GaConfig {
            population: self.population,
            generations: self.generations,
            crossover_rate: self.crossover_rate,
            mutation_rate: self.mutation_rate,
            elites: self.elites,
            seed: self.seed,
            parallel: self.parallel,
        }
    }

    pub fn params(&self, foot_width: f64) -> Result<WalkerParams> {
        let params = WalkerParams {
            mass: self.mass,
            legs: self.legs(),
            gravity: self.gravity,
            dt: self.dt,
            t_final: self.tf,
            foot_width,
            plates: self.plates,
            settle_time: self.settle_time,
            log_interval: self.log_interval,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn stress_map(&self) -> Result<StressMap> {
        let map = if self.map == "generic" {
            StressMap::generic()
        } else if let Some(a) = self.map.strip_prefix("test:") {
            let a: f64 = a.parse().with_context(|| format!("bad test map magnitude in {:?}", self.map))?;
            StressMap::test_map(a)?
        } else {
            let text = fs::read_to_string(&self.map).with_context(|| format!("reading stress map {}", self.map))?;
            StressMap::parse(&text).with_context(|| format!("parsing stress map {}", self.map))?
        };
        Ok(map.with_zeta(self.zeta)?.with_no_tension(self.no_tension))
    }

    pub fn gait_profile(&self) -> Result<GaitProfile> {
        let legs = self.legs();
        if self.gait == "synth" {
            let p = SynthGait {
                step_length: self.step_length,
                step_period: self.step_period,
                lift_height: self.lift_height,
                n_steps: self.n_steps,
                hip_height: self.hip_height,
            };
            return Ok(synth_gait(&p, &legs)?);
        }
        let text = fs::read_to_string(&self.gait).with_context(|| format!("reading gait {}", self.gait))?;
        GaitProfile::parse(&text, &legs).with_context(|| format!("parsing gait {}", self.gait))
    }

    /// Resolves a foot selector into a contour whose width matches the run's foot width.
    pub fn contour(&self, selector: &str) -> Result<FootContour> {
        let mut file_width = None;
        let contour = if let Some(k) = selector.strip_prefix("genome:") {
            let genome = Genome::parse(k).with_context(|| format!("bad genome {selector:?}"))?;
            genome.contour(&self.domain())?
        } else if let Ok(kind) = selector.parse::<ShapeKind>() {
            make_canonical(kind, self.contact_length)?
        } else if Path::new(selector).exists() {
            let text = fs::read_to_string(selector).with_context(|| format!("reading contour {selector}"))?;
            let c = FootContour::from_json(&text).with_context(|| format!("parsing contour {selector}"))?;
            file_width = Some(c.width);
            c
        } else {
            bail!("unknown foot {selector:?}: not a shape name, genome or existing contour file");
        };
        let width = self.foot_width.or(file_width).unwrap_or(DEFAULT_FOOT_WIDTH);
        Ok(contour.with_width(width)?)
    }
}
