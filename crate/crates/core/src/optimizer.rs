//! Genetic search over integer waypoint genomes.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contour::{from_waypoints, ContourError, DesignDomain, FootContour};
use crate::gait::GaitProfile;
use crate::metrics::{metrics, CostBreakdown};
use crate::sim::{simulate, WalkerParams};
use crate::stress_map::StressMap;

const TOURNAMENT: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error("invalid GA configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Contour(#[from] ContourError),
}

/// Waypoint depth indices, each in `1..=levels`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Genome {
    pub k: Vec<u32>,
}

impl Genome {
    pub fn new(k: Vec<u32>) -> Self {
        Genome { k }
    }

    /// All waypoints at the deepest level.
    pub fn deepest(domain: &DesignDomain) -> Self {
        Genome::new(vec![domain.levels; domain.waypoints])
    }

    pub fn random<R: Rng>(domain: &DesignDomain, rng: &mut R) -> Self {
        Genome::new((0..domain.waypoints).map(|_| rng.gen_range(1..=domain.levels)).collect())
    }

    pub fn in_bounds(&self, domain: &DesignDomain) -> bool {
        self.k.len() == domain.waypoints && self.k.iter().all(|&k| k >= 1 && k <= domain.levels)
    }

    pub fn contour(&self, domain: &DesignDomain) -> Result<FootContour, ContourError> {
        from_waypoints(&self.k, domain)
    }

    /// Parses `"3,5,10"`.
    pub fn parse(text: &str) -> Option<Self> {
        text.split(',')
            .map(|s| s.trim().parse::<u32>().ok())
            .collect::<Option<Vec<_>>>()
            .filter(|k| !k.is_empty())
            .map(Genome::new)
    }
}

impl std::fmt::Display for Genome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.k.iter().map(|k| k.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Everything a fitness evaluation reads. Shared read-only across workers.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub gait: GaitProfile,
    pub map: StressMap,
    pub params: WalkerParams,
    pub domain: DesignDomain,
}

/// Cost of one genome; failures map to the worst fitness.
pub fn evaluate(genome: &Genome, scenario: &Scenario) -> CostBreakdown {
    if !genome.in_bounds(&scenario.domain) {
        return CostBreakdown::diverged();
    }
    match genome.contour(&scenario.domain) {
        Ok(contour) => evaluate_contour(&contour, scenario),
        Err(_) => CostBreakdown::diverged(),
    }
}

/// Cost of walking on `contour` under the scenario.
pub fn evaluate_contour(contour: &FootContour, scenario: &Scenario) -> CostBreakdown {
    match simulate(&scenario.gait, contour, &scenario.map, scenario.params) {
        Ok(traj) => metrics(&traj),
        Err(_) => CostBreakdown::diverged(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub population: usize,
    /// Generations including the initial population.
    pub generations: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability; `None` means `1 / n`.
    pub mutation_rate: Option<f64>,
    pub elites: usize,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 40,
            generations: 60,
            crossover_rate: 0.9,
            mutation_rate: None,
            elites: 2,
            seed: 1,
            parallel: true,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), OptimizerError> {
        let bad = |m: &str| Err(OptimizerError::InvalidConfig(m.to_string()));
        let rate = |r: f64| (0.0..=1.0).contains(&r);
        if self.population < 2 {
            return bad("population must be at least 2");
        }
        if self.generations < 1 {
            return bad("generations must be at least 1");
        }
        if !rate(self.crossover_rate) {
            return bad("crossover_rate must lie in [0, 1]");
        }
        if let Some(m) = self.mutation_rate {
            if !rate(m) {
                return bad("mutation_rate must lie in [0, 1]");
            }
        }
        if self.elites >= self.population {
            return bad("elites must be fewer than the population");
        }
        Ok(())
    }
}

/// Summary of one generation after evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    /// Incumbent best cost so far.
    pub best_j_w: f64,
    /// Mean cost over the finite members of this generation.
    pub mean_j_w: f64,
    pub best_genome: Genome,
    /// Simulations run so far (cache misses).
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best: Genome,
    pub best_cost: CostBreakdown,
    pub history: Vec<GenerationStats>,
    pub evaluations: usize,
}

/// Report written after a search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub config: GaConfig,
    pub domain: DesignDomain,
    pub history: Vec<GenerationStats>,
    pub best_genome: Genome,
    pub best_contour: FootContour,
    pub best_cost: CostBreakdown,
    pub evaluations: usize,
}

impl OptimizationReport {
    pub fn new(config: GaConfig, domain: DesignDomain, result: &OptimizationResult) -> Result<Self, OptimizerError> {
        Ok(OptimizationReport {
            config,
            domain,
            history: result.history.clone(),
            best_genome: result.best.clone(),
            best_contour: result.best.contour(&domain)?,
            best_cost: result.best_cost,
            evaluations: result.evaluations,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn fitness(c: &CostBreakdown) -> f64 {
    if c.j_w.is_nan() {
        f64::INFINITY
    } else {
        c.j_w
    }
}

/// Index of the fittest entry; ties go to the lowest index.
fn better(costs: &[f64], a: usize, b: usize) -> usize {
    match costs[a].total_cmp(&costs[b]) {
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Equal => a.min(b),
    }
}

fn tournament<R: Rng>(costs: &[f64], rng: &mut R) -> usize {
    let mut best = rng.gen_range(0..costs.len());
    for _ in 1..TOURNAMENT {
        best = better(costs, best, rng.gen_range(0..costs.len()));
    }
    best
}

/// Evaluates every genome, reusing cached costs. Results follow input order.
fn evaluate_all(
    population: &[Genome],
    scenario: &Scenario,
    parallel: bool,
    cache: &mut HashMap<Genome, CostBreakdown>,
) -> Vec<CostBreakdown> {
    let mut pending: Vec<&Genome> = Vec::new();
    for g in population {
        if !cache.contains_key(g) && !pending.contains(&g) {
            pending.push(g);
        }
    }
    let fresh: Vec<CostBreakdown> = if parallel {
        pending.par_iter().map(|g| evaluate(g, scenario)).collect()
    } else {
        pending.iter().map(|g| evaluate(g, scenario)).collect()
    };
    for (g, c) in pending.into_iter().zip(fresh) {
        cache.insert(g.clone(), c);
    }
    population.iter().map(|g| cache[g]).collect()
}

/// Next generation: the `elites` best genomes unchanged, then tournament
/// winners combined by uniform crossover and per-gene resampling.
fn breed<R: Rng>(
    population: &[Genome],
    fit: &[f64],
    order: &[usize],
    cfg: &GaConfig,
    domain: &DesignDomain,
    mutation: f64,
    rng: &mut R,
) -> Vec<Genome> {
    let mut next: Vec<Genome> = order.iter().take(cfg.elites).map(|&i| population[i].clone()).collect();
    while next.len() < cfg.population {
        let a = &population[tournament(fit, rng)];
        let b = &population[tournament(fit, rng)];
        let mut child = if rng.gen_bool(cfg.crossover_rate) {
            Genome::new(
                a.k.iter()
                    .zip(&b.k)
                    .map(|(&x, &y)| if rng.gen_bool(0.5) { x } else { y })
                    .collect(),
            )
        } else {
            a.clone()
        };
        for gene in &mut child.k {
            if rng.gen_bool(mutation) {
                *gene = rng.gen_range(1..=domain.levels);
            }
        }
        next.push(child);
    }
    next
}

/// Runs the search; `on_generation` sees each generation's summary as it completes.
pub fn optimize_with<F: FnMut(&GenerationStats)>(
    cfg: &GaConfig,
    scenario: &Scenario,
    mut on_generation: F,
) -> Result<OptimizationResult, OptimizerError> {
    cfg.validate()?;
    scenario.domain.validate()?;
    let domain = &scenario.domain;
    let n = domain.waypoints;
    let mutation = cfg.mutation_rate.unwrap_or(1.0 / n as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cache: HashMap<Genome, CostBreakdown> = HashMap::new();

    let mut population: Vec<Genome> = (0..cfg.population).map(|_| Genome::random(domain, &mut rng)).collect();
    let mut best: Option<(Genome, CostBreakdown)> = None;
    let mut history = Vec::with_capacity(cfg.generations);

    for generation in 0..cfg.generations {
        let costs = evaluate_all(&population, scenario, cfg.parallel, &mut cache);
        let fit: Vec<f64> = costs.iter().map(fitness).collect();
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| fit[a].total_cmp(&fit[b]).then(a.cmp(&b)));

        let leader = order[0];
        let improved = match &best {
            None => true,
            Some((_, c)) => fit[leader] < fitness(c),
        };
        if improved {
            best = Some((population[leader].clone(), costs[leader]));
        }
        let finite: Vec<f64> = fit.iter().copied().filter(|c| c.is_finite()).collect();
        let mean = if finite.is_empty() {
            f64::INFINITY
        } else {
            finite.iter().sum::<f64>() / finite.len() as f64
        };
        let (incumbent, incumbent_cost) = best.as_ref().expect("set above");
        let stats = GenerationStats {
            generation,
            best_j_w: fitness(incumbent_cost),
            mean_j_w: mean,
            best_genome: incumbent.clone(),
            evaluations: cache.len(),
        };
        on_generation(&stats);
        history.push(stats);

        if generation + 1 == cfg.generations {
            break;
        }
        population = breed(&population, &fit, &order, cfg, domain, mutation, &mut rng);
    }

    let (best, best_cost) = best.expect("at least one generation");
    Ok(OptimizationResult {
        best,
        best_cost,
        history,
        evaluations: cache.len(),
    })
}

pub fn optimize(cfg: &GaConfig, scenario: &Scenario) -> Result<OptimizationResult, OptimizerError> {
    optimize_with(cfg, scenario, |_| {})
}

/// Every genome of the domain, in lexicographic order. Only sensible for tiny domains.
pub fn enumerate_genomes(domain: &DesignDomain) -> Vec<Genome> {
    let mut out = vec![Genome::new(Vec::new())];
    for _ in 0..domain.waypoints {
        out = out
            .into_iter()
            .flat_map(|g| {
                (1..=domain.levels).map(move |k| {
                    let mut next = g.k.clone();
                    next.push(k);
                    Genome::new(next)
                })
            })
            .collect();
    }
    out
}
