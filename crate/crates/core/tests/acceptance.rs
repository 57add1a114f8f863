//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rft_walker::contour::{make_canonical, DesignDomain, FootContour, ShapeKind, WorldPlate};
use rft_walker::gait::{forward_kinematics, inverse_kinematics, static_gait, synth_gait, LegGeometry, SynthGait};
use rft_walker::geom::Vec2;
use rft_walker::metrics::{metrics, CostBreakdown};
use rft_walker::optimizer::{enumerate_genomes, evaluate, evaluate_contour, optimize, GaConfig, OptimizationReport, Scenario};
use rft_walker::sim::{plate_forces, simulate, Simulator, WalkerParams, INITIAL_GAMMA};
use rft_walker::stress_map::StressMap;

const LEGS: LegGeometry = LegGeometry {
    thigh: 0.47,
    shank: 0.45,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn flat_foot(length: f64) -> FootContour {
    let h = length / 2.0;
    FootContour::new("flat", 0.08, Vec2::ZERO, vec![Vec2::new(-h, 0.0), Vec2::new(h, 0.0)]).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn rft_unit_laws() -> Outcome {
    let mut problems = Vec::new();

    // Frozen walking configuration with both feet partly buried.
    let gait = synth_gait(&SynthGait::default(), &LEGS).unwrap();
    let foot = make_canonical(ShapeKind::Ellipse, 0.26).unwrap();
    let params = WalkerParams::default();
    let soft = StressMap::generic();
    let hard = StressMap::generic().with_zeta(5.0).unwrap();
    let sim1 = Simulator::new(&gait, &foot, &foot, &soft, params).unwrap();
    let sim5 = Simulator::new(&gait, &foot, &foot, &hard, params).unwrap();
    let s0 = sim1.initial_state().unwrap();
    let mut n_cases = 0;
    for (k, t) in [0.0, 0.37, 0.61, 1.13, 1.79].into_iter().enumerate() {
        let com = Vec2::new(0.1 * k as f64, s0.com.z - 0.02 - 0.01 * k as f64);
        let vel = Vec2::new(0.8, -0.2 + 0.1 * k as f64);
        let r1 = sim1.contact(com, vel, Some(t), &mut s0.gamma_memory.clone()).unwrap();
        let r5 = sim5.contact(com, vel, Some(t), &mut s0.gamma_memory.clone()).unwrap();
        if r1.total == Vec2::ZERO {
            problems.push(format!("no contact at t={t}"));
        }
        if r5.total != r1.total * 5.0 || r5.force[0] != r1.force[0] * 5.0 || r5.force[1] != r1.force[1] * 5.0 {
            problems.push(format!("zeta scaling inexact at t={t}: {:?} vs 5x{:?}", r5.total, r1.total));
        }
        let up = Vec2::new(com.x, 5.0);
        let air = sim5.contact(up, vel, Some(t), &mut s0.gamma_memory.clone()).unwrap();
        if air.total != Vec2::ZERO || air.power != [0.0, 0.0] {
            problems.push(format!("force above surface at t={t}"));
        }
        n_cases += 1;
    }

    // Depth linearity, plate by plate, over many orientations and motions.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let beta = rng.gen_range(-1.6..1.6);
        let velocity = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let z = -rng.gen_range(1e-4..0.2);
        let plate = |z: f64| WorldPlate {
            start: Vec2::new(-0.001, z),
            end: Vec2::new(0.001, z),
            center: Vec2::new(0.0, z),
            beta,
            velocity,
        };
        let mut mem = vec![INITIAL_GAMMA; 3];
        let f = plate_forces(&[plate(z), plate(2.0 * z), plate(-z)], 0.0026, &hard, 0.08, &mut mem);
        if f[1] != f[0] * 2.0 {
            problems.push(format!("depth doubling inexact: {:?} vs {:?}", f[1], f[0]));
            break;
        }
        if f[2] != Vec2::ZERO {
            problems.push("plate above surface carries force".into());
            break;
        }
    }
    let pass = problems.is_empty();
    let detail = if pass {
        format!("{n_cases} frozen states: F(zeta=5) == 5 F(zeta=1) bitwise, zero force above z=0; 2000 plates: F(2|z|) == 2 F(|z|) bitwise")
    } else {
        problems.join("; ")
    };
    outcome(pass, detail)
}

fn one_plate_oracle() -> Outcome {
    let a = 2e5;
    let map = StressMap::test_map(a).unwrap();
    let (dc, w) = (0.0026, 0.08);
    let foot = flat_foot(dc);
    let gait = static_gait(Vec2::new(0.0, -0.85), Vec2::new(0.0, -0.6), &LEGS).unwrap();
    let params = WalkerParams {
        plates: 1,
        foot_width: w,
        t_final: 0.001,
        log_interval: 1e-4,
        ..Default::default()
    };
    let sim = Simulator::new(&gait, &foot, &foot, &map, params).unwrap();
    let mut state = sim.initial_state().unwrap();
    state.com = Vec2::new(0.0, 0.84);
    state.vel = Vec2::new(0.0, -0.1);

    // Hand computation for a level plate moving straight down.
    let depth = state.com.z + (-0.85);
    let area = dc * w;
    let gamma = (-0.1f64).atan2(0.0);
    let fx = -a * gamma.cos() * (-depth) * area;
    let fz = -a * gamma.sin() * (-depth) * area;
    let power = fx * state.vel.x + fz * state.vel.z;
    let acc = Vec2::new(fx / params.mass, fz / params.mass - params.gravity);
    let vel = state.vel + acc * params.dt;
    let com = state.com + state.vel * params.dt;
    let work = power * params.dt;

    let (next, report) = sim.step(&state).unwrap();
    let errs = [
        rel(report.total.z, 0.416),
        rel(report.total.z, fz),
        (report.total.x - fx).abs(),
        rel(next.vel.z, vel.z),
        (next.vel.x - vel.x).abs(),
        rel(next.com.z, com.z),
        rel(next.work[0], work),
        next.work[1].abs(),
    ];
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    let pass = worst <= 1e-12;
    outcome(
        pass,
        format!(
            "F = ({:.3e}, {:.15}) N vs (0, 0.416); step state worst relative error {worst:.2e} (tol 1e-12)",
            report.total.x, report.total.z
        ),
    )
}

fn quasi_static_equilibrium() -> Outcome {
    let a = 1e6;
    let map = StressMap::test_map(a).unwrap();
    let foot = make_canonical(ShapeKind::Ellipse, 0.26).unwrap();
    let gait = static_gait(Vec2::new(0.0, -0.85), Vec2::new(0.0, -0.85), &LEGS).unwrap();
    let params = WalkerParams {
        t_final: 0.0,
        settle_time: 0.5,
        ..Default::default()
    };
    let sim = Simulator::new(&gait, &foot, &foot, &map, params).unwrap();
    let traj = sim.run().unwrap();
    let tail: Vec<f64> = traj.settle.iter().filter(|s| s.t >= -0.1).map(|s| s.com.z).collect();
    let mean_z = tail.iter().sum::<f64>() / tail.len() as f64;
    let sinkage = traj.initial_com.z - mean_z;

    // Static balance: both level feet sink by s below their lowest point.
    let fp = sim.plates(0);
    let lowest = foot.vertices.iter().map(|v| v.z).fold(f64::INFINITY, f64::min);
    let heights: Vec<f64> = fp.plates.iter().map(|p| p.center.z - lowest).collect();
    let da = fp.arc_length * params.foot_width;
    let weight = params.mass * params.gravity;
    let residual = |s: f64| 2.0 * heights.iter().map(|h| a * (s - h).max(0.0) * da).sum::<f64>() - weight;
    let (mut lo, mut hi) = (0.0, 0.5);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let z_star = 0.5 * (lo + hi);
    let err = rel(sinkage, z_star);
    outcome(
        err <= 0.05,
        format!("settled sinkage {sinkage:.6} m vs static balance {z_star:.6} m, relative error {err:.2e} (tol 5%)"),
    )
}

fn euler_convergence() -> Outcome {
    let map = StressMap::generic();
    let foot = make_canonical(ShapeKind::Ellipse, 0.26).unwrap();
    let gait = synth_gait(&SynthGait::default(), &LEGS).unwrap();
    let run = |dt: f64| -> Result<(Vec2, Vec2), String> {
        let params = WalkerParams {
            dt,
            t_final: 0.5,
            settle_time: 0.0,
            ..Default::default()
        };
        let traj = simulate(&gait, &foot, &map, params).map_err(|e| e.to_string())?;
        let last = traj.samples[traj.samples.len() - 1];
        Ok((last.com, last.vel))
    };
    let results: Result<Vec<_>, String> = [1e-4, 5e-5, 2.5e-5].into_iter().map(run).collect();
    let r = match results {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    let d1 = (r[0].0 - r[1].0).norm();
    let d2 = (r[1].0 - r[2].0).norm();
    let ratio = d1 / d2;
    outcome(
        (1.5..=2.5).contains(&ratio),
        format!("0.5 s walk, terminal COM differences {d1:.3e} -> {d2:.3e} m for dt 1e-4 -> 5e-5 -> 2.5e-5, ratio {ratio:.3} (band [1.5, 2.5])"),
    )
}

fn energy_bookkeeping() -> Outcome {
    let map = StressMap::test_map(1e6).unwrap();
    let gait = synth_gait(&SynthGait::default(), &LEGS).unwrap();
    let mut problems = Vec::new();
    let mut worst = 0.0f64;
    for kind in [ShapeKind::Rectangle, ShapeKind::Circle, ShapeKind::Triangle] {
        let foot = make_canonical(kind, 0.26).unwrap();
        let params = WalkerParams {
            log_interval: 1e-4,
            ..Default::default()
        };
        let traj = simulate(&gait, &foot, &map, params).unwrap();
        let s = &traj.samples;
        let last = s[s.len() - 1];
        let integral: f64 = s[..s.len() - 1].iter().map(|x| x.total_power() * params.dt).sum();
        let err = rel(last.total_work(), integral);
        worst = worst.max(err);
        if err > 1e-6 {
            problems.push(format!("{kind}: W {} vs integral {integral}", last.total_work()));
        }
        for foot_index in 0..2 {
            if let Some(w) = s.windows(2).find(|w| w[1].work[foot_index] > w[0].work[foot_index]) {
                problems.push(format!(
                    "{kind}: foot {foot_index} work rises at t={} ({} -> {})",
                    w[1].t, w[0].work[foot_index], w[1].work[foot_index]
                ));
            }
        }
        if last.total_work() >= 0.0 {
            problems.push(format!("{kind}: no work done"));
        }
    }
    let pass = problems.is_empty();
    outcome(
        pass,
        if pass {
            format!("3 feet: W(tf) vs integral of logged power worst relative error {worst:.2e} (tol 1e-6); per-foot W non-increasing")
        } else {
            problems.join("; ")
        },
    )
}

fn material_ordering() -> Outcome {
    let gait = synth_gait(&SynthGait::default(), &LEGS).unwrap();
    let foot = make_canonical(ShapeKind::Rectangle, 0.26).unwrap();
    let mut rows = Vec::new();
    for zeta in [0.2, 1.0, 5.0] {
        let map = StressMap::generic().with_zeta(zeta).unwrap();
        let traj = simulate(&gait, &foot, &map, WalkerParams::default()).unwrap();
        let m = metrics(&traj);
        rows.push((zeta, m.x_tf, traj.initial_com.z - m.z_bar));
    }
    let x_up = rows.windows(2).all(|w| w[1].1 > w[0].1);
    let sink_down = rows.windows(2).all(|w| w[1].2 < w[0].2);
    let detail = rows
        .iter()
        .map(|(z, x, s)| format!("zeta {z}: x {x:.4} m, sinkage {s:.4} m"))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(x_up && sink_down, detail)
}

fn hard_scenario(domain: DesignDomain) -> Scenario {
    Scenario {
        gait: synth_gait(&SynthGait::default(), &LEGS).unwrap(),
        map: StressMap::generic().with_zeta(5.0).unwrap(),
        params: WalkerParams::default(),
        domain,
    }
}

fn optimizer_oracle() -> Outcome {
    let domain = DesignDomain {
        waypoints: 4,
        levels: 2,
        ..Default::default()
    };
    let scenario = hard_scenario(domain);
    let brute: Vec<(CostBreakdown, String)> = enumerate_genomes(&domain)
        .iter()
        .map(|g| (evaluate(g, &scenario), g.to_string()))
        .collect();
    let (best_cost, best_k) = brute
        .iter()
        .min_by(|a, b| a.0.j_w.total_cmp(&b.0.j_w))
        .cloned()
        .unwrap();
    let cfg = GaConfig {
        seed: 7,
        ..Default::default()
    };
    let result = optimize(&cfg, &scenario).unwrap();
    let pass = result.best_cost.j_w == best_cost.j_w && result.best.to_string() == best_k;
    outcome(
        pass,
        format!(
            "GA best k=[{}] J_W={:.6e}; brute force over {} genomes k=[{best_k}] J_W={:.6e}",
            result.best,
            result.best_cost.j_w,
            brute.len(),
            best_cost.j_w
        ),
    )
}

fn optimizer_beats_baselines() -> Outcome {
    let domain = DesignDomain::default();
    let scenario = hard_scenario(domain);
    let baselines: Vec<(ShapeKind, f64)> = ShapeKind::ALL
        .iter()
        .map(|&k| (k, evaluate_contour(&make_canonical(k, 0.26).unwrap(), &scenario).j_w))
        .collect();
    let (best_kind, best_base) = baselines
        .iter()
        .cloned()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let cfg = GaConfig {
        seed: 1,
        population: 40,
        generations: 60,
        ..Default::default()
    };
    let result = optimize(&cfg, &scenario).unwrap();
    let k = &result.best.k;
    let n = k.len();
    let mid = k[n / 3..n - n / 3].iter().map(|&v| v as f64).sum::<f64>() / (n - 2 * (n / 3)) as f64;
    let ends = (k[0] + k[n - 1]) as f64 / 2.0;
    let shape = if mid < ends {
        "mid-span waypoints shallower than heel/toe (concave)"
    } else {
        "mid-span waypoints not shallower than heel/toe"
    };
    let baseline_text = baselines
        .iter()
        .map(|(k, j)| format!("{k} {j:.4e}"))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(
        result.best_cost.j_w <= best_base,
        format!(
            "GA k=[{}] J_W={:.4e} (x {:.4}, z_bar {:.4}, dvx {:.4}) vs best baseline {best_kind} {best_base:.4e} [{baseline_text}]; observation: {shape}",
            result.best, result.best_cost.j_w, result.best_cost.x_tf, result.best_cost.z_bar, result.best_cost.dvx
        ),
    )
}

fn determinism() -> Outcome {
    let gait = synth_gait(&SynthGait::default(), &LEGS).unwrap();
    let foot = make_canonical(ShapeKind::Triangle, 0.26).unwrap();
    let map = StressMap::generic();
    let a = simulate(&gait, &foot, &map, WalkerParams::default()).unwrap().to_csv();
    let b = simulate(&gait, &foot, &map, WalkerParams::default()).unwrap().to_csv();

    let domain = DesignDomain {
        waypoints: 5,
        levels: 3,
        ..Default::default()
    };
    let scenario = Scenario {
        params: WalkerParams {
            t_final: 0.6,
            ..Default::default()
        },
        ..hard_scenario(domain)
    };
    let report = |workers: usize, parallel: bool| {
        let cfg = GaConfig {
            population: 10,
            generations: 4,
            seed: 3,
            parallel,
            ..Default::default()
        };
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap();
        pool.install(|| {
            let r = optimize(&cfg, &scenario).unwrap();
            OptimizationReport::new(cfg, domain, &r).unwrap().to_json().replace("\"parallel\": false", "\"parallel\": true")
        })
    };
    let reports = [report(1, false), report(1, true), report(4, true), report(4, true)];
    let same_reports = reports.windows(2).all(|w| w[0] == w[1]);
    outcome(
        a == b && same_reports,
        format!(
            "trajectory CSV {} bytes identical: {}; optimization reports (serial, 1 and 4 workers) identical: {same_reports}",
            a.len(),
            a == b
        ),
    )
}

fn ik_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (min, max) = (LEGS.min_reach(), LEGS.max_reach());
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let d = rng.gen_range(min..=max);
        let phi = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let target = Vec2::new(d * phi.cos(), d * phi.sin());
        let (t1, t2) = match inverse_kinematics(target, &LEGS) {
            Ok(a) => a,
            Err(e) => return outcome(false, format!("IK failed at {target:?}: {e}")),
        };
        worst = worst.max((forward_kinematics(t1, t2, &LEGS) - target).norm());
    }
    outcome(worst <= 1e-9, format!("10000 targets, worst position error {worst:.2e} m (tol 1e-9)"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("rft_unit_laws", rft_unit_laws),
        ("one_plate_oracle", one_plate_oracle),
        ("quasi_static_equilibrium", quasi_static_equilibrium),
        ("euler_convergence", euler_convergence),
        ("energy_bookkeeping", energy_bookkeeping),
        ("material_ordering", material_ordering),
        ("optimizer_oracle", optimizer_oracle),
        ("optimizer_beats_baselines", optimizer_beats_baselines),
        ("determinism", determinism),
        ("ik_round_trip", ik_round_trip),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = check();
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {:02} {name} ({:.1} s): {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            result.detail
        );
        if !result.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
