//! Resistive-force walking simulation of a single lumped mass on two feet.
//!
//! The hip carries the whole body mass `M`. Each ankle follows the gait
//! profile relative to the hip, each foot is rigidly attached to its shank,
//! and every submerged plate of both feet pushes on the body with a force
//! proportional to its depth. The center of mass is integrated with explicit
//! Euler: velocity from the current acceleration, position from the current
//! velocity.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contour::{discretize, AnklePose, AnkleVelocity, ContourError, FootContour, FootPlates, FootTransform, WorldPlate};
use crate::gait::{leg_state, AnkleSample, GaitError, GaitProfile, LegGeometry, LEFT, RIGHT};
use crate::geom::Vec2;
use crate::stress_map::StressMap;

/// Plate speed below which the motion direction is taken from the previous step.
pub const SLOW_SPEED: f64 = 1e-6;

/// Largest accepted time step.
pub const MAX_DT: f64 = 1e-3;

/// Motion direction assumed for a plate that has never moved (straight down).
pub const INITIAL_GAMMA: f64 = -FRAC_PI_2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid walker parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Gait(#[from] GaitError),
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error("simulation diverged at t = {t:.6} s (com = ({x}, {z}))")]
    Diverged { t: f64, x: f64, z: f64 },
    #[error("gait covers {available:.6} s but the run needs {required:.6} s")]
    GaitTooShort { required: f64, available: f64 },
    #[error("step from t = {t} would pass the final time {t_final}")]
    PastFinalTime { t: f64, t_final: f64 },
}

/// Walker and integrator parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkerParams {
    /// Body mass, kg.
    pub mass: f64,
    pub legs: LegGeometry,
    pub gravity: f64,
    /// Integration step, s.
    pub dt: f64,
    /// Duration of the walking phase, s.
    pub t_final: f64,
    /// Out-of-plane foot width, m.
    pub foot_width: f64,
    /// Plates per foot.
    pub plates: usize,
    /// Duration of the frozen-gait settle phase before walking, s.
    pub settle_time: f64,
    /// Spacing of logged samples, s; a multiple of `dt`.
    pub log_interval: f64,
}

impl Default for WalkerParams {
    fn default() -> Self {
        WalkerParams {
            mass: 60.0,
            legs: LegGeometry::default(),
            gravity: 9.81,
            dt: 1e-4,
            t_final: 1.8,
            foot_width: 0.08,
            plates: 100,
            settle_time: 0.3,
            log_interval: 1e-3,
        }
    }
}

impl WalkerParams {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::InvalidParams(m.to_string()));
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.mass) {
            return bad("mass must be positive");
        }
        if !(self.gravity.is_finite() && self.gravity >= 0.0) {
            return bad("gravity must be non-negative");
        }
        if !positive(self.dt) || self.dt > MAX_DT {
            return bad("dt must lie in (0, 1e-3] s");
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return bad("t_final must be non-negative");
        }
        if !(self.settle_time.is_finite() && self.settle_time >= 0.0) {
            return bad("settle_time must be non-negative");
        }
        if !positive(self.foot_width) {
            return bad("foot_width must be positive");
        }
        if self.plates == 0 {
            return bad("plate count must be at least 1");
        }
        self.legs.validate()?;
        let every = self.log_every()?;
        if self.steps(self.t_final) % every != 0 {
            return bad("t_final must be a multiple of log_interval");
        }
        Ok(())
    }

    fn steps(&self, duration: f64) -> usize {
        (duration / self.dt).round() as usize
    }

    /// Integration steps between logged samples.
    pub fn log_every(&self) -> Result<usize, SimError> {
        let n = (self.log_interval / self.dt).round();
        if !(n >= 1.0) || (n * self.dt - self.log_interval).abs() > 1e-9 * self.log_interval {
            return Err(SimError::InvalidParams(
                "log_interval must be a positive multiple of dt".to_string(),
            ));
        }
        Ok(n as usize)
    }
}

/// Integrator state.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub com: Vec2,
    pub vel: Vec2,
    /// Time since the start of the walking phase, s.
    pub t: f64,
    /// Cumulative work of the left and right foot forces, J.
    pub work: [f64; 2],
    /// Last well-defined motion direction of every plate, per foot.
    pub gamma_memory: [Vec<f64>; 2],
}

/// Contact forces and power at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ContactReport {
    /// Per-foot resultant force, N.
    pub force: [Vec2; 2],
    /// Resultant of both feet, N.
    pub total: Vec2,
    /// Per-foot power of the contact forces, W.
    pub power: [f64; 2],
}

/// Force on every plate of one foot from the local stresses.
///
/// Plates whose center is at or above the surface carry no force. The motion
/// direction of slower plates falls back to `gamma_memory`, which is updated
/// for every plate that moves fast enough.
pub fn plate_forces(
    plates: &[WorldPlate],
    arc_length: f64,
    map: &StressMap,
    foot_width: f64,
    gamma_memory: &mut [f64],
) -> Vec<Vec2> {
    let area = arc_length * foot_width;
    plates
        .iter()
        .zip(gamma_memory.iter_mut())
        .map(|(p, memory)| raw_plate_force(p.center.z, p.beta, p.velocity, area, map, memory) * map.zeta())
        .collect()
}

/// Componentwise sum of both feet's plate forces, left first, in plate order.
pub fn total_grf(left: &[Vec2], right: &[Vec2]) -> Vec2 {
    left.iter().chain(right).fold(Vec2::ZERO, |acc, f| acc + *f)
}

/// Unscaled (`zeta = 1`) plate force.
#[inline]
fn raw_plate_force(z: f64, beta: f64, velocity: Vec2, area: f64, map: &StressMap, memory: &mut f64) -> Vec2 {
    if !(z < 0.0) {
        return Vec2::ZERO;
    }
    let gamma = if velocity.norm_sq() < SLOW_SPEED * SLOW_SPEED {
        *memory
    } else {
        let g = velocity.z.atan2(velocity.x);
        *memory = g;
        g
    };
    let (ax, az) = map.query_unscaled(beta, gamma);
    let load = -z * area;
    Vec2::new(ax * load, az * load)
}

/// One logged instant of the walking phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub com: Vec2,
    pub vel: Vec2,
    pub force: [Vec2; 2],
    pub power: [f64; 2],
    pub work: [f64; 2],
}

impl TrajectorySample {
    pub fn total_power(&self) -> f64 {
        self.power[LEFT] + self.power[RIGHT]
    }

    pub fn total_work(&self) -> f64 {
        self.work[LEFT] + self.work[RIGHT]
    }
}

/// Logged center-of-mass position during settling (`t < 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettleSample {
    pub t: f64,
    pub com: Vec2,
}

/// Result of a run: uniformly spaced samples of the walking phase starting at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimTrajectory {
    pub samples: Vec<TrajectorySample>,
    /// Stance switches within the walking phase, s.
    pub step_events: Vec<f64>,
    pub settle: Vec<SettleSample>,
    /// Center of mass before settling.
    pub initial_com: Vec2,
    pub log_interval: f64,
}

pub const TRAJECTORY_HEADER: &str = "t,x_com,z_com,vx,vz,fx_l,fz_l,fx_r,fz_r,p_l,p_r,w_l,w_r";

impl SimTrajectory {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 160);
        out.push_str(TRAJECTORY_HEADER);
        out.push('\n');
        for s in &self.samples {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                s.t,
                s.com.x,
                s.com.z,
                s.vel.x,
                s.vel.z,
                s.force[LEFT].x,
                s.force[LEFT].z,
                s.force[RIGHT].x,
                s.force[RIGHT].z,
                s.power[LEFT],
                s.power[RIGHT],
                s.work[LEFT],
                s.work[RIGHT]
            );
        }
        out
    }
}

/// Simulation engine for one walker configuration.
///
/// Holds only immutable data; many simulators may share maps and gaits across threads.
#[derive(Debug, Clone)]
pub struct Simulator<'a> {
    gait: &'a GaitProfile,
    map: &'a StressMap,
    params: WalkerParams,
    feet: [FootPlates; 2],
    /// Contour vertices relative to the ankle, per foot.
    outlines: [Vec<Vec2>; 2],
    /// Ankle-frame angle at which the foot frame is level.
    mount_angle: f64,
}

impl<'a> Simulator<'a> {
    pub fn new(
        gait: &'a GaitProfile,
        left: &FootContour,
        right: &FootContour,
        map: &'a StressMap,
        params: WalkerParams,
    ) -> Result<Self, SimError> {
        params.validate()?;
        let needed = gait.start() + params.t_final;
        if !gait.loopable() && needed > gait.end() + 1e-9 {
            return Err(SimError::GaitTooShort {
                required: params.t_final,
                available: gait.duration(),
            });
        }
        let feet = [discretize(left, params.plates)?, discretize(right, params.plates)?];
        let outline = |c: &FootContour| c.vertices.iter().map(|v| *v - c.ankle_offset).collect::<Vec<_>>();
        let neutral = leg_state(Vec2::new(0.0, gait.stance_depth()), Vec2::ZERO, &params.legs)?;
        Ok(Simulator {
            gait,
            map,
            params,
            feet,
            outlines: [outline(left), outline(right)],
            mount_angle: neutral.theta_a,
        })
    }

    pub fn params(&self) -> &WalkerParams {
        &self.params
    }

    pub fn plates(&self, foot: usize) -> &FootPlates {
        &self.feet[foot]
    }

    /// Ankle-frame angle at which a foot is level: the shank angle with the
    /// ankle straight below the hip at the gait's stance depth.
    pub fn mount_angle(&self) -> f64 {
        self.mount_angle
    }

    fn ankles(&self, t: Option<f64>) -> Result<[AnkleSample; 2], SimError> {
        match t {
            Some(t) => Ok(self.gait.sample(self.gait.start() + t)?),
            None => {
                let mut s = self.gait.sample(self.gait.start())?;
                for a in &mut s {
                    a.velocity = Vec2::ZERO;
                }
                Ok(s)
            }
        }
    }

    /// Rigid transform of each foot for the body state and ankle samples.
    fn transforms(&self, com: Vec2, vel: Vec2, ankles: &[AnkleSample; 2]) -> Result<[FootTransform; 2], SimError> {
        let mut out = [FootTransform::new(AnklePose::identity(), AnkleVelocity::default()); 2];
        for (foot, a) in ankles.iter().enumerate() {
            let leg = leg_state(a.position, a.velocity, &self.params.legs)?;
            out[foot] = FootTransform::new(
                AnklePose {
                    position: com + a.position,
                    rotation: leg.theta_a - self.mount_angle,
                },
                AnkleVelocity {
                    linear: vel + a.velocity,
                    angular: leg.omega_a,
                },
            );
        }
        Ok(out)
    }

    /// World plates of both feet at walking time `t` (`None` for the frozen initial pose).
    pub fn world_plates(&self, com: Vec2, vel: Vec2, t: Option<f64>) -> Result<[Vec<WorldPlate>; 2], SimError> {
        let ankles = self.ankles(t)?;
        let tf = self.transforms(com, vel, &ankles)?;
        Ok([0, 1].map(|f| self.feet[f].plates.iter().map(|p| tf[f].plate(p)).collect()))
    }

    /// Contact forces and power for the body at `com`, `vel` and walking time `t`.
    pub fn contact(
        &self,
        com: Vec2,
        vel: Vec2,
        t: Option<f64>,
        gamma_memory: &mut [Vec<f64>; 2],
    ) -> Result<ContactReport, SimError> {
        let ankles = self.ankles(t)?;
        let tf = self.transforms(com, vel, &ankles)?;
        let zeta = self.map.zeta();
        let area = self.params.foot_width;
        let mut raw = [Vec2::ZERO; 2];
        let mut raw_power = [0.0; 2];
        for foot in [LEFT, RIGHT] {
            let plates = &self.feet[foot];
            let area = plates.arc_length * area;
            let memory = &mut gamma_memory[foot];
            for (plate, slot) in plates.plates.iter().zip(memory.iter_mut()) {
                let center = tf[foot].point(plate.center);
                if !(center.z < 0.0) {
                    continue;
                }
                let wp = tf[foot].plate(plate);
                let f = raw_plate_force(wp.center.z, wp.beta, wp.velocity, area, self.map, slot);
                raw[foot] += f;
                raw_power[foot] += f.dot(wp.velocity);
            }
        }
        Ok(ContactReport {
            force: [raw[LEFT] * zeta, raw[RIGHT] * zeta],
            total: (raw[LEFT] + raw[RIGHT]) * zeta,
            power: [raw_power[LEFT] * zeta, raw_power[RIGHT] * zeta],
        })
    }

    /// State with the stance foot's lowest contour point on the surface, at rest.
    pub fn initial_state(&self) -> Result<SimState, SimError> {
        let ankles = self.ankles(None)?;
        let tf = self.transforms(Vec2::ZERO, Vec2::ZERO, &ankles)?;
        let lowest = [LEFT, RIGHT]
            .iter()
            .flat_map(|&f| self.outlines[f].iter().map(move |v| tf[f].point(*v).z))
            .fold(f64::INFINITY, f64::min);
        Ok(SimState {
            com: Vec2::new(0.0, -lowest),
            vel: Vec2::ZERO,
            t: 0.0,
            work: [0.0; 2],
            gamma_memory: [
                vec![INITIAL_GAMMA; self.feet[LEFT].len()],
                vec![INITIAL_GAMMA; self.feet[RIGHT].len()],
            ],
        })
    }

    fn acceleration(&self, force: Vec2) -> Vec2 {
        Vec2::new(force.x / self.params.mass, force.z / self.params.mass - self.params.gravity)
    }

    fn check(&self, state: &SimState) -> Result<(), SimError> {
        if state.com.is_finite() && state.vel.is_finite() && state.work.iter().all(|w| w.is_finite()) {
            Ok(())
        } else {
            Err(SimError::Diverged {
                t: state.t,
                x: state.com.x,
                z: state.com.z,
            })
        }
    }

    /// Advances the walking phase by one step. Returns the new state and the
    /// contact report evaluated at the old one.
    pub fn step(&self, state: &SimState) -> Result<(SimState, ContactReport), SimError> {
        let dt = self.params.dt;
        if state.t + dt > self.params.t_final + 1e-6 * dt {
            return Err(SimError::PastFinalTime {
                t: state.t,
                t_final: self.params.t_final,
            });
        }
        let mut memory = state.gamma_memory.clone();
        let report = self.contact(state.com, state.vel, Some(state.t), &mut memory)?;
        let next = self.advance(state, &report, memory, dt, true);
        self.check(&next)?;
        Ok((next, report))
    }

    fn advance(&self, state: &SimState, report: &ContactReport, memory: [Vec<f64>; 2], dt: f64, accrue: bool) -> SimState {
        let acc = self.acceleration(report.total);
        let mut work = state.work;
        if accrue {
            work[LEFT] += report.power[LEFT] * dt;
            work[RIGHT] += report.power[RIGHT] * dt;
        }
        SimState {
            com: state.com + state.vel * dt,
            vel: state.vel + acc * dt,
            t: state.t + dt,
            work,
            gamma_memory: memory,
        }
    }

    /// Lets the walker sink into the terrain with the gait frozen at its first sample.
    ///
    /// The center-of-mass velocity is reset whenever its kinetic energy passes a
    /// peak, so the body comes to rest at the quasi-static sinkage instead of
    /// overshooting it. No work is accumulated.
    pub fn settle(&self, state: SimState, trace: &mut Vec<SettleSample>) -> Result<SimState, SimError> {
        let dt = self.params.dt;
        let steps = self.params.steps(self.params.settle_time);
        let every = self.params.log_every()?;
        let mut state = state;
        let mut memory = state.gamma_memory.clone();
        for k in 0..steps {
            let t = -self.params.settle_time + k as f64 * dt;
            if k % every == 0 {
                trace.push(SettleSample { t, com: state.com });
            }
            let report = self.contact(state.com, state.vel, None, &mut memory)?;
            let mut next = self.advance(&state, &report, memory.clone(), dt, false);
            if next.vel.norm_sq() < state.vel.norm_sq() {
                next.vel = Vec2::ZERO;
            }
            next.t = t + dt;
            self.check(&next)?;
            state = next;
        }
        state.t = 0.0;
        state.work = [0.0; 2];
        state.gamma_memory = memory;
        Ok(state)
    }

    /// Full run: place, settle, then walk to `t_final`, logging every `log_interval`.
    pub fn run(&self) -> Result<SimTrajectory, SimError> {
        let initial = self.initial_state()?;
        let mut settle = Vec::new();
        let mut state = self.settle(initial.clone(), &mut settle)?;

        let dt = self.params.dt;
        let steps = self.params.steps(self.params.t_final);
        let every = self.params.log_every()?;
        let mut samples = Vec::with_capacity(steps / every + 1);
        for k in 0..=steps {
            state.t = k as f64 * dt;
            let mut memory = state.gamma_memory.clone();
            let report = self.contact(state.com, state.vel, Some(state.t), &mut memory)?;
            if k % every == 0 {
                samples.push(TrajectorySample {
                    t: state.t,
                    com: state.com,
                    vel: state.vel,
                    force: report.force,
                    power: report.power,
                    work: state.work,
                });
            }
            if k == steps {
                break;
            }
            state = self.advance(&state, &report, memory, dt, true);
            self.check(&state)?;
        }

        Ok(SimTrajectory {
            samples,
            step_events: self.walking_events(),
            settle,
            initial_com: initial.com,
            log_interval: self.params.log_interval,
        })
    }

    /// Gait step events mapped onto the walking phase, repeated for looping gaits.
    fn walking_events(&self) -> Vec<f64> {
        let start = self.gait.start();
        let t_final = self.params.t_final;
        let base: Vec<f64> = self.gait.step_events().iter().map(|e| e - start).collect();
        if !self.gait.loopable() {
            return base.into_iter().filter(|&e| e <= t_final + 1e-12).collect();
        }
        let period = self.gait.duration();
        let mut events = Vec::new();
        let mut offset = 0.0;
        while offset <= t_final {
            events.extend(base.iter().map(|e| e + offset).filter(|&e| e <= t_final + 1e-12));
            offset += period;
        }
        events.sort_by(f64::total_cmp);
        events.dedup();
        events
    }
}

/// Runs a full simulation with the same contour on both feet.
pub fn simulate(
    gait: &GaitProfile,
    foot: &FootContour,
    map: &StressMap,
    params: WalkerParams,
) -> Result<SimTrajectory, SimError> {
    Simulator::new(gait, foot, foot, map, params)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::{FootContour, DEFAULT_FOOT_WIDTH};
    use crate::gait::static_gait;

    fn single_plate_foot() -> FootContour {
        FootContour::new(
            "plate",
            DEFAULT_FOOT_WIDTH,
            Vec2::ZERO,
            vec![Vec2::new(-0.0013, -0.05), Vec2::new(0.0013, -0.05)],
        )
        .unwrap()
    }

    fn standing() -> GaitProfile {
        static_gait(Vec2::new(0.0, -0.85), Vec2::new(0.0, -0.6), &LegGeometry::default()).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(WalkerParams::default().validate().is_ok());
        let p = WalkerParams {
            dt: 2e-3,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        let p = WalkerParams {
            t_final: 1.8005,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn forces_vanish_above_surface() {
        let map = StressMap::test_map(2e5).unwrap();
        let gait = standing();
        let foot = single_plate_foot();
        let sim = Simulator::new(&gait, &foot, &foot, &map, WalkerParams::default()).unwrap();
        let mut mem = sim.initial_state().unwrap().gamma_memory;
        let r = sim.contact(Vec2::new(0.0, 2.0), Vec2::new(0.3, -1.0), Some(0.0), &mut mem).unwrap();
        assert_eq!(r.total, Vec2::ZERO);
        assert_eq!(r.power, [0.0, 0.0]);
    }

    #[test]
    fn airborne_step_updates_velocity_first() {
        let map = StressMap::test_map(2e5).unwrap();
        let gait = standing();
        let foot = single_plate_foot();
        let params = WalkerParams::default();
        let sim = Simulator::new(&gait, &foot, &foot, &map, params).unwrap();
        let mut s = sim.initial_state().unwrap();
        s.com = Vec2::new(0.0, 3.0);
        let (next, _) = sim.step(&s).unwrap();
        assert_eq!(next.vel, Vec2::new(0.0, -9.81 * params.dt));
        assert_eq!(next.com, s.com);
    }

    #[test]
    fn plate_forces_and_total() {
        let map = StressMap::test_map(2e5).unwrap();
        let down = |z: f64| WorldPlate {
            start: Vec2::new(-0.0013, z),
            end: Vec2::new(0.0013, z),
            center: Vec2::new(0.0, z),
            beta: 0.0,
            velocity: Vec2::new(0.0, -0.1),
        };
        let mut mem = vec![INITIAL_GAMMA; 2];
        let f = plate_forces(&[down(-0.01), down(-0.02)], 0.0026, &map, 0.08, &mut mem);
        assert!((f[0].z - 0.416).abs() < 1e-12);
        assert_eq!(f[0].x, 0.0);
        assert_eq!(f[1], f[0] * 2.0);
        assert_eq!(total_grf(&[], &[]), Vec2::ZERO);
        assert_eq!(
            total_grf(&[Vec2::new(1.0, 2.0)], &[Vec2::new(-0.5, 3.0)]),
            Vec2::new(0.5, 5.0)
        );
    }

    #[test]
    fn slow_plates_keep_previous_direction() {
        let map = StressMap::test_map(1e5).unwrap();
        let plate = |v: Vec2| WorldPlate {
            start: Vec2::new(-0.01, -0.01),
            end: Vec2::new(0.01, -0.01),
            center: Vec2::new(0.0, -0.01),
            beta: 0.0,
            velocity: v,
        };
        let mut mem = vec![INITIAL_GAMMA];
        let resting = plate_forces(&[plate(Vec2::ZERO)], 0.02, &map, 0.1, &mut mem);
        assert!(resting[0].z > 0.0 && resting[0].x == 0.0);
        plate_forces(&[plate(Vec2::new(0.5, 0.0))], 0.02, &map, 0.1, &mut mem);
        assert_eq!(mem[0], 0.0);
        let after = plate_forces(&[plate(Vec2::new(1e-8, 0.0))], 0.02, &map, 0.1, &mut mem);
        assert!(after[0].x < 0.0 && after[0].z.abs() < 1e-12);
    }

    #[test]
    fn zero_gravity_airborne_walker_stays_put() {
        let map = StressMap::test_map(2e5).unwrap();
        let gait = standing();
        let foot = single_plate_foot();
        let params = WalkerParams {
            gravity: 0.0,
            t_final: 0.05,
            settle_time: 0.01,
            ..Default::default()
        };
        let sim = Simulator::new(&gait, &foot, &foot, &map, params).unwrap();
        let mut s = sim.initial_state().unwrap();
        s.com.z += 0.5;
        let mut t = 0;
        while s.t + params.dt <= params.t_final + 1e-12 {
            let (n, _) = sim.step(&s).unwrap();
            s = n;
            t += 1;
        }
        assert_eq!(t, 500);
        assert_eq!(s.vel, Vec2::ZERO);
        assert_eq!(s.com.x, 0.0);
    }

    #[test]
    fn gait_too_short_is_rejected() {
        let legs = LegGeometry::default();
        let gait = crate::gait::synth_gait(&crate::gait::SynthGait::default(), &legs).unwrap();
        let foot = single_plate_foot();
        let map = StressMap::test_map(1e5).unwrap();
        let params = WalkerParams {
            t_final: 2.0,
            ..Default::default()
        };
        assert!(matches!(
            Simulator::new(&gait, &foot, &foot, &map, params),
            Err(SimError::GaitTooShort { .. })
        ));
    }
}
