//! Walking input: ankle trajectories relative to the hip, and leg kinematics.
//!
//! Angle conventions: the hip angle `theta1` is measured from the downward
//! vertical and the knee angle `theta2` relative to the thigh, both positive
//! clockwise in the (x forward, z up) plane, so a positive hip angle swings the
//! leg backward and a positive knee angle bends the knee forward. Link rates
//! `omega1`, `omega2` are counter-clockwise (`omega_i = -d theta_i / dt`),
//! which makes the ankle frame angle `theta_a = pi/2 - (theta1 + theta2)`
//! rotate at exactly `omega_a = omega1 + omega2`.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Vec2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaitError {
    #[error("line {line}: malformed header, expected `t,lx,lz,rx,rz[,lvx,lvz,rvx,rvz]`")]
    MalformedHeader { line: usize },
    #[error("line {line}: ragged row, expected {expected} fields")]
    Ragged { line: usize, expected: usize },
    #[error("line {line}: invalid number")]
    BadNumber { line: usize },
    #[error("line {line}: time is not strictly increasing")]
    NonMonotonicTime { line: usize },
    #[error("line {line}: ankle at distance {distance:.4} m is unreachable (leg reach {min:.4}..{max:.4} m)")]
    Unreachable { line: usize, distance: f64, min: f64, max: f64 },
    #[error("gait needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("step event at t = {0} lies outside the gait time range")]
    EventOutOfRange(f64),
    #[error("bad comment directive on line {line}")]
    BadDirective { line: usize },
    #[error("sample arrays have inconsistent lengths")]
    LengthMismatch,
    #[error("time {t} outside gait range [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },
    #[error("ankle at distance {distance:.4} m is outside the leg reach {min:.4}..{max:.4} m")]
    OutOfReach { distance: f64, min: f64, max: f64 },
    #[error("invalid synthetic gait parameters: {0}")]
    InvalidSynth(String),
    #[error("leg lengths must be positive")]
    InvalidLegs,
}

/// Thigh and shank lengths, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegGeometry {
    pub thigh: f64,
    pub shank: f64,
}

impl Default for LegGeometry {
    fn default() -> Self {
        LegGeometry {
            thigh: 0.47,
            shank: 0.45,
        }
    }
}

impl LegGeometry {
    pub fn validate(&self) -> Result<(), GaitError> {
        if self.thigh > 0.0 && self.shank > 0.0 && self.thigh.is_finite() && self.shank.is_finite() {
            Ok(())
        } else {
            Err(GaitError::InvalidLegs)
        }
    }

    pub fn max_reach(&self) -> f64 {
        self.thigh + self.shank
    }

    pub fn min_reach(&self) -> f64 {
        (self.thigh - self.shank).abs()
    }

    pub fn reachable(&self, ankle: Vec2) -> bool {
        let d = ankle.norm();
        d <= self.max_reach() && d >= self.min_reach()
    }
}

/// Joint angles and rates of one leg plus the derived ankle frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegState {
    pub theta1: f64,
    pub theta2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub theta_a: f64,
    pub omega_a: f64,
}

/// Ankle frame angle and rate from joint angles and rates.
pub fn ankle_frame(theta1: f64, theta2: f64, omega1: f64, omega2: f64) -> (f64, f64) {
    (FRAC_PI_2 - (theta1 + theta2), omega1 + omega2)
}

fn down(angle: f64) -> Vec2 {
    Vec2::new(-angle.sin(), -angle.cos())
}

/// Ankle position relative to the hip for the given hip and knee angles.
pub fn forward_kinematics(theta1: f64, theta2: f64, legs: &LegGeometry) -> Vec2 {
    down(theta1) * legs.thigh + down(theta1 + theta2) * legs.shank
}

/// Hip and knee angles placing the ankle at `ankle` (relative to the hip), knee forward.
pub fn inverse_kinematics(ankle: Vec2, legs: &LegGeometry) -> Result<(f64, f64), GaitError> {
    let d = ankle.norm();
    let (l1, l2) = (legs.thigh, legs.shank);
    let tol = 1e-12 * legs.max_reach();
    if d > legs.max_reach() + tol || d < legs.min_reach() - tol {
        return Err(GaitError::OutOfReach {
            distance: d,
            min: legs.min_reach(),
            max: legs.max_reach(),
        });
    }
    let cos_knee = ((d * d - l1 * l1 - l2 * l2) / (2.0 * l1 * l2)).clamp(-1.0, 1.0);
    let theta2 = cos_knee.acos();
    let heading = (-ankle.x).atan2(-ankle.z);
    let theta1 = heading - (l2 * theta2.sin()).atan2(l1 + l2 * theta2.cos());
    Ok((theta1, theta2))
}

/// Full leg state from the ankle position and velocity relative to the hip.
pub fn leg_state(ankle: Vec2, ankle_velocity: Vec2, legs: &LegGeometry) -> Result<LegState, GaitError> {
    let (theta1, theta2) = inverse_kinematics(ankle, legs)?;
    // d(ankle)/d(theta) columns, theta clockwise.
    let shank_angle = theta1 + theta2;
    let w1 = Vec2::new(-theta1.cos(), theta1.sin());
    let w2 = Vec2::new(-shank_angle.cos(), shank_angle.sin());
    let j1 = w1 * legs.thigh + w2 * legs.shank;
    let j2 = w2 * legs.shank;
    let det = j1.cross(j2);
    let (rate1, rate2) = if det.abs() > 1e-9 * legs.thigh * legs.shank {
        (ankle_velocity.cross(j2) / det, j1.cross(ankle_velocity) / det)
    } else {
        // Straight leg: only the component across the leg is realizable.
        (ankle_velocity.dot(w1) / legs.max_reach(), 0.0)
    };
    let (omega1, omega2) = (-rate1, -rate2);
    let (theta_a, omega_a) = ankle_frame(theta1, theta2, omega1, omega2);
    Ok(LegState {
        theta1,
        theta2,
        omega1,
        omega2,
        theta_a,
        omega_a,
    })
}

/// Ankle position and velocity relative to the hip.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AnkleSample {
    pub position: Vec2,
    pub velocity: Vec2,
}

/// Time series of both ankles relative to the hip.
#[derive(Debug, Clone, PartialEq)]
pub struct GaitProfile {
    time: Vec<f64>,
    ankles: [Vec<Vec2>; 2],
    velocities: [Vec<Vec2>; 2],
    /// Interpolation slopes per sample.
    slopes: [Vec<Vec2>; 2],
    step_events: Vec<f64>,
    loopable: bool,
}

pub const LEFT: usize = 0;
pub const RIGHT: usize = 1;

impl GaitProfile {
    /// Validated profile. Missing velocities are filled by finite differences.
    pub fn new(
        time: Vec<f64>,
        left: Vec<Vec2>,
        right: Vec<Vec2>,
        velocities: Option<(Vec<Vec2>, Vec<Vec2>)>,
        step_events: Option<Vec<f64>>,
        loopable: bool,
        legs: &LegGeometry,
    ) -> Result<Self, GaitError> {
        legs.validate()?;
        let n = time.len();
        if n < 2 {
            return Err(GaitError::TooFewSamples(n));
        }
        if left.len() != n || right.len() != n {
            return Err(GaitError::LengthMismatch);
        }
        for i in 0..n {
            if !time[i].is_finite() || !left[i].is_finite() || !right[i].is_finite() {
                return Err(GaitError::BadNumber { line: i + 1 });
            }
            if i > 0 && time[i] <= time[i - 1] {
                return Err(GaitError::NonMonotonicTime { line: i + 1 });
            }
            for p in [left[i], right[i]] {
                if !legs.reachable(p) {
                    return Err(GaitError::Unreachable {
                        line: i + 1,
                        distance: p.norm(),
                        min: legs.min_reach(),
                        max: legs.max_reach(),
                    });
                }
            }
        }
        let velocities = match velocities {
            Some((lv, rv)) => {
                if lv.len() != n || rv.len() != n {
                    return Err(GaitError::LengthMismatch);
                }
                [lv, rv]
            }
            None => [
                finite_difference(&time, &left),
                finite_difference(&time, &right),
            ],
        };
        let step_events = match step_events {
            Some(ev) => ev,
            None => lower_foot_switches(&time, &left, &right),
        };
        for &e in &step_events {
            if !(e >= time[0] && e <= time[n - 1]) {
                return Err(GaitError::EventOutOfRange(e));
            }
        }
        let slopes = [pchip_slopes(&time, &left), pchip_slopes(&time, &right)];
        Ok(GaitProfile {
            time,
            ankles: [left, right],
            velocities,
            slopes,
            step_events,
            loopable,
        })
    }

    pub fn start(&self) -> f64 {
        self.time[0]
    }

    pub fn end(&self) -> f64 {
        self.time[self.time.len() - 1]
    }

    pub fn duration(&self) -> f64 {
        self.end() - self.start()
    }

    pub fn loopable(&self) -> bool {
        self.loopable
    }

    pub fn step_events(&self) -> &[f64] {
        &self.step_events
    }

    pub fn times(&self) -> &[f64] {
        &self.time
    }

    pub fn positions(&self, foot: usize) -> &[Vec2] {
        &self.ankles[foot]
    }

    /// Stored (given or finite-differenced) velocities.
    pub fn stored_velocities(&self, foot: usize) -> &[Vec2] {
        &self.velocities[foot]
    }

    /// Lowest relative ankle height over the profile (the stance depth).
    pub fn stance_depth(&self) -> f64 {
        self.ankles
            .iter()
            .flatten()
            .map(|p| p.z)
            .fold(f64::INFINITY, f64::min)
    }

    /// Interpolated left and right ankle samples at time `t`.
    pub fn sample(&self, t: f64) -> Result<[AnkleSample; 2], GaitError> {
        let (start, end) = (self.start(), self.end());
        let t = if t >= start && t <= end {
            t
        } else if self.loopable && t.is_finite() {
            start + (t - start).rem_euclid(end - start)
        } else {
            return Err(GaitError::OutOfRange { t, start, end });
        };
        let n = self.time.len();
        let i = self.time.partition_point(|&s| s <= t).clamp(1, n - 1) - 1;
        let h = self.time[i + 1] - self.time[i];
        let u = (t - self.time[i]) / h;
        let mut out = [AnkleSample::default(); 2];
        for (foot, slot) in out.iter_mut().enumerate() {
            let p = &self.ankles[foot];
            let m = &self.slopes[foot];
            *slot = hermite(p[i], p[i + 1], m[i] * h, m[i + 1] * h, u, h);
        }
        Ok(out)
    }

    /// Serializes the profile in the gait CSV format (with velocity columns).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for e in &self.step_events {
            let _ = writeln!(out, "# step_event={e}");
        }
        if self.loopable {
            out.push_str("# loop=true\n");
        }
        out.push_str("t,lx,lz,rx,rz,lvx,lvz,rvx,rvz\n");
        for i in 0..self.time.len() {
            let (l, r) = (self.ankles[LEFT][i], self.ankles[RIGHT][i]);
            let (lv, rv) = (self.velocities[LEFT][i], self.velocities[RIGHT][i]);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                self.time[i], l.x, l.z, r.x, r.z, lv.x, lv.z, rv.x, rv.z
            );
        }
        out
    }

    /// Parses the gait CSV format: header `t,lx,lz,rx,rz[,lvx,lvz,rvx,rvz]`,
    /// optional `# step_event=<t>` and `# loop=true` comment lines.
    pub fn parse(source: &str, legs: &LegGeometry) -> Result<Self, GaitError> {
        let mut events = Vec::new();
        let mut loopable = false;
        let mut columns = None;
        let mut lines = Vec::new();
        let mut rows: Vec<Vec<f64>> = Vec::new();

        for (idx, raw) in source.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() {
                continue;
            }
            if let Some(c) = text.strip_prefix('#') {
                if let Some((key, value)) = c.trim().split_once('=') {
                    match key.trim() {
                        "step_event" => events.push(
                            value
                                .trim()
                                .parse::<f64>()
                                .map_err(|_| GaitError::BadDirective { line })?,
                        ),
                        "loop" => {
                            loopable = value.trim().parse().map_err(|_| GaitError::BadDirective { line })?
                        }
                        _ => {}
                    }
                }
                continue;
            }
            let fields: Vec<&str> = text.split(',').map(str::trim).collect();
            let Some(expected) = columns else {
                columns = Some(match fields.join(",").as_str() {
                    "t,lx,lz,rx,rz" => 5,
                    "t,lx,lz,rx,rz,lvx,lvz,rvx,rvz" => 9,
                    _ => return Err(GaitError::MalformedHeader { line }),
                });
                continue;
            };
            if fields.len() != expected {
                return Err(GaitError::Ragged { line, expected });
            }
            let values = fields
                .iter()
                .map(|f| f.parse::<f64>().ok().filter(|v| v.is_finite()))
                .collect::<Option<Vec<f64>>>()
                .ok_or(GaitError::BadNumber { line })?;
            if let Some(prev) = rows.last() {
                if values[0] <= prev[0] {
                    return Err(GaitError::NonMonotonicTime { line });
                }
            }
            for p in [Vec2::new(values[1], values[2]), Vec2::new(values[3], values[4])] {
                if !legs.reachable(p) {
                    return Err(GaitError::Unreachable {
                        line,
                        distance: p.norm(),
                        min: legs.min_reach(),
                        max: legs.max_reach(),
                    });
                }
            }
            lines.push(line);
            rows.push(values);
        }
        let Some(columns) = columns else {
            return Err(GaitError::MalformedHeader { line: 1 });
        };
        let time = rows.iter().map(|r| r[0]).collect();
        let left = rows.iter().map(|r| Vec2::new(r[1], r[2])).collect();
        let right = rows.iter().map(|r| Vec2::new(r[3], r[4])).collect();
        let velocities = (columns == 9).then(|| {
            (
                rows.iter().map(|r| Vec2::new(r[5], r[6])).collect(),
                rows.iter().map(|r| Vec2::new(r[7], r[8])).collect(),
            )
        });
        let events = if events.is_empty() { None } else { Some(events) };
        GaitProfile::new(time, left, right, velocities, events, loopable, legs)
    }
}

/// Cubic Hermite value and derivative on one interval, `u` in [0, 1].
fn hermite(p0: Vec2, p1: Vec2, m0: Vec2, m1: Vec2, u: f64, h: f64) -> AnkleSample {
    let u2 = u * u;
    let u3 = u2 * u;
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    let d00 = 6.0 * u2 - 6.0 * u;
    let d10 = 3.0 * u2 - 4.0 * u + 1.0;
    let d01 = -d00;
    let d11 = 3.0 * u2 - 2.0 * u;
    let position = if u == 0.0 {
        p0
    } else if u == 1.0 {
        p1
    } else {
        p0 * h00 + m0 * h10 + p1 * h01 + m1 * h11
    };
    let velocity = (p0 * d00 + m0 * d10 + p1 * d01 + m1 * d11) * (1.0 / h);
    AnkleSample { position, velocity }
}

/// Fritsch-Carlson monotone slopes, per coordinate.
fn pchip_slopes(time: &[f64], values: &[Vec2]) -> Vec<Vec2> {
    let xs: Vec<f64> = values.iter().map(|v| v.x).collect();
    let zs: Vec<f64> = values.iter().map(|v| v.z).collect();
    let sx = pchip_1d(time, &xs);
    let sz = pchip_1d(time, &zs);
    sx.into_iter().zip(sz).map(|(x, z)| Vec2::new(x, z)).collect()
}

fn pchip_1d(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for i in 1..n - 1 {
        let (a, b) = (delta[i - 1], delta[i]);
        if a == 0.0 || b == 0.0 || a.signum() != b.signum() {
            d[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / a + w2 / b);
        }
    }
    d[0] = pchip_end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = pchip_end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn pchip_end(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

/// Central differences with one-sided ends.
fn finite_difference(time: &[f64], values: &[Vec2]) -> Vec<Vec2> {
    let n = time.len();
    (0..n)
        .map(|i| {
            let (a, b) = if i == 0 {
                (0, 1)
            } else if i == n - 1 {
                (n - 2, n - 1)
            } else {
                (i - 1, i + 1)
            };
            (values[b] - values[a]) * (1.0 / (time[b] - time[a]))
        })
        .collect()
}

/// Times where the lower ankle changes from one foot to the other.
fn lower_foot_switches(time: &[f64], left: &[Vec2], right: &[Vec2]) -> Vec<f64> {
    let mut events = Vec::new();
    for i in 1..time.len() {
        let a = left[i - 1].z - right[i - 1].z;
        let b = left[i].z - right[i].z;
        if a != 0.0 && b != 0.0 && a.signum() != b.signum() {
            let s = a / (a - b);
            events.push(time[i - 1] + s * (time[i] - time[i - 1]));
        } else if a != 0.0 && b == 0.0 {
            // Touching exactly at a sample counts once, at that sample.
            let next = left.get(i + 1).zip(right.get(i + 1)).map(|(l, r)| l.z - r.z);
            if next.is_some_and(|c| c != 0.0 && c.signum() != a.signum()) {
                events.push(time[i]);
            }
        }
    }
    events
}

/// Parameters of the synthetic alternating gait.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthGait {
    pub step_length: f64,
    pub step_period: f64,
    pub lift_height: f64,
    pub n_steps: usize,
    pub hip_height: f64,
}

impl Default for SynthGait {
    fn default() -> Self {
        SynthGait {
            step_length: 0.5,
            step_period: 0.6,
            lift_height: 0.08,
            n_steps: 3,
            hip_height: 0.85,
        }
    }
}

/// Samples per step of the synthetic gait.
const SYNTH_SAMPLES_PER_STEP: usize = 300;

/// Analytic ankle trajectory of the synthetic gait at phase `u` of a swing.
fn swing(u: f64, p: &SynthGait) -> AnkleSample {
    let s = p.step_length;
    let t = p.step_period;
    let x = hermite(
        Vec2::new(-s / 2.0, 0.0),
        Vec2::new(s / 2.0, 0.0),
        Vec2::new(-s, 0.0),
        Vec2::new(-s, 0.0),
        u,
        t,
    );
    let (sin, cos) = (std::f64::consts::PI * u).sin_cos();
    let z = -p.hip_height + p.lift_height * sin * sin;
    let vz = p.lift_height * 2.0 * sin * cos * std::f64::consts::PI / t;
    AnkleSample {
        position: Vec2::new(x.position.x, z),
        velocity: Vec2::new(x.velocity.x, vz),
    }
}

fn stance(u: f64, p: &SynthGait) -> AnkleSample {
    let s = p.step_length;
    AnkleSample {
        position: Vec2::new(s / 2.0 - s * u, -p.hip_height),
        velocity: Vec2::new(-s / p.step_period, 0.0),
    }
}

/// Alternating-leg gait: the left leg starts in stance at the front while the
/// right leg swings from the back. Each stance ankle moves backward at
/// `step_length / step_period`; each swing follows a C1 arc peaking at
/// `lift_height`. A step event is recorded at every swing touch-down.
pub fn synth_gait(p: &SynthGait, legs: &LegGeometry) -> Result<GaitProfile, GaitError> {
    let positive = [p.step_length, p.step_period, p.hip_height];
    if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) || p.n_steps == 0 {
        return Err(GaitError::InvalidSynth(
            "step length, period, hip height and step count must be positive".into(),
        ));
    }
    if !(p.lift_height.is_finite() && p.lift_height >= 0.0) {
        return Err(GaitError::InvalidSynth("lift height must be non-negative".into()));
    }
    let total = SYNTH_SAMPLES_PER_STEP * p.n_steps;
    let mut time = Vec::with_capacity(total + 1);
    let mut feet = [Vec::with_capacity(total + 1), Vec::with_capacity(total + 1)];
    let mut vels = [Vec::with_capacity(total + 1), Vec::with_capacity(total + 1)];
    for k in 0..=total {
        let step = (k / SYNTH_SAMPLES_PER_STEP).min(p.n_steps - 1);
        let u = (k - step * SYNTH_SAMPLES_PER_STEP) as f64 / SYNTH_SAMPLES_PER_STEP as f64;
        let (stance_foot, swing_foot) = if step % 2 == 0 { (LEFT, RIGHT) } else { (RIGHT, LEFT) };
        let st = stance(u, p);
        let sw = swing(u, p);
        feet[stance_foot].push(st.position);
        vels[stance_foot].push(st.velocity);
        feet[swing_foot].push(sw.position);
        vels[swing_foot].push(sw.velocity);
        time.push(p.step_period * k as f64 / SYNTH_SAMPLES_PER_STEP as f64);
    }
    for pos in feet.iter().flatten() {
        if !legs.reachable(*pos) {
            return Err(GaitError::InvalidSynth(format!(
                "ankle reaches {:.4} m but the leg spans {:.4}..{:.4} m",
                pos.norm(),
                legs.min_reach(),
                legs.max_reach()
            )));
        }
    }
    let events = (1..=p.n_steps).map(|k| p.step_period * k as f64).collect();
    let [left, right] = feet;
    let [lv, rv] = vels;
    GaitProfile::new(time, left, right, Some((lv, rv)), Some(events), false, legs)
}

/// Profile holding both ankles fixed, looping forever.
pub fn static_gait(left: Vec2, right: Vec2, legs: &LegGeometry) -> Result<GaitProfile, GaitError> {
    GaitProfile::new(
        vec![0.0, 1.0],
        vec![left, left],
        vec![right, right],
        None,
        Some(Vec::new()),
        true,
        legs,
    )
}
