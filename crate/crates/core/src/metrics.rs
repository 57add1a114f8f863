//! Walking-efficiency cost of a trajectory.

use serde::{Deserialize, Serialize};

use crate::sim::{SimTrajectory, TrajectorySample};

/// Half-width of the window around a step event used to measure the speed drop, s.
pub const EVENT_WINDOW: f64 = 0.05;

/// Floor on the cost denominator.
pub const DENOMINATOR_FLOOR: f64 = 1e-9;

/// Terms of the walking cost. Lower `j_w` is better.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    /// Forward displacement at the final time, m.
    pub x_tf: f64,
    /// Mean hip height over the walking phase, m.
    pub z_bar: f64,
    /// Magnitude of the net work of both feet, J.
    pub w_abs: f64,
    /// Peak magnitude of the combined power, W.
    pub p_max: f64,
    /// Summed forward-speed loss across step events, m/s.
    pub dvx: f64,
    pub j_w: f64,
}

impl CostBreakdown {
    /// Cost assigned to a run that blew up.
    pub fn diverged() -> Self {
        CostBreakdown {
            x_tf: f64::NAN,
            z_bar: f64::NAN,
            w_abs: f64::NAN,
            p_max: f64::NAN,
            dvx: f64::NAN,
            j_w: f64::INFINITY,
        }
    }

    pub fn is_diverged(&self) -> bool {
        !self.j_w.is_finite()
    }
}

/// `J_W = -(x * z) / max(W * P * dvx, floor)`.
pub fn cost(x_tf: f64, z_bar: f64, w_abs: f64, p_max: f64, dvx: f64) -> f64 {
    -(x_tf * z_bar) / (w_abs * p_max * dvx).max(DENOMINATOR_FLOOR)
}

/// Horizontal speed at `t`, linearly interpolated and clamped to the logged range.
pub fn speed_at(samples: &[TrajectorySample], t: f64) -> f64 {
    let first = &samples[0];
    let last = &samples[samples.len() - 1];
    if t <= first.t {
        return first.vel.x;
    }
    if t >= last.t {
        return last.vel.x;
    }
    let i = samples.partition_point(|s| s.t <= t);
    let (a, b) = (&samples[i - 1], &samples[i]);
    let u = (t - a.t) / (b.t - a.t);
    a.vel.x + (b.vel.x - a.vel.x) * u
}

/// Cost terms of a finished trajectory.
pub fn metrics(traj: &SimTrajectory) -> CostBreakdown {
    let samples = &traj.samples;
    if samples.is_empty() {
        return CostBreakdown::diverged();
    }
    let last = samples[samples.len() - 1];
    let x_tf = last.com.x;
    let z_bar = samples.iter().map(|s| s.com.z).sum::<f64>() / samples.len() as f64;
    let w_abs = last.total_work().abs();
    let p_max = samples.iter().map(|s| s.total_power().abs()).fold(0.0, f64::max);
    let dvx = traj
        .step_events
        .iter()
        .map(|&e| (speed_at(samples, e - EVENT_WINDOW) - speed_at(samples, e + EVENT_WINDOW)).max(0.0))
        .sum::<f64>();
    let j_w = cost(x_tf, z_bar, w_abs, p_max, dvx);
    CostBreakdown {
        x_tf,
        z_bar,
        w_abs,
        p_max,
        dvx,
        j_w: if j_w.is_finite() { j_w } else { f64::INFINITY },
    }
}
