//! Planar vector helpers for the sagittal (x, z) plane.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point or vector in the sagittal plane: `x` forward, `z` up.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub z: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, z: 0.0 };

    pub const fn new(x: f64, z: f64) -> Self {
        Vec2 { x, z }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.z * other.z
    }

    /// Scalar 2D cross product `self.x * other.z - self.z * other.x`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.z - self.z * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.z)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.z.is_finite()
    }

    pub fn lerp(self, other: Vec2, t: f64) -> Vec2 {
        Vec2::new(
            self.x + (other.x - self.x) * t,
            self.z + (other.z - self.z) * t,
        )
    }

    /// Velocity of a point at offset `self` on a body spinning at `omega` (counter-clockwise).
    pub fn spun(self, omega: f64) -> Vec2 {
        Vec2::new(-omega * self.z, omega * self.x)
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(v: [f64; 2]) -> Self {
        Vec2::new(v[0], v[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.z]
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.z + rhs.z)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.z += rhs.z;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.z - rhs.z)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.z)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.z * s)
    }
}

/// Counter-clockwise planar rotation with cached sine and cosine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub angle: f64,
    cos: f64,
    sin: f64,
}

impl Rotation {
    pub fn new(angle: f64) -> Self {
        let (sin, cos) = angle.sin_cos();
        Rotation { angle, cos, sin }
    }

    pub fn identity() -> Self {
        Rotation {
            angle: 0.0,
            cos: 1.0,
            sin: 0.0,
        }
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.cos * v.x - self.sin * v.z,
            self.sin * v.x + self.cos * v.z,
        )
    }
}

/// Orientation of the segment direction `d` as an unsigned line angle in (-pi/2, pi/2].
///
/// Vertical segments map to `+pi/2`.
pub fn plate_angle(d: Vec2) -> f64 {
    if d.x == 0.0 {
        FRAC_PI_2
    } else {
        (d.z / d.x).atan()
    }
}

/// Wraps an angle into (-pi/2, pi/2] using pi-periodicity.
pub fn wrap_half_pi(angle: f64) -> f64 {
    if angle > -FRAC_PI_2 && angle <= FRAC_PI_2 {
        return angle;
    }
    let y = angle - PI * (angle / PI).round();
    if y <= -FRAC_PI_2 {
        y + PI
    } else if y > FRAC_PI_2 {
        y - PI
    } else {
        y
    }
}

/// Wraps an angle into (-pi, pi].
pub fn wrap_pi(angle: f64) -> f64 {
    if angle > -PI && angle <= PI {
        return angle;
    }
    let two_pi = 2.0 * PI;
    let y = angle - two_pi * (angle / two_pi).round();
    if y <= -PI {
        y + two_pi
    } else if y > PI {
        y - two_pi
    } else {
        y
    }
}
