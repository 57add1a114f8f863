//! Foot-bottom contours and their partition into equal-length plates.
//!
//! Contours live in a foot frame `(x_p, z_p)` with `x_p` pointing forward and
//! `z_p` up. Every contour is an open polyline; curved shapes are sampled
//! densely from their exact parametric form.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{plate_angle, Rotation, Vec2};

/// Foot width used when none is given, in meters.
pub const DEFAULT_FOOT_WIDTH: f64 = 0.08;

/// Segments used to sample curved canonical shapes.
const CURVE_SEGMENTS: usize = 4096;

/// Segments used to sample waypoint splines (ten times a 200-plate partition).
pub const SPLINE_SEGMENTS: usize = 2000;

const MIN_SEGMENT: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContourError {
    #[error("contour needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} is not finite")]
    NonFiniteVertex(usize),
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertex(usize, usize),
    #[error("foot width must be positive, got {0}")]
    InvalidWidth(f64),
    #[error("unknown foot shape `{0}` (expected ellipse, rectangle, circle, reversed_l or triangle)")]
    UnknownShape(String),
    #[error("contact length must be positive, got {0}")]
    InvalidContactLength(f64),
    #[error("need at least 2 waypoints, got {0}")]
    TooFewWaypoints(usize),
    #[error("waypoint index k[{index}] = {value} outside 1..={levels}")]
    WaypointOutOfRange { index: usize, value: u32, levels: u32 },
    #[error("design domain must have positive size and at least one level")]
    InvalidDomain,
    #[error("plate count must be at least 1")]
    NoPlates,
    #[error("contour has zero length")]
    Degenerate,
    #[error("contour json: {0}")]
    Json(String),
}

/// Canonical foot shapes compared at equal contact length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    Ellipse,
    Rectangle,
    Circle,
    ReversedL,
    Triangle,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 5] = [
        ShapeKind::Ellipse,
        ShapeKind::Rectangle,
        ShapeKind::Circle,
        ShapeKind::ReversedL,
        ShapeKind::Triangle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Ellipse => "ellipse",
            ShapeKind::Rectangle => "rectangle",
            ShapeKind::Circle => "circle",
            ShapeKind::ReversedL => "reversed_l",
            ShapeKind::Triangle => "triangle",
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShapeKind {
    type Err = ContourError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "ellipse" | "elliptical" => Ok(ShapeKind::Ellipse),
            "rectangle" | "flat" => Ok(ShapeKind::Rectangle),
            "circle" | "circular" => Ok(ShapeKind::Circle),
            "reversed_l" => Ok(ShapeKind::ReversedL),
            "triangle" => Ok(ShapeKind::Triangle),
            _ => Err(ContourError::UnknownShape(s.to_string())),
        }
    }
}

/// Ordered polyline of the foot bottom in the foot frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FootContour {
    pub label: String,
    #[serde(rename = "width_m")]
    pub width: f64,
    pub ankle_offset: Vec2,
    pub vertices: Vec<Vec2>,
}

impl FootContour {
    pub fn new(
        label: impl Into<String>,
        width: f64,
        ankle_offset: Vec2,
        vertices: Vec<Vec2>,
    ) -> Result<Self, ContourError> {
        let c = FootContour {
            label: label.into(),
            width,
            ankle_offset,
            vertices,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ContourError> {
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(ContourError::InvalidWidth(self.width));
        }
        if self.vertices.len() < 2 {
            return Err(ContourError::TooFewVertices(self.vertices.len()));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(ContourError::NonFiniteVertex(i));
            }
        }
        if !self.ankle_offset.is_finite() {
            return Err(ContourError::NonFiniteVertex(usize::MAX));
        }
        for (i, w) in self.vertices.windows(2).enumerate() {
            if (w[1] - w[0]).norm() <= MIN_SEGMENT {
                return Err(ContourError::DuplicateVertex(i, i + 1));
            }
        }
        Ok(())
    }

    pub fn with_width(mut self, width: f64) -> Result<Self, ContourError> {
        if !(width.is_finite() && width > 0.0) {
            return Err(ContourError::InvalidWidth(width));
        }
        self.width = width;
        Ok(self)
    }

    pub fn length(&self) -> f64 {
        self.vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    /// Lowest vertex height in the foot frame.
    pub fn lowest_z(&self) -> f64 {
        self.vertices.iter().map(|v| v.z).fold(f64::INFINITY, f64::min)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("contour serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ContourError> {
        let c: FootContour = serde_json::from_str(text).map_err(|e| ContourError::Json(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }
}

/// Bottom contour of a canonical shape whose horizontal footprint equals `contact_length`.
///
/// Every shape keeps a 2:1 ratio between its horizontal and vertical extent
/// (except the circle), and the ankle sits at the top-center of the shape's
/// bounding box, which is the foot-frame origin.
pub fn make_canonical(kind: ShapeKind, contact_length: f64) -> Result<FootContour, ContourError> {
    if !(contact_length.is_finite() && contact_length > 0.0) {
        return Err(ContourError::InvalidContactLength(contact_length));
    }
    let c = contact_length;
    let half = c / 2.0;
    let vertices = match kind {
        ShapeKind::Ellipse => lower_half_ellipse(half, c / 4.0),
        ShapeKind::Circle => lower_half_ellipse(half, half),
        ShapeKind::Rectangle => vec![
            Vec2::new(-half, 0.0),
            Vec2::new(-half, -half),
            Vec2::new(half, -half),
            Vec2::new(half, 0.0),
        ],
        ShapeKind::ReversedL => {
            // Thin sole with the upright bar at the toe.
            let sole = c / 8.0;
            vec![
                Vec2::new(-half, -half + sole),
                Vec2::new(-half, -half),
                Vec2::new(half, -half),
                Vec2::new(half, 0.0),
            ]
        }
        ShapeKind::Triangle => vec![Vec2::new(-half, 0.0), Vec2::new(0.0, -half), Vec2::new(half, 0.0)],
    };
    FootContour::new(kind.name(), DEFAULT_FOOT_WIDTH, Vec2::ZERO, vertices)
}

/// Lower half of an ellipse with semi-axes `(a, b)` whose top touches `z = 0`.
fn lower_half_ellipse(a: f64, b: f64) -> Vec<Vec2> {
    (0..=CURVE_SEGMENTS)
        .map(|i| {
            let t = PI + PI * i as f64 / CURVE_SEGMENTS as f64;
            Vec2::new(a * t.cos(), -b + b * t.sin())
        })
        .collect()
}

/// Rectangular design domain for waypoint contours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignDomain {
    /// Half-length `L` of the domain along `x_p`, meters.
    pub half_length: f64,
    /// Depth `H` of the waypoint band below the foot-frame origin, meters.
    pub half_height: f64,
    /// Number of depth levels `K`.
    pub levels: u32,
    /// Number of waypoints `n`.
    pub waypoints: usize,
}

impl Default for DesignDomain {
    fn default() -> Self {
        DesignDomain {
            half_length: 0.13,
            half_height: 0.03,
            levels: 10,
            waypoints: 11,
        }
    }
}

impl DesignDomain {
    pub fn validate(&self) -> Result<(), ContourError> {
        let ok = self.half_length.is_finite()
            && self.half_length > 0.0
            && self.half_height.is_finite()
            && self.half_height > 0.0
            && self.levels >= 1;
        if !ok {
            return Err(ContourError::InvalidDomain);
        }
        if self.waypoints < 2 {
            return Err(ContourError::TooFewWaypoints(self.waypoints));
        }
        Ok(())
    }

    /// Foot-frame location of waypoint `i` (zero-based) at depth index `k`.
    pub fn waypoint(&self, i: usize, k: u32) -> Vec2 {
        let l = self.half_length;
        let x = -l + 2.0 * l * i as f64 / (self.waypoints - 1) as f64;
        let z = -(k as f64) * self.half_height / self.levels as f64;
        Vec2::new(x, z)
    }
}

/// Contour through waypoints placed uniformly along `x_p` at depths `-k_i H / K`.
///
/// A natural cubic spline joins the waypoints and is clamped to the
/// `[-H, 0]` band; vertical caps rise from the end waypoints to `z_p = 0`.
pub fn from_waypoints(k: &[u32], domain: &DesignDomain) -> Result<FootContour, ContourError> {
    let domain = DesignDomain {
        waypoints: k.len(),
        ..*domain
    };
    domain.validate()?;
    for (index, &value) in k.iter().enumerate() {
        if value < 1 || value > domain.levels {
            return Err(ContourError::WaypointOutOfRange {
                index,
                value,
                levels: domain.levels,
            });
        }
    }
    let points: Vec<Vec2> = k.iter().enumerate().map(|(i, &ki)| domain.waypoint(i, ki)).collect();
    let spline = NaturalSpline::new(&points);
    let l = domain.half_length;
    let h = domain.half_height;

    let mut vertices = Vec::with_capacity(SPLINE_SEGMENTS + 3);
    vertices.push(Vec2::new(-l, 0.0));
    for j in 0..=SPLINE_SEGMENTS {
        let x = if j == SPLINE_SEGMENTS {
            l
        } else {
            -l + 2.0 * l * j as f64 / SPLINE_SEGMENTS as f64
        };
        let z = spline.eval(x).clamp(-h, 0.0);
        vertices.push(Vec2::new(x, z));
    }
    vertices.push(Vec2::new(l, 0.0));
    vertices.dedup_by(|b, a| (*b - *a).norm() <= MIN_SEGMENT);

    let label = format!(
        "waypoints:{}",
        k.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    );
    FootContour::new(label, DEFAULT_FOOT_WIDTH, Vec2::ZERO, vertices)
}

/// Natural cubic spline `z(x)` through points with strictly increasing `x`.
#[derive(Debug, Clone)]
pub struct NaturalSpline {
    x: Vec<f64>,
    z: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl NaturalSpline {
    pub fn new(points: &[Vec2]) -> Self {
        let n = points.len();
        let x: Vec<f64> = points.iter().map(|p| p.x).collect();
        let z: Vec<f64> = points.iter().map(|p| p.z).collect();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Tridiagonal system for interior second derivatives (Thomas algorithm).
            let inner = n - 2;
            let mut diag = vec![0.0; inner];
            let mut upper = vec![0.0; inner];
            let mut rhs = vec![0.0; inner];
            for r in 0..inner {
                let i = r + 1;
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                diag[r] = 2.0 * (h0 + h1);
                upper[r] = h1;
                rhs[r] = 6.0 * ((z[i + 1] - z[i]) / h1 - (z[i] - z[i - 1]) / h0);
            }
            for r in 1..inner {
                let lower = x[r + 1] - x[r];
                let w = lower / diag[r - 1];
                diag[r] -= w * upper[r - 1];
                rhs[r] -= w * rhs[r - 1];
            }
            m[inner] = rhs[inner - 1] / diag[inner - 1];
            for r in (0..inner - 1).rev() {
                m[r + 1] = (rhs[r] - upper[r] * m[r + 2]) / diag[r];
            }
        }
        NaturalSpline { x, z, m }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.partition_point(|&k| k <= x) {
            0 => 0,
            p => (p - 1).min(n - 2),
        };
        let h = self.x[i + 1] - self.x[i];
        let t = x - self.x[i];
        let (z0, z1) = (self.z[i], self.z[i + 1]);
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let slope = (z1 - z0) / h - h * (2.0 * m0 + m1) / 6.0;
        z0 + t * (slope + t * (m0 / 2.0 + t * (m1 - m0) / (6.0 * h)))
    }
}

/// One plate of a partition, in the foot frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plate {
    pub start: Vec2,
    pub end: Vec2,
    pub center: Vec2,
    /// Orientation in (-pi/2, pi/2].
    pub beta: f64,
}

/// Equal-arc-length partition of a contour, expressed relative to the ankle.
#[derive(Debug, Clone, PartialEq)]
pub struct FootPlates {
    /// Plates with coordinates measured from the ankle attachment point.
    pub plates: Vec<Plate>,
    /// Arc length of every plate, meters.
    pub arc_length: f64,
    pub width: f64,
}

impl FootPlates {
    pub fn len(&self) -> usize {
        self.plates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plates.is_empty()
    }
}

/// Splits the contour into `n` plates of equal arc length.
///
/// Plate endpoints lie on the polyline; each plate is the chord between them.
pub fn discretize(contour: &FootContour, n: usize) -> Result<FootPlates, ContourError> {
    if n == 0 {
        return Err(ContourError::NoPlates);
    }
    let pts = merge_collinear(&contour.vertices);
    let mut cumulative = Vec::with_capacity(pts.len());
    cumulative.push(0.0);
    for w in pts.windows(2) {
        let last = cumulative[cumulative.len() - 1];
        cumulative.push(last + (w[1] - w[0]).norm());
    }
    let total = cumulative[cumulative.len() - 1];
    if !(total > 0.0) || !total.is_finite() {
        return Err(ContourError::Degenerate);
    }

    let mut seg = 0;
    let mut point_at = |s: f64| -> Vec2 {
        while seg + 2 < cumulative.len() && cumulative[seg + 1] < s {
            seg += 1;
        }
        let len = cumulative[seg + 1] - cumulative[seg];
        let t = ((s - cumulative[seg]) / len).clamp(0.0, 1.0);
        pts[seg].lerp(pts[seg + 1], t)
    };
    let mut breaks = Vec::with_capacity(n + 1);
    breaks.push(pts[0]);
    for i in 1..n {
        breaks.push(point_at(total * i as f64 / n as f64));
    }
    breaks.push(pts[pts.len() - 1]);

    let origin = contour.ankle_offset;
    let plates = breaks
        .windows(2)
        .map(|w| {
            let start = w[0] - origin;
            let end = w[1] - origin;
            Plate {
                start,
                end,
                center: (start + end) * 0.5,
                beta: plate_angle(end - start),
            }
        })
        .collect();
    Ok(FootPlates {
        plates,
        arc_length: total / n as f64,
        width: contour.width,
    })
}

/// Drops interior vertices that continue a straight run exactly.
fn merge_collinear(vertices: &[Vec2]) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = Vec::with_capacity(vertices.len());
    for &v in vertices {
        if out.len() >= 2 {
            let a = out[out.len() - 2];
            let b = out[out.len() - 1];
            let (d0, d1) = (b - a, v - b);
            if d0.cross(d1) == 0.0 && d0.dot(d1) > 0.0 {
                let last = out.len() - 1;
                out[last] = v;
                continue;
            }
        }
        out.push(v);
    }
    out
}

/// Ankle placement: world position and the rotation of the foot frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnklePose {
    pub position: Vec2,
    /// Counter-clockwise rotation of the foot frame relative to the world, rad.
    pub rotation: f64,
}

impl AnklePose {
    pub fn identity() -> Self {
        AnklePose {
            position: Vec2::ZERO,
            rotation: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AnkleVelocity {
    pub linear: Vec2,
    /// Counter-clockwise angular rate, rad/s.
    pub angular: f64,
}

/// A plate placed in the world.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldPlate {
    pub start: Vec2,
    pub end: Vec2,
    pub center: Vec2,
    pub beta: f64,
    pub velocity: Vec2,
}

/// Rigid transform from the ankle-relative foot frame to the world.
#[derive(Debug, Clone, Copy)]
pub struct FootTransform {
    position: Vec2,
    rotation: Rotation,
    velocity: AnkleVelocity,
}

impl FootTransform {
    pub fn new(pose: AnklePose, velocity: AnkleVelocity) -> Self {
        FootTransform {
            position: pose.position,
            rotation: Rotation::new(pose.rotation),
            velocity,
        }
    }

    /// World position of a point given relative to the ankle in the foot frame.
    pub fn point(&self, local: Vec2) -> Vec2 {
        self.position + self.rotation.apply(local)
    }

    /// World velocity of a point with world position `world`.
    pub fn velocity_at(&self, world: Vec2) -> Vec2 {
        self.velocity.linear + (world - self.position).spun(self.velocity.angular)
    }

    pub fn plate(&self, plate: &Plate) -> WorldPlate {
        let start = self.point(plate.start);
        let end = self.point(plate.end);
        let center = self.point(plate.center);
        WorldPlate {
            start,
            end,
            center,
            beta: plate_angle(end - start),
            velocity: self.velocity_at(center),
        }
    }
}

/// Places every plate in the world for the given ankle pose and velocity.
pub fn world_plates(plates: &FootPlates, pose: AnklePose, velocity: AnkleVelocity) -> Vec<WorldPlate> {
    let tf = FootTransform::new(pose, velocity);
    plates.plates.iter().map(|p| tf.plate(p)).collect()
}
