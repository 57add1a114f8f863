//! Local-stress lookup maps `alpha_x(beta, gamma)` and `alpha_z(beta, gamma)`.
//!
//! A map stores stress per unit depth (N/m^3) on a uniform grid of plate
//! orientations `beta` and motion directions `gamma`, both covering
//! [-pi/2, pi/2]. Queries outside that principal domain are folded back with
//! [`symmetry_reduce`] and interpolated bilinearly, then multiplied by the
//! material scale factor `zeta`.
//!
//! The on-disk format is a UTF-8 CSV:
//!
//! ```text
//! # name=generic
//! # no_tension=true
//! beta_deg,gamma_deg,alpha_x,alpha_z
//! -90,-90,0,1000000
//! ...
//! ```
//!
//! with one row per grid node, `beta` major and `gamma` minor.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use thiserror::Error;

use crate::geom::{wrap_half_pi, wrap_pi};

/// Node count per axis of the built-in maps (10 degree spacing).
pub const DEFAULT_GRID_NODES: usize = 19;

const HEADER: &str = "beta_deg,gamma_deg,alpha_x,alpha_z";
const ANGLE_TOL_DEG: f64 = 1e-9;
const SPACING_TOL_RAD: f64 = 1e-9;

const GENERIC_CSV: &str = include_str!("../data/generic_sand.csv");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error("line {line}: malformed header, expected `{HEADER}`")]
    MalformedHeader { line: usize },
    #[error("line {line}: expected 4 comma-separated numbers")]
    MalformedRow { line: usize },
    #[error("line {line}: non-finite value")]
    NonFinite { line: usize },
    #[error("line {line}: angle out of [-pi/2, pi/2]")]
    AngleOutOfDomain { line: usize },
    #[error("line {line}: ragged grid")]
    RaggedGrid { line: usize },
    #[error("line {line}: non-uniform grid spacing")]
    NonUniformGrid { line: usize },
    #[error("line {line}: grid does not span [-pi/2, pi/2]")]
    IncompleteDomain { line: usize },
    #[error("map has no data rows")]
    Empty,
    #[error("bad comment directive on line {line}: {text}")]
    BadDirective { line: usize, text: String },
    #[error("table shape does not match the grid")]
    ShapeMismatch,
    #[error("scale factor must be finite and positive, got {0}")]
    InvalidZeta(f64),
    #[error("stress magnitude must be finite and positive, got {0}")]
    InvalidMagnitude(f64),
}

/// Principal-domain angles produced by [`symmetry_reduce`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reduced {
    pub beta: f64,
    pub gamma: f64,
    /// Sign applied to `alpha_x`; `-1` when the motion was mirrored.
    pub sign_x: f64,
}

/// Folds an arbitrary plate orientation and motion direction into the table domain.
///
/// `gamma` is the full direction of the plate velocity (as from `atan2`). Plate
/// orientation is unsigned, so `beta` is wrapped with period pi. Motion with a
/// leftward component is mirrored about the vertical plane: the plate angle
/// flips sign, the motion angle is reflected into [-pi/2, pi/2], and the
/// horizontal stress changes sign while the vertical stress is unchanged.
pub fn symmetry_reduce(beta: f64, gamma: f64) -> Reduced {
    let beta = wrap_half_pi(beta);
    let gamma = wrap_pi(gamma);
    if gamma.abs() <= FRAC_PI_2 {
        Reduced {
            beta,
            gamma,
            sign_x: 1.0,
        }
    } else {
        let mirrored = if gamma > 0.0 { PI - gamma } else { -PI - gamma };
        Reduced {
            beta: wrap_half_pi(-beta),
            gamma: mirrored,
            sign_x: -1.0,
        }
    }
}

/// Uniform axis stored in degrees (the file representation) with radian copies.
#[derive(Debug, Clone, PartialEq)]
struct Axis {
    degrees: Vec<f64>,
    radians: Vec<f64>,
    step: f64,
}

impl Axis {
    fn from_degrees(degrees: Vec<f64>) -> Self {
        let radians: Vec<f64> = degrees.iter().map(|d| d.to_radians()).collect();
        let step = (radians[radians.len() - 1] - radians[0]) / (radians.len() - 1) as f64;
        Axis {
            degrees,
            radians,
            step,
        }
    }

    fn uniform(nodes: usize) -> Self {
        let span = 180.0 / (nodes - 1) as f64;
        Axis::from_degrees((0..nodes).map(|i| -90.0 + span * i as f64).collect())
    }

    fn len(&self) -> usize {
        self.radians.len()
    }

    /// Cell index and fractional offset for an angle inside the axis range.
    fn locate(&self, angle: f64) -> (usize, f64) {
        let n = self.len();
        let mut i = ((angle - self.radians[0]) / self.step).floor();
        if i.is_nan() || i < 0.0 {
            i = 0.0;
        }
        let mut i = (i as usize).min(n - 2);
        if i + 1 < n - 1 && angle >= self.radians[i + 1] {
            i += 1;
        }
        if i > 0 && angle < self.radians[i] {
            i -= 1;
        }
        let t = ((angle - self.radians[i]) / (self.radians[i + 1] - self.radians[i])).clamp(0.0, 1.0);
        (i, t)
    }
}

/// Resistive-force local stress tables with a material scale factor.
#[derive(Debug, Clone, PartialEq)]
pub struct StressMap {
    name: String,
    beta: Axis,
    gamma: Axis,
    alpha_x: Vec<f64>,
    alpha_z: Vec<f64>,
    zeta: f64,
    no_tension: bool,
}

impl StressMap {
    /// Builds a map from grids in degrees and row-major (`beta` major) tables.
    pub fn from_degrees(
        name: impl Into<String>,
        beta_deg: Vec<f64>,
        gamma_deg: Vec<f64>,
        alpha_x: Vec<f64>,
        alpha_z: Vec<f64>,
    ) -> Result<Self, MapError> {
        for axis in [&beta_deg, &gamma_deg] {
            check_axis(axis, |_| 0)?;
        }
        if alpha_x.len() != beta_deg.len() * gamma_deg.len() || alpha_z.len() != alpha_x.len() {
            return Err(MapError::ShapeMismatch);
        }
        if alpha_x.iter().chain(&alpha_z).any(|v| !v.is_finite()) {
            return Err(MapError::NonFinite { line: 0 });
        }
        Ok(StressMap {
            name: name.into(),
            beta: Axis::from_degrees(beta_deg),
            gamma: Axis::from_degrees(gamma_deg),
            alpha_x,
            alpha_z,
            zeta: 1.0,
            no_tension: false,
        })
    }

    /// Analytic map whose stress exactly opposes the motion direction:
    /// `alpha_x = -a cos(gamma)`, `alpha_z = -a sin(gamma)`.
    pub fn test_map(magnitude: f64) -> Result<Self, MapError> {
        if !(magnitude.is_finite() && magnitude > 0.0) {
            return Err(MapError::InvalidMagnitude(magnitude));
        }
        let axis = Axis::uniform(DEFAULT_GRID_NODES);
        let nb = axis.len();
        let mut alpha_x = Vec::with_capacity(nb * nb);
        let mut alpha_z = Vec::with_capacity(nb * nb);
        for _ in 0..nb {
            for &g in &axis.degrees {
                let (s, c) = sin_cos_deg(g);
                alpha_x.push(-magnitude * c);
                alpha_z.push(-magnitude * s);
            }
        }
        StressMap::from_degrees(
            format!("test:{magnitude}"),
            axis.degrees.clone(),
            axis.degrees,
            alpha_x,
            alpha_z,
        )
    }

    /// Bundled generic dry-sand map (scale factor 1).
    pub fn generic() -> Self {
        StressMap::parse(GENERIC_CSV).expect("bundled generic map is valid")
    }

    /// Parses the CSV map format. The returned map has `zeta = 1`.
    pub fn parse(source: &str) -> Result<Self, MapError> {
        let mut name = String::from("unnamed");
        let mut no_tension = false;
        let mut header_seen = false;
        let mut rows: Vec<(usize, [f64; 4])> = Vec::new();

        for (idx, raw) in source.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() {
                continue;
            }
            if let Some(comment) = text.strip_prefix('#') {
                let comment = comment.trim();
                if let Some((key, value)) = comment.split_once('=') {
                    match key.trim() {
                        "name" => name = value.trim().to_string(),
                        "no_tension" => {
                            no_tension = value.trim().parse().map_err(|_| MapError::BadDirective {
                                line,
                                text: text.to_string(),
                            })?
                        }
                        _ => {}
                    }
                }
                continue;
            }
            if !header_seen {
                let cols: Vec<&str> = text.split(',').map(str::trim).collect();
                if cols.join(",") != HEADER {
                    return Err(MapError::MalformedHeader { line });
                }
                header_seen = true;
                continue;
            }
            let fields: Vec<&str> = text.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(MapError::MalformedRow { line });
            }
            let mut values = [0.0_f64; 4];
            for (slot, field) in values.iter_mut().zip(&fields) {
                *slot = field.parse().map_err(|_| MapError::MalformedRow { line })?;
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(MapError::NonFinite { line });
            }
            if values[..2].iter().any(|a| a.abs() > 90.0 + ANGLE_TOL_DEG) {
                return Err(MapError::AngleOutOfDomain { line });
            }
            rows.push((line, values));
        }
        if !header_seen {
            return Err(MapError::MalformedHeader { line: 1 });
        }
        if rows.is_empty() {
            return Err(MapError::Empty);
        }

        let first_beta = rows[0].1[0];
        let n_gamma = rows.iter().take_while(|(_, r)| r[0] == first_beta).count();
        let gamma_deg: Vec<f64> = rows[..n_gamma].iter().map(|(_, r)| r[1]).collect();
        if rows.len() % n_gamma != 0 {
            return Err(MapError::RaggedGrid {
                line: rows[rows.len() - 1].0,
            });
        }
        let n_beta = rows.len() / n_gamma;
        let mut beta_deg = Vec::with_capacity(n_beta);
        for block in rows.chunks(n_gamma) {
            let b = block[0].1[0];
            for (j, (line, r)) in block.iter().enumerate() {
                if r[0] != b || r[1] != gamma_deg[j] {
                    return Err(MapError::RaggedGrid { line: *line });
                }
            }
            beta_deg.push(b);
        }
        check_axis(&gamma_deg, |i| rows[i].0)?;
        check_axis(&beta_deg, |i| rows[i * n_gamma].0)?;

        let alpha_x = rows.iter().map(|(_, r)| r[2]).collect();
        let alpha_z = rows.iter().map(|(_, r)| r[3]).collect();
        let mut map = StressMap::from_degrees(name, beta_deg, gamma_deg, alpha_x, alpha_z)?;
        map.no_tension = no_tension;
        Ok(map)
    }

    /// Writes the map in the CSV format accepted by [`StressMap::parse`].
    ///
    /// Tables are written unscaled; `zeta` is a runtime setting.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# name={}", self.name);
        if self.no_tension {
            out.push_str("# no_tension=true\n");
        }
        out.push_str(HEADER);
        out.push('\n');
        let ng = self.gamma.len();
        for (i, b) in self.beta.degrees.iter().enumerate() {
            for (j, g) in self.gamma.degrees.iter().enumerate() {
                let k = i * ng + j;
                let _ = writeln!(out, "{b},{g},{},{}", self.alpha_x[k], self.alpha_z[k]);
            }
        }
        out
    }

    pub fn with_zeta(mut self, zeta: f64) -> Result<Self, MapError> {
        if !(zeta.is_finite() && zeta > 0.0) {
            return Err(MapError::InvalidZeta(zeta));
        }
        self.zeta = zeta;
        Ok(self)
    }

    pub fn with_no_tension(mut self, no_tension: bool) -> Self {
        self.no_tension = no_tension;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn no_tension(&self) -> bool {
        self.no_tension
    }

    pub fn beta_grid(&self) -> &[f64] {
        &self.beta.radians
    }

    pub fn gamma_grid(&self) -> &[f64] {
        &self.gamma.radians
    }

    /// Unscaled table entry at grid node `(i, j)`.
    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        let k = i * self.gamma.len() + j;
        (self.alpha_x[k], self.alpha_z[k])
    }

    /// Scaled local stresses `(alpha_x, alpha_z)` in N/m^3 for any plate angle and motion direction.
    pub fn query(&self, beta: f64, gamma: f64) -> (f64, f64) {
        let (ax, az) = self.query_unscaled(beta, gamma);
        (ax * self.zeta, az * self.zeta)
    }

    /// Local stresses before the `zeta` scaling.
    pub fn query_unscaled(&self, beta: f64, gamma: f64) -> (f64, f64) {
        let r = symmetry_reduce(beta, gamma);
        let (ax, mut az) = self.interpolate(r.beta, r.gamma);
        if self.no_tension && r.gamma > 0.0 && az < 0.0 {
            az = 0.0;
        }
        (r.sign_x * ax, az)
    }

    /// Bilinear interpolation of the unscaled tables inside the principal domain.
    fn interpolate(&self, beta: f64, gamma: f64) -> (f64, f64) {
        let (i, tb) = self.beta.locate(beta);
        let (j, tg) = self.gamma.locate(gamma);
        let ng = self.gamma.len();
        let k00 = i * ng + j;
        let k10 = k00 + ng;
        let blend = |t: &[f64]| {
            let low = lerp(t[k00], t[k00 + 1], tg);
            let high = lerp(t[k10], t[k10 + 1], tg);
            lerp(low, high, tb)
        };
        (blend(&self.alpha_x), blend(&self.alpha_z))
    }
}

/// Linear blend that reproduces both endpoints and constant data exactly.
fn lerp(a: f64, b: f64, t: f64) -> f64 {
    if t == 1.0 {
        b
    } else {
        a + (b - a) * t
    }
}

fn check_axis(axis: &[f64], line_of: impl Fn(usize) -> usize) -> Result<(), MapError> {
    let n = axis.len();
    if n < 2 {
        return Err(MapError::RaggedGrid { line: line_of(0) });
    }
    for (i, a) in axis.iter().enumerate() {
        if !a.is_finite() {
            return Err(MapError::NonFinite { line: line_of(i) });
        }
        if a.abs() > 90.0 + ANGLE_TOL_DEG {
            return Err(MapError::AngleOutOfDomain { line: line_of(i) });
        }
    }
    if (axis[0] + 90.0).abs() > ANGLE_TOL_DEG {
        return Err(MapError::IncompleteDomain { line: line_of(0) });
    }
    if (axis[n - 1] - 90.0).abs() > ANGLE_TOL_DEG {
        return Err(MapError::IncompleteDomain { line: line_of(n - 1) });
    }
    let step = (axis[n - 1] - axis[0]).to_radians() / (n - 1) as f64;
    for i in 1..n {
        let d = (axis[i] - axis[i - 1]).to_radians();
        if d <= 0.0 || (d - step).abs() > SPACING_TOL_RAD {
            return Err(MapError::NonUniformGrid { line: line_of(i) });
        }
    }
    Ok(())
}

/// Sine and cosine of an angle in degrees, exact at multiples of 90.
fn sin_cos_deg(deg: f64) -> (f64, f64) {
    if deg == 0.0 {
        (0.0, 1.0)
    } else if deg == 90.0 {
        (1.0, 0.0)
    } else if deg == -90.0 {
        (-1.0, 0.0)
    } else {
        deg.to_radians().sin_cos()
    }
}
