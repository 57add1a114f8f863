//! Planar biped walking on granular terrain with resistive force theory,
//! and a genetic search over foot contours.

pub mod contour;
pub mod gait;
pub mod geom;
pub mod metrics;
pub mod optimizer;
pub mod sim;
pub mod stress_map;

pub use contour::{discretize, from_waypoints, make_canonical, DesignDomain, FootContour, FootPlates, ShapeKind};
pub use gait::{static_gait, synth_gait, GaitProfile, LegGeometry, SynthGait};
pub use geom::Vec2;
pub use metrics::{metrics, CostBreakdown};
pub use optimizer::{evaluate, optimize, optimize_with, GaConfig, Genome, OptimizationReport, OptimizationResult, Scenario};
pub use sim::{simulate, SimError, SimTrajectory, Simulator, WalkerParams};
pub use stress_map::{symmetry_reduce, MapError, StressMap};
