//! Polyhedral cones and linear maps preserving them.

mod dynamics;
mod fujiki;
mod lp;
mod polyhedral;
pub mod random;

use thiserror::Error;

pub use dynamics::{
    all_roots_on_unit_circle, interior_fixed_vector, meng_zhang_report, power_bounded_exact, preserves_cone,
    ConeMapAnalysis, FixedVector, ModulusRoute, PowerBoundedness, DEFAULT_SAMPLE_RANGE, SLOW_GROWTH_THRESHOLD,
};
pub use fujiki::{fujiki_lieberman_check, group_closure_order, FL_CONCLUSION, FlOptions, FlReport, FlStep, GeneratorSteps, DEFAULT_GROUP_CAP};
pub use lp::{feasible_point, strict_feasibility, StrictFeasibility};
pub use polyhedral::PolyhedralCone;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error("no rays given")]
    Empty,
    #[error("ray {index} has length {got}, expected {expected}")]
    RayLength { index: usize, expected: usize, got: usize },
    #[error("rays span a subspace of rank {rank} in dimension {dim}")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("cone contains a line")]
    NotSalient,
    #[error("map of size {map} acting on a cone in dimension {cone}")]
    DimensionMismatch { map: usize, cone: usize },
    #[error("map is singular")]
    Singular,
    #[error("q must be positive")]
    NonPositiveQ,
    #[error("map does not preserve the cone")]
    NotPreserved,
    #[error("generator {index} has determinant {det}, expected ±1")]
    NotUnimodular { index: usize, det: String },
    #[error("{got} fixed classes for {expected} generators")]
    ClassCount { expected: usize, got: usize },
}
