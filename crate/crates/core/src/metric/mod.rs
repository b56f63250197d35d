//! Exact finite metric spaces: validation, canonical generators, nets,
//! capacities and quotient pseudometrics.

pub mod generators;
pub mod net;
pub mod space;

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("table is not symmetric at ({0}, {1})")]
    AsymmetryError(String, String),
    #[error("triangle inequality fails on ({0}, {1}, {2})")]
    TriangleViolation(String, String, String),
    #[error("negative distance at ({0}, {1})")]
    NegativeDistance(String, String),
    #[error("nonzero self-distance at {0}")]
    NonzeroSelfDistance(String),
    #[error("unknown point {0}")]
    UnknownPoint(String),
    #[error("generator would emit {0} points, cap is {1}")]
    CapExceeded(usize, usize),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("subset is empty")]
    EmptySubset,
}

pub use generators::{generate, generate_capped, GeneratorSpec, DEFAULT_POINT_CAP};
pub use net::{capacity, check_net, greedy_net, Capacity};
pub use space::{
    quotient_pseudometric, validate_metric, Decomposition, MetricRepr, Pseudometric, Space,
};
