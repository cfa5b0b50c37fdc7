use thiserror::Error;

use crate::solver::Trajectory;
use crate::Vec2;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("spectral field is not Hermitian (max defect {defect:.3e}); it does not represent a real function")]
    Symmetry { defect: f64 },

    #[error("multiplier is not finite at wavevector ({}, {})", k[0], k[1])]
    MultiplierOverflow { k: Vec2 },

    #[error("dyadic index {j} is out of range: {reason}")]
    Band { j: i32, reason: String },

    #[error("Gevrey exponent overflow for gamma = {gamma}{}: largest admissible gamma is {max_gamma:.6e}",
        match .time { Some(t) => format!(" at t = {t}"), None => String::new() })]
    GevreyOverflow {
        gamma: f64,
        max_gamma: f64,
        time: Option<f64>,
    },

    #[error("grids do not match: {0}")]
    GridMismatch(String),

    #[error("bilinear sum too large: {pairs} mode pairs exceed the limit of {limit}; use sparser inputs")]
    CostGuard { pairs: u64, limit: u64 },

    #[error("hypothesis ({item}) violated: {detail}")]
    Hypothesis { item: &'static str, detail: String },

    #[error("numerical blow-up at t = {time}")]
    BlowUp { time: f64, last: Box<Trajectory> },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown key `{key}`; valid keys are: {}", valid.join(", "))]
    UnknownKey { key: String, valid: Vec<String> },

    #[error("key `{key}`: expected {expected}, got `{value}`")]
    TypeMismatch {
        key: String,
        expected: &'static str,
        value: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
