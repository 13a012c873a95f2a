use thiserror::Error;

use crate::schottky::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("map has a pole at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("map is not loxodromic (|tr| - 2 = {excess:.3e})")]
    NotLoxodromic { excess: f64 },

    #[error("handle has rho = 0")]
    ZeroRho,

    #[error("multiplier q = 1 is degenerate")]
    DegenerateMultiplier,

    #[error("invalid classical handle: {0}")]
    InvalidClassical(&'static str),

    #[error("invalid Schottky parameters: {0}")]
    InvalidParams(ValidationReport),

    #[error("word count {count} exceeds cap {cap}")]
    Capacity { count: usize, cap: usize },

    #[error("reduction did not terminate after {0} steps (point in or near the limit set)")]
    NonTermination(usize),

    #[error("point lies within {eps:e} of circle C_{circle}")]
    BoundaryAmbiguity { circle: i32, eps: f64 },

    #[error("only {found} distinct limit points available, {wanted} requested")]
    InsufficientLimitPoints { found: usize, wanted: usize },

    #[error("{what}: residual {residual:.3e} exceeds {tolerance:.3e}")]
    Residual {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("numerical rank {found} != expected {expected} (singular value gap {gap:.3e})")]
    RankMismatch {
        found: usize,
        expected: usize,
        gap: f64,
    },

    #[error("ill-conditioned system (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("perturbation along {direction} leaves the Schottky space")]
    InvalidPerturbation { direction: String },

    #[error("no clear beta path for handle {0}")]
    PathBlocked(usize),

    #[error("punctures {0} and {1} coincide")]
    CoincidentPunctures(usize, usize),

    #[error("index out of range: {0}")]
    Index(String),

    /// A shared intermediate (surface, GEM) failed earlier in the session.
    #[error("{0}")]
    Dependency(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
