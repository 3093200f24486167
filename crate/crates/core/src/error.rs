use thiserror::Error;

use crate::structures::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown population `{0}`")]
    UnknownPopulation(String),

    #[error("population `{population}` has non-positive total {total}")]
    NonPositiveTotal { population: String, total: f64 },

    #[error("negative value {value} for population `{population}`, category `{category}`")]
    NegativeCount {
        population: String,
        category: String,
        value: f64,
    },

    #[error("invalid structure vector: {0}")]
    InvalidStructure(#[from] Violation),

    #[error("structure vectors are not aligned over the same categories")]
    NotAligned,

    #[error("transform order must be one of 0.5, 1 or 2, got {0}")]
    InvalidKappa(f64),

    #[error("distance {0} is outside [0, 1]")]
    DistanceOutOfRange(f64),

    #[error("significance level {0} is outside (0, 1)")]
    InvalidAlpha(f64),

    #[error("the similarity test needs at least 2 categories, got {0}")]
    TooFewCategories(usize),

    #[error("no tabulated critical value for alpha = {alpha}, k = {k}")]
    NoTabulatedValue { alpha: f64, k: usize },

    #[error("Monte Carlo estimation needs at least one replicate")]
    NoReplicates,

    #[error("supplied omega_p {supplied} disagrees with recomputed value {recomputed}")]
    OmegaMismatch { supplied: f64, recomputed: f64 },

    #[error("critical value table, line {line}: {message}")]
    CriticalTable { line: usize, message: String },

    #[error("input row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("duplicate category label `{0}`")]
    DuplicateCategory(String),

    #[error("duplicate population identifier `{0}`")]
    DuplicatePopulation(String),

    #[error("shares of population `{population}` (column {column}) sum to {sum}, expected 1")]
    SharesSum {
        population: String,
        column: usize,
        sum: f64,
    },

    #[error("input mode mismatch: requested {requested}, document declares {declared}")]
    ModeMismatch {
        requested: &'static str,
        declared: &'static str,
    },

    #[error("a series comparison needs at least two populations")]
    SinglePopulation,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
