use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Fock truncation dimension must be positive")]
    EmptyDimension,

    #[error("raising operator pushed probability {leakage:e} past the truncation (tolerance {tol:e})")]
    LeakageExceeded { leakage: f64, tol: f64 },

    #[error("probe has support at |{index}>, beyond the interior limit {limit}")]
    EdgeSupport { index: usize, limit: usize },

    #[error("basis index {index} does not fit in truncation dimension {n_max}")]
    Overflow { index: usize, n_max: usize },

    #[error("invalid label: k = {k}, j = {j} (need k >= 1 and j < k)")]
    InvalidLabel { k: usize, j: usize },

    #[error("coherent-state tail mass {tail:e} beyond n_max = {n_max} exceeds tolerance {tol:e}")]
    TailTooHeavy { tail: f64, n_max: usize, tol: f64 },

    #[error("closed form not available for k = {k}")]
    UnsupportedOrder { k: usize },

    #[error("superposition norm {norm_sq:e} is degenerate")]
    DegenerateNorm { norm_sq: f64 },

    #[error("Wigner integration window too narrow: envelope {envelope:e} at the window edge")]
    WindowTooNarrow { envelope: f64 },

    #[error("Wigner field has boundary value {value:e}; grid too small for marginals")]
    BoundaryMass { value: f64 },

    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),

    #[error("no passing measure candidate registered for k = {k}, j = {j}")]
    NoCandidate { k: usize, j: usize },

    #[error("{what}: independent routes disagree ({first} vs {second})")]
    Discrepancy { what: &'static str, first: f64, second: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}
