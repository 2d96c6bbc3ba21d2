use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Fock cutoff must be at least 1, got {0}")]
    InvalidCutoff(usize),

    #[error("Poisson tail {tail:.3e} beyond cutoff {cutoff} for amplitude {alpha} exceeds tolerance {tolerance:.1e}")]
    TailTooHeavy {
        alpha: f64,
        cutoff: usize,
        tail: f64,
        tolerance: f64,
    },

    #[error("Hermitian eigensolver did not converge on a {0}x{0} matrix")]
    ConvergenceFailure(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max |A - A^†| = {0:.3e})")]
    NotHermitian(f64),

    #[error("operator is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("density operator trace {0} out of range")]
    BadTrace(f64),

    #[error("invalid priors ({0}, {1})")]
    InvalidPriors(f64, f64),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series truncated at {n_terms} terms: last term ratio {ratio:.3e} too large")]
    SeriesTruncation { n_terms: usize, ratio: f64 },

    #[error("Gauss-Hermite rule of order {order} lost normalization ({deviation:.3e})")]
    QuadratureUnderflow { order: usize, deviation: f64 },

    #[error("quadrature did not settle: doubling order {order} changed result by {change:.3e}")]
    QuadratureNotConverged { order: usize, change: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("curves sampled on different grids ({grid} points vs {series} values)")]
    GridMismatch { grid: usize, series: usize },

    #[error("at sigma = {sigma}: {source}")]
    AtSigma {
        sigma: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
