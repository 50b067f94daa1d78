use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("the zero polynomial has no factorization")]
    NoFactorization,
    #[error("multiplicities sum to {got}, expected ambient degree {expected}")]
    MultiplicityMismatch { expected: usize, got: usize },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("underdetermined: M = {m} but at least {needed} frequencies are required")]
    Underdetermined { m: usize, needed: usize },
    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("projection {index} does not have unit norm (norm {norm})")]
    NonUnitProjection { index: usize, norm: f64 },
    #[error("projection family is not generating: Stokes matrix has rank {rank} < 4")]
    NotGenerating { rank: usize },
    #[error("signal has zero energy; SNR is undefined")]
    ZeroSignal,
    #[error("infinite SNR: noise variance is zero")]
    InfiniteSnr,
    #[error("input is not a valid autocorrelation: {0}")]
    InvalidAutocorrelation(String),
    #[error("phase link undefined: the lag-zero cross-correlation vanishes")]
    PhaseLinkUndefined,
    #[error("inconsistent root pairing: {0}")]
    InconsistentPairing(String),
    #[error("solver diverged at iteration {iteration}")]
    Diverged { iteration: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
