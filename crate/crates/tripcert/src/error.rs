use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("n = {n} exceeds the enumeration cutoff {cutoff}")]
    CutoffExceeded { n: u64, cutoff: u64 },
    #[error("C must be positive")]
    NonPositiveCap,
    #[error("no feasible grid composition at resolution {0}")]
    InfeasibleGrid(u32),
    #[error("admissible set is empty")]
    EmptyAdmissibleSet,
    #[error("beta = {0} outside (0, 1)")]
    BetaOutOfRange(f64),
    #[error("no proper labeling found after {0} retries")]
    RetryCapExceeded(u32),
    #[error("n = {0} is handled by the small-case analysis")]
    DelegatedSmallCase(i64),
    #[error("n = {0} is not one of the small cases 13, 14, 16, 17")]
    NotSmallCase(i64),
    #[error("{0}")]
    Precondition(String),
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
