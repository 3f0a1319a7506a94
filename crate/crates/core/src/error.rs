use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty set")]
    EmptySet,
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
    #[error("energy order must be at least 2, got {0}")]
    EnergyOrder(usize),
    #[error("budget exceeded: {what} needs {required}, budget is {budget}")]
    Budget {
        what: &'static str,
        required: u64,
        budget: u64,
    },
    #[error("operator is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("eigen solver did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid family parameters: {0}")]
    Family(String),
    #[error("element {0} lies outside the domain of the map")]
    MapDomain(String),
}
