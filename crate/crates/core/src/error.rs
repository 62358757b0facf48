use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational scalar `{0}`")]
    Scalar(String),
    #[error("invalid generator `{0}`")]
    Generator(String),
    #[error("invalid payload: {0}")]
    Payload(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("residue undetermined: series known only below t^{precision}")]
    UndeterminedResidue { precision: i64 },
    #[error("valuation undetermined: series is zero modulo t^{precision}")]
    UndeterminedValuation { precision: i64 },
    #[error("coefficient of t^{exponent} undetermined (precision {precision})")]
    UndeterminedCoefficient { exponent: i64, precision: i64 },
    #[error("division by zero series")]
    ZeroDivisor,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector is not cyclic: certificate determinant vanishes")]
    NotCyclic,
    #[error("working precision exhausted after {attempts} attempts")]
    PrecisionExhausted { attempts: u32 },
    #[error("no cyclic vector found with degree bound {degree_bound}")]
    CyclicVectorNotFound { degree_bound: u32 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid root function: {0}")]
    InvalidRootFunction(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
