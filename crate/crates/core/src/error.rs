use thiserror::Error;

/// Everything that can go wrong between parsing a polynomial and emitting a table.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("SyntaxError: {0}")]
    Syntax(String),
    #[error("CoefficientError: {0}")]
    Coefficient(String),
    #[error("NotInvertible: {0}")]
    NotInvertible(String),
    #[error("NoPositiveSolution: weight system has a non-positive entry")]
    NoPositiveSolution,
    #[error("DegenerateCharacter: the product character has finite order modulo the relation lattice")]
    DegenerateCharacter,
    #[error("NotIsolated: Jacobian ring of the restriction to {0} is infinite-dimensional")]
    NotIsolated(String),
    #[error("NonterminatingFamily: infinitely many contributions in degree {0} (d0 = 0)")]
    NonterminatingFamily(i64),
    #[error("InvalidWindow: [{0}, {1}]")]
    InvalidWindow(i64, i64),
    #[error("WindowMismatch: windows [{0}, {1}] and [{2}, {3}] do not overlap")]
    WindowMismatch(i64, i64, i64, i64),
    #[error("UnknownFamily: {0}")]
    UnknownFamily(String),
    #[error("InvalidParameters: {0}")]
    InvalidParameters(String),
    #[error("GoldenMismatch:\n{0}")]
    GoldenMismatch(String),
    #[error("SchemaError: {0}")]
    Schema(String),
    #[error("Overflow: {0} does not fit in a machine integer")]
    Overflow(String),
}

impl Error {
    /// True for errors caused by malformed user input rather than by the computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax(_)
                | Error::Coefficient(_)
                | Error::NotInvertible(_)
                | Error::InvalidWindow(..)
                | Error::UnknownFamily(_)
                | Error::InvalidParameters(_)
                | Error::Schema(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
