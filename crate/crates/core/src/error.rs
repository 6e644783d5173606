use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
///
/// Variants fall into three classes, see [`Error::class`]: malformed or
/// structurally invalid input, inputs outside the mathematical domain of an
/// operation, and numerical breakdown of an iterative kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error(
        "matrix is not positive definite: smallest eigenvalue {min_eigenvalue:e}, largest {max_eigenvalue:e}"
    )]
    NotPositiveDefinite {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("matrix is singular: smallest singular value {0:e}")]
    Singular(f64),

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Domain,
    Numerical,
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Input(_) => ErrorClass::Input,
            Error::NotPositiveDefinite { .. } | Error::Domain(_) | Error::Singular(_) => {
                ErrorClass::Domain
            }
            Error::NoConvergence { .. } | Error::Numerical(_) => ErrorClass::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
