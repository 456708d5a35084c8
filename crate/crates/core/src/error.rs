//! Error type shared by all kernels.

use thiserror::Error;

use crate::quadrature::QuadError;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the physics kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numerical integration failed.
    #[error(transparent)]
    Quadrature(#[from] QuadError),

    /// Parameters violate a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    /// The correlators do not describe a physical two-site state.
    #[error("inconsistent correlators: {what} = {value:e}")]
    InvalidCorrelator {
        /// Which quantity went out of range.
        what: &'static str,
        /// Offending value.
        value: f64,
    },

    /// A density matrix is not positive semidefinite.
    #[error("density matrix not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    InvalidState {
        /// Most negative eigenvalue found.
        min_eigenvalue: f64,
    },

    /// The requested combination has no implementation (e.g. perturbative
    /// random-field disorder).
    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    /// The symmetric tridiagonal eigensolver did not converge.
    #[error("eigensolver did not converge for eigenvalue {index}")]
    EigenSolve {
        /// Index of the eigenvalue that stalled.
        index: usize,
    },
}
