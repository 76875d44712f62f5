//! Error type shared by the whole crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Library error. Numeric payloads are stored as `f64` regardless of the
/// scalar type in use so the type stays object-safe and cloneable.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A mathematical precondition on an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural argument (size, count, ordering) was invalid.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An integrand returned a non-finite value at a quadrature node.
    #[error("non-finite integrand value at node t = {node:e}")]
    NonFiniteEvaluation {
        /// Node at which the integrand failed.
        node: f64,
    },

    /// Nested quadrature refinement did not reach the requested agreement.
    #[error(
        "quadrature did not converge by {max_points} points; \
         last two values {previous:e} and {last:e}"
    )]
    QuadratureDivergence {
        /// Size of the largest rule tried, in evaluation points.
        max_points: usize,
        /// Value from the second-largest rule.
        previous: f64,
        /// Value from the largest rule.
        last: f64,
    },

    /// The tridiagonal eigensolver exceeded its iteration budget.
    #[error("eigensolver failed to converge for a {size}x{size} matrix")]
    EigenFailure {
        /// Matrix dimension.
        size: usize,
    },

    /// A failure inside one trial of a seeded scan, with the trial index.
    #[error("trial {index}: {source}")]
    Trial {
        /// Zero-based trial index within the scan.
        index: usize,
        /// Underlying failure.
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Convenience constructor for [`Error::Domain`].
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Convenience constructor for [`Error::InvalidArgument`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Wraps an error with the index of the scan trial it occurred in.
    pub fn in_trial(self, index: usize) -> Self {
        Error::Trial {
            index,
            source: Box::new(self),
        }
    }

    /// The innermost error, unwrapping any trial context.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Trial { source, .. } => source.root_cause(),
            other => other,
        }
    }
}
