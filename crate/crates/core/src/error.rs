use thiserror::Error;

use crate::identity::Route;

/// Everything that can go wrong in the library.
///
/// `Inconsistency`, `RouteDisagreement` and `IdentityFailure` are never
/// expected in a correct build: each signals that two independent
/// computations of the same exact quantity differ.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("series has nonzero constant term; {0} needs a series in zR[[z]]")]
    NonzeroConstantTerm(&'static str),

    #[error("coefficient index {index} beyond truncation order {order}")]
    IndexBeyondOrder { index: usize, order: usize },

    #[error("internal inconsistency in {0}")]
    Inconsistency(String),

    #[error("routes {first} and {second} disagree on {quantity}({n})")]
    RouteDisagreement {
        quantity: &'static str,
        n: u64,
        first: Route,
        second: Route,
    },

    #[error("beta({n}) - alpha({n}) != {n}^{}", .n + 1)]
    IdentityFailure { n: u64 },

    #[error("Newton iteration did not converge for z = {z} after {iterations} steps")]
    NonConvergence { z: f64, iterations: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
