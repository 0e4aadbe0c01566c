//! Exact computation of the tree-function sums `alpha(n)` and `beta(n)`,
//! their closed forms, and verification of `beta(n) - alpha(n) = n^(n+1)`
//! (equivalently `xi_2(n) = xi(n) + n`).
//!
//! * [`exact`]: big-integer and rational primitives
//! * [`series`]: truncated power series and the tree function `y = z e^y`
//! * [`identity`]: closed forms, brute-force oracles, `Q(n)` and verification
//! * [`approx`]: floating-point tree function and `Q(n)` growth
//! * [`cli`]: the `lacasse` command-line front end

pub mod approx;
pub mod cli;
pub mod error;
pub mod exact;
pub mod identity;
pub mod series;

pub use error::{Error, Result};
pub use exact::{ExactInt, ExactRational};
pub use identity::{Route, RouteSet, VerificationReport, Verifier};
pub use series::TruncatedSeries;
