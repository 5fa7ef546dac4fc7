//! Exact arithmetic for higher-order r-deranged Bell numbers and their
//! relatives: generalized Stirling numbers, r-derangements, omega
//! polynomials, brute-force enumeration oracles, the Hsu asymptotic
//! expansion, and a claim-checking harness that evaluates printed
//! identities over parameter grids.

pub mod asymptotics;
pub mod bell;
pub mod derangements;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod exec;
pub mod series;
pub mod stirling;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{format_rational, parse_rational, Int, ParamSet, Rational};
pub use exec::Execution;
pub use series::TruncatedSeries;
