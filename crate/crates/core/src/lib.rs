//! Exact and high-precision computation of Hsu–Shiue generalized Stirling
//! numbers, higher order generalized geometric polynomials and the degenerate
//! Bernoulli and Euler families, with a registry of identity checks against
//! independent oracles.

pub mod analytic;
pub mod bigfloat;
pub mod error;
pub mod exact;
pub mod exec;
pub mod families;
pub mod mellin;
pub mod poly;
pub mod report;
pub mod series;
pub mod stirling;
pub mod suite;

pub use bigfloat::BigFloat;
pub use error::{Error, Result};
pub use exact::Rational;
pub use exec::Execution;
pub use poly::PolyQ;
pub use report::{CheckReport, IdentityId, Status};
pub use series::PowerSeries;
pub use stirling::{build_table, HsuShiueParams, StirlingTable};
pub use suite::{run, run_all, Profile, Summary};
