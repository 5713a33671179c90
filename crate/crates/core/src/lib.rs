//! Numerical laboratory for partial Euler products of L-functions in the
//! critical strip.
//!
//! The crate computes checkpointed partial Euler products for a small
//! catalog of L-functions (Riemann zeta, Dirichlet L, the Ramanujan Delta
//! form, elliptic-curve L-functions), normalizes them according to the Deep
//! Riemann Hypothesis prediction
//!
//! ```text
//! (log x)^r * prod_{p <= x} L_p(s)^{-1}  ->  sqrt(2)^nu * L^(r)(s) / (e^(r gamma) r!)
//! ```
//!
//! on the critical line, and verifies the proved function-field case
//! exactly via Weil L-polynomials and the trace formula. Around that core:
//! Chebyshev-bias prime races with 1/sqrt(p) weights, the tau-function bias
//! series, and the original Birch--Swinnerton-Dyer product with Goldfeld's
//! rank-slope readout.

pub mod cache;
pub mod catalog;
pub mod dirichlet;
pub mod elliptic;
pub mod error;
pub mod euler;
pub mod ff;
pub mod primes;
pub mod race;
pub mod report;
pub mod tau;
pub mod util;

mod hurwitz;

pub use catalog::LFunctionSpec;
pub use dirichlet::DirichletCharacter;
pub use elliptic::EllipticCurve;
pub use error::{DrhError, Result};
pub use euler::{ConvergenceReport, ProductTrace};
pub use ff::{FfCharacter, FqPoly, LPolynomial};
pub use primes::PrimeTable;
pub use race::BiasSeries;
pub use tau::TauTable;
