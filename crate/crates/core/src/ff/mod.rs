//! Dirichlet characters over F_q[T], exact L-polynomials and Weil roots,
//! the trace formula, and the proved function-field case of the Deep
//! Riemann Hypothesis.

pub mod lpoly;
pub mod poly;
pub mod sieve;
pub mod units;
pub mod verify;

pub use lpoly::{l_polynomial, LPolynomial};
pub use poly::FqPoly;
pub use sieve::{enumerate_monic_irreducibles, IrreducibleSieve};
pub use units::{character_group, FfCharacter, FfUnitGroup, ResidueRing};
pub use verify::{
    ff_drh_verify, ff_mertens, ff_partial_product, place_class_counts, place_class_counts_batch,
    trace_formula_check, FfMertensSeries, FfVerifyReport, PlaceCounts,
};
