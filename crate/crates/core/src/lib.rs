//! Sampling hyperelliptic curves over finite fields, computing their p-ranks
//! through Hasse-Witt matrices, and turning p-rank stratum frequencies into
//! Lang-Weil estimates for the number of irreducible components of the
//! p-rank strata of the hyperelliptic moduli space.
//!
//! Module map:
//! - [`ff`]: arithmetic in GF(p^r) with a fixed total order on elements.
//! - [`poly`] and [`form`]: univariate polynomials, binary forms and
//!   Möbius transformations.
//! - [`prank`]: Hasse-Witt matrices and p-ranks.
//! - [`family`]: the explicit family of pointed curves and its
//!   isomorphism-class canonicalization.
//! - [`galois`]: enumeration of curves whose branch locus splits completely.
//! - [`oracle`]: brute-force point counting and isomorphism testing.
//! - [`stats`]: stratum tallies, M-values and summary statistics.
//! - [`campaign`]: seeded, batched campaigns with CSV/JSON output.

pub mod campaign;
pub mod error;
pub mod family;
pub mod ff;
pub mod form;
pub mod galois;
pub mod oracle;
pub mod poly;
pub mod prank;
pub mod stats;

pub use error::{Error, Result};
pub use ff::{FieldCtx, FieldElement};
pub use poly::Poly;
