//! Exact-arithmetic free resolutions of monomial ideals.
//!
//! The crate builds Taylor complexes, their pivot subcomplexes, Lyubeznik
//! complexes, and general discrete-Morse reductions, all with coefficients in
//! arbitrary-precision rationals so that every certificate (differentials
//! squaring to zero, exactness of strands, homotopy identities) is checked by
//! exact computation rather than floating point.
//!
//! Modules build on each other in order: [`arith`] (multidegrees and
//! polynomials), [`combin`] (index sets and signs), [`complex`] (based
//! complexes, rank and homology computations), [`resolutions`] (Taylor,
//! pivot, Lyubeznik, Morse), [`dg`] (associative products on resolutions),
//! [`homotopy`] (systems of higher homotopies for a regular sequence in the
//! ideal), and [`shamash`] (the resulting resolution over the quotient by
//! that sequence, with rank bounds).

pub mod arith;
pub mod combin;
pub mod complex;
pub mod dg;
pub mod homotopy;
pub mod resolutions;
pub mod shamash;

mod error;

pub use error::{Error, Result};
