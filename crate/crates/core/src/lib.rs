//! Exact-arithmetic building blocks for the two quotient presentations of a
//! toric Deligne–Mumford stack: integer linear algebra (Smith normal form,
//! kernels, cokernels), labelled polytopes and their normal fans, diagonal
//! group presentations with isotropy computations, moment-level feasibility
//! over the rationals, and the comparison certificate tying both sides
//! together.
//!
//! Everything is computed over arbitrary-precision integers and rationals;
//! there is no floating point anywhere in this crate. The crate is `no_std`
//! (alloc only); IO, file formats and the command line live in the companion
//! `toristack` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod diagnostics;
pub mod exactalg;
pub mod fan;
pub mod feasibility;
pub mod linalg;
pub mod momentred;
pub mod morita;
pub mod polytope;
pub mod stackbuild;

/// Arbitrary-precision integer used throughout.
pub type Int = num_bigint::BigInt;

/// Arbitrary-precision rational used throughout.
pub type Rat = num_rational::BigRational;

/// Shorthand for building an [`Int`] from a machine integer.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Shorthand for building a [`Rat`] from a numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}
