//! Finite families of harmonic functions on the unit ball whose sum of
//! moduli is equivalent to a prescribed radial weight.
//!
//! The crate is `no_std` (with `alloc`). Every radius is carried as the
//! distance to the boundary, `s = 1 - r`, usually through its natural or
//! base-2 logarithm, so that points with `1 - |x|` far below `2^-53` stay
//! representable.
//!
//! Layout:
//!
//! * [`weights`]: radial weights, the `Phi` transform, doubling constants.
//! * [`envelope`] and [`coeffs`]: log-convex envelopes, Hadamard
//!   coefficients and lacunary power series with `sum a_k^2 r^2k ~ w^2`.
//! * [`spherical`]: harmonic-space dimensions, zonal harmonics, the `L^2`
//!   attainer and sphere quadrature.
//! * [`blocks`]: building-block families and their certification.
//! * [`construction`]: the lacunary sums `F_{q,j}` and their constants.
//! * [`harness`]: shell sampling and two-sided verification.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod blocks;
pub mod coeffs;
pub mod construction;
pub mod envelope;
mod error;
pub mod harness;
pub mod logspace;
pub mod spherical;
pub mod weights;

pub use error::{Error, Result};
