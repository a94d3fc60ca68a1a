//! Exact-arithmetic engine for bounding the Z-slice genus and the algebraic
//! unknotting number of knots from Seifert-matrix data.
//!
//! Everything in this crate is computed over exact domains: arbitrary
//! precision integers and rationals, integer Laurent polynomials with the
//! involution `t -> 1/t`, finite quotient rings of cyclotomic type, and
//! Q/Z-valued pairings on finite abelian groups. The only place where real
//! numbers appear (Levine-Tristram signatures away from `t = -1`) they are
//! handled by dyadic interval arithmetic with certified sign separation, so
//! no result ever depends on floating point rounding.
//!
//! The crate is `no_std` + `alloc`; IO, file formats and the command line
//! front end live in the companion `zgenus` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod blanch;
pub mod bounds;
pub mod crit2;
pub mod cycres;
pub mod exactmat;
pub mod finpair;
pub mod interval;
pub mod knot;
pub mod laurent;

pub use exactmat::ExactMatrix;
pub use laurent::LaurentPoly;

// re-exported for downstream crates working with matrix entries
pub use num_bigint;
pub use num_traits;
