//! Exact computations around real hyperbolic centers of `z² + c`.
//!
//! The crate connects seven families of objects that are all counted by
//! `γₙ = (1/2n) Σ_{m | n, m odd} μ(m) 2^{n/m}`:
//!
//! * real roots of the Gleason polynomial `Gₙ` ([`gleason`]),
//! * irreducible factors of `Gₙ mod 2` ([`gf2`], [`gleason::gleason_mod2`]),
//! * inversion classes of periodic cycles of the doubling map ([`gleason::enumerate_dbar`]),
//! * cyclic unimodal permutations ([`bijections::enumerate_cup`]),
//! * primitive binary necklaces of odd weight, the set `Ñ⁺(n)` and the
//!   primitive necklace inversion classes ([`words`]),
//! * non-centered and centered irreducible polynomials over `𝔽₂` ([`gf2`]).
//!
//! Every bijection between them is implemented as a plain function over
//! immutable values, and [`gleason::assemble_row`] ties one real center to
//! its image in every other set.

// words have length at least 1, so `is_empty` would always be false
#![allow(clippy::len_without_is_empty)]

pub mod bijections;
pub mod counting;
mod error;
pub mod gf2;
pub mod gleason;
pub mod shiftdyn;
pub mod words;

pub use bijections::{CyclicUnimodalPermutation, ItinerarySymbolic, Symbol};
pub use error::{Error, Result};
pub use gf2::{Gf2Poly, Gf2nElement, Gf2nField, NormalBasis};
pub use gleason::{Angle, CorrespondenceRow, HyperbolicCenter, IntPoly};
pub use shiftdyn::{Orbit, PmSequence};
pub use words::{BitString, InversionClass, Necklace, NecklaceSet, Sign, SignedBitString};
