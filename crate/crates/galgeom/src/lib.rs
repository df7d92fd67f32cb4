//! Exact computational engine for finite projective geometry over field towers
//! GF(q) ⊆ GF(q^n): linear sets and their weight functions, maximum h-scattered
//! sets, cones and two affine-extension constructions, hyperovals, KM-arcs and
//! hypercylinders, plus the Hamming-metric and rank-metric few-weight codes these
//! point sets define.
//!
//! Everything is enumerated exactly at desk scale — no floating point, no
//! sampling shortcuts for the headline claims.  Out-of-scope parameters are
//! rejected with hard size-guard errors rather than approximated.

pub mod error;
pub mod galois;
pub mod linalg;
pub mod pg;
pub mod linset;
pub mod constructions;
pub mod psets;
pub mod hamming;
pub mod rank;

pub use error::{Error, Result};
