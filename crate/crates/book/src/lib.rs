//! Mirror of the guide in ../../book: each chapter is included as module
//! docs, so every Rust block in the book runs as a doc-test and the guide
//! cannot drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}

#[doc = include_str!("../../../book/src/projective-spaces.md")]
pub mod projective_spaces {}

#[doc = include_str!("../../../book/src/linear-sets.md")]
pub mod linear_sets {}

#[doc = include_str!("../../../book/src/constructions.md")]
pub mod constructions {}

#[doc = include_str!("../../../book/src/point-sets.md")]
pub mod point_sets {}

#[doc = include_str!("../../../book/src/hamming-codes.md")]
pub mod hamming_codes {}

#[doc = include_str!("../../../book/src/rank-codes.md")]
pub mod rank_codes {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
