//! Finite quantum hypergroups built from twisted group Kac algebras.
//!
//! The pipeline runs bottom up:
//!
//! * [`group`]: finite groups as dense multiplication tables, abelian
//!   subgroups with their character tables, automorphisms and orbits.
//! * [`linalg`]: coefficient tensors over the group basis of `C(G)^{⊗k}`,
//!   dense linear maps, positivity and Wedderburn block analysis.
//! * [`kac`]: the cocommutative Kac structure on `C(G)` and an axiom verifier
//!   for arbitrary (twisted) bundles.
//! * [`twist`]: cocycle lifting, classification, twisting and automorphism
//!   certification.
//! * [`hypergroup`]: conditional expectations, the induced coproduct on their
//!   range, and the quantum hypergroup verifier.
//! * [`catalog`]: named scenarios with expected outcomes, reports and
//!   serialization.
//!
//! Every element carries an `Arc` to its group, so elements from different
//! groups cannot be mixed silently.

// Index loops mirror the coefficient formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod error;
pub mod group;
pub mod hypergroup;
pub mod kac;
pub mod linalg;
pub mod report;
pub mod twist;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Default absolute tolerance on coefficients.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default seed for the randomized steps of the Wedderburn analysis.
pub const DEFAULT_SEED: u64 = 0x5e_ed0f_b10c;
