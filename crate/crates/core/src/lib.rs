//! Exact finite-scale machinery for multiple mixing of abelian group actions:
//! groups and homomorphisms, cylinder measures on Bernoulli and Ledrappier
//! shifts, Σ_m / IP largeness certificates and Ramsey-type limit extraction.

pub mod combinatorics;
pub mod error;
pub mod exact;
pub mod gf2;
pub mod group;
pub mod largeness;
pub mod ramsey;
pub mod systems;

pub use error::{Error, Result};
pub use exact::{format_ratio, parse_ratio, ExactMeasure};
pub use group::{FolnerFamily, FolnerKind, GroupCtx, GroupElement, GroupKind, Homomorphism};
pub use ramsey::SimplexArray;
pub use systems::{CylinderPattern, System};
