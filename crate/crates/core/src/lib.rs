//! Exact computations around Kac-Moody monoids.
//!
//! The crate is organised bottom-up: [`exact`] arithmetic, generalized Cartan
//! matrices and their realizations in [`cartan`], the Weyl group in [`weyl`],
//! faces of the Tits cone in [`face`], the Weyl monoid and its torus and
//! normalizer monoids in [`wmon`], saturated lattice monoids in [`toric`],
//! finite slices of highest-weight modules in [`ghat`], and the seeded
//! property suites behind `kmx verify` in [`verify`].

pub mod cartan;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod exact;
pub mod face;
pub mod ghat;
pub mod toric;
pub mod verify;
pub mod weyl;
pub mod wmon;

pub use cartan::{Gcm, RootDatum, Subset};
pub use error::{Error, Result};
