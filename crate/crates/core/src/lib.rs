//! Finite loops given by Cayley tables.
//!
//! The crate validates tables, computes associators, nuclei, adjoint sets and
//! association probabilities exactly, checks the Moufang and CC association
//! bounds (43/64 and 7/8) together with the structural lemmas behind them,
//! and enumerates small loops up to isomorphism.

pub mod catalog;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod identities;
pub mod perm;
pub mod probability;
pub mod structure;
pub mod table;
pub mod theorems;

pub use error::{LoopError, Result};
pub use perm::Permutation;
pub use probability::ExactFraction;
pub use structure::ElementSet;
pub use table::{validate, Classification, Element, LoopTable, MagmaTable};
