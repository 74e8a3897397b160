//! Free products of families of finite groups, checked at desk scale.
//!
//! The crate computes with finite groups given by Cayley tables, finite
//! abelian groups in invariant-factor form, and finitely described families
//! `(G_t, U_t)` over the one-point compactification of a discrete index set.
//! On top of that sit the abelianization and cohomology formulas for free
//! products whose tail factors are pinned to the subgroups `U_t`, and
//! brute-force oracles that check them on small instances.

pub mod ab;
pub mod checks;
pub mod coh;
pub mod corpus;
pub mod error;
pub mod family;
pub mod freeprod;
pub mod grp;
pub mod input;
pub mod report;
pub mod topo;

pub use error::{Error, Result};
