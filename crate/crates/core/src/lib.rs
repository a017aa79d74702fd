//! Ideal-structure calculator for crossed products `O_infinity x G` of the
//! Cuntz algebra by quasi-free actions of a second-countable abelian group.
//!
//! Everything is computed on the discrete dual side: the action is encoded by
//! a [`monoid::WeightSystem`] over a finitely generated abelian group, and the
//! gauge-invariant ideal lattice, primitive ideal space, Connes spectrum and
//! K-theory are read off combinatorially from that data.
//!
//! The crate is organised bottom-up:
//!
//! * [`abelian`]: exact arithmetic in finitely generated abelian groups
//!   (normal forms, orders, subgroups, quotients),
//! * [`monoid`]: the weight semigroup `sg`, membership certificates and the
//!   escape semigroup `sg1`,
//! * [`invariant`]: translation-invariant sets and invariant pairs, the
//!   boundary set `H_X`, level sets `X^(n)`, and finite enumeration,
//! * [`classify`]: the exactness condition on the weights, primeness, the
//!   ideal lattice, structure flags, Connes spectrum, K-theory and fibers,
//! * [`ypair`]: the circle-indexed primitive ideals that appear when the
//!   exactness condition fails, with the closed-set test for the primitive
//!   ideal space.

pub mod abelian;
pub mod classify;
pub mod error;
pub mod finite;
pub mod invariant;
pub mod monoid;
pub mod ypair;

pub use error::{Error, Result};

/// Resource limits shared by every operation that searches or enumerates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// Node budget for semigroup membership searches.
    pub search_budget: u64,
    /// Largest group order accepted by the enumeration operations.
    pub size_limit: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { search_budget: 1_000_000, size_limit: 20 }
    }
}

impl Options {
    pub fn with_budget(budget: u64) -> Self {
        Options { search_budget: budget, ..Options::default() }
    }
}
