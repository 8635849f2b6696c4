//! Finite partial Boolean algebras and finite-dimensional partial C*-algebra
//! fragments.
//!
//! A partial Boolean algebra carries a reflexive, symmetric commeasurability
//! relation and Boolean operations that are only defined on commeasurable
//! pairs. Every finite one is the colimit of the diagram of its total Boolean
//! subalgebras; this crate computes that diagram, verifies the colimit
//! property on concrete cocones, and builds the surrounding constructions:
//! (co)products, equalizers, the tensor product, the Boolean reflection and
//! its Kochen-Specker detection, the external Bohrification frame, and the
//! projection bridge from commuting complex matrices.
//!
//! Elements are dense `usize` indices into an algebra; element sets are
//! [`ElemSet`] bitsets.

pub mod bohr;
pub mod cliques;
pub mod colimit;
pub mod construct;
pub mod corpus;
pub mod cstar;
pub mod error;
pub mod format;
pub mod iso;
pub mod morphism;
pub mod oml;
pub mod pasting;
pub mod pba;
pub mod poset;
pub mod report;
pub mod search;
pub mod stone;
pub mod tensor;

pub use error::{Error, Result};
pub use morphism::PbaMorphism;
pub use pba::{PartialBooleanAlgebra, PbaBuilder, ValidationReport, Violation};
pub use poset::SubalgebraPoset;

/// A set of element indices.
pub type ElemSet = fixedbitset::FixedBitSet;

/// Sorted element indices of a set, the canonical listing used in reports.
pub fn elems(set: &ElemSet) -> Vec<usize> {
    set.ones().collect()
}

/// Builds an [`ElemSet`] of capacity `n` from indices.
pub fn elem_set(n: usize, items: impl IntoIterator<Item = usize>) -> ElemSet {
    let mut s = ElemSet::with_capacity(n);
    for i in items {
        s.insert(i);
    }
    s
}
