//! Finite L-algebras given by operation tables.
//!
//! Tables keep the unit at index 0. The crate checks the axioms and the KL,
//! CKL and Hilbert subclasses, computes ideal lattices and prime spectra,
//! builds semidirect and symmetric semidirect products, evaluates the word
//! extension of the operation to the free monoid, and enumerates small
//! algebras up to isomorphism.

pub mod bitset;
pub mod canon;
pub mod classify;
pub mod error;
pub mod examples;
pub mod families;
pub mod ideals;
pub mod morphism;
pub mod order;
pub mod products;
pub mod suite;
pub mod table;
pub mod words;

pub use bitset::ElemSet;
pub use canon::{canonical_form, canonical_labelling, isomorphic};
pub use classify::{is_l_algebra, validate, ClassificationReport, Property};
pub use error::{LalgError, Result};
pub use morphism::{endomorphisms, Morphism};
pub use order::{downset, order_structure, upset, OrderStructure};
pub use table::AlgebraTable;
