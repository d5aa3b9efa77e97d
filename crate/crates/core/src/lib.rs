//! Finite groups as Cayley tables, finitely presented groups via coset
//! enumeration, internal actions and crossed modules, Higgins/Huq commutators,
//! the non-abelian tensor product with its crossed-square and cat²-group
//! machinery, and the exact-rational Lie counterpart of the tensor.
//!
//! Everything is computed over explicit finite carriers: groups are
//! multiplication tables, Lie algebras are structure constants over the
//! rationals. All verifiers are exhaustive and exact; nothing is sampled
//! or approximated.

pub mod action;
pub mod commutator;
pub mod double;
pub mod fp;
pub mod group;
pub mod lie;
pub mod limits;
pub mod session;
pub mod square;
pub mod tensor;
pub mod weak;

pub use group::{FiniteGroup, Group, GroupError, GroupHom, Isomorphism, Subgroup};
