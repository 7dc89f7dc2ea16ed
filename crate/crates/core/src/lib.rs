//! Finite Ehresmann semigroups: identity checking, the congruence `sigma`,
//! matching factorizations, labelled restriction graphs, the product
//! construction, cover graphs over generating sets, and premorphisms.

pub mod actions;
pub mod corpus;
pub mod cover;
pub mod error;
pub mod io;
pub mod relation;
pub mod product;
pub mod report;
pub mod resgraph;
pub mod semigroup;
pub mod semilattice;

pub use error::{Error, Result};
pub use relation::{BinaryRelation, RelationAlgebra};
pub use report::{Check, Outcome, Report, Verdict, Witness};
pub use semigroup::{Congruence, OpTableSemigroup, ProjectionSet, Side};
pub use semilattice::Semilattice;
