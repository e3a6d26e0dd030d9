//! Multidimensional periodic Costas arrays over finite abelian groups.
//!
//! A periodic Costas array over a group G of order n assigns the residues
//! 0..n-2 bijectively to all grid positions except one (the star) so that for
//! every nonzero periodic shift h the value differences f(a+h) - f(a) mod n-1
//! are pairwise distinct. This crate provides:
//!
//! - group and grid arithmetic over arbitrary products of cyclic groups
//!   ([`grid`]);
//! - GF(p^m) primitive-polynomial tables ([`field`]) and the generalized
//!   Welch construction ([`welch`]);
//! - the array type with verifier, periodic autocorrelation and a canonical
//!   serialization ([`array`]);
//! - symmetry generators (value addition/multiplication, diagonal coordinate
//!   scalings, coordinate shears, translations) and orbit closure
//!   ([`symmetry`]);
//! - exhaustive backtracking enumeration with incremental pruning and
//!   deterministic work splitting ([`enumerator`]);
//! - an enumeration-versus-closure characterization check ([`compare`]).
//!
//! The `mpca` binary exposes all of this on the command line.

mod arith;
pub mod array;
pub mod compare;
pub mod enumerator;
pub mod error;
pub mod field;
pub mod grid;
pub mod symmetry;
pub mod welch;

pub use array::{CorrelationReport, PeriodicArray};
pub use enumerator::{SearchConfig, SearchStats};
pub use error::{Error, Result};
pub use field::{FieldSpec, FieldTable};
pub use grid::GroupSpec;
pub use symmetry::{GeneratorFamily, LinearMap, SymmetryOp};
