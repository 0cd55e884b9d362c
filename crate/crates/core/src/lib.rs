//! Exact optimization over union-closed set families.
//!
//! The crate computes the extremal values `f(n,a)` (most sets in a union-closed
//! family on `n` elements whose degree is at most `a`) and `g(n,m)` (smallest
//! possible degree of a union-closed family with exactly `m` sets), together
//! with the variants `f_t`/`g_t` that additionally require every element to be
//! the difference of a non-trivial pair of twin sets.
//!
//! * [`family`] holds the set-family value types and the structural transforms.
//! * [`model`] builds the explicit integer-program constraint systems.
//! * [`solver`] runs the exact branch-and-bound search and a brute-force oracle.
//! * [`lp`] writes constraint systems in LP text format and reads them back.
//! * [`verify`] computes value grids and checks them against reference tables
//!   and the structural properties of `f` and `g`.

pub mod error;
pub mod family;
pub mod lp;
pub mod model;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use family::{Family, FrequencyVector, SetMask, TwinPair};
pub use model::{ConstraintSystem, ModelInstance, ModelKind};
pub use solver::{SearchBudget, SolveOutcome, SolveStatus};
