//! Exact extremal-ray enumeration for the cone of p-standardized submodular
//! functions.
//!
//! The crate builds the cone's inequality matrix for a base set of size
//! `n`, enumerates extremal rays with the Double Description method, and
//! reduces ray sets modulo the `2·n!` symmetries of the cone. For large `n`
//! it offers adjacency decomposition over orbit representatives and simple
//! population estimates.

pub mod bits;
pub mod dd;
pub mod error;
pub mod int;
pub mod io;
pub mod ledger;
pub mod linalg;
pub mod model;
pub mod neighbor;
pub mod order;
pub mod ray;
pub mod stats;
pub mod symmetry;

pub use dd::{run_dd, AdjacencyTest, DdOptions, DdRun, DdState, RunStatus};
pub use error::{Error, Result};
pub use int::{BigInt, Int};
pub use model::{Cone, ConeSpec, Triplet};
pub use order::{InsertionOrder, OrderKind};
pub use ray::Ray;
