//! Workbench for quantum propositional logic and hidden-variable models.
//!
//! - [`hilbert`]: states, projectors, Born rule, collapse
//! - [`lattice`]: subspace meet, join and orthocomplement, lattice law checkers
//! - [`events`]: finite event algebra with explicit complement universes
//! - [`stats`]: sequential measurement tables and their defects
//! - [`hidden`]: dispersion-free mixtures with context-dependent kernels
//! - [`assignment`]: noncontextual {0,1} assignment search over ray families
//! - [`random`]: seeded generators for property runs

pub mod assignment;
pub mod error;
pub mod events;
pub mod hidden;
pub mod hilbert;
pub mod lattice;
pub mod numeric;
pub mod random;
pub mod stats;

pub use error::{Error, Result};
pub use num_complex::Complex64;
