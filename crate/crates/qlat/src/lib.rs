//! Numerical toolkit for quantum probability on the subspace lattice of a
//! finite-dimensional Hilbert space: join/meet/orthocomplement, quantum
//! Boole / Chung-Erdos / Frechet inequalities with their correction operator,
//! CHSH subspace families and violation search, Schmidt rank and minimum
//! subspace rank, projective and coherent-POVM measurement simulation with
//! rank-reduction bounds.

pub mod bipartite;
pub mod chsh;
pub mod cli;
pub mod error;
pub mod exec;
pub mod hilbert;
pub mod lattice;
pub mod measurement;
pub mod phasespace;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
pub use hilbert::{ComplexMatrix, ComplexVector, Projector, StateVector, Subspace, Tolerances};
