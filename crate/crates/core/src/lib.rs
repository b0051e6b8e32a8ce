//! Finite-dimensional symplectic phase spaces and their quantization.
//!
//! The crate is organized bottom-up:
//!
//! * [`phase_space`]: coordinate frames with physical units, antisymmetric
//!   bilinear forms, Hamiltonian generators, and Darboux reduction.
//! * [`complexification`]: compatible positive complex structures `J`,
//!   their construction from the dynamics, mode bases, and the induced
//!   Hermitian inner product.
//! * [`fock`]: occupation-number bases, ladder operators, field operators,
//!   second quantization, vacuum correlation functions.
//! * [`catalog`]: named builtin scenarios, their reference matrices, and
//!   scenario (de)serialization.
//! * [`equivalence`]: unitary intertwiners between two quantizations of the
//!   same dynamics, correlation comparisons, and the naive-vs-correct
//!   Hamiltonian demonstration.
//! * [`sample`]: seeded vector sampling shared by checks and tests.

pub mod catalog;
pub mod complexification;
pub mod equivalence;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod phase_space;
pub mod sample;

pub use error::{Error, Result};

pub use catalog::Scenario;
pub use complexification::{ComplexStructure, ComplexifiedSpace};
pub use equivalence::Intertwiner;
pub use fock::{FockRep, OccupationBasis};
pub use phase_space::{CoordinateFrame, Dimension, LinearMap, SymplecticForm};

/// Tolerance for exact-arithmetic matrix identities (catalog relations,
/// transported structures, unitarity of small matrices).
pub const TOL_MATRIX: f64 = 1e-10;

/// Relative rank cutoff: a form is degenerate when
/// `sigma_min < TOL_RANK * sigma_max`.
pub const TOL_RANK: f64 = 1e-12;

/// Tolerance for relations between catalog rows, which hold in exact
/// arithmetic and involve only a handful of multiplications.
pub const TOL_RELATION: f64 = 1e-12;

/// Tolerance for truncated Fock-space identities (intertwining relations,
/// correlation matching, spectra).
pub const TOL_FOCK: f64 = 1e-9;

/// Default seed for reproducible vector sampling.
pub const DEFAULT_SEED: u64 = 42;

/// Default occupation cutoff for builtin scenarios.
pub const DEFAULT_CUTOFF: usize = 6;
