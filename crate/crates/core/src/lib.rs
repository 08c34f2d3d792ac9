//! Finite-mode bosonic Bogoliubov theory.
//!
//! One-particle density matrices, Bogoliubov maps and their symplectic
//! diagonalization, quasi-free states, quadratic Hamiltonians, the
//! Bogoliubov energy functional and the Hartree theory of bosonic atoms,
//! together with a truncated Fock-space oracle for cross-checks.

pub mod atom;
pub mod coherent;
pub mod error;
pub mod fock;
pub mod json;
pub mod linalg;
pub mod onepdm;
pub mod quadratic;
pub mod quasifree;
pub mod sampling;
pub mod symplectic;

pub use atom::{GridConfig, HartreeSolution, MuTilde, QtProblem, RadialGrid, ScfOptions};
pub use coherent::{BogoliubovTrial, EnergyBreakdown, ManyBodyCoefficients};
pub use error::{Error, Result};
pub use fock::{FockSpace, Ladder, ManyBodyOperator, Sector, State, Tensor4};
pub use linalg::{CMat, CVec, C64};
pub use onepdm::OnePdm;
pub use quadratic::QuadraticHamiltonian;
pub use quasifree::{GenOp, QuasiFreeSpec, WickReport};
pub use symplectic::{BogoliubovMap, DiagonalizationResult};
