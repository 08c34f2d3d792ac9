//! Bosonic atoms: radial Hartree theory, the mean-field operator h_t and
//! the quadratic form q_t around the Hartree minimizer.
//!
//! Everything lives in the Z = 1 frame; the charge enters only through
//! the scaling in [`assembly`].

pub mod assembly;
pub mod banded;
pub mod grid;
pub mod hartree;
pub mod qform;

pub use assembly::{atom_energy_assembly, upper_bound_trial, RadialTrial};
pub use grid::{GridConfig, RadialGrid};
pub use hartree::{critical_t, hartree_energy, hartree_scf, HartreeSolution, ScfOptions};
pub use qform::{minimize_mu_tilde, mu_upper_bound, qt_value, BasisConfig, MuTilde, QtProblem, RadialMode};
