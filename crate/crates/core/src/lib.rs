//! A workbench for non-negative subtheories of qubit (and small qudit)
//! quasiprobability representations: exact linear-feasibility certification
//! of simultaneously non-negative basis sets, explicit frame construction
//! for the closed-form families, and simulation of the resulting classical
//! subtheories as ontic-permutation dynamics.

pub mod certifier;
pub mod error;
pub mod ontic_sim;
pub mod operator_core;
pub mod quasirep;
pub mod qubit_families;
pub mod qudit_tools;
pub mod sampling;
pub mod scalar;

pub use error::{QprError, Result};
pub use operator_core::{
    basis_from_bloch, bloch_to_density, density_to_bloch, overlap, rotation_unitary, BlochVector,
    HermitianOp, QubitBasis, QuditBasis, Unitary,
};
pub use quasirep::{
    structure_report, OnticDistribution, OnticLabel, OnticSpace, QuasiRep, Sign, StructureReport,
    SupportSet,
};
pub use scalar::{ArithMode, Rational};
