//! Finite-matrix laboratory for approximating normal matrices by nilpotent ones.
//!
//! Modules are layered: [`linalg`] supplies dense kernels, [`kahan`] the
//! log-weighted Jordan constructions, [`nil_distance`] distance brackets,
//! [`boxes`] the spectral peeling planner, [`uhf_tower`] direct-limit towers,
//! [`af_obstructions`] the trace and degree obstructions, and [`tensor_read`]
//! truncated tensor families.

pub mod af_obstructions;
pub mod boxes;
pub mod error;
pub mod kahan;
pub mod linalg;
pub mod nil_distance;
pub mod tensor_read;
pub mod uhf_tower;

pub use boxes::{BoxSet, GridBox, PairWitness, Plan};
pub use error::{Error, Result};
pub use kahan::KahanPack;
pub use linalg::{CertifiedNilpotent, ComplexMatrix, Polynomial, RealMatrix, SchurForm, Spectrum};
pub use nil_distance::NilWitness;
pub use num_complex::Complex64;
pub use uhf_tower::{MatchingResult, TowerLevel};
