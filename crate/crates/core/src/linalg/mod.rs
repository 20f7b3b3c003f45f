//! Dense linear algebra with explicit tolerances.

pub mod cmat;
pub mod compose;
pub mod eigh;
pub mod matrix;
pub mod nilpotent;
pub mod norm;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod schur;
pub mod spectrum;
pub mod tridiag;

pub use cmat::{parse_cmat, write_cmat};
pub use compose::{compose, conjugate, Composition};
pub use eigh::{eigh, eigvalsh, HermitianEigen};
pub use matrix::{ComplexMatrix, RealMatrix, SquareMatrix};
pub use nilpotent::CertifiedNilpotent;
pub use norm::{op_norm, operator_norm, LinearOperator, NormEstimate};
pub use poly::{apply_poly, apply_poly_nilpotent, Polynomial};
pub use schur::{schur_form, SchurForm};
pub use spectrum::{check_normal, spectrum, spectrum_with_tol, SpectralPoint, Spectrum, DEFAULT_MERGE_TOL};
