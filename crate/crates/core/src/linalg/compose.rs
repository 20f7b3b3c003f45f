//! Structural composition of matrices.

use super::matrix::ComplexMatrix;
use super::norm::op_norm;
use crate::error::{Error, Result};

/// Accepted deviation `‖UᴴU − I‖` for a conjugator.
pub const UNITARY_TOL: f64 = 1e-9;

pub enum Composition<'a> {
    DirectSum(&'a [&'a ComplexMatrix]),
    Kron(&'a ComplexMatrix, &'a ComplexMatrix),
    /// `U M Uᴴ`
    Conjugate {
        unitary: &'a ComplexMatrix,
        m: &'a ComplexMatrix,
    },
}

pub fn compose(kind: Composition<'_>) -> Result<ComplexMatrix> {
    match kind {
        Composition::DirectSum(blocks) => ComplexMatrix::direct_sum(blocks),
        Composition::Kron(a, b) => Ok(a.kron(b)),
        Composition::Conjugate { unitary, m } => conjugate(unitary, m),
    }
}

pub fn conjugate(u: &ComplexMatrix, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    u.check_same_dim(m)?;
    let defect = op_norm(&(&(&u.adjoint() * u) - &ComplexMatrix::identity(u.dim())));
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    Ok(&(u * m) * &u.adjoint())
}
