//! Nilpotent matrices carried in certified form.

use super::matrix::ComplexMatrix;
use super::schur::SchurForm;
use crate::error::{Error, Result};

/// `basis · core · basisᴴ` with a strictly upper triangular core, so the
/// matrix is nilpotent by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedNilpotent {
    form: SchurForm,
    identity_basis: bool,
    materialized: ComplexMatrix,
}

impl CertifiedNilpotent {
    /// Fails unless `form.core` is strictly upper triangular (exact zeros).
    pub fn new(form: SchurForm) -> Result<Self> {
        if !form.core.is_strictly_upper() {
            return Err(Error::InvalidArgument("nilpotent core must be strictly upper triangular".into()));
        }
        form.basis.check_same_dim(&form.core)?;
        let materialized = form.reconstruct();
        Ok(Self { form, identity_basis: false, materialized })
    }

    /// Strictly upper triangular matrix in the standard basis.
    pub fn from_core(core: ComplexMatrix) -> Result<Self> {
        if !core.is_strictly_upper() {
            return Err(Error::InvalidArgument("nilpotent core must be strictly upper triangular".into()));
        }
        let basis = ComplexMatrix::identity(core.dim());
        Ok(Self { materialized: core.clone(), form: SchurForm { basis, core }, identity_basis: true })
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_core(ComplexMatrix::zeros(dim)).expect("zero matrix is strictly upper")
    }

    pub fn form(&self) -> &SchurForm {
        &self.form
    }

    pub fn core(&self) -> &ComplexMatrix {
        &self.form.core
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.form.basis
    }

    pub fn materialized(&self) -> &ComplexMatrix {
        &self.materialized
    }

    pub fn dim(&self) -> usize {
        self.form.core.dim()
    }

    /// Smallest `k` with `coreᵏ = 0`, read off the sparsity pattern of the core
    /// (longest chain of nonzero entries plus one). Bounded by the dimension.
    pub fn structural_index(&self) -> usize {
        let core = &self.form.core;
        let n = core.dim();
        let zero = num_complex::Complex64::default();
        // longest[i]: longest path of nonzero entries starting at row i.
        let mut longest = vec![0usize; n];
        for i in (0..n).rev() {
            for j in i + 1..n {
                if core[(i, j)] != zero {
                    longest[i] = longest[i].max(longest[j] + 1);
                }
            }
        }
        longest.iter().copied().max().unwrap_or(0) + 1
    }

    /// New certified nilpotent with the same basis and `f(core)` as core; entries
    /// on and below the diagonal are forced to exact zero.
    pub fn map_core(&self, f: impl FnOnce(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let core = f(&self.form.core).strict_upper();
        if self.identity_basis {
            return Self::from_core(core).expect("strict upper part");
        }
        let form = SchurForm { basis: self.form.basis.clone(), core };
        let materialized = form.reconstruct();
        Self { form, identity_basis: false, materialized }
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(parts: &[&CertifiedNilpotent]) -> Result<Self> {
        let bases: Vec<&ComplexMatrix> = parts.iter().map(|p| &p.form.basis).collect();
        let cores: Vec<&ComplexMatrix> = parts.iter().map(|p| &p.form.core).collect();
        let mats: Vec<&ComplexMatrix> = parts.iter().map(|p| &p.materialized).collect();
        Ok(Self {
            form: SchurForm { basis: ComplexMatrix::direct_sum(&bases)?, core: ComplexMatrix::direct_sum(&cores)? },
            identity_basis: parts.iter().all(|p| p.identity_basis),
            materialized: ComplexMatrix::direct_sum(&mats)?,
        })
    }
}
