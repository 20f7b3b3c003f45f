use crate::error::Result;
use crate::linalg::{op_norm, CertifiedNilpotent, ComplexMatrix, SchurForm};

/// Certified nilpotent together with its measured distance to a target.
#[derive(Clone, Debug, PartialEq)]
pub struct NilWitness {
    nilpotent: CertifiedNilpotent,
    defect: f64,
}

impl NilWitness {
    /// Measures `‖target − nilpotent‖`.
    pub fn against(target: &ComplexMatrix, nilpotent: CertifiedNilpotent) -> Result<Self> {
        target.check_same_dim(nilpotent.materialized())?;
        let defect = op_norm(&(target - nilpotent.materialized()));
        Ok(Self { nilpotent, defect })
    }

    /// For defects measured by a structured operator equal to `target − nilpotent`.
    pub(crate) fn with_defect(nilpotent: CertifiedNilpotent, defect: f64) -> Self {
        Self { nilpotent, defect }
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn nilpotent(&self) -> &CertifiedNilpotent {
        &self.nilpotent
    }

    pub fn form(&self) -> &SchurForm {
        self.nilpotent.form()
    }

    pub fn materialized(&self) -> &ComplexMatrix {
        self.nilpotent.materialized()
    }

    pub fn into_nilpotent(self) -> CertifiedNilpotent {
        self.nilpotent
    }
}
