//! Polynomials vanishing at zero and their matrix evaluation.

use super::matrix::ComplexMatrix;
use super::nilpotent::CertifiedNilpotent;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `p(x) = Σ_{d≥1} coeffs[d]·x^d`; `coeffs[0]` is exactly zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Monomial coefficients starting at the constant term, which must be exactly zero.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        match coeffs.first() {
            None => coeffs.push(Complex64::default()),
            Some(c) if *c != Complex64::default() => return Err(Error::NonzeroConstant { constant: format!("{c}") }),
            _ => {}
        }
        while coeffs.len() > 1 && *coeffs.last().unwrap() == Complex64::default() {
            coeffs.pop();
        }
        Ok(Self { coeffs })
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![Complex64::default()] }
    }

    /// `p(x) = c·x`
    pub fn linear(c: Complex64) -> Self {
        Self::new(vec![Complex64::default(), c]).expect("constant term is zero")
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::default())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::default(), |acc, &c| acc * z + c)
    }

    pub fn eval_real(&self, t: f64) -> Complex64 {
        self.eval(Complex64::new(t, 0.0))
    }
}

/// Horner evaluation `p(M) = M(a₁I + M(a₂I + …))`.
pub fn apply_poly(p: &Polynomial, m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let c = p.coeffs();
    if p.degree() == 0 {
        return ComplexMatrix::zeros(n);
    }
    let mut acc = ComplexMatrix::identity(n).scaled(c[p.degree()]);
    for d in (1..p.degree()).rev() {
        acc = &(m * &acc) + &ComplexMatrix::identity(n).scaled(c[d]);
    }
    m * &acc
}

/// `p` applied to a certified nilpotent: the basis is kept and the core maps
/// to a strictly upper triangular core.
pub fn apply_poly_nilpotent(p: &Polynomial, w: &CertifiedNilpotent) -> CertifiedNilpotent {
    w.map_core(|core| apply_poly(p, core))
}
