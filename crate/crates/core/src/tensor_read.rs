//! Truncated infinite tensor products `⊗ S_n` anchored at unit vectors `ξ_n`,
//! and polynomial-valued matrices modelling functions on `(0, 1]` with values
//! in a nilpotent algebra.

use crate::error::{Error, Result};
use crate::kahan::build_kahan;
use crate::linalg::{op_norm, CertifiedNilpotent, ComplexMatrix};
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Largest truncation dimension that is materialized.
pub const MAX_TRUNCATION_DIM: usize = 4096;
/// Largest polynomial degree in exact cone arithmetic.
pub const POLY_DEGREE_CAP: usize = 64;
pub const ANCHOR_TOL: f64 = 1e-9;

/// What fills the levels after the stem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailRule {
    /// The positive Kahan matrix `A_d`, which fixes its anchor.
    #[serde(rename = "tail_A")]
    Positive,
    /// The nilpotent witness `(Q_d / ‖H_d‖)²` that approximates `A_d`.
    #[serde(rename = "tail_M")]
    Nilpotent,
}

#[derive(Clone, Debug)]
pub struct TensorLevel {
    pub factor: ComplexMatrix,
    /// Unit top eigenvector of `A_d` for this level's dimension `d`.
    pub anchor: Vec<Complex64>,
    pub in_stem: bool,
    /// `‖A_d − M_d‖` for tail levels of nilpotent type.
    pub tail_defect: Option<f64>,
    /// Structural nilpotency index of a nilpotent tail factor.
    pub tail_index: Option<usize>,
}

/// `S_1 ⊗ S_2 ⊗ ⋯` with the first factors given and the rest from Kahan data.
#[derive(Clone, Debug)]
pub struct TensorFamily {
    levels: Vec<TensorLevel>,
    tail: TailRule,
    stem_len: usize,
}

/// Unit eigenvector of `A_d` for the eigenvalue 1 (ties to the first index,
/// sign fixed so the largest-magnitude component is positive).
pub fn anchor_vector(d: usize) -> Result<Vec<Complex64>> {
    if d == 0 {
        return Err(Error::Empty);
    }
    if d == 1 {
        return Ok(vec![Complex64::new(1.0, 0.0)]);
    }
    let pack = build_kahan(d)?;
    let eig = pack.h_eigen()?;
    let vectors = eig.vectors.expect("vectors requested");
    let top = eig.values.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let idx = eig.values.iter().position(|l| (l.abs() - top).abs() <= 1e-12 * top.max(1.0)).expect("nonempty spectrum");
    let mut v = vectors.column(idx);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let lead = v.iter().copied().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
    let s = lead.signum() / norm;
    v.iter_mut().for_each(|x| *x *= s);
    Ok(v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
}

impl TensorFamily {
    pub fn new(stem: Vec<ComplexMatrix>, tail: TailRule, dims_schedule: &[usize]) -> Result<Self> {
        let stem_len = stem.len();
        let mut levels = Vec::with_capacity(stem_len + dims_schedule.len());
        for s in stem {
            levels.push(TensorLevel {
                anchor: anchor_vector(s.dim())?,
                factor: s,
                in_stem: true,
                tail_defect: None,
                tail_index: None,
            });
        }
        for &d in dims_schedule {
            if d < 2 {
                return Err(Error::InvalidArgument(format!("tail levels need Kahan order ≥ 2, got {d}")));
            }
            let pack = build_kahan(d)?;
            let level = match tail {
                TailRule::Positive => TensorLevel {
                    factor: pack.a(),
                    anchor: anchor_vector(d)?,
                    in_stem: false,
                    tail_defect: None,
                    tail_index: None,
                },
                TailRule::Nilpotent => {
                    let w = pack.nil_witness()?;
                    TensorLevel {
                        factor: w.materialized().clone(),
                        anchor: anchor_vector(d)?,
                        in_stem: false,
                        tail_defect: Some(w.defect()),
                        tail_index: Some(w.nilpotent().structural_index()),
                    }
                }
            };
            levels.push(level);
        }
        Ok(Self { levels, tail, stem_len })
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    pub fn stem_len(&self) -> usize {
        self.stem_len
    }

    pub fn levels(&self) -> &[TensorLevel] {
        &self.levels
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.factor.dim()).collect()
    }

    fn check_depth(&self, k: usize) -> Result<()> {
        if k < self.stem_len.max(1) || k > self.levels.len() {
            return Err(Error::InvalidArgument(format!(
                "truncation depth {k} outside {}..={}",
                self.stem_len.max(1),
                self.levels.len()
            )));
        }
        let dim: usize = self.levels[..k].iter().map(|l| l.factor.dim()).product();
        if dim > MAX_TRUNCATION_DIM {
            return Err(Error::InvalidArgument(format!("truncation dimension {dim} exceeds {MAX_TRUNCATION_DIM}")));
        }
        Ok(())
    }

    /// `S_1 ⊗ ⋯ ⊗ S_K`.
    pub fn truncate(&self, k: usize) -> Result<ComplexMatrix> {
        self.check_depth(k)?;
        let mut out = self.levels[0].factor.clone();
        for l in &self.levels[1..k] {
            out = out.kron(&l.factor);
        }
        Ok(out)
    }

    /// `Π_{n≤K} max(1, ‖S_n‖)`.
    pub fn norm_constant(&self, k: usize) -> f64 {
        self.levels[..k].iter().map(|l| op_norm(&l.factor).max(1.0)).product()
    }

    /// `max_n ‖A_n ξ_n − ξ_n‖` over the first `k` levels with Kahan order ≥ 2.
    pub fn anchor_residual(&self, k: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for l in &self.levels[..k] {
            let d = l.factor.dim();
            if d < 2 {
                continue;
            }
            let a = build_kahan(d)?.a();
            let av = a.apply(&l.anchor);
            worst = worst.max(av.iter().zip(&l.anchor).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt());
        }
        Ok(worst)
    }

    /// `‖(I ⊗ ξ_{K+1})ᴴ T_{K+1} (I ⊗ ξ_{K+1}) − T_K‖`.
    pub fn phi_residual(&self, k: usize) -> Result<f64> {
        let big = self.truncate(k + 1)?;
        let small = self.truncate(k)?;
        let xi = &self.levels[k].anchor;
        let d = xi.len();
        let n = small.dim();
        let compressed = ComplexMatrix::from_fn(n, |i, j| {
            let mut acc = Complex64::default();
            for a in 0..d {
                for b in 0..d {
                    acc += xi[a].conj() * big[(i * d + a, j * d + b)] * xi[b];
                }
            }
            acc
        });
        Ok(op_norm(&(&compressed - &small)))
    }

    /// Partial sums of `‖A_n − M_n‖` over nilpotent tail levels up to `k`.
    pub fn tail_defect_partial_sums(&self, k: usize) -> Vec<f64> {
        let mut acc = 0.0;
        self.levels[..k]
            .iter()
            .filter_map(|l| l.tail_defect)
            .map(|d| {
                acc += d;
                acc
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TensorApprox {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `‖⊗S − ⊗R‖ ≤ C_S·C_R·Σ‖S_n − R_n‖` at depth `k`.
pub fn tensorapprox_check(fam_s: &TensorFamily, fam_r: &TensorFamily, k: usize) -> Result<TensorApprox> {
    fam_s.check_depth(k)?;
    fam_r.check_depth(k)?;
    for (a, b) in fam_s.levels[..k].iter().zip(&fam_r.levels[..k]) {
        a.factor.check_same_dim(&b.factor)?;
    }
    let lhs = op_norm(&(&fam_s.truncate(k)? - &fam_r.truncate(k)?));
    let sum: f64 =
        fam_s.levels[..k].iter().zip(&fam_r.levels[..k]).map(|(a, b)| op_norm(&(&a.factor - &b.factor))).sum();
    let rhs = fam_s.norm_constant(k) * fam_r.norm_constant(k) * sum;
    Ok(TensorApprox { lhs, rhs, holds: lhs <= rhs + 1e-9 })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductVanish {
    /// Nilpotency index of the first shared nilpotent tail factor.
    pub tail_index: usize,
    pub products_checked: usize,
    /// Largest `‖Π T‖ / Π‖T‖` over the checked products of length `ell`.
    pub max_relative_norm: f64,
    pub vanishes: bool,
    /// Same ratio for a product of length `ell − 1`, showing the length is needed.
    pub shorter_witness: Option<f64>,
}

/// Every product of `ell` truncations (all selections when there are at most
/// 256, otherwise the selections indexed by a fixed stride) vanishes when
/// `ell` reaches the nilpotency index of the shared tail factor.
pub fn product_vanish_check(fams: &[TensorFamily], k: usize, ell: usize) -> Result<ProductVanish> {
    let first = fams.first().ok_or(Error::Empty)?;
    if ell == 0 {
        return Err(Error::InvalidArgument("product length must be positive".into()));
    }
    let dims = first.dims();
    for f in fams {
        if f.tail != TailRule::Nilpotent || f.dims() != dims {
            return Err(Error::InvalidArgument("families must share dimensions and a nilpotent tail".into()));
        }
    }
    let tail_level = first.stem_len;
    if tail_level >= k {
        return Err(Error::InvalidArgument("truncation depth must include a tail level".into()));
    }
    let tail_index = first.levels[tail_level].tail_index.expect("nilpotent tail level");
    let truncs = fams.iter().map(|f| f.truncate(k)).collect::<Result<Vec<_>>>()?;
    let norms: Vec<f64> = truncs.iter().map(op_norm).collect();

    let ratio = |sel: &[usize]| -> f64 {
        let mut prod = truncs[sel[0]].clone();
        for &s in &sel[1..] {
            prod = &prod * &truncs[s];
        }
        let scale: f64 = sel.iter().map(|&s| norms[s]).product();
        if scale == 0.0 {
            0.0
        } else {
            op_norm(&prod) / scale
        }
    };
    let total = fams.len().checked_pow(ell as u32).unwrap_or(usize::MAX);
    let count = total.min(256);
    let stride = if total <= 256 { 1 } else { total / 256 };
    let mut worst: f64 = 0.0;
    for c in 0..count {
        let mut code = c * stride;
        let sel: Vec<usize> = (0..ell)
            .map(|_| {
                let s = code % fams.len();
                code /= fams.len();
                s
            })
            .collect();
        worst = worst.max(ratio(&sel));
    }
    let shorter_witness = (ell > 1).then(|| ratio(&vec![0; ell - 1]));
    Ok(ProductVanish {
        tail_index,
        products_checked: count,
        max_relative_norm: worst,
        vanishes: ell >= tail_index && worst <= 1e-9,
        shorter_witness,
    })
}

type Exact = Complex<BigRational>;

fn exact_zero() -> Exact {
    Complex::new(BigRational::zero(), BigRational::zero())
}

/// Exact rational value of a finite `f64`.
pub fn exact_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_f64(x).ok_or_else(|| Error::InvalidArgument(format!("{x} has no exact rational value")))
}

fn exact_complex(z: Complex64) -> Result<Exact> {
    Ok(Complex::new(exact_from_f64(z.re)?, exact_from_f64(z.im)?))
}

/// Matrix whose entries are polynomials in `t` with zero constant term and
/// exact complex rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    dim: usize,
    /// Row-major entries; `entries[i][d]` is the coefficient of `t^(d+1)`.
    entries: Vec<Vec<Exact>>,
}

impl PolyMatrix {
    pub fn zero(dim: usize) -> Self {
        Self { dim, entries: vec![Vec::new(); dim * dim] }
    }

    /// `f(t)·N` where `f(t) = Σ coeffs[d]·t^(d+1)`; entries of `N` are converted exactly.
    pub fn scalar_times(coeffs: &[Complex64], n: &ComplexMatrix) -> Result<Self> {
        if coeffs.len() > POLY_DEGREE_CAP {
            return Err(Error::PolyDegreeCap { degree: coeffs.len(), cap: POLY_DEGREE_CAP });
        }
        let f = coeffs.iter().map(|&c| exact_complex(c)).collect::<Result<Vec<_>>>()?;
        let mut out = Self::zero(n.dim());
        for (slot, &x) in out.entries.iter_mut().zip(n.as_slice()) {
            let x = exact_complex(x)?;
            *slot = f.iter().map(|c| c * &x).collect();
            trim(slot);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.entries.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Vec::is_empty)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| {
                let mut out: Vec<Exact> = (0..a.len().max(b.len()))
                    .map(|d| {
                        let x = a.get(d).cloned().unwrap_or_else(exact_zero);
                        let y = b.get(d).cloned().unwrap_or_else(exact_zero);
                        x + y
                    })
                    .collect();
                trim(&mut out);
                out
            })
            .collect();
        Ok(Self { dim: self.dim, entries })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let n = self.dim;
        let degree = self.degree() + other.degree();
        if degree > POLY_DEGREE_CAP {
            return Err(Error::PolyDegreeCap { degree, cap: POLY_DEGREE_CAP });
        }
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: Vec<Exact> = Vec::new();
                for k in 0..n {
                    let (a, b) = (&self.entries[i * n + k], &other.entries[k * n + j]);
                    if a.is_empty() || b.is_empty() {
                        continue;
                    }
                    // t^(p+1)·t^(q+1) = t^(p+q+2), stored at index p+q+1.
                    if acc.len() < a.len() + b.len() {
                        acc.resize(a.len() + b.len(), exact_zero());
                    }
                    for (p, x) in a.iter().enumerate() {
                        for (q, y) in b.iter().enumerate() {
                            acc[p + q + 1] = &acc[p + q + 1] + x * y;
                        }
                    }
                }
                trim(&mut acc);
                out.entries[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, ell: usize) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidArgument("power must be positive".into()));
        }
        let mut out = self.clone();
        for _ in 1..ell {
            out = out.mul(self)?;
        }
        Ok(out)
    }
}

fn trim(v: &mut Vec<Exact>) {
    while v.last().is_some_and(|c| c.re.is_zero() && c.im.is_zero()) {
        v.pop();
    }
}

/// Whether `elem^ell` is exactly the zero polynomial matrix.
pub fn cone_check(elem: &PolyMatrix, ell: usize) -> Result<bool> {
    Ok(elem.pow(ell)?.is_zero())
}

/// Nilpotent tail factor of order `d` as a certified nilpotent.
pub fn nilpotent_tail(d: usize) -> Result<CertifiedNilpotent> {
    Ok(build_kahan(d)?.nil_witness()?.into_nilpotent())
}

/// Exact integer, for tests that build rational fixtures.
pub fn exact_int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn jordan2() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![vec![c(0.0), c(1.0)], vec![c(0.0), c(0.0)]]).unwrap()
    }

    #[test]
    fn truncation_examples() {
        let fam = TensorFamily::new(vec![ComplexMatrix::identity(2)], TailRule::Positive, &[3]).unwrap();
        assert_eq!(fam.truncate(1).unwrap(), ComplexMatrix::identity(2));
        assert_eq!(fam.truncate(2).unwrap().dim(), 6);
        assert!(fam.phi_residual(1).unwrap() < 1e-9);
        assert!(fam.anchor_residual(2).unwrap() < ANCHOR_TOL);
        assert!(fam.truncate(3).is_err());
    }

    #[test]
    fn anchors_are_fixed_unit_vectors() {
        for d in [2, 3, 5, 16, 64] {
            let xi = anchor_vector(d).unwrap();
            let norm: f64 = xi.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            let a = build_kahan(d).unwrap().a();
            let r: f64 = a.apply(&xi).iter().zip(&xi).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
            assert!(r < ANCHOR_TOL, "d = {d}: {r}");
        }
    }

    #[test]
    fn identical_families_have_zero_gap() {
        let fam = TensorFamily::new(vec![jordan2()], TailRule::Positive, &[3]).unwrap();
        let r = tensorapprox_check(&fam, &fam, 2).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn nilpotent_tail_kills_products() {
        let fam = TensorFamily::new(vec![ComplexMatrix::identity(2)], TailRule::Nilpotent, &[3]).unwrap();
        let r = product_vanish_check(std::slice::from_ref(&fam), 2, 2).unwrap();
        assert_eq!(r.tail_index, 2);
        assert!(r.vanishes);
        assert!(r.shorter_witness.unwrap() > 0.1);
    }

    #[test]
    fn cone_examples() {
        let e = PolyMatrix::scalar_times(&[c(1.0)], &jordan2()).unwrap();
        assert!(cone_check(&e, 2).unwrap());
        assert!(!cone_check(&e, 1).unwrap());
        let id = PolyMatrix::scalar_times(&[c(1.0)], &ComplexMatrix::identity(2)).unwrap();
        for ell in 1..5 {
            assert!(!cone_check(&id, ell).unwrap());
        }
        let high = PolyMatrix::scalar_times(&vec![c(1.0); 40], &ComplexMatrix::identity(2)).unwrap();
        assert!(matches!(high.pow(2), Err(Error::PolyDegreeCap { .. })));
    }

    #[test]
    fn exact_conversion_round_trips() {
        let x = 0.1f64;
        let r = exact_from_f64(x).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(3602879701896397u64), BigInt::from(36028797018963968u64)));
        assert_eq!(exact_int(3), BigRational::from_integer(BigInt::from(3)));
    }
}
