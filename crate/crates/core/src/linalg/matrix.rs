use super::scalar::{axpy, Scalar};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

/// Dense square matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

pub type ComplexMatrix = SquareMatrix<Complex64>;
pub type RealMatrix = SquareMatrix<f64>;

impl<T: Scalar> SquareMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![T::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = T::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Validates shape and finiteness.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare { rows: dim, cols: row.len() });
            }
            data.extend(row);
        }
        Self::from_row_major(dim, data)
    }

    pub fn from_row_major(dim: usize, data: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty);
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: pos / dim, col: pos % dim });
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        let d = self.dim;
        &mut self.data[i * d..(i + 1) * d]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.dim).map(|i| self.data[i * self.dim + j]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[T]) {
        for (i, &x) in v.iter().enumerate() {
            self.data[i * self.dim + j] = x;
        }
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.data[j * self.dim + i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.data[j * self.dim + i])
    }

    pub fn scaled(&self, s: T) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&v| v * s).collect() }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self.data[i * self.dim + i])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.abs_sq()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `y = M x`
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.dim];
        self.apply_into(x, &mut y);
        y
    }

    pub fn apply_into(&self, x: &[T], y: &mut [T]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).fold(T::zero(), |acc, (&a, &b)| acc + a * b);
        }
    }

    /// `y = Mᴴ x`
    pub fn apply_adjoint_into(&self, x: &[T], y: &mut [T]) {
        y.iter_mut().for_each(|v| *v = T::zero());
        for (i, &xi) in x.iter().enumerate() {
            if xi != T::zero() {
                for (yj, &a) in y.iter_mut().zip(self.row(i)) {
                    *yj += a.conj() * xi;
                }
            }
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let (row_a, out_row) = (self.row(i), &mut out.data[i * n..(i + 1) * n]);
            for (k, &a) in row_a.iter().enumerate() {
                if a != T::zero() {
                    axpy(a, &rhs.data[k * n..(k + 1) * n], out_row);
                }
            }
        }
        Ok(out)
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..=i {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).abs());
            }
        }
        worst
    }

    pub fn is_strictly_upper(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..=i).all(|j| self.data[i * n + j] == T::zero()))
    }

    pub fn is_upper(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..i).all(|j| self.data[i * n + j] == T::zero()))
    }

    /// Copy with every entry on or below the diagonal set to exact zero.
    pub fn strict_upper(&self) -> Self {
        Self::from_fn(self.dim, |i, j| if j > i { self.data[i * self.dim + j] } else { T::zero() })
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = (self.dim, rhs.dim);
        let n = a * b;
        let mut out = Self::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let s = self.data[i * a + j];
                if s == T::zero() {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * n + j * b + l] = s * rhs.data[k * b + l];
                    }
                }
            }
        }
        out
    }

    pub fn direct_sum(blocks: &[&Self]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Empty);
        }
        let n: usize = blocks.iter().map(|b| b.dim).sum();
        let mut out = Self::zeros(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.dim {
                out.data[(off + i) * n + off..(off + i) * n + off + b.dim].copy_from_slice(b.row(i));
            }
            off += b.dim;
        }
        Ok(out)
    }

    /// Principal submatrix on rows/columns `start..start + len`.
    pub fn block(&self, start: usize, len: usize) -> Self {
        Self::from_fn(len, |i, j| self.data[(start + i) * self.dim + start + j])
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        SquareMatrix { dim: self.dim, data: self.data.iter().map(|v| v.to_complex()).collect() }
    }
}

impl ComplexMatrix {
    /// Real parts, for matrices known to be real.
    pub fn real_part_entries(&self) -> RealMatrix {
        SquareMatrix { dim: self.dim, data: self.data.iter().map(|v| v.re).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|v| v.im == 0.0)
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Scalar> Add for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    fn add(self, rhs: Self) -> SquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix sum");
        SquareMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect() }
    }
}

impl<T: Scalar> Sub for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    fn sub(self, rhs: Self) -> SquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix difference");
        SquareMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect() }
    }
}

impl<T: Scalar> Mul for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    fn mul(self, rhs: Self) -> SquareMatrix<T> {
        self.matmul(rhs).expect("dimension mismatch in matrix product")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_ragged_and_nonfinite() {
        assert!(matches!(
            ComplexMatrix::from_rows(vec![vec![c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            RealMatrix::from_rows(vec![vec![1.0, f64::NAN], vec![0.0, 0.0]]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn kron_and_direct_sum_shapes() {
        let a = RealMatrix::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let i2 = RealMatrix::identity(2);
        let k = i2.kron(&a);
        assert_eq!(k.dim(), 4);
        assert_eq!(k[(2, 3)], 2.0);
        assert_eq!(k[(0, 2)], 0.0);
        let s = RealMatrix::direct_sum(&[&a, &RealMatrix::identity(3)]).unwrap();
        assert_eq!(s.dim(), 5);
        assert_eq!(s[(1, 0)], 3.0);
        assert_eq!(s[(4, 4)], 1.0);
        assert_eq!(s[(1, 2)], 0.0);
    }

    #[test]
    fn adjoint_apply_matches_explicit_adjoint() {
        let m = ComplexMatrix::from_fn(3, |i, j| c(i as f64 + 1.0, j as f64 - 1.0));
        let x = vec![c(1.0, 2.0), c(-1.0, 0.5), c(0.0, 1.0)];
        let mut y = vec![Complex64::default(); 3];
        m.apply_adjoint_into(&x, &mut y);
        let expect = m.adjoint().apply(&x);
        for (a, b) in y.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
