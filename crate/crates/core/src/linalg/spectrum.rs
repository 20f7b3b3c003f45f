//! Eigenvalue multisets.

use super::eigh::eigvalsh;
use super::matrix::ComplexMatrix;
use super::norm::op_norm;
use super::schur::schur_form;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const DEFAULT_MERGE_TOL: f64 = 1e-8;
/// Relative commutator bound `‖MMᴴ − MᴴM‖ ≤ NORMALITY_TOL·‖M‖²`.
pub const NORMALITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Finite multiset of complex numbers with pairwise distinct points.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Spectrum {
    points: Vec<SpectralPoint>,
}

impl Spectrum {
    /// Clusters values closer than `merge_tol` (single linkage, repeated until
    /// the cluster means are pairwise separated) and stores each cluster mean
    /// with its size. Points are ordered by real part, then imaginary part.
    pub fn from_values(values: &[Complex64], merge_tol: f64) -> Self {
        let mut clusters: Vec<(Complex64, usize)> = values.iter().map(|&v| (v, 1)).collect();
        loop {
            let merged = merge_pass(&clusters, merge_tol);
            let done = merged.len() == clusters.len();
            clusters = merged;
            if done {
                break;
            }
        }
        clusters.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
        Self {
            points: clusters.into_iter().map(|(value, multiplicity)| SpectralPoint { value, multiplicity }).collect(),
        }
    }

    /// Builds from points that are already distinct; zero multiplicities are dropped
    /// and repeated exact values are combined.
    pub fn from_points(points: impl IntoIterator<Item = (Complex64, usize)>) -> Self {
        let mut pts: Vec<SpectralPoint> = Vec::new();
        for (value, multiplicity) in points {
            if multiplicity == 0 {
                continue;
            }
            match pts.iter_mut().find(|p| p.value == value) {
                Some(p) => p.multiplicity += multiplicity,
                None => pts.push(SpectralPoint { value, multiplicity }),
            }
        }
        pts.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
        Self { points: pts }
    }

    pub fn points(&self) -> &[SpectralPoint] {
        &self.points
    }

    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    /// Every value repeated by its multiplicity, in point order.
    pub fn expand(&self) -> Vec<Complex64> {
        self.points.iter().flat_map(|p| std::iter::repeat_n(p.value, p.multiplicity)).collect()
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.points.iter().any(|p| (p.value - z).norm() <= tol)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.points.iter().fold(0.0, |m, p| m.max(p.value.norm()))
    }

    /// Multiset equality up to `tol`: each point of one is matched by a point
    /// of the other with equal multiplicity.
    pub fn approx_eq(&self, other: &Spectrum, tol: f64) -> bool {
        let a = Spectrum::from_values(&self.expand(), tol);
        let b = Spectrum::from_values(&other.expand(), tol);
        a.points.len() == b.points.len()
            && a.points
                .iter()
                .all(|p| b.points.iter().any(|q| q.multiplicity == p.multiplicity && (q.value - p.value).norm() <= tol))
    }

    /// Multiplies every multiplicity by `factor`.
    pub fn inflate(&self, factor: usize) -> Spectrum {
        Spectrum {
            points: self
                .points
                .iter()
                .map(|p| SpectralPoint { value: p.value, multiplicity: p.multiplicity * factor })
                .collect(),
        }
    }
}

fn merge_pass(clusters: &[(Complex64, usize)], tol: f64) -> Vec<(Complex64, usize)> {
    let n = clusters.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| clusters[a].0.re.total_cmp(&clusters[b].0.re));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if clusters[j].0.re - clusters[i].0.re > tol {
                break;
            }
            if (clusters[j].0 - clusters[i].0).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut sums: Vec<(Complex64, usize)> = vec![(Complex64::default(), 0); n];
    for (i, &(value, mult)) in clusters.iter().enumerate() {
        let r = find(&mut parent, i);
        sums[r].0 += value * mult as f64;
        sums[r].1 += mult;
    }
    sums.into_iter().filter(|s| s.1 > 0).map(|(s, m)| (s / m as f64, m)).collect()
}

/// `‖MMᴴ − MᴴM‖`
pub fn commutator_norm(m: &ComplexMatrix) -> f64 {
    let a = m.adjoint();
    op_norm(&(&(m * &a) - &(&a * m)))
}

pub fn check_normal(m: &ComplexMatrix) -> Result<()> {
    let comm = commutator_norm(m);
    let scale = op_norm(m);
    let allowed = NORMALITY_TOL * scale * scale;
    if comm > allowed {
        return Err(Error::NotNormal { commutator: comm, allowed });
    }
    Ok(())
}

/// Eigenvalues of `M` merged at the default tolerance.
pub fn spectrum(m: &ComplexMatrix, require_normal: bool) -> Result<Spectrum> {
    spectrum_with_tol(m, require_normal, DEFAULT_MERGE_TOL)
}

/// Hermitian inputs use the Hermitian solver; everything else reads the
/// diagonal of the Schur core.
pub fn spectrum_with_tol(m: &ComplexMatrix, require_normal: bool, merge_tol: f64) -> Result<Spectrum> {
    if require_normal {
        check_normal(m)?;
    }
    let values = eigenvalues(m)?;
    Ok(Spectrum::from_values(&values, merge_tol))
}

pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if m.hermitian_defect() == 0.0 {
        Ok(eigvalsh(m)?.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
    } else {
        Ok(schur_form(m)?.core.diagonal())
    }
}
