//! Finite-depth towers of normal matrices along a UHF embedding chain.
//!
//! Level `k` has dimension `ℓ_k = (2m_k + 1)n_k + 1 + q_k` and the polar-grid
//! spectrum `{(j/m)e^{iπt/n}} ∪ {0}`. Passing from level `k` to `k + 1`
//! multiplies the dimension by `p·z`; the normal matrices are kept diagonal and
//! aligned by a bottleneck matching, so the increment is the matching cost.

pub mod matching;

pub use matching::{bottleneck_match, bottleneck_match_values, MatchingResult};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Spectrum, DEFAULT_MERGE_TOL};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

pub const MIN_FIRST_DIM: u64 = 11;

/// Dimension ratio `p·z` between consecutive levels, with the factorization given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub p: u64,
    pub z: u64,
}

impl Ratio {
    pub fn new(p: u64, z: u64) -> Result<Self> {
        if p < 2 || z < 2 {
            return Err(Error::InvalidArgument(format!("ratio factors must be at least 2, got {p}x{z}")));
        }
        Ok(Self { p, z })
    }

    pub fn value(self) -> u64 {
        self.p * self.z
    }
}

impl FromStr for Ratio {
    type Err = Error;

    /// Parses `"pxz"`, e.g. `"2x2"`.
    fn from_str(s: &str) -> Result<Self> {
        let (p, z) = s
            .split_once(['x', 'X', '*'])
            .ok_or_else(|| Error::InvalidArgument(format!("ratio {s:?} is not of the form pxz")))?;
        let parse = |t: &str| {
            t.trim().parse::<u64>().map_err(|_| Error::InvalidArgument(format!("ratio {s:?} has a non-integer factor")))
        };
        Ratio::new(parse(p)?, parse(z)?)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.p, self.z)
    }
}

/// Integer data of one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelShape {
    pub ell: u64,
    pub n: u64,
    pub m: u64,
    pub q: u64,
}

impl LevelShape {
    /// `(2m + 1)n + 1 + q == ell`
    pub fn identity_holds(&self) -> bool {
        (2 * self.m + 1) * self.n + 1 + self.q == self.ell
    }

    /// Bound `π/n + 1/m` on the pairing cost out of this level.
    pub fn pairing_bound(&self) -> f64 {
        PI / self.n as f64 + 1.0 / self.m as f64
    }
}

/// Level shapes for a first dimension `ell1` and the successive ratios:
/// `m₁ = 2`, `q₁ = (ℓ₁ − 1) mod 5`, then `n ← pn`, `m ← zm`,
/// `q ← (z − 1)pn + pz + pzq − 1`.
pub fn bookkeeping(ell1: u64, ratios: &[Ratio]) -> Result<Vec<LevelShape>> {
    if ell1 < MIN_FIRST_DIM {
        return Err(Error::InvalidArgument(format!("first dimension must be at least {MIN_FIRST_DIM}, got {ell1}")));
    }
    let q = (ell1 - 1) % 5;
    let mut cur = LevelShape { ell: ell1, n: (ell1 - 1 - q) / 5, m: 2, q };
    let mut out = vec![cur];
    for r in ratios {
        let (p, z) = (r.p, r.z);
        cur = LevelShape {
            ell: p * z * cur.ell,
            n: p * cur.n,
            m: z * cur.m,
            q: (z - 1) * p * cur.n + p * z + p * z * cur.q - 1,
        };
        debug_assert!(cur.identity_holds());
        out.push(cur);
    }
    Ok(out)
}

/// `{(j/m)e^{iπt/n} : t ∈ 1..=2n, j ∈ 1..=m}` with multiplicity 1 and zero with
/// multiplicity `n + 1 + q`.
pub fn polar_spectrum(n: u64, m: u64, q: u64) -> Result<Spectrum> {
    if n < 2 || m < 2 {
        return Err(Error::InvalidArgument(format!("polar grid needs n, m ≥ 2, got n = {n}, m = {m}")));
    }
    let mut points = vec![(Complex64::default(), (n + 1 + q) as usize)];
    for t in 1..=2 * n {
        for j in 1..=m {
            points.push((Complex64::from_polar(j as f64 / m as f64, PI * t as f64 / n as f64), 1));
        }
    }
    Ok(Spectrum::from_points(points))
}

/// One level of the tower; `diagonal` is the diagonal of the normal matrix.
#[derive(Clone, Debug, Serialize)]
pub struct TowerLevel {
    pub k: usize,
    pub shape: LevelShape,
    pub spec: Spectrum,
    pub diagonal: Vec<Complex64>,
    /// `‖N_k − ι(N_{k−1})‖`; `None` at the first level.
    pub increment: Option<f64>,
    /// Bottleneck cost between `σ(ι(N_{k−1}))` and the prescribed spectrum.
    pub pairing_cost: Option<f64>,
    /// `π/n_{k−1} + 1/m_{k−1}`, the bound the pairing cost is held to.
    pub paper_bound: Option<f64>,
}

impl TowerLevel {
    pub fn normal(&self) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&self.diagonal)
    }

    pub fn within_bound(&self) -> bool {
        match (self.pairing_cost, self.paper_bound) {
            (Some(c), Some(b)) => c <= b,
            _ => true,
        }
    }
}

/// `N ⊗ I_r` on diagonals: each entry repeated `r` times.
pub fn embed_diagonal(diagonal: &[Complex64], r: usize) -> Vec<Complex64> {
    diagonal.iter().flat_map(|&z| std::iter::repeat_n(z, r)).collect()
}

/// Diagonal models of every level, each aligned to the embedding of its
/// predecessor by a bottleneck matching.
pub fn build_tower(levels: &[LevelShape]) -> Result<Vec<TowerLevel>> {
    let mut out: Vec<TowerLevel> = Vec::with_capacity(levels.len());
    for (k, shape) in levels.iter().enumerate() {
        if !shape.identity_holds() {
            return Err(Error::InvalidArgument(format!("level {} violates (2m+1)n+1+q = ell", k + 1)));
        }
        let spec = polar_spectrum(shape.n, shape.m, shape.q)?;
        let level = match out.last() {
            None => TowerLevel {
                k: 1,
                shape: *shape,
                diagonal: spec.expand(),
                spec,
                increment: None,
                pairing_cost: None,
                paper_bound: None,
            },
            Some(prev) => {
                if shape.ell % prev.shape.ell != 0 {
                    return Err(Error::InvalidArgument(format!(
                        "level {} dimension is not a multiple of its predecessor",
                        k + 1
                    )));
                }
                let r = (shape.ell / prev.shape.ell) as usize;
                let embedded = embed_diagonal(&prev.diagonal, r);
                let target = spec.expand();
                let matching = bottleneck_match_values(&embedded, &target)?;
                let mut diagonal = vec![Complex64::default(); embedded.len()];
                for &(i, j) in &matching.pairs {
                    diagonal[i] = target[j];
                }
                let increment = diagonal.iter().zip(&embedded).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                TowerLevel {
                    k: k + 1,
                    shape: *shape,
                    spec,
                    diagonal,
                    increment: Some(increment),
                    pairing_cost: Some(matching.cost),
                    paper_bound: Some(prev.shape.pairing_bound()),
                }
            }
        };
        out.push(level);
    }
    Ok(out)
}

/// Largest distance from a point of the `grid_step` lattice inside the closed
/// unit disk to the nearest spectrum point.
pub fn disk_density(spec: &Spectrum, grid_step: f64) -> Result<f64> {
    if !(grid_step > 0.0 && grid_step.is_finite()) {
        return Err(Error::InvalidArgument(format!("grid step must be positive, got {grid_step}")));
    }
    let pts: Vec<Complex64> = spec.points().iter().map(|p| p.value).collect();
    if pts.is_empty() {
        return Err(Error::Empty);
    }
    let k = (1.0 / grid_step).floor() as i64;
    let worst = (-k..=k)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * grid_step;
            let mut row_worst: f64 = 0.0;
            for j in -k..=k {
                let z = Complex64::new(x, j as f64 * grid_step);
                if z.norm() > 1.0 {
                    continue;
                }
                let d = pts.iter().map(|p| (z - p).norm()).fold(f64::INFINITY, f64::min);
                row_worst = row_worst.max(d);
            }
            row_worst
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// Exact multiset check that `embedded` is `base` with every multiplicity times `r`.
pub fn is_inflation(base: &Spectrum, embedded: &[Complex64], r: usize) -> bool {
    let got = Spectrum::from_values(embedded, DEFAULT_MERGE_TOL);
    got.approx_eq(&base.inflate(r), 0.0)
}
