//! Obstructions to nilpotent approximation in block-diagonal algebras, and the
//! greedy construction of a sequence whose diagonal truncations are
//! asymptotically nilpotent.

use crate::error::{Error, Result};
use crate::kahan::{build_kahan, density_from_eigenvalues};
use crate::linalg::{CertifiedNilpotent, ComplexMatrix};
use crate::nil_distance::max_gap_with_zero;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Direct sum `⊕ M_{n_j}`; elements are block-diagonal matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockAlgebra {
    block_sizes: Vec<usize>,
}

impl BlockAlgebra {
    pub fn new(block_sizes: Vec<usize>) -> Result<Self> {
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(Error::InvalidArgument("block sizes must be positive and nonempty".into()));
        }
        Ok(Self { block_sizes })
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn dim(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn max_block(&self) -> usize {
        self.block_sizes.iter().copied().max().unwrap_or(0)
    }

    /// Whether every entry outside the diagonal blocks is exactly zero.
    pub fn contains(&self, m: &ComplexMatrix) -> bool {
        if m.dim() != self.dim() {
            return false;
        }
        let mut owner = Vec::with_capacity(self.dim());
        for (b, &s) in self.block_sizes.iter().enumerate() {
            owner.extend(std::iter::repeat_n(b, s));
        }
        (0..m.dim()).all(|i| (0..m.dim()).all(|j| owner[i] == owner[j] || m[(i, j)] == Complex64::default()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeCap {
    /// Largest block size: every nilpotent element `W` satisfies `W^cap = 0`.
    pub cap: usize,
    /// Structural nilpotency index of each block.
    pub block_index: Vec<usize>,
    pub holds: bool,
}

/// Checks `W^ℓ = 0` with `ℓ` the largest block size, block by block through
/// the structural index of each certified core.
pub fn degree_cap_check(alg: &BlockAlgebra, blocks: &[CertifiedNilpotent]) -> Result<DegreeCap> {
    if blocks.len() != alg.block_sizes.len() {
        return Err(Error::DimensionMismatch { expected: alg.block_sizes.len(), found: blocks.len() });
    }
    for (b, &s) in blocks.iter().zip(&alg.block_sizes) {
        if b.dim() != s {
            return Err(Error::DimensionMismatch { expected: s, found: b.dim() });
        }
    }
    let block_index: Vec<usize> = blocks.iter().map(CertifiedNilpotent::structural_index).collect();
    let cap = alg.max_block();
    Ok(DegreeCap { holds: block_index.iter().all(|&k| k <= cap), cap, block_index })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftScan {
    /// `(λ, |λ + tr T / d|)` for each grid point.
    pub bounds: Vec<(Complex64, f64)>,
    /// The unique shift at which the trace bound vanishes.
    pub root: Complex64,
}

/// Trace lower bound on the distance from `λI + T` to the nilpotents, over a
/// grid of shifts.
pub fn shift_scan(t: &ComplexMatrix, grid: &[Complex64]) -> ShiftScan {
    let root = -t.trace() / t.dim() as f64;
    ShiftScan { bounds: grid.iter().map(|&l| (l, (l - root).norm())).collect(), root }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DyadicExample {
    pub n: u32,
    /// `j / 2ⁿ` for `j = 1..=2ⁿ`.
    pub diagonal: Vec<f64>,
    /// `(2ⁿ + 1) / 2ⁿ⁺¹` as an exact fraction.
    pub trace_lower_exact: (u64, u64),
    pub trace_lower: f64,
    /// Half the largest gap with 0 adjoined: `1 / 2ⁿ⁺¹`.
    pub gap_lower: f64,
}

impl DyadicExample {
    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&self.diagonal.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>())
    }
}

pub const MAX_DYADIC_EXPONENT: u32 = 24;

pub fn dyadic_example(n: u32) -> Result<DyadicExample> {
    if !(1..=MAX_DYADIC_EXPONENT).contains(&n) {
        return Err(Error::InvalidArgument(format!("dyadic exponent must be in 1..={MAX_DYADIC_EXPONENT}, got {n}")));
    }
    let size = 1u64 << n;
    let diagonal: Vec<f64> = (1..=size).map(|j| j as f64 / size as f64).collect();
    let (num, den) = (size + 1, 2 * size);
    Ok(DyadicExample {
        n,
        gap_lower: 0.5 * max_gap_with_zero(&diagonal),
        diagonal,
        trace_lower_exact: (num, den),
        trace_lower: num as f64 / den as f64,
    })
}

/// Kahan orders tried by the greedy construction.
pub fn kahan_ladder() -> Vec<usize> {
    (1..=13).map(|k| 1usize << k).collect()
}

/// Tolerances below this cannot be met on the ladder.
pub fn ladder_floor() -> f64 {
    PI / (*kahan_ladder().last().unwrap() as f64).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreedyLevel {
    pub kahan_order: usize,
    /// Copies of `A_n` used to absorb the previous level (1 at the first level).
    pub copies: usize,
    /// Largest displacement of a previous eigenvalue to its partner.
    pub pairing_cost: f64,
    pub kahan_defect: f64,
    /// Upper bound on the distance of the level's diagonal to the nilpotents.
    pub upper_chain: f64,
    /// Number of entries in the diagonal after this level.
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreedyCertificate {
    pub levels: Vec<GreedyLevel>,
    /// The sequence `a_j` built so far.
    pub prefix: Vec<f64>,
}

struct LadderEntry {
    defect: f64,
    eigenvalues: Vec<f64>,
}

/// Builds the diagonal sequence level by level. Level `k` picks the smallest
/// Kahan order whose witness defect is within `schedule[k]` (and, from the
/// second level on, whose spectrum meets every interval of width
/// `1/⌈1/schedule[k]⌉`), then absorbs the current diagonal into copies of that
/// spectrum with every displacement at most `schedule[k]`.
pub fn greedy_sequence(levels: usize, schedule: &[f64]) -> Result<GreedyCertificate> {
    if levels == 0 {
        return Err(Error::InvalidArgument("at least one level is required".into()));
    }
    if schedule.len() < levels {
        return Err(Error::InvalidArgument(format!("schedule has {} entries for {levels} levels", schedule.len())));
    }
    let schedule = &schedule[..levels];
    if schedule.iter().any(|&t| !(t > 0.0 && t.is_finite())) || schedule.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidArgument("schedule must be positive and nonincreasing".into()));
    }
    let ladder = kahan_ladder();
    let cap = *ladder.last().unwrap();
    if let Some(k) = schedule.iter().position(|&t| t < ladder_floor()) {
        return Err(Error::LadderExhausted { level: k + 1, tolerance: schedule[k], cap });
    }

    let mut cache: BTreeMap<usize, LadderEntry> = BTreeMap::new();
    let mut entry = |n: usize| -> Result<(f64, Vec<f64>)> {
        if let Entry::Vacant(slot) = cache.entry(n) {
            let pack = build_kahan(n)?;
            slot.insert(LadderEntry { defect: pack.witness_defect(), eigenvalues: pack.a_eigenvalues() });
        }
        let e = &cache[&n];
        Ok((e.defect, e.eigenvalues.clone()))
    };

    let mut prefix: Vec<f64> = Vec::new();
    let mut out: Vec<GreedyLevel> = Vec::with_capacity(levels);
    for (k, &tol) in schedule.iter().enumerate() {
        let mut chosen = None;
        for &n in &ladder {
            let (defect, eigs) = entry(n)?;
            if defect > tol {
                continue;
            }
            if k > 0 && !density_from_eigenvalues(n, &eigs, (1.0 / tol).ceil() as usize)?.holds {
                continue;
            }
            chosen = Some((n, defect, eigs));
            break;
        }
        let (n, defect, eigs) = chosen.ok_or(Error::LadderExhausted { level: k + 1, tolerance: tol, cap })?;
        if k == 0 {
            prefix = eigs;
            out.push(GreedyLevel {
                kahan_order: n,
                copies: 1,
                pairing_cost: 0.0,
                kahan_defect: defect,
                upper_chain: defect,
                size: n,
            });
            continue;
        }
        let (copies, assignment, cost) = absorb(&prefix, &eigs, tol);
        let mut used = vec![false; copies * n];
        for &t in &assignment {
            used[t] = true;
        }
        let rest: Vec<f64> = (0..copies * n).filter(|&i| !used[i]).map(|i| eigs[i % n]).collect();
        prefix.extend(rest);
        out.push(GreedyLevel {
            kahan_order: n,
            copies,
            pairing_cost: cost,
            kahan_defect: defect,
            upper_chain: cost + defect,
            size: prefix.len(),
        });
    }
    Ok(GreedyCertificate { levels: out, prefix })
}

/// Injective map from `current` into `copies` copies of `target` (sorted
/// ascending) with displacement at most `tol`, using the fewest copies and
/// then the smallest achievable maximum displacement. Returns the copy count,
/// the chosen target slot (`copy·len + index`) of each current entry, and the
/// maximum displacement.
fn absorb(current: &[f64], target: &[f64], tol: f64) -> (usize, Vec<usize>, f64) {
    let n = target.len();
    // Fewest copies: double until feasible, then bisect down.
    let mut failed = current.len().div_ceil(n).max(1) - 1;
    let mut copies = failed + 1;
    while assign(current, target, copies, tol).is_none() {
        failed = copies;
        copies *= 2;
    }
    while copies > failed + 1 {
        let mid = (failed + copies) / 2;
        if assign(current, target, mid, tol).is_some() {
            copies = mid;
        } else {
            failed = mid;
        }
    }
    // Smallest feasible displacement for that copy count.
    let (mut lo, mut hi) = (0.0, tol);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if assign(current, target, copies, mid).is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let slots = assign(current, target, copies, hi).expect("feasible at the upper end of the bisection");
    let cost = current.iter().zip(&slots).map(|(&x, &s)| (x - target[s % n]).abs()).fold(0.0, f64::max);
    (copies, slots, cost)
}

/// Greedy interval matching: entries in ascending order take the smallest
/// free target within `tol`. Optimal for equal-width intervals.
fn assign(current: &[f64], target: &[f64], copies: usize, tol: f64) -> Option<Vec<usize>> {
    let n = target.len();
    if copies * n < current.len() {
        return None;
    }
    let mut order: Vec<usize> = (0..current.len()).collect();
    order.sort_by(|&a, &b| current[a].total_cmp(&current[b]));
    let mut remaining = vec![copies; n];
    let mut slots = vec![0usize; current.len()];
    let mut start = 0;
    for &i in &order {
        let x = current[i];
        while start < n && (target[start] < x - tol || remaining[start] == 0) {
            start += 1;
        }
        let pos = (start..n).take_while(|&j| target[j] <= x + tol).find(|&j| remaining[j] > 0)?;
        remaining[pos] -= 1;
        slots[i] = remaining[pos] * n + pos;
    }
    Some(slots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nil_distance::lower_bounds;

    #[test]
    fn dyadic_examples() {
        let d = dyadic_example(3).unwrap();
        assert_eq!(d.trace_lower_exact, (9, 16));
        assert_eq!(d.trace_lower, 0.5625);
        assert_eq!(d.gap_lower, 1.0 / 16.0);
        let d1 = dyadic_example(1).unwrap();
        assert_eq!(d1.diagonal, vec![0.5, 1.0]);
        assert_eq!(d1.trace_lower, 0.75);
        let lb = lower_bounds(&d.matrix()).unwrap();
        assert_eq!(lb.trace_lower, d.trace_lower);
        assert_eq!(lb.gap_lower, d.gap_lower);
    }

    #[test]
    fn shift_examples() {
        let t = ComplexMatrix::from_diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let scan = shift_scan(&t, &[Complex64::new(-0.5, 0.0), Complex64::new(-0.25, 0.0)]);
        assert_eq!(scan.root, Complex64::new(-0.5, 0.0));
        assert_eq!(scan.bounds[0].1, 0.0);
        assert_eq!(scan.bounds[1].1, 0.25);
        assert_eq!(shift_scan(&ComplexMatrix::zeros(3), &[]).root, Complex64::default());
    }

    #[test]
    fn degree_caps() {
        let alg = BlockAlgebra::new(vec![2, 3]).unwrap();
        let jordan = |n: usize| {
            CertifiedNilpotent::from_core(ComplexMatrix::from_fn(n, |i, j| {
                if j == i + 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::default()
                }
            }))
            .unwrap()
        };
        let cap = degree_cap_check(&alg, &[jordan(2), jordan(3)]).unwrap();
        assert_eq!(cap.cap, 3);
        assert_eq!(cap.block_index, vec![2, 3]);
        assert!(cap.holds);
        assert!(degree_cap_check(&alg, &[jordan(3), jordan(2)]).is_err());
        let direct = ComplexMatrix::direct_sum(&[jordan(2).materialized(), jordan(3).materialized()]).unwrap();
        assert!(alg.contains(&direct));
        assert!(!alg.contains(&ComplexMatrix::identity(5).map(|_| Complex64::new(1.0, 0.0))));
    }

    #[test]
    fn greedy_single_level() {
        let cert = greedy_sequence(1, &[1.0]).unwrap();
        assert_eq!(cert.levels[0].kahan_order, 2);
        assert!((cert.levels[0].kahan_defect - 1.0).abs() < 1e-12);
        assert!(matches!(greedy_sequence(1, &[0.2]), Err(Error::LadderExhausted { .. })));
        assert!(greedy_sequence(2, &[0.5, 1.0]).is_err());
    }

    #[test]
    fn absorption_is_injective_and_within_tolerance() {
        let current = vec![0.0, 0.1, 0.1, 0.5, 0.95, 1.0];
        let target = vec![0.0, 0.3, 0.6, 1.0];
        let (copies, slots, cost) = absorb(&current, &target, 0.25);
        assert_eq!(copies, 2);
        let mut s = slots.clone();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), slots.len());
        assert!(cost <= 0.25);
    }
}
