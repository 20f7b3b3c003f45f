use crate::error::{Error, Result};
use crate::linalg::Spectrum;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::VecDeque;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchingResult {
    /// `(i, j)`: element `i` of the first multiset pairs with element `j` of the second.
    pub pairs: Vec<(usize, usize)>,
    pub cost: f64,
}

/// Minimax perfect matching between the expanded multisets.
pub fn bottleneck_match(s1: &Spectrum, s2: &Spectrum) -> Result<MatchingResult> {
    bottleneck_match_values(&s1.expand(), &s2.expand())
}

/// Minimax perfect matching: binary search over the sorted pairwise distances
/// with a Hopcroft–Karp feasibility test at each threshold.
pub fn bottleneck_match_values(a: &[Complex64], b: &[Complex64]) -> Result<MatchingResult> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let n = a.len();
    if n == 0 {
        return Ok(MatchingResult { pairs: Vec::new(), cost: 0.0 });
    }
    let dist: Vec<f64> = a.iter().flat_map(|x| b.iter().map(move |y| (x - y).norm())).collect();
    let mut levels = dist.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    // The largest distance always admits a perfect matching.
    let (mut lo, mut hi) = (0, levels.len() - 1);
    let mut best = perfect_matching(n, &dist, levels[hi]).expect("complete bipartite graph has a perfect matching");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match perfect_matching(n, &dist, levels[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let pairs: Vec<(usize, usize)> = best.into_iter().enumerate().collect();
    let cost = pairs.iter().map(|&(i, j)| dist[i * n + j]).fold(0.0, f64::max);
    Ok(MatchingResult { pairs, cost })
}

/// Hopcroft–Karp on the graph `{(i, j) : dist[i·n + j] ≤ threshold}`;
/// returns the partner of each left vertex when the matching is perfect.
fn perfect_matching(n: usize, dist: &[f64], threshold: f64) -> Option<Vec<usize>> {
    const NONE: usize = usize::MAX;
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| dist[i * n + j] <= threshold).collect()).collect();
    if adj.iter().any(Vec::is_empty) {
        return None;
    }
    let (mut left, mut right) = (vec![NONE; n], vec![NONE; n]);
    let mut layer = vec![0usize; n];
    let mut matched = 0;
    loop {
        // Layer the free left vertices and their alternating paths.
        let mut queue = VecDeque::new();
        for i in 0..n {
            if left[i] == NONE {
                layer[i] = 0;
                queue.push_back(i);
            } else {
                layer[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                match right[j] {
                    NONE => found = true,
                    k if layer[k] == usize::MAX => {
                        layer[k] = layer[i] + 1;
                        queue.push_back(k);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut cursor = vec![0usize; n];
        for i in 0..n {
            if left[i] == NONE && augment(i, &adj, &mut left, &mut right, &mut layer, &mut cursor) {
                matched += 1;
            }
        }
    }
    (matched == n).then_some(left)
}

/// Iterative layered DFS from the free left vertex `start`.
fn augment(
    start: usize,
    adj: &[Vec<usize>],
    left: &mut [usize],
    right: &mut [usize],
    layer: &mut [usize],
    cursor: &mut [usize],
) -> bool {
    const NONE: usize = usize::MAX;
    let mut stack = vec![start];
    while let Some(&i) = stack.last() {
        if cursor[i] == adj[i].len() {
            layer[i] = usize::MAX;
            stack.pop();
            continue;
        }
        let j = adj[i][cursor[i]];
        cursor[i] += 1;
        let k = right[j];
        if k == NONE {
            // Flip the path recorded on the stack.
            let mut j = j;
            while let Some(i) = stack.pop() {
                let prev = left[i];
                left[i] = j;
                right[j] = i;
                j = prev;
            }
            return true;
        }
        if layer[k] == layer[i] + 1 {
            stack.push(k);
        }
    }
    false
}
