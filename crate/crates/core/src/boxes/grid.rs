use crate::error::{Error, Result};
use crate::linalg::Spectrum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Index `(n, m)` of the box `(εn − ε/2, εn + ε/2] + i(εm − ε/2, εm + ε/2]`.
/// Ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridBox(pub i64, pub i64);

impl GridBox {
    pub const ORIGIN: GridBox = GridBox(0, 0);

    pub fn center(self, eps: f64) -> Complex64 {
        Complex64::new(eps * self.0 as f64, eps * self.1 as f64)
    }

    /// Box containing `z` under the half-open convention.
    pub fn containing(z: Complex64, eps: f64) -> GridBox {
        let idx = |x: f64| (x / eps - 0.5).ceil() as i64;
        GridBox(idx(z.re), idx(z.im))
    }

    /// The eight boxes whose closures touch this one, in lexicographic order.
    pub fn neighbors(self) -> impl Iterator<Item = GridBox> {
        (-1..=1)
            .flat_map(move |dr| (-1..=1).map(move |di| GridBox(self.0 + dr, self.1 + di)))
            .filter(move |b| *b != self)
    }

    pub fn is_adjacent(self, other: GridBox) -> bool {
        self != other && (self.0 - other.0).abs() <= 1 && (self.1 - other.1).abs() <= 1
    }
}

/// Set of boxes at resolution `eps` containing the origin box and connected
/// under 8-adjacency.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxSet {
    eps: f64,
    boxes: BTreeSet<GridBox>,
}

impl BoxSet {
    /// Adds the origin box and checks connectivity.
    pub fn new(eps: f64, boxes: impl IntoIterator<Item = GridBox>) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("box size must be positive, got {eps}")));
        }
        let mut set: BTreeSet<GridBox> = boxes.into_iter().collect();
        set.insert(GridBox::ORIGIN);
        let unreached = unreachable_from_origin(&set);
        if let Some(b) = unreached.first() {
            return Err(Error::Disconnected(format!(
                "box ({}, {}) is not connected to the origin at eps = {eps}",
                b.0, b.1
            )));
        }
        Ok(Self { eps, boxes: set })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn boxes(&self) -> &BTreeSet<GridBox> {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn centers(&self) -> Vec<Complex64> {
        self.boxes.iter().map(|b| b.center(self.eps)).collect()
    }
}

/// Boxes containing a spectrum point, plus the origin box.
pub fn boxify(spec: &Spectrum, eps: f64) -> Result<BoxSet> {
    BoxSet::new(eps, spec.points().iter().map(|p| GridBox::containing(p.value, eps)))
}

/// Members of `set` not reachable from the origin (sorted).
pub fn unreachable_from_origin(set: &BTreeSet<GridBox>) -> Vec<GridBox> {
    let dist = bfs(set, GridBox::ORIGIN);
    set.iter().filter(|b| !dist.contains_key(b)).copied().collect()
}

/// Breadth-first search from `start`: distance and predecessor of every
/// reachable box. Neighbors are visited in lexicographic order, so the
/// predecessor chain is a deterministic shortest path.
pub fn bfs(set: &BTreeSet<GridBox>, start: GridBox) -> BTreeMap<GridBox, (usize, Option<GridBox>)> {
    let mut seen = BTreeMap::new();
    if !set.contains(&start) {
        return seen;
    }
    seen.insert(start, (0, None));
    let mut queue = VecDeque::from([start]);
    while let Some(b) = queue.pop_front() {
        let d = seen[&b].0;
        for nb in b.neighbors() {
            if set.contains(&nb) && !seen.contains_key(&nb) {
                seen.insert(nb, (d + 1, Some(b)));
                queue.push_back(nb);
            }
        }
    }
    seen
}

pub fn is_connected(set: &BTreeSet<GridBox>) -> bool {
    match set.iter().next() {
        None => true,
        Some(&first) => bfs(set, first).len() == set.len(),
    }
}

/// Cut vertices of the 8-adjacency graph (iterative Tarjan low-link).
pub fn articulation_points(set: &BTreeSet<GridBox>) -> BTreeSet<GridBox> {
    let nodes: Vec<GridBox> = set.iter().copied().collect();
    let index: BTreeMap<GridBox, usize> = nodes.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let adj: Vec<Vec<usize>> =
        nodes.iter().map(|b| b.neighbors().filter_map(|nb| index.get(&nb).copied()).collect()).collect();
    let n = nodes.len();
    let (mut disc, mut low) = (vec![usize::MAX; n], vec![0usize; n]);
    let mut cut = vec![false; n];
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0;
        // (node, parent, next neighbor position)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, parent, ref mut pos)) = stack.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else if w != parent {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if parent != root && low[v] >= disc[parent] {
                        cut[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            cut[root] = true;
        }
    }
    nodes.into_iter().zip(cut).filter(|(_, c)| *c).map(|(b, _)| b).collect()
}

/// Non-origin boxes whose removal keeps the set connected.
pub fn good_boxes(bs: &BoxSet) -> BTreeSet<GridBox> {
    good_in(&bs.boxes)
}

pub(crate) fn good_in(set: &BTreeSet<GridBox>) -> BTreeSet<GridBox> {
    let cut = articulation_points(set);
    set.iter().filter(|b| **b != GridBox::ORIGIN && !cut.contains(b)).copied().collect()
}
