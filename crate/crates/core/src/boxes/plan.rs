use super::grid::{bfs, good_in, is_connected, BoxSet, GridBox};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanStep {
    pub removed: GridBox,
    /// Shortest path from the origin to `removed` in the boxes present before removal.
    pub path: Vec<GridBox>,
}

/// Order in which boxes are peeled off, ending with only the origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Plan {
    pub steps: Vec<PlanStep>,
}

impl Plan {
    /// Box sets present before each step.
    pub fn stages(&self, bs: &BoxSet) -> Vec<BTreeSet<GridBox>> {
        let mut current = bs.boxes().clone();
        let mut out = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            out.push(current.clone());
            current.remove(&step.removed);
        }
        out
    }
}

/// Repeatedly removes the good box farthest from the origin (graph distance;
/// ties go to the lexicographically smallest box).
pub fn plan(bs: &BoxSet) -> Plan {
    let mut current = bs.boxes().clone();
    let mut steps = Vec::with_capacity(current.len().saturating_sub(1));
    while current.len() > 1 {
        let tree = bfs(&current, GridBox::ORIGIN);
        let good = good_in(&current);
        let removed = *good
            .iter()
            .max_by(|a, b| tree[a].0.cmp(&tree[b].0).then(b.cmp(a)))
            .expect("a connected set with two or more boxes has a good box");
        let mut path = vec![removed];
        let mut cursor = removed;
        while let Some(prev) = tree[&cursor].1 {
            path.push(prev);
            cursor = prev;
        }
        path.reverse();
        current.remove(&removed);
        steps.push(PlanStep { removed, path });
    }
    Plan { steps }
}

/// Structural validation: each removal is good at its time, paths are
/// shortest adjacency paths from the origin, and only the origin remains.
pub fn validate_plan(bs: &BoxSet, plan: &Plan) -> Result<()> {
    let mut current = bs.boxes().clone();
    for (k, step) in plan.steps.iter().enumerate() {
        let fail = |msg: String| Err(Error::InvalidArgument(format!("plan step {k}: {msg}")));
        if step.removed == GridBox::ORIGIN {
            return fail("removes the origin".into());
        }
        if !current.contains(&step.removed) {
            return fail(format!("box {:?} is not present", step.removed));
        }
        let path_ok = step.path.first() == Some(&GridBox::ORIGIN)
            && step.path.last() == Some(&step.removed)
            && step.path.windows(2).all(|w| w[0].is_adjacent(w[1]))
            && step.path.iter().all(|b| current.contains(b));
        if !path_ok {
            return fail("path is not an adjacency path from the origin".into());
        }
        let shortest = bfs(&current, GridBox::ORIGIN)[&step.removed].0;
        if step.path.len() != shortest + 1 {
            return fail(format!("path length {} is not shortest ({})", step.path.len() - 1, shortest));
        }
        current.remove(&step.removed);
        if !is_connected(&current) {
            return fail("removal disconnects the remaining boxes".into());
        }
    }
    if current.len() != 1 || !current.contains(&GridBox::ORIGIN) {
        return Err(Error::InvalidArgument(format!("plan leaves {} boxes instead of the origin alone", current.len())));
    }
    Ok(())
}
