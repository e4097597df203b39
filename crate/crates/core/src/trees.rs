//! Geometry of finite trees: subtree orders across an edge, central edges,
//! and the greedy splitting schedule that repeatedly cuts the largest
//! remaining subtree at its central edge.
//!
//! A central edge minimises the order of the larger of the two subtrees left
//! by its removal. Every tree with maximum degree `delta >= 2` has one whose
//! split ratio `m = larger / smaller` satisfies `1 <= m <= 4(delta - 1) - 1`;
//! consequently each greedy cut shrinks the largest component by at least
//! `q = 1 - 1/(4(delta - 1))`, and after `B` cuts the largest remaining
//! subtree has at most `N / ((B + 1)/2)^nu` vertices with
//! `nu = 1 / ((delta - 1) ln 16)`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bounds::nu;
use crate::error::{Error, Result};
use crate::graph::{Edge, FiniteGraph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeSplit {
    pub edge: Edge,
    /// Order of the subtree containing `edge.lo()`.
    pub size_u: usize,
    /// Order of the subtree containing `edge.hi()`.
    pub size_v: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSchedule {
    pub removed_edges: Vec<Edge>,
    /// Order of the largest remaining component.
    pub largest_component: usize,
    /// `N / ((B + 1)/2)^nu`.
    pub bound: f64,
}

impl SplitSchedule {
    pub fn holds(&self) -> bool {
        self.largest_component as f64 <= self.bound * (1.0 + 1e-12)
    }
}

fn require_tree(t: &FiniteGraph) -> Result<()> {
    if t.is_tree() {
        Ok(())
    } else {
        Err(Error::NotATree)
    }
}

/// Orders of the two components of `t - e`, as (side of `e.lo()`, side of
/// `e.hi()`).
pub fn subtree_sizes(t: &FiniteGraph, e: Edge) -> Result<(usize, usize)> {
    require_tree(t)?;
    if !t.has_edge(e) {
        return Err(Error::MissingEdge(e.lo(), e.hi()));
    }
    let mut seen = vec![false; t.order()];
    seen[e.lo()] = true;
    seen[e.hi()] = true;
    let mut queue = VecDeque::from([e.lo()]);
    let mut count = 0;
    while let Some(v) = queue.pop_front() {
        count += 1;
        for &w in t.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    Ok((count, t.order() - count))
}

/// Every edge of a tree with its split, in edge-list order. Linear time.
pub fn all_splits(t: &FiniteGraph) -> Result<Vec<TreeSplit>> {
    require_tree(t)?;
    let n = t.order();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([0usize]);
    parent[0] = 0;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in t.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut below = vec![1usize; n];
    for &v in order.iter().skip(1).rev() {
        below[parent[v]] += below[v];
    }
    Ok(t.edges()
        .iter()
        .map(|&e| {
            // the endpoint farther from vertex 0 is the child
            let child = if parent[e.hi()] == e.lo() { e.hi() } else { e.lo() };
            let child_side = below[child];
            let (size_u, size_v) = if child == e.lo() {
                (child_side, n - child_side)
            } else {
                (n - child_side, child_side)
            };
            let ratio = size_u.max(size_v) as f64 / size_u.min(size_v) as f64;
            TreeSplit { edge: e, size_u, size_v, ratio }
        })
        .collect())
}

/// Central edge, ties broken by the lexicographically smallest edge.
pub fn central_edge(t: &FiniteGraph) -> Result<TreeSplit> {
    if t.order() < 2 {
        return Err(Error::InvalidSize("a central edge needs at least two vertices".into()));
    }
    let splits = all_splits(t)?;
    // edges are sorted, so min_by_key keeps the first (smallest) on ties
    Ok(*splits
        .iter()
        .min_by_key(|s| s.size_u.max(s.size_v))
        .expect("tree with n >= 2 has an edge"))
}

/// Upper end `4(delta - 1) - 1` of the admissible central split ratio.
pub fn split_ratio_ceiling(delta: usize) -> f64 {
    4.0 * (delta as f64 - 1.0) - 1.0
}

/// Whether the central split ratio lies in `[1, 4(delta - 1) - 1]`.
pub fn check_split_ratio(t: &FiniteGraph, delta: usize) -> Result<bool> {
    if delta < 2 || delta < t.max_degree() {
        return Err(Error::DegreeBound { delta, max_degree: t.max_degree().max(2) });
    }
    let split = central_edge(t)?;
    Ok(split.ratio >= 1.0 && split.ratio <= split_ratio_ceiling(delta))
}

/// `N / ((B + 1)/2)^nu`.
pub fn schedule_bound(n: usize, b: usize, delta: usize) -> Result<f64> {
    Ok(n as f64 / ((b as f64 + 1.0) / 2.0).powf(nu(delta)?))
}

/// Greedy schedule: `b` times, cut the largest current component (lowest
/// smallest-vertex on ties) at its central edge.
pub fn splitting_schedule(t: &FiniteGraph, b: usize, delta: usize) -> Result<SplitSchedule> {
    Ok(greedy_splits(t, b, delta)?.pop().expect("schedule has a b = 0 entry"))
}

/// All prefixes of the greedy schedule, `b = 0, 1, ..., b_max`.
pub fn greedy_splits(t: &FiniteGraph, b_max: usize, delta: usize) -> Result<Vec<SplitSchedule>> {
    require_tree(t)?;
    let n = t.order();
    if b_max + 1 > n {
        return Err(Error::OutOfRange(format!(
            "cannot remove {b_max} edges from a tree with {} edges",
            n - 1
        )));
    }
    let mut components: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut removed = Vec::with_capacity(b_max);
    let mut current = t.clone();
    let mut out = Vec::with_capacity(b_max + 1);
    out.push(SplitSchedule { removed_edges: vec![], largest_component: n, bound: schedule_bound(n, 0, delta)? });
    for b in 1..=b_max {
        let (idx, _) = components
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, c)| a.len().cmp(&c.len()).then(c[0].cmp(&a[0])))
            .expect("at least one component");
        let comp = components.swap_remove(idx);
        let sub = current.induced_subgraph(&comp)?;
        let split = central_edge(&sub)?;
        let edge = Edge::new(comp[split.edge.lo()], comp[split.edge.hi()])?;
        current = current.remove_edges(&crate::graph::EdgeSet::single(edge))?;
        removed.push(edge);
        let (left, right) = split_component(&current, &comp, edge.lo());
        components.push(left);
        components.push(right);
        let largest = components.iter().map(Vec::len).max().unwrap_or(0);
        out.push(SplitSchedule {
            removed_edges: removed.clone(),
            largest_component: largest,
            bound: schedule_bound(n, b, delta)?,
        });
    }
    Ok(out)
}

fn split_component(g: &FiniteGraph, comp: &[usize], start: usize) -> (Vec<usize>, Vec<usize>) {
    let mut side: HashSet<usize> = HashSet::new();
    let mut queue = VecDeque::from([start]);
    side.insert(start);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if side.insert(w) {
                queue.push_back(w);
            }
        }
    }
    let (mut a, mut b): (Vec<usize>, Vec<usize>) = comp.iter().partition(|v| side.contains(v));
    a.sort_unstable();
    b.sort_unstable();
    (a, b)
}

/// Canonical string of a free tree: AHU encoding rooted at the centre, or
/// the smaller of the two encodings for bicentral trees.
pub fn canonical_form(t: &FiniteGraph) -> Result<String> {
    require_tree(t)?;
    let centers = tree_centers(t);
    Ok(centers
        .iter()
        .map(|&c| ahu(t, c, usize::MAX))
        .min()
        .expect("a tree has a centre"))
}

fn tree_centers(t: &FiniteGraph) -> Vec<usize> {
    let n = t.order();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree = t.degrees();
    let mut leaves: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &leaf in &leaves {
            degree[leaf] = 0;
            for &w in t.neighbors(leaf) {
                if degree[w] > 0 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        leaves = next;
    }
    leaves.sort_unstable();
    leaves
}

fn ahu(t: &FiniteGraph, v: usize, parent: usize) -> String {
    let mut children: Vec<String> = t
        .neighbors(v)
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| ahu(t, w, v))
        .collect();
    children.sort_unstable();
    format!("({})", children.concat())
}

/// All non-isomorphic trees on `n` vertices, each in one labelled
/// representative, ordered by canonical form.
pub fn free_trees(n: usize) -> Result<Vec<FiniteGraph>> {
    if n == 0 {
        return Err(Error::InvalidSize("trees need n >= 1".into()));
    }
    let mut layer = vec![FiniteGraph::edgeless(1)?];
    for size in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &layer {
            for v in 0..t.order() {
                let mut edges = t.edges().to_vec();
                edges.push(Edge::new(v, size - 1)?);
                let grown = FiniteGraph::from_edges(size, edges)?;
                if seen.insert(canonical_form(&grown)?) {
                    next.push(grown);
                }
            }
        }
        layer = next;
    }
    let mut keyed: Vec<(String, FiniteGraph)> = layer
        .into_iter()
        .map(|t| Ok((canonical_form(&t)?, t)))
        .collect::<Result<_>>()?;
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, t)| t).collect())
}
