//! Finite simple graphs: deterministic families, seeded random families,
//! partial graphs obtained by deleting edges, spanning trees and components.
//!
//! Every graph keeps its edge list in canonical form (each pair `u < v`,
//! sorted lexicographically) so that spectra and fixtures derived from it are
//! reproducible bit for bit.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// An unordered vertex pair stored as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Edge(usize, usize);

impl Edge {
    /// Builds the canonical form of `{u, v}`. Loops are rejected.
    pub fn new(u: usize, v: usize) -> Result<Self> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Ok(Edge(u, v)),
            std::cmp::Ordering::Greater => Ok(Edge(v, u)),
            std::cmp::Ordering::Equal => Err(Error::InvalidEdge(u, v, "loop")),
        }
    }

    pub fn lo(self) -> usize {
        self.0
    }

    pub fn hi(self) -> usize {
        self.1
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.0, e.1]
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = Error;

    fn try_from(pair: [usize; 2]) -> Result<Self> {
        Edge::new(pair[0], pair[1])
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

/// A set of edges, sorted and free of duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSet {
    edges: Vec<Edge>,
}

impl EdgeSet {
    pub fn new(mut edges: Vec<Edge>) -> Result<Self> {
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdge(w[0].0, w[0].1, "duplicate"));
        }
        Ok(EdgeSet { edges })
    }

    pub fn empty() -> Self {
        EdgeSet::default()
    }

    pub fn single(e: Edge) -> Self {
        EdgeSet { edges: vec![e] }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.binary_search(e).is_ok()
    }
}

/// A finite, simple, undirected, loopless graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct FiniteGraph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRepr> for FiniteGraph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        let edges = r
            .edges
            .into_iter()
            .map(Edge::try_from)
            .collect::<Result<Vec<_>>>()?;
        FiniteGraph::from_edges(r.n, edges)
    }
}

impl From<FiniteGraph> for GraphRepr {
    fn from(g: FiniteGraph) -> Self {
        GraphRepr {
            n: g.n,
            edges: g.edges.into_iter().map(Into::into).collect(),
        }
    }
}

impl FiniteGraph {
    /// Validates and canonicalises an edge list. Duplicates and out-of-range
    /// endpoints are errors.
    pub fn from_edges(n: usize, mut edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("a graph needs at least one vertex".into()));
        }
        if let Some(e) = edges.iter().find(|e| e.1 >= n) {
            return Err(Error::InvalidEdge(e.0, e.1, "endpoint out of range"));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdge(w[0].0, w[0].1, "duplicate"));
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.0].push(e.1);
            adjacency[e.1].push(e.0);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(FiniteGraph { n, edges, adjacency })
    }

    /// Convenience constructor from raw pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(u, v)| Edge::new(u, v))
            .collect::<Result<Vec<_>>>()?;
        FiniteGraph::from_edges(n, edges)
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        FiniteGraph::from_edges(n, Vec::new())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        e.1 < self.n && self.adjacency[e.0].binary_search(&e.1).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n && self.is_connected()
    }

    /// Partial graph `g - r`: same vertex set, edges `g.edges \ r`.
    pub fn remove_edges(&self, r: &EdgeSet) -> Result<Self> {
        if let Some(e) = r.edges().iter().find(|e| !self.has_edge(**e)) {
            return Err(Error::MissingEdge(e.0, e.1));
        }
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| !r.contains(e))
            .collect();
        FiniteGraph::from_edges(self.n, edges)
    }

    /// Adds edges that are not yet present. Existing edges are errors.
    pub fn insert_edges(&self, extra: &EdgeSet) -> Result<Self> {
        let mut edges = self.edges.clone();
        for e in extra.edges() {
            if self.has_edge(*e) {
                return Err(Error::InvalidEdge(e.0, e.1, "already present"));
            }
            edges.push(*e);
        }
        FiniteGraph::from_edges(self.n, edges)
    }

    /// Connected components, each sorted, listed by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Breadth-first spanning tree from vertex 0, visiting neighbours in index
    /// order.
    pub fn spanning_tree(&self) -> Result<Self> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut edges = Vec::with_capacity(self.n.saturating_sub(1));
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    edges.push(Edge::new(v, w)?);
                    queue.push_back(w);
                }
            }
        }
        if edges.len() + 1 != self.n {
            return Err(Error::Disconnected(self.connected_components().len()));
        }
        FiniteGraph::from_edges(self.n, edges)
    }

    /// Subgraph induced by `vertices`, relabelled so that `vertices[i]`
    /// becomes vertex `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Self> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(Error::OutOfRange(format!("vertex {v} not in graph")));
            }
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| index[e.0] != usize::MAX && index[e.1] != usize::MAX)
            .map(|e| Edge::new(index[e.0], index[e.1]))
            .collect::<Result<Vec<_>>>()?;
        FiniteGraph::from_edges(vertices.len(), edges)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn build_path(n: usize) -> Result<FiniteGraph> {
    if n == 0 {
        return Err(Error::InvalidSize("path needs n >= 1".into()));
    }
    let edges = (1..n).map(|v| Edge(v - 1, v)).collect();
    FiniteGraph::from_edges(n, edges)
}

/// Cycle on `n >= 3` vertices.
pub fn build_cycle(n: usize) -> Result<FiniteGraph> {
    if n < 3 {
        return Err(Error::InvalidSize("cycle needs n >= 3".into()));
    }
    let mut edges: Vec<Edge> = (1..n).map(|v| Edge(v - 1, v)).collect();
    edges.push(Edge(0, n - 1));
    FiniteGraph::from_edges(n, edges)
}

/// Star `K_{1,leaves}` centred at vertex 0.
pub fn build_star(leaves: usize) -> Result<FiniteGraph> {
    let edges = (1..=leaves).map(|v| Edge(0, v)).collect();
    FiniteGraph::from_edges(leaves + 1, edges)
}

pub fn build_complete(n: usize) -> Result<FiniteGraph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push(Edge(u, v));
        }
    }
    FiniteGraph::from_edges(n, edges)
}

/// Cubic box `{0..side}^dim` with free boundary, or the torus when
/// `periodic` (requires `side >= 3` so that wrap-around edges stay simple).
///
/// Vertex `x` has index `sum_i x_i * side^i`.
pub fn build_lattice(side: usize, dim: usize, periodic: bool) -> Result<FiniteGraph> {
    if side == 0 || dim == 0 {
        return Err(Error::InvalidSize("lattice needs side >= 1 and dim >= 1".into()));
    }
    if periodic && side < 3 {
        return Err(Error::InvalidSize(format!(
            "periodic lattice needs side >= 3, got {side}"
        )));
    }
    let n = side
        .checked_pow(dim as u32)
        .ok_or_else(|| Error::InvalidSize("lattice too large".into()))?;
    let mut edges = Vec::with_capacity(n * dim);
    let mut stride = 1;
    for _ in 0..dim {
        for v in 0..n {
            let coord = (v / stride) % side;
            if coord + 1 < side {
                edges.push(Edge::new(v, v + stride)?);
            } else if periodic {
                edges.push(Edge::new(v, v + stride - side * stride)?);
            }
        }
        stride *= side;
    }
    FiniteGraph::from_edges(n, edges)
}

/// Random tree by sequential attachment: vertex `k` joins a uniformly chosen
/// earlier vertex that still has spare degree.
pub fn random_tree(n: usize, max_degree: usize, seed: u64) -> Result<FiniteGraph> {
    if n == 0 {
        return Err(Error::InvalidSize("tree needs n >= 1".into()));
    }
    if (n >= 3 && max_degree < 2) || (n == 2 && max_degree == 0) {
        return Err(Error::OutOfRange(format!(
            "no tree on {n} vertices has maximum degree {max_degree}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut degree = vec![0usize; n];
    // vertices with spare capacity, swap-removed when saturated
    let mut open: Vec<usize> = vec![0];
    let mut slot = vec![usize::MAX; n];
    slot[0] = 0;
    let mut edges = Vec::with_capacity(n - 1);
    for k in 1..n {
        let pick = open[rng.random_range(0..open.len())];
        edges.push(Edge(pick, k));
        degree[pick] += 1;
        degree[k] = 1;
        if degree[pick] == max_degree {
            let s = slot[pick];
            open.swap_remove(s);
            if s < open.len() {
                slot[open[s]] = s;
            }
        }
        if max_degree > 1 {
            slot[k] = open.len();
            open.push(k);
        }
    }
    FiniteGraph::from_edges(n, edges)
}

/// Random connected graph: a [`random_tree`] plus up to `extra_edges`
/// chords, each joining two non-adjacent vertices with spare degree.
pub fn random_connected_graph(
    n: usize,
    max_degree: usize,
    extra_edges: usize,
    seed: u64,
) -> Result<FiniteGraph> {
    let tree = random_tree(n, max_degree, seed)?;
    if n < 3 || extra_edges == 0 {
        return Ok(tree);
    }
    let mut rng = rng_from_seed(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut adjacency: Vec<Vec<usize>> = (0..n).map(|v| tree.neighbors(v).to_vec()).collect();
    let mut edges = tree.edges.clone();
    let mut added = 0;
    let mut attempts = 0;
    while added < extra_edges && attempts < 50 * extra_edges + 100 {
        attempts += 1;
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v
            || adjacency[u].len() >= max_degree
            || adjacency[v].len() >= max_degree
            || adjacency[u].contains(&v)
        {
            continue;
        }
        adjacency[u].push(v);
        adjacency[v].push(u);
        edges.push(Edge::new(u, v)?);
        added += 1;
    }
    FiniteGraph::from_edges(n, edges)
}
