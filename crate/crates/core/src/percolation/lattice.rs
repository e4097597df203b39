//! Bernoulli bond configurations on boxes and tori.
//!
//! Edge states are drawn by hashing `(sample seed, edge index)`, so any part
//! of a configuration can be queried without materialising the rest. The
//! origin cluster of a sample and the full box decomposition of the same
//! sample therefore see identical edges.

use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::rng::mix64;

/// Box `{0..side}^dim` or torus, indexed as in [`crate::graph::build_lattice`].
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    side: usize,
    dim: usize,
    periodic: bool,
    n: usize,
    strides: Vec<usize>,
}

/// A connected component with local labels `0..vertices.len()` in BFS order.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
    pub touches_boundary: bool,
}

impl Lattice {
    pub fn new(side: usize, dim: usize, periodic: bool) -> Result<Self> {
        if side == 0 || dim == 0 {
            return Err(Error::InvalidSize("lattice needs side >= 1 and dim >= 1".into()));
        }
        if periodic && side < 3 {
            return Err(Error::InvalidSize(format!("periodic lattice needs side >= 3, got {side}")));
        }
        let n = side
            .checked_pow(dim as u32)
            .ok_or_else(|| Error::InvalidSize("lattice too large".into()))?;
        let strides = (0..dim).map(|i| side.pow(i as u32)).collect();
        Ok(Lattice { side, dim, periodic, n, strides })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    /// Box centre, or vertex 0 on the torus.
    pub fn origin(&self) -> usize {
        if self.periodic {
            0
        } else {
            self.strides.iter().map(|s| s * (self.side / 2)).sum()
        }
    }

    fn coord(&self, v: usize, i: usize) -> usize {
        (v / self.strides[i]) % self.side
    }

    pub fn on_boundary(&self, v: usize) -> bool {
        !self.periodic && (0..self.dim).any(|i| {
            let c = self.coord(v, i);
            c == 0 || c + 1 == self.side
        })
    }

    /// Number of edges of `Z^d` leaving the box, `2 d side^{d-1}`; zero on the
    /// torus.
    pub fn edge_boundary(&self) -> usize {
        if self.periodic {
            0
        } else {
            2 * self.dim * self.side.pow(self.dim as u32 - 1)
        }
    }

    /// Lattice neighbours of `v` with the index of the connecting edge.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.dim).flat_map(move |i| {
            let s = self.strides[i];
            let c = self.coord(v, i);
            let fwd = if c + 1 < self.side {
                Some(v + s)
            } else if self.periodic {
                Some(v + s - self.side * s)
            } else {
                None
            };
            let back = if c > 0 {
                Some(v - s)
            } else if self.periodic {
                Some(v + (self.side - 1) * s)
            } else {
                None
            };
            // the edge {w, w + e_i} carries index w * dim + i
            fwd.map(|w| (w, v * self.dim + i))
                .into_iter()
                .chain(back.map(|w| (w, w * self.dim + i)))
        })
    }

    /// BFS over open edges from `start`, labelling visited vertices in
    /// `labels` (entries must be `usize::MAX` for unvisited vertices).
    pub fn component(&self, sample_seed: u64, p: f64, start: usize, labels: &mut [usize]) -> Component {
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        let mut touches_boundary = false;
        labels[start] = 0;
        let mut head = 0;
        while head < vertices.len() {
            let u = vertices[head];
            let lu = head;
            head += 1;
            touches_boundary |= self.on_boundary(u);
            for (w, e) in self.neighbors(u) {
                if !edge_open(sample_seed, e, p) {
                    continue;
                }
                if labels[w] == usize::MAX {
                    labels[w] = vertices.len();
                    vertices.push(w);
                }
                if labels[w] > lu {
                    edges.push(Edge::new(lu, labels[w]).expect("distinct labels"));
                }
            }
        }
        Component { vertices, edges, touches_boundary }
    }

    /// Every component of the sample, in order of their smallest vertex.
    pub fn components(&self, sample_seed: u64, p: f64) -> Vec<Component> {
        let mut labels = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for v in 0..self.n {
            if labels[v] == usize::MAX {
                out.push(self.component(sample_seed, p, v, &mut labels));
            }
        }
        out
    }
}

/// State of edge `edge` in the sample with seed `sample_seed`.
pub fn edge_open(sample_seed: u64, edge: usize, p: f64) -> bool {
    if p >= 1.0 {
        return true;
    }
    if p <= 0.0 {
        return false;
    }
    let h = mix64(sample_seed ^ mix64(edge as u64 + 1));
    ((h >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_lattice;

    #[test]
    fn neighbours_match_graph_builder() {
        for (side, dim, periodic) in [(4, 2, false), (3, 3, true), (5, 1, false), (6, 2, true)] {
            let lat = Lattice::new(side, dim, periodic).unwrap();
            let g = build_lattice(side, dim, periodic).unwrap();
            let mut seen = std::collections::HashSet::new();
            for v in 0..lat.order() {
                let mut ours: Vec<usize> = lat.neighbors(v).map(|(w, _)| w).collect();
                ours.sort();
                assert_eq!(ours, g.neighbors(v));
                for (w, e) in lat.neighbors(v) {
                    seen.insert((e, v.min(w), v.max(w)));
                }
            }
            // one index per edge, shared by both endpoints
            let ids: std::collections::HashSet<usize> = seen.iter().map(|x| x.0).collect();
            assert_eq!(ids.len(), g.size());
            assert_eq!(seen.len(), g.size());
        }
    }

    #[test]
    fn extremes_of_p() {
        let lat = Lattice::new(5, 2, false).unwrap();
        let mut labels = vec![usize::MAX; 25];
        let c = lat.component(9, 0.0, lat.origin(), &mut labels);
        assert_eq!(c.vertices, vec![12]);
        assert!(!c.touches_boundary);
        let mut labels = vec![usize::MAX; 25];
        let c = lat.component(9, 1.0, lat.origin(), &mut labels);
        assert_eq!(c.vertices.len(), 25);
        assert_eq!(c.edges.len(), 40);
        assert!(c.touches_boundary);
        assert_eq!(lat.components(3, 0.0).len(), 25);
    }

    #[test]
    fn components_partition_the_box() {
        let lat = Lattice::new(16, 2, false).unwrap();
        let comps = lat.components(42, 0.4);
        let mut all: Vec<usize> = comps.iter().flat_map(|c| c.vertices.clone()).collect();
        all.sort();
        assert_eq!(all, (0..256).collect::<Vec<_>>());
        let open = (0..lat.order())
            .flat_map(|v| lat.neighbors(v).filter(move |&(w, _)| w > v))
            .filter(|&(_, e)| edge_open(42, e, 0.4))
            .count();
        assert_eq!(comps.iter().map(|c| c.edges.len()).sum::<usize>(), open);
        assert_eq!(lat.edge_boundary(), 64);
    }
}
