//! Percolation experiments: cluster samplers, annealed return probabilities,
//! the mass-transport check, cluster-size tails and the empirical integrated
//! density of states.
//!
//! Every sampler output is a pure function of `(seed, sample_index)`, and
//! every aggregate folds per-sample results in index order.

mod annealed;
mod ids;
pub mod lattice;
pub mod stats;
mod tail;

pub use annealed::{
    annealed_return, mass_transport_check, origin_measure, AnnealedEstimate, AnnealedOptions,
    MassTransport,
};
pub use ids::{empirical_ids, laplace_identity, subcritical_box, subcritical_box_with, IdsCurve, LaplaceCheck};
pub use lattice::{edge_open, Component, Lattice};
pub use stats::{linear_fit, mean_stderr, MeanStderr};
pub use tail::{cluster_size_tail, ClusterSizeLaw};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{random_tree, Edge, FiniteGraph};
use crate::rng::{sample_rng, sub_seed};

/// Largest fraction of boundary-touching origin clusters a box experiment
/// tolerates.
pub const BOUNDARY_LIMIT: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Lattice { side: usize, dim: usize, periodic: bool },
    /// Rooted tree in which every vertex has `branching` potential children.
    Tree { branching: usize, size_cap: usize, delta: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PercolationConfig {
    pub geometry: Geometry,
    /// Retention probability.
    pub p: f64,
    pub seed: u64,
    pub n_samples: usize,
}

impl PercolationConfig {
    pub fn lattice(side: usize, dim: usize, periodic: bool, p: f64, seed: u64, n_samples: usize) -> Self {
        PercolationConfig { geometry: Geometry::Lattice { side, dim, periodic }, p, seed, n_samples }
    }

    /// Critical percolation (`p = 1/branching`) on the rooted tree with
    /// ambient degree `branching + 1`.
    pub fn critical_tree(branching: usize, size_cap: usize, seed: u64, n_samples: usize) -> Self {
        PercolationConfig {
            geometry: Geometry::Tree { branching, size_cap, delta: branching + 1 },
            p: 1.0 / branching as f64,
            seed,
            n_samples,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::OutOfRange(format!("p must lie in [0, 1], got {}", self.p)));
        }
        match self.geometry {
            Geometry::Lattice { side, dim, periodic } => Lattice::new(side, dim, periodic).map(|_| ()),
            Geometry::Tree { branching, size_cap, delta } => {
                if branching < 2 {
                    return Err(Error::OutOfRange(format!("branching must be >= 2, got {branching}")));
                }
                if size_cap == 0 {
                    return Err(Error::OutOfRange("size cap must be >= 1".into()));
                }
                if delta < branching + 1 {
                    return Err(Error::DegreeBound { delta, max_degree: branching + 1 });
                }
                Ok(())
            }
        }
    }

    /// Ambient degree used by the RRW on sampled clusters.
    pub fn delta(&self) -> usize {
        match self.geometry {
            Geometry::Lattice { dim, .. } => 2 * dim,
            Geometry::Tree { delta, .. } => delta,
        }
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::Bernoulli { geometry: self.geometry.clone(), p: self.p }
    }
}

/// The origin's cluster, relabelled so that it is a connected graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSample {
    pub graph: FiniteGraph,
    pub origin: usize,
    pub delta: usize,
    /// Box clusters reaching the boundary; always false on tori and trees.
    pub touches_boundary: bool,
    /// Tree clusters stopped at the size cap.
    pub truncated: bool,
}

impl ClusterSample {
    pub fn size(&self) -> usize {
        self.graph.order()
    }
}

/// How clusters are produced for annealed averages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sampler {
    Bernoulli { geometry: Geometry, p: f64 },
    /// Cluster size with law `P[m] ~ exp(-m / n_hat)` and random tree shape.
    Geometric { n_hat: f64, delta: usize },
}

impl Sampler {
    pub fn delta(&self) -> usize {
        match self {
            Sampler::Bernoulli { geometry, p } => {
                PercolationConfig { geometry: geometry.clone(), p: *p, seed: 0, n_samples: 0 }.delta()
            }
            Sampler::Geometric { delta, .. } => *delta,
        }
    }

    pub fn sample(&self, seed: u64, index: u64) -> Result<ClusterSample> {
        match self {
            Sampler::Bernoulli { geometry, p } => {
                let cfg = PercolationConfig { geometry: geometry.clone(), p: *p, seed, n_samples: 0 };
                sample_origin_cluster(&cfg, index)
            }
            Sampler::Geometric { n_hat, delta } => sample_geometric_cluster(*n_hat, *delta, seed, index),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Sampler::Bernoulli { geometry, p } => {
                PercolationConfig { geometry: geometry.clone(), p: *p, seed: 0, n_samples: 0 }.validate()
            }
            Sampler::Geometric { n_hat, delta } => {
                if !(*n_hat > 0.0) || *delta < 2 {
                    return Err(Error::OutOfRange(format!(
                        "geometric sampler needs n_hat > 0 and delta >= 2 (n_hat = {n_hat}, delta = {delta})"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Origin cluster of sample `sample_index` under `cfg`.
pub fn sample_origin_cluster(cfg: &PercolationConfig, sample_index: u64) -> Result<ClusterSample> {
    cfg.validate()?;
    match cfg.geometry {
        Geometry::Lattice { side, dim, periodic } => {
            let lat = Lattice::new(side, dim, periodic)?;
            let mut labels = vec![usize::MAX; lat.order()];
            let c = lat.component(sub_seed(cfg.seed, sample_index), cfg.p, lat.origin(), &mut labels);
            Ok(ClusterSample {
                graph: FiniteGraph::from_edges(c.vertices.len(), c.edges)?,
                origin: 0,
                delta: 2 * dim,
                touches_boundary: c.touches_boundary,
                truncated: false,
            })
        }
        Geometry::Tree { branching, size_cap, delta } => {
            galton_watson(branching, cfg.p, delta, cfg.seed, sample_index, size_cap)
        }
    }
}

/// Cluster of the root under critical percolation on the tree with
/// `branching` children per vertex, grown breadth first and stopped at
/// `size_cap` vertices.
pub fn sample_critical_tree_cluster(
    branching: usize,
    seed: u64,
    sample_index: u64,
    size_cap: usize,
) -> Result<ClusterSample> {
    let cfg = PercolationConfig::critical_tree(branching, size_cap, seed, 0);
    sample_origin_cluster(&cfg, sample_index)
}

fn galton_watson(
    branching: usize,
    p: f64,
    delta: usize,
    seed: u64,
    index: u64,
    size_cap: usize,
) -> Result<ClusterSample> {
    let mut rng = sample_rng(seed, index);
    let mut edges = Vec::new();
    let mut n = 1;
    let mut head = 0;
    let mut truncated = false;
    'grow: while head < n {
        for _ in 0..branching {
            if rng.random::<f64>() < p {
                if n == size_cap {
                    truncated = true;
                    break 'grow;
                }
                edges.push(Edge::new(head, n)?);
                n += 1;
            }
        }
        head += 1;
    }
    Ok(ClusterSample {
        graph: FiniteGraph::from_edges(n, edges)?,
        origin: 0,
        delta,
        touches_boundary: false,
        truncated,
    })
}

/// Synthetic invariant-percolation cluster: size `m = 1 + floor(-n_hat ln U)`
/// so that `P[m] ~ exp(-m / n_hat)`, shape a random tree of maximum degree
/// `delta`, origin uniform.
pub fn sample_geometric_cluster(n_hat: f64, delta: usize, seed: u64, sample_index: u64) -> Result<ClusterSample> {
    Sampler::Geometric { n_hat, delta }.validate()?;
    let mut rng = sample_rng(seed, sample_index);
    let u = 1.0 - rng.random::<f64>();
    let m = 1 + (-n_hat * u.ln()).floor() as usize;
    let graph = random_tree(m, delta, rng.random())?;
    let origin = rng.random_range(0..m);
    Ok(ClusterSample { graph, origin, delta, touches_boundary: false, truncated: false })
}

/// Fails when more than [`BOUNDARY_LIMIT`] of the origin clusters touch the
/// box boundary.
pub fn check_boundary_rule(touching: usize, total: usize) -> Result<()> {
    if total > 0 && touching as f64 > BOUNDARY_LIMIT * total as f64 {
        return Err(Error::BoundaryTruncation { touching, total });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_extremes() {
        let empty = sample_origin_cluster(&PercolationConfig::lattice(9, 2, false, 0.0, 1, 1), 0).unwrap();
        assert_eq!(empty.size(), 1);
        let full = sample_origin_cluster(&PercolationConfig::lattice(9, 2, false, 1.0, 1, 1), 0).unwrap();
        assert_eq!(full.size(), 81);
        assert_eq!(full.graph.size(), 144);
        assert!(full.touches_boundary);
        assert_eq!(full.delta, 4);
        assert!(sample_origin_cluster(&PercolationConfig::lattice(9, 2, false, 1.5, 1, 1), 0).is_err());
    }

    #[test]
    fn samplers_are_deterministic() {
        let cfg = PercolationConfig::lattice(32, 2, false, 0.45, 77, 1);
        for i in 0..20 {
            assert_eq!(sample_origin_cluster(&cfg, i).unwrap(), sample_origin_cluster(&cfg, i).unwrap());
            assert_eq!(sample_geometric_cluster(3.0, 3, 5, i).unwrap(), sample_geometric_cluster(3.0, 3, 5, i).unwrap());
            assert_eq!(
                sample_critical_tree_cluster(2, 8, i, 500).unwrap(),
                sample_critical_tree_cluster(2, 8, i, 500).unwrap()
            );
        }
    }

    #[test]
    fn clusters_are_connected_and_degree_bounded() {
        let cfg = PercolationConfig::lattice(20, 3, true, 0.3, 4, 1);
        for i in 0..30 {
            for s in [
                sample_origin_cluster(&cfg, i).unwrap(),
                sample_geometric_cluster(4.0, 4, 9, i).unwrap(),
                sample_critical_tree_cluster(2, 1, i, 1000).unwrap(),
            ] {
                assert!(s.graph.is_connected());
                assert!(s.graph.max_degree() <= s.delta);
                assert!(s.origin < s.size());
            }
        }
    }

    #[test]
    fn critical_tree_singleton_probability() {
        let n = 20_000;
        let singles = (0..n)
            .filter(|&i| sample_critical_tree_cluster(2, 3, i, 100).unwrap().size() == 1)
            .count();
        let freq = singles as f64 / n as f64;
        let sd = (0.25f64 * 0.75 / n as f64).sqrt();
        assert!((freq - 0.25).abs() < 4.0 * sd, "{freq}");
    }

    #[test]
    fn size_cap_is_recorded() {
        let capped = (0..500)
            .map(|i| sample_critical_tree_cluster(2, 11, i, 5).unwrap())
            .filter(|s| s.truncated)
            .collect::<Vec<_>>();
        assert!(!capped.is_empty());
        assert!(capped.iter().all(|s| s.size() == 5));
    }

    #[test]
    fn geometric_sizes() {
        let n = 20_000;
        let sizes: Vec<f64> = (0..n)
            .map(|i| sample_geometric_cluster(2.0, 3, 1, i).unwrap().size() as f64)
            .collect();
        let s = mean_stderr(sizes);
        assert!(s.mean >= 2.0 - 3.0 * s.stderr && s.mean <= 3.0 + 3.0 * s.stderr, "{s:?}");
        let tiny = (0..1000).filter(|&i| sample_geometric_cluster(1e-3, 3, 1, i).unwrap().size() == 1).count();
        assert_eq!(tiny, 1000);
    }

    #[test]
    fn boundary_rule() {
        assert!(check_boundary_rule(1, 100).is_ok());
        assert_eq!(
            check_boundary_rule(2, 100),
            Err(Error::BoundaryTruncation { touching: 2, total: 100 })
        );
    }
}
