//! Eigenvalue comparison under edge removal.
//!
//! Removing an edge `e = {u, v}` from a graph adds to the RRW kernel the
//! matrix `S_e = (1/delta) (e_u - e_v)(e_u - e_v)^T`, which is positive
//! semidefinite of rank one. For a removal set `R` the perturbation has rank
//! at most `|R|`, and the nonincreasing spectra of `A` and `A' = A + S`
//! interlace as
//!
//! ```text
//! beta_j <= beta'_j <= beta_{max(j - |R|, 1)}
//! ```
//!
//! The combinatorial Laplacian shifts the other way: for a single removed
//! edge, `lambda_{j-1} <= lambda'_j <= lambda_j` (nondecreasing order).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, FiniteGraph};
use crate::linalg::SymmetricMatrix;
use crate::spectral::{combinatorial_laplacian, rrw_spectrum, symmetric_spectrum, Order, Spectrum};

/// Eigenvalues closer to one than this count as equal to one.
pub const UNIT_EIGENVALUE_TOL: f64 = 1e-7;

/// Per-index outcome of an interlacing check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterlacingReport {
    pub n: usize,
    /// Rank bound of the perturbation.
    pub r: usize,
    pub tolerance: f64,
    pub lower_ok: Vec<bool>,
    pub upper_ok: Vec<bool>,
    /// Largest signed violation over both chains; `<= 0` when every
    /// inequality holds exactly.
    pub max_violation: f64,
    pub before: Vec<f64>,
    pub after: Vec<f64>,
}

impl InterlacingReport {
    pub fn passed(&self) -> bool {
        self.lower_ok.iter().chain(&self.upper_ok).all(|&ok| ok)
    }
}

/// Slack `1e-9 * n` used by every interlacing assertion.
pub fn interlacing_tolerance(n: usize) -> f64 {
    1e-9 * n.max(1) as f64
}

fn check_subset(g: &FiniteGraph, r: &EdgeSet) -> Result<()> {
    match r.edges().iter().find(|e| !g.has_edge(**e)) {
        Some(e) => Err(Error::MissingEdge(e.lo(), e.hi())),
        None => Ok(()),
    }
}

/// `S = sum_{e in R} S_e`, so that `rrw_kernel(g - R) = rrw_kernel(g) + S`.
pub fn removal_perturbation(g: &FiniteGraph, r: &EdgeSet, delta: usize) -> Result<SymmetricMatrix> {
    check_subset(g, r)?;
    let max_degree = g.max_degree();
    if delta == 0 || delta < max_degree {
        return Err(Error::DegreeBound { delta, max_degree });
    }
    let w = 1.0 / delta as f64;
    let mut s = SymmetricMatrix::zeros(g.order());
    for e in r.edges() {
        s.add_to(e.lo(), e.lo(), w);
        s.add_to(e.hi(), e.hi(), w);
        s.add_to(e.lo(), e.hi(), -w);
    }
    Ok(s)
}

/// Compares nonincreasing RRW spectra of `g` and `g - R`.
pub fn check_rrw_interlacing(g: &FiniteGraph, r: &EdgeSet, delta: usize) -> Result<InterlacingReport> {
    let before = rrw_spectrum(g, delta)?;
    let after = rrw_spectrum(&g.remove_edges(r)?, delta)?;
    Ok(rrw_report(&before, &after, r.len()))
}

/// Interlacing report for two nonincreasing spectra related by a PSD
/// perturbation of rank at most `rank`.
pub fn rrw_report(before: &Spectrum, after: &Spectrum, rank: usize) -> InterlacingReport {
    let n = before.len();
    let tol = interlacing_tolerance(n);
    let mut max_violation = f64::NEG_INFINITY;
    let mut lower_ok = Vec::with_capacity(n);
    let mut upper_ok = Vec::with_capacity(n);
    for j in 1..=n {
        let low = before.nth(j) - after.nth(j);
        let up = after.nth(j) - before.nth(j.saturating_sub(rank).max(1));
        max_violation = max_violation.max(low).max(up);
        lower_ok.push(low <= tol);
        upper_ok.push(up <= tol);
    }
    InterlacingReport {
        n,
        r: rank,
        tolerance: tol,
        lower_ok,
        upper_ok,
        max_violation,
        before: before.values.clone(),
        after: after.values.clone(),
    }
}

/// Compares nondecreasing combinatorial-Laplacian spectra of `g` and `g - e`.
pub fn check_laplacian_interlacing(g: &FiniteGraph, e: Edge) -> Result<InterlacingReport> {
    if !g.has_edge(e) {
        return Err(Error::MissingEdge(e.lo(), e.hi()));
    }
    let before = symmetric_spectrum(&combinatorial_laplacian(g), Order::NonDecreasing);
    let reduced = g.remove_edges(&EdgeSet::single(e))?;
    let after = symmetric_spectrum(&combinatorial_laplacian(&reduced), Order::NonDecreasing);
    let n = before.len();
    let tol = interlacing_tolerance(n);
    let mut max_violation = f64::NEG_INFINITY;
    let mut lower_ok = Vec::with_capacity(n);
    let mut upper_ok = Vec::with_capacity(n);
    for j in 1..=n {
        // lambda_{j-1} <= lambda'_j, vacuous for j = 1
        let low = if j == 1 { f64::NEG_INFINITY } else { before.nth(j - 1) - after.nth(j) };
        let up = after.nth(j) - before.nth(j);
        max_violation = max_violation.max(low).max(up);
        lower_ok.push(low <= tol);
        upper_ok.push(up <= tol);
    }
    Ok(InterlacingReport {
        n,
        r: 1,
        tolerance: tol,
        lower_ok,
        upper_ok,
        max_violation,
        before: before.values,
        after: after.values,
    })
}

/// Number of RRW eigenvalues within [`UNIT_EIGENVALUE_TOL`] of one.
pub fn unit_eigenvalue_multiplicity(g: &FiniteGraph, delta: usize) -> Result<usize> {
    let s = rrw_spectrum(g, delta)?;
    Ok(s.values.iter().filter(|&&b| b > 1.0 - UNIT_EIGENVALUE_TOL).count())
}

/// One-based index of the first eigenvalue strictly below one in a
/// nonincreasing spectrum, or `None` if all equal one.
pub fn first_subunit_index(s: &Spectrum) -> Option<usize> {
    s.values
        .iter()
        .position(|&b| b < 1.0 - UNIT_EIGENVALUE_TOL)
        .map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_cycle, build_path, build_star, random_tree};
    use crate::linalg::jacobi_eigh;
    use crate::spectral::rrw_kernel;

    fn e(u: usize, v: usize) -> Edge {
        Edge::new(u, v).unwrap()
    }

    #[test]
    fn single_edge_perturbation_is_scaled_projection() {
        let g = build_path(3).unwrap();
        let s = removal_perturbation(&g, &EdgeSet::single(e(0, 1)), 2).unwrap();
        assert_eq!(
            s.rows(),
            vec![vec![0.5, -0.5, 0.0], vec![-0.5, 0.5, 0.0], vec![0.0, 0.0, 0.0]]
        );
        let zero = removal_perturbation(&g, &EdgeSet::empty(), 2).unwrap();
        assert_eq!(zero, SymmetricMatrix::zeros(3));
        assert!(removal_perturbation(&g, &EdgeSet::single(e(0, 2)), 2).is_err());
    }

    #[test]
    fn disjoint_edges_give_rank_two() {
        let g = build_path(4).unwrap();
        let r = EdgeSet::new(vec![e(0, 1), e(2, 3)]).unwrap();
        let s = removal_perturbation(&g, &r, 2).unwrap();
        let mut values = jacobi_eigh(&s).values;
        values.sort_by(|a, b| b.total_cmp(a));
        // each block is (1/2) [[1,-1],[-1,1]] with eigenvalues {1, 0}
        for (x, y) in values.iter().zip([1.0, 1.0, 0.0, 0.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn perturbation_reconstructs_kernel() {
        let g = crate::graph::random_connected_graph(12, 4, 6, 3).unwrap();
        let r = EdgeSet::new(g.edges()[..3].to_vec()).unwrap();
        let a = rrw_kernel(&g, 4).unwrap();
        let a2 = rrw_kernel(&g.remove_edges(&r).unwrap(), 4).unwrap();
        let s = removal_perturbation(&g, &r, 4).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                assert_eq!(((a2.get(i, j) - a.get(i, j)) * 4.0).round(), (s.get(i, j) * 4.0).round());
            }
        }
    }

    #[test]
    fn cycle_to_path() {
        let rep = check_rrw_interlacing(&build_cycle(4).unwrap(), &EdgeSet::single(e(0, 1)), 2).unwrap();
        assert!(rep.passed());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (x, y) in rep.after.iter().zip([1.0, h, 0.0, -h]) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in rep.before.iter().zip([1.0, 0.0, 0.0, -1.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn star_leaf_removal() {
        let rep = check_rrw_interlacing(&build_star(3).unwrap(), &EdgeSet::single(e(0, 3)), 3).unwrap();
        assert!(rep.passed());
        for (x, y) in rep.after.iter().zip([1.0, 1.0, 2.0 / 3.0, 0.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_removal_is_equality() {
        let g = random_tree(15, 3, 1).unwrap();
        let rep = check_rrw_interlacing(&g, &EdgeSet::empty(), 3).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.before, rep.after);
        assert!(rep.max_violation <= 0.0);
    }

    #[test]
    fn laplacian_examples() {
        let rep = check_laplacian_interlacing(&build_path(2).unwrap(), e(0, 1)).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.after.len(), 2);
        let c4 = check_laplacian_interlacing(&build_cycle(4).unwrap(), e(1, 2)).unwrap();
        assert!(c4.passed());
        let s2 = std::f64::consts::SQRT_2;
        for (x, y) in c4.after.iter().zip([0.0, 2.0 - s2, 2.0, 2.0 + s2]) {
            assert!((x - y).abs() < 1e-12);
        }
        let star = check_laplacian_interlacing(&build_star(3).unwrap(), e(0, 2)).unwrap();
        assert!(star.passed());
        for (x, y) in star.after.iter().zip([0.0, 0.0, 1.0, 3.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        assert_eq!(
            check_laplacian_interlacing(&build_path(3).unwrap(), e(0, 2)),
            Err(Error::MissingEdge(0, 2))
        );
    }

    #[test]
    fn unit_multiplicity_counts_components() {
        assert_eq!(unit_eigenvalue_multiplicity(&random_tree(9, 3, 2).unwrap(), 3).unwrap(), 1);
        let p8 = build_path(8).unwrap().spanning_tree().unwrap();
        let r = EdgeSet::new(vec![e(0, 1), e(3, 4), e(5, 6)]).unwrap();
        let forest = p8.remove_edges(&r).unwrap();
        assert_eq!(unit_eigenvalue_multiplicity(&forest, 2).unwrap(), 4);
        assert_eq!(first_subunit_index(&rrw_spectrum(&forest, 2).unwrap()), Some(5));
        assert_eq!(unit_eigenvalue_multiplicity(&FiniteGraph::edgeless(5).unwrap(), 1).unwrap(), 5);
    }
}
