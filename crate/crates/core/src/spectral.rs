//! Laplacians, the regularised random walk (RRW) kernel and heat-kernel
//! traces.
//!
//! The RRW on a graph of maximum degree at most `delta` is the simple random
//! walk on the graph decorated with loops up to degree `delta`. Its kernel is
//! `A = I - L / delta` with `L = D - Adj` the combinatorial Laplacian, so it is
//! symmetric and doubly stochastic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::linalg::{symmetric_eigenvalues, SymmetricMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    NonIncreasing,
    NonDecreasing,
}

/// An ordered list of real eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub order: Order,
    pub values: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut values: Vec<f64>, order: Order) -> Self {
        match order {
            Order::NonIncreasing => values.sort_by(|a, b| b.total_cmp(a)),
            Order::NonDecreasing => values.sort_by(f64::total_cmp),
        }
        Spectrum { order, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// One-based access, matching the usual `beta_j` / `lambda_j` indexing.
    pub fn nth(&self, j: usize) -> f64 {
        self.values[j - 1]
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Spectrum = serde_json::from_str(s)?;
        let sorted = Spectrum::new(raw.values.clone(), raw.order);
        if sorted.values != raw.values {
            return Err(Error::Serde("spectrum values are not sorted per their order tag".into()));
        }
        Ok(raw)
    }
}

fn check_delta(g: &FiniteGraph, delta: usize) -> Result<()> {
    let max_degree = g.max_degree();
    if delta == 0 || delta < max_degree {
        return Err(Error::DegreeBound { delta, max_degree });
    }
    Ok(())
}

/// `L = D - Adj`.
pub fn combinatorial_laplacian(g: &FiniteGraph) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(g.order());
    for e in g.edges() {
        m.set(e.lo(), e.hi(), -1.0);
        m.add_to(e.lo(), e.lo(), 1.0);
        m.add_to(e.hi(), e.hi(), 1.0);
    }
    m
}

/// SRW normalised Laplacian `I - D^{-1/2} Adj D^{-1/2}`. Isolated vertices are
/// rejected.
pub fn normalized_laplacian(g: &FiniteGraph) -> Result<SymmetricMatrix> {
    let degrees = g.degrees();
    if let Some(v) = degrees.iter().position(|&d| d == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    let mut m = SymmetricMatrix::identity(g.order());
    for e in g.edges() {
        let w = 1.0 / ((degrees[e.lo()] * degrees[e.hi()]) as f64).sqrt();
        m.set(e.lo(), e.hi(), -w);
    }
    Ok(m)
}

/// RRW transition kernel `A = I - L / delta`.
pub fn rrw_kernel(g: &FiniteGraph, delta: usize) -> Result<SymmetricMatrix> {
    check_delta(g, delta)?;
    let d = delta as f64;
    let mut m = SymmetricMatrix::zeros(g.order());
    for v in 0..g.order() {
        m.set(v, v, (delta - g.degree(v)) as f64 / d);
    }
    for e in g.edges() {
        m.set(e.lo(), e.hi(), 1.0 / d);
    }
    Ok(m)
}

/// Sorted eigenvalues of a symmetric matrix.
pub fn symmetric_spectrum(m: &SymmetricMatrix, order: Order) -> Spectrum {
    Spectrum::new(symmetric_eigenvalues(m), order)
}

/// RRW spectrum of the path `P_n`, `1 - (2/delta)(1 - cos((j-1) pi / n))`.
pub fn path_rrw_spectrum(n: usize, delta: usize) -> Result<Spectrum> {
    if n == 0 {
        return Err(Error::InvalidSize("path needs n >= 1".into()));
    }
    if delta < 2 && n > 2 {
        return Err(Error::DegreeBound { delta, max_degree: 2 });
    }
    if delta == 0 {
        return Err(Error::DegreeBound { delta, max_degree: 1 });
    }
    let values = (1..=n)
        .map(|j| path_rrw_eigenvalue(n, delta, j))
        .collect();
    Ok(Spectrum::new(values, Order::NonIncreasing))
}

/// Single entry `beta^o_j` of [`path_rrw_spectrum`], `1 <= j <= n`.
pub fn path_rrw_eigenvalue(n: usize, delta: usize, j: usize) -> f64 {
    let theta = (j - 1) as f64 * std::f64::consts::PI / n as f64;
    1.0 - (2.0 / delta as f64) * (1.0 - theta.cos())
}

pub fn rrw_spectrum(g: &FiniteGraph, delta: usize) -> Result<Spectrum> {
    Ok(symmetric_spectrum(&rrw_kernel(g, delta)?, Order::NonIncreasing))
}

/// `(1/N) sum_j exp(-t (1 - beta_j))` over an RRW spectrum.
pub fn heat_trace_average(spectrum: &Spectrum, t: f64) -> f64 {
    let n = spectrum.len() as f64;
    spectrum.values.iter().map(|b| (-t * (1.0 - b)).exp()).sum::<f64>() / n
}

/// Average return probability of the continuous-time RRW,
/// `(1/N) Tr exp(-t (I - A))`.
pub fn avg_return_continuous(g: &FiniteGraph, delta: usize, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::OutOfRange(format!("time must be nonnegative, got {t}")));
    }
    Ok(heat_trace_average(&rrw_spectrum(g, delta)?, t))
}

/// Average return probability of the discrete-time RRW, `(1/N) Tr A^steps`.
pub fn avg_return_discrete(g: &FiniteGraph, delta: usize, steps: u32) -> Result<f64> {
    let s = rrw_spectrum(g, delta)?;
    Ok(discrete_trace_average(&s, steps))
}

/// `(1/N) sum_j beta_j^steps`.
pub fn discrete_trace_average(spectrum: &Spectrum, steps: u32) -> f64 {
    let n = spectrum.len() as f64;
    spectrum.values.iter().map(|b| b.powi(steps as i32)).sum::<f64>() / n
}

/// Same for the lazy chain `(I + A) / 2`.
pub fn lazy_trace_average(spectrum: &Spectrum, steps: u32) -> f64 {
    let n = spectrum.len() as f64;
    spectrum
        .values
        .iter()
        .map(|b| (0.5 * (1.0 + b)).powi(steps as i32))
        .sum::<f64>()
        / n
}

/// Nondecreasing spectra of the SRW normalised Laplacian, of `L / delta`
/// (the RRW normalised Laplacian) and of the lazy normalised Laplacian
/// `normalized / delta`.
pub fn three_laplacian_spectra(
    g: &FiniteGraph,
    delta: usize,
) -> Result<(Spectrum, Spectrum, Spectrum)> {
    check_delta(g, delta)?;
    let components = g.connected_components().len();
    if components != 1 {
        return Err(Error::Disconnected(components));
    }
    let srw = symmetric_spectrum(&normalized_laplacian(g)?, Order::NonDecreasing);
    let rrw = symmetric_spectrum(
        &combinatorial_laplacian(g).scaled(1.0 / delta as f64),
        Order::NonDecreasing,
    );
    let lazy = Spectrum::new(
        srw.values.iter().map(|x| x / delta as f64).collect(),
        Order::NonDecreasing,
    );
    Ok((srw, rrw, lazy))
}

/// Average return probability of the continuous-time simple random walk,
/// `(1/N) Tr exp(-t normalized)`.
pub fn srw_avg_return_continuous(g: &FiniteGraph, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::OutOfRange(format!("time must be nonnegative, got {t}")));
    }
    let components = g.connected_components().len();
    if components != 1 {
        return Err(Error::Disconnected(components));
    }
    let s = symmetric_spectrum(&normalized_laplacian(g)?, Order::NonDecreasing);
    let n = s.len() as f64;
    Ok(s.values.iter().map(|l| (-t * l).exp()).sum::<f64>() / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_cycle, build_path, build_star};
    use crate::linalg::jacobi_eigh;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn laplacian_examples() {
        let single = combinatorial_laplacian(&FiniteGraph::edgeless(1).unwrap());
        assert_eq!(single.rows(), vec![vec![0.0]]);
        let edge = combinatorial_laplacian(&build_path(2).unwrap());
        assert_eq!(edge.rows(), vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
        let star = combinatorial_laplacian(&build_star(3).unwrap());
        assert_eq!(star.row(0), &[3.0, -1.0, -1.0, -1.0]);
        assert_eq!(star.row(2), &[-1.0, 0.0, 1.0, 0.0]);
        for i in 0..4 {
            assert_eq!(star.row(i).iter().sum::<f64>(), 0.0);
        }
    }

    #[test]
    fn kernel_examples() {
        let edge = rrw_kernel(&build_path(2).unwrap(), 1).unwrap();
        assert_eq!(edge.rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(close(&symmetric_spectrum(&edge, Order::NonIncreasing).values, &[1.0, -1.0], 1e-14));

        let star = rrw_spectrum(&build_star(3).unwrap(), 3).unwrap();
        assert!(close(&star.values, &[1.0, 2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0], 1e-12));

        let p3 = rrw_spectrum(&build_path(3).unwrap(), 2).unwrap();
        assert!(close(&p3.values, &[1.0, 0.5, -0.5], 1e-12));

        assert_eq!(
            rrw_kernel(&build_star(3).unwrap(), 2),
            Err(Error::DegreeBound { delta: 2, max_degree: 3 })
        );
    }

    #[test]
    fn kernel_is_doubly_stochastic() {
        let g = crate::graph::random_connected_graph(30, 4, 12, 5).unwrap();
        let a = rrw_kernel(&g, 5).unwrap();
        for i in 0..30 {
            assert!((a.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(a.row(i).iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn spectrum_examples() {
        let id = symmetric_spectrum(&SymmetricMatrix::identity(3), Order::NonIncreasing);
        assert_eq!(id.values, vec![1.0; 3]);
        let d = symmetric_spectrum(&SymmetricMatrix::from_diagonal(&[3.0, 1.0, 2.0]), Order::NonIncreasing);
        assert_eq!(d.values, vec![3.0, 2.0, 1.0]);
        let c4 = rrw_spectrum(&build_cycle(4).unwrap(), 2).unwrap();
        assert!(close(&c4.values, &[1.0, 0.0, 0.0, -1.0], 1e-12));
    }

    #[test]
    fn path_closed_form() {
        assert!(close(&path_rrw_spectrum(2, 2).unwrap().values, &[1.0, 0.0], 1e-15));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(&path_rrw_spectrum(4, 2).unwrap().values, &[1.0, h, 0.0, -h], 1e-15));
        assert_eq!(path_rrw_spectrum(1, 2).unwrap().values, vec![1.0]);
        for n in 1..=64 {
            for delta in 2..=4 {
                let exact = rrw_spectrum(&build_path(n).unwrap(), delta).unwrap();
                let formula = path_rrw_spectrum(n, delta).unwrap();
                assert!(close(&exact.values, &formula.values, 1e-9), "n={n} delta={delta}");
            }
        }
    }

    #[test]
    fn continuous_return_examples() {
        let edge = build_path(2).unwrap();
        assert_eq!(avg_return_continuous(&edge, 1, 0.0).unwrap(), 1.0);
        let expect = (1.0 + (-2.0f64).exp()) / 2.0;
        assert!((avg_return_continuous(&edge, 1, 1.0).unwrap() - expect).abs() < 1e-14);
        let single = FiniteGraph::edgeless(1).unwrap();
        assert_eq!(avg_return_continuous(&single, 1, 7.0).unwrap(), 1.0);
        assert!(avg_return_continuous(&edge, 1, -1.0).is_err());
        // long-time limit counts components
        let forest = build_path(6).unwrap().remove_edges(&crate::graph::EdgeSet::single(crate::graph::Edge::new(2, 3).unwrap())).unwrap();
        assert!((avg_return_continuous(&forest, 2, 1e4).unwrap() - 2.0 / 6.0).abs() < 1e-9);
    }

    #[test]
    fn discrete_return_examples() {
        let edge = build_path(2).unwrap();
        assert_eq!(avg_return_discrete(&edge, 1, 0).unwrap(), 1.0);
        assert!(avg_return_discrete(&edge, 1, 1).unwrap().abs() < 1e-14);
        assert!((avg_return_discrete(&edge, 1, 2).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn srw_examples() {
        let edge = build_path(2).unwrap();
        assert_eq!(srw_avg_return_continuous(&edge, 0.0).unwrap(), 1.0);
        let expect = (1.0 + (-2.0f64).exp()) / 2.0;
        assert!((srw_avg_return_continuous(&edge, 1.0).unwrap() - expect).abs() < 1e-14);
        let c4 = build_cycle(4).unwrap();
        assert!((srw_avg_return_continuous(&c4, 200.0).unwrap() - 0.25).abs() < 1e-12);
        let mut isolated = FiniteGraph::edgeless(1).unwrap();
        assert!(srw_avg_return_continuous(&isolated, 1.0).is_err());
        isolated = FiniteGraph::edgeless(2).unwrap();
        assert!(srw_avg_return_continuous(&isolated, 1.0).is_err());
    }

    #[test]
    fn three_spectra_examples() {
        let (a, b, c) = three_laplacian_spectra(&build_path(2).unwrap(), 1).unwrap();
        for s in [&a, &b, &c] {
            assert!(close(&s.values, &[0.0, 2.0], 1e-12));
        }
        for (g, delta) in [(build_path(3).unwrap(), 2), (build_star(3).unwrap(), 3)] {
            let (srw, rrw, lazy) = three_laplacian_spectra(&g, delta).unwrap();
            // independent oracle for the SRW spectrum
            let mut oracle = jacobi_eigh(&normalized_laplacian(&g).unwrap()).values;
            oracle.sort_by(f64::total_cmp);
            assert!(close(&srw.values, &oracle, 1e-10));
            for j in 0..g.order() {
                assert!(srw.values[j] >= rrw.values[j] - 1e-12);
                assert!(rrw.values[j] >= lazy.values[j] - 1e-12);
            }
        }
        let p3 = three_laplacian_spectra(&build_path(3).unwrap(), 2).unwrap();
        assert!(close(&p3.1.values, &[0.0, 0.5, 1.5], 1e-12));
        assert!(three_laplacian_spectra(&FiniteGraph::edgeless(2).unwrap(), 1).is_err());
    }

    #[test]
    fn spectrum_json() {
        let s = path_rrw_spectrum(3, 2).unwrap();
        let json = s.to_json().unwrap();
        assert!(json.starts_with("{\"order\":\"nonincreasing\",\"values\":["));
        let back = Spectrum::from_json(&json).unwrap();
        assert_eq!(back, s);
        assert!(Spectrum::from_json(r#"{"order":"nonincreasing","values":[0.0,1.0]}"#).is_err());
    }
}
