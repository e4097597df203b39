use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::annealed::{origin_measure, AnnealedOptions};
use super::lattice::{Component, Lattice};
use super::stats::{mean_stderr, MeanStderr};
use super::{check_boundary_rule, ClusterSample, Geometry, PercolationConfig};
use crate::bounds::lifshitz_bound;
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::linalg::{symmetric_eigenvalues, SymmetricMatrix};
use crate::par::map_indexed;
use crate::rng::sub_seed;

/// Finite-volume integrated density of states of the box-restricted
/// percolation Laplacian, averaged over samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdsCurve {
    pub e_grid: Vec<f64>,
    pub ids: Vec<f64>,
    pub ids_stderr: Vec<f64>,
    /// Zero eigenvalues per vertex, i.e. components per vertex.
    pub ids0: MeanStderr,
    /// `ids - ids0`, the mass of strictly positive eigenvalues up to `E`.
    pub excess: Vec<f64>,
    pub excess_stderr: Vec<f64>,
    /// Lifshitz bound on the grid, NaN until [`IdsCurve::with_lifshitz`].
    pub bound: Vec<f64>,
    pub in_window: Vec<bool>,
    pub e_hat: f64,
    /// Origin cluster size, the plug-in for `chi`.
    pub chi: MeanStderr,
    pub n_samples: usize,
    pub seed: u64,
}

impl IdsCurve {
    /// Fills `bound` and `in_window` from the Lifshitz-tail bound with
    /// expected cluster size `chi`.
    pub fn with_lifshitz(mut self, chi: f64, d: usize) -> Result<Self> {
        self.bound.clear();
        self.in_window.clear();
        for &e in &self.e_grid {
            let b = lifshitz_bound(e, chi, d)?;
            self.e_hat = b.e_hat;
            self.bound.push(b.value);
            self.in_window.push(b.in_window);
        }
        Ok(self)
    }

    /// Grid points in the window where `excess > bound + k * stderr`.
    pub fn violations(&self, k: f64) -> Vec<f64> {
        (0..self.e_grid.len())
            .filter(|&i| self.in_window[i] && self.excess[i] > self.bound[i] + k * self.excess_stderr[i])
            .map(|i| self.e_grid[i])
            .collect()
    }

    /// CSV with columns `E,ids,ids_minus_ids0,bound,in_window`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("E,ids,ids_minus_ids0,bound,in_window\n");
        for i in 0..self.e_grid.len() {
            let b = self.bound.get(i).copied().unwrap_or(f64::NAN);
            let w = self.in_window.get(i).copied().unwrap_or(false);
            let _ = writeln!(out, "{:?},{:?},{:?},{b:?},{w}", self.e_grid[i], self.ids[i], self.excess[i]);
        }
        out
    }
}

/// Both sides of the Laplace-transform identity at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceCheck {
    pub t: f64,
    /// `(1/|box|) Tr exp(-t L_n)` minus the zero-eigenvalue mass.
    pub ids_side: MeanStderr,
    /// `P^o[X_{2dt} = o] - 1/|C_o|` for the origin cluster.
    pub return_side: MeanStderr,
    /// Paired difference of the two sides.
    pub difference: MeanStderr,
    /// `(t + 1) |boundary| / |box|`: the trace comparison contributes
    /// `t |boundary| / |box|`, cut clusters add at most `|boundary| / |box|`
    /// to the component count.
    pub boundary_term: f64,
}

impl LaplaceCheck {
    pub fn holds(&self, k: f64) -> bool {
        self.difference.mean.abs() <= self.boundary_term + k * self.difference.stderr
    }
}

fn laplacian(c: &Component) -> SymmetricMatrix {
    let n = c.vertices.len();
    let mut m = SymmetricMatrix::zeros(n);
    for e in &c.edges {
        m.add_to(e.lo(), e.lo(), 1.0);
        m.add_to(e.hi(), e.hi(), 1.0);
        m.add_to(e.lo(), e.hi(), -1.0);
    }
    m
}

/// Eigenvalues of the component Laplacian with the zero mode removed.
fn positive_eigenvalues(c: &Component) -> Vec<f64> {
    match c.vertices.len() {
        1 => vec![],
        2 => vec![2.0],
        _ => {
            let mut v = symmetric_eigenvalues(&laplacian(c));
            v.sort_by(f64::total_cmp);
            v.remove(0);
            v
        }
    }
}

struct BoxSample {
    components: usize,
    /// Sorted positive eigenvalues over all components.
    positive: Vec<f64>,
    origin_returns: Vec<f64>,
    origin_size: usize,
    origin_touches: bool,
}

fn box_lattice(cfg: &PercolationConfig) -> Result<Lattice> {
    cfg.validate()?;
    match cfg.geometry {
        Geometry::Lattice { side, dim, periodic: false } => Lattice::new(side, dim, false),
        _ => Err(Error::OutOfRange("density of states experiments need a box lattice".into())),
    }
}

fn run_box(cfg: &PercolationConfig, t_grid: &[f64], opts: &AnnealedOptions) -> Result<Vec<BoxSample>> {
    let lat = box_lattice(cfg)?;
    let delta = 2 * lat.dim();
    let t_max = t_grid.iter().copied().fold(0.0, f64::max) * delta as f64;
    let out = map_indexed(cfg.n_samples, opts.execution, |i| -> Result<BoxSample> {
        let seed = sub_seed(cfg.seed, i as u64);
        let comps = lat.components(seed, cfg.p);
        let mut positive: Vec<f64> = comps.iter().flat_map(positive_eigenvalues).collect();
        positive.sort_by(f64::total_cmp);
        let origin = lat.origin();
        let oc = comps
            .iter()
            .find(|c| c.vertices.contains(&origin))
            .expect("components cover the box");
        let local = oc.vertices.iter().position(|&v| v == origin).expect("origin in its component");
        let sample = ClusterSample {
            graph: FiniteGraph::from_edges(oc.vertices.len(), oc.edges.clone())?,
            origin: local,
            delta,
            touches_boundary: oc.touches_boundary,
            truncated: false,
        };
        let m = origin_measure(&sample, &AnnealedOptions { spectral_limit: usize::MAX, ..*opts }, t_max)?;
        let origin_returns = t_grid
            .iter()
            .map(|&t| m.integrate(|x| (-(delta as f64) * t * (1.0 - x)).exp()))
            .collect();
        Ok(BoxSample {
            components: comps.len(),
            positive,
            origin_returns,
            origin_size: sample.size(),
            origin_touches: sample.touches_boundary,
        })
    });
    let out = out.into_iter().collect::<Result<Vec<_>>>()?;
    // the finite-volume IDS is defined on the box itself; only the origin
    // cluster side needs the boundary rule
    if !t_grid.is_empty() {
        check_boundary_rule(out.iter().filter(|s| s.origin_touches).count(), out.len())?;
    }
    Ok(out)
}

fn ids_from(cfg: &PercolationConfig, lat_order: usize, e_grid: &[f64], samples: &[BoxSample]) -> IdsCurve {
    let nv = lat_order as f64;
    let ids0 = mean_stderr(samples.iter().map(|s| s.components as f64 / nv));
    let mut curve = IdsCurve {
        e_grid: e_grid.to_vec(),
        ids: vec![],
        ids_stderr: vec![],
        ids0,
        excess: vec![],
        excess_stderr: vec![],
        bound: vec![f64::NAN; e_grid.len()],
        in_window: vec![false; e_grid.len()],
        e_hat: f64::NAN,
        chi: mean_stderr(samples.iter().map(|s| s.origin_size as f64)),
        n_samples: samples.len(),
        seed: cfg.seed,
    };
    for &e in e_grid {
        let count = |s: &BoxSample| s.positive.partition_point(|&x| x <= e) as f64 / nv;
        let full = mean_stderr(samples.iter().map(|s| s.components as f64 / nv + count(s)));
        let ex = mean_stderr(samples.iter().map(count));
        curve.ids.push(full.mean);
        curve.ids_stderr.push(full.stderr);
        curve.excess.push(ex.mean);
        curve.excess_stderr.push(ex.stderr);
    }
    curve
}

fn laplace_from(lat: &Lattice, t_grid: &[f64], samples: &[BoxSample]) -> Vec<LaplaceCheck> {
    let nv = lat.order() as f64;
    let ratio = lat.edge_boundary() as f64 / nv;
    t_grid
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let ids_side = |s: &BoxSample| s.positive.iter().map(|x| (-t * x).exp()).sum::<f64>() / nv;
            let ret_side = |s: &BoxSample| s.origin_returns[k] - 1.0 / s.origin_size as f64;
            LaplaceCheck {
                t,
                ids_side: mean_stderr(samples.iter().map(ids_side)),
                return_side: mean_stderr(samples.iter().map(ret_side)),
                difference: mean_stderr(samples.iter().map(|s| ids_side(s) - ret_side(s))),
                boundary_term: (t + 1.0) * ratio,
            }
        })
        .collect()
}

/// Empirical IDS of `cfg` (a box) on `e_grid`.
pub fn empirical_ids(cfg: &PercolationConfig, e_grid: &[f64], opts: &AnnealedOptions) -> Result<IdsCurve> {
    Ok(subcritical_box(cfg, e_grid, &[], opts)?.0)
}

/// Both sides of the Laplace-transform identity on `t_grid`.
pub fn laplace_identity(cfg: &PercolationConfig, t_grid: &[f64], opts: &AnnealedOptions) -> Result<Vec<LaplaceCheck>> {
    Ok(subcritical_box(cfg, &[], t_grid, opts)?.1)
}

/// IDS curve and Laplace-transform checks from one pass over the samples.
pub fn subcritical_box(
    cfg: &PercolationConfig,
    e_grid: &[f64],
    t_grid: &[f64],
    opts: &AnnealedOptions,
) -> Result<(IdsCurve, Vec<LaplaceCheck>)> {
    subcritical_box_with(cfg, |_| Ok(e_grid.to_vec()), t_grid, opts)
}

/// As [`subcritical_box`], with the energy grid chosen from the sampled
/// mean origin cluster size.
pub fn subcritical_box_with<F>(
    cfg: &PercolationConfig,
    e_grid: F,
    t_grid: &[f64],
    opts: &AnnealedOptions,
) -> Result<(IdsCurve, Vec<LaplaceCheck>)>
where
    F: FnOnce(f64) -> Result<Vec<f64>>,
{
    let lat = box_lattice(cfg)?;
    let samples = run_box(cfg, t_grid, opts)?;
    let chi = mean_stderr(samples.iter().map(|s| s.origin_size as f64)).mean;
    let grid = e_grid(chi)?;
    Ok((ids_from(cfg, lat.order(), &grid, &samples), laplace_from(&lat, t_grid, &samples)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_lattice;
    use crate::spectral::{combinatorial_laplacian, symmetric_spectrum, Order};

    #[test]
    fn p_zero_is_a_step_at_zero() {
        let cfg = PercolationConfig::lattice(16, 2, false, 0.0, 1, 3);
        let c = empirical_ids(&cfg, &[0.0, 0.5, 4.0], &AnnealedOptions::default()).unwrap();
        assert_eq!(c.ids, vec![1.0; 3]);
        assert_eq!(c.excess, vec![0.0; 3]);
        assert_eq!(c.ids0.mean, 1.0);
    }

    #[test]
    fn p_one_is_the_box_laplacian() {
        let side = 6;
        let cfg = PercolationConfig::lattice(side, 2, false, 1.0, 1, 1);
        let grid = [0.0, 0.3, 1.1, 2.5, 7.9, 8.0];
        let c = empirical_ids(&cfg, &grid, &AnnealedOptions::default()).unwrap();
        assert_eq!(c.ids0.mean, 1.0 / 36.0);
        let s = symmetric_spectrum(&combinatorial_laplacian(&build_lattice(side, 2, false).unwrap()), Order::NonDecreasing);
        for (i, &e) in grid.iter().enumerate() {
            let want = s.values.iter().filter(|&&x| x <= e + 1e-9).count() as f64 / 36.0;
            assert!((c.ids[i] - want).abs() < 1e-12, "E = {e}");
        }
        assert!(box_lattice(&PercolationConfig::lattice(6, 2, true, 0.5, 1, 1)).is_err());
    }

    #[test]
    fn laplace_sides_at_zero_time() {
        let cfg = PercolationConfig::lattice(24, 2, false, 0.3, 5, 40);
        let (ids, checks) = subcritical_box(&cfg, &[], &[0.0, 0.5], &AnnealedOptions::default()).unwrap();
        // at t = 0 the left side is the mass of positive modes, 1 - N(0)
        assert!((checks[0].ids_side.mean + ids.ids0.mean - 1.0).abs() < 1e-12);
        assert!(checks.iter().all(|c| c.holds(4.0)), "{checks:?}");
    }
}
