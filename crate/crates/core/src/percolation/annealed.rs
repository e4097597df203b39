use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::stats::{mean_stderr, MeanStderr};
use super::{check_boundary_rule, sample_origin_cluster, ClusterSample, Geometry, PercolationConfig, Sampler};
use crate::bounds::BoundPoint;
use crate::error::{Error, Result};
use crate::linalg::{krylov_measure, spectral_measure_at, SpectralMeasure};
use crate::par::{map_indexed, Execution};
use crate::spectral::rrw_kernel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealedOptions {
    /// Clusters larger than this are counted as oversize and left out.
    pub spectral_limit: usize,
    /// Clusters up to this size use the dense solver, larger ones Lanczos.
    pub dense_limit: usize,
    /// Certified quadrature error of the Lanczos return probabilities.
    pub krylov_tol: f64,
    pub execution: Execution,
}

impl Default for AnnealedOptions {
    fn default() -> Self {
        AnnealedOptions { spectral_limit: 2000, dense_limit: 200, krylov_tol: 1e-12, execution: Execution::default() }
    }
}

/// Spectral measure of the origin under the cluster's RRW kernel, accurate
/// for heat times up to `t_max`.
pub fn origin_measure(s: &ClusterSample, opts: &AnnealedOptions, t_max: f64) -> Result<SpectralMeasure> {
    let n = s.size();
    if n > opts.spectral_limit {
        return Err(Error::Oversize { size: n, limit: opts.spectral_limit });
    }
    if n == 1 {
        return Ok(SpectralMeasure {
            values: vec![1.0],
            weights: vec![1.0],
            exact: true,
            log_remainder_factor: f64::NEG_INFINITY,
        });
    }
    if n <= opts.dense_limit {
        return Ok(spectral_measure_at(&rrw_kernel(&s.graph, s.delta)?, s.origin));
    }
    if s.graph.max_degree() > s.delta {
        return Err(Error::DegreeBound { delta: s.delta, max_degree: s.graph.max_degree() });
    }
    let g = &s.graph;
    let w = 1.0 / s.delta as f64;
    let apply = |x: &[f64], y: &mut [f64]| {
        for (v, yv) in y.iter_mut().enumerate() {
            let nb = g.neighbors(v);
            let lx = nb.len() as f64 * x[v] - nb.iter().map(|&u| x[u]).sum::<f64>();
            *yv = x[v] - w * lx;
        }
    };
    Ok(krylov_measure(n, s.origin, apply, t_max, opts.krylov_tol))
}

fn heat(m: &SpectralMeasure, t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        m.integrate(|x| (-t * (1.0 - x)).exp())
    }
}

/// Monte Carlo estimate of the annealed return probability
/// `E P^o[X_t = o]` and of `E[1/|C_o|]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealedEstimate {
    pub t_grid: Vec<f64>,
    pub mean_return: Vec<f64>,
    pub stderr_return: Vec<f64>,
    pub mean_inv_size: f64,
    pub stderr_inv_size: f64,
    /// `E[P^o] - E[1/|C_o|]` with the stderr of the paired difference.
    pub mean_excess: Vec<f64>,
    pub stderr_excess: Vec<f64>,
    pub mean_size: f64,
    pub stderr_size: f64,
    pub n_samples: usize,
    pub accepted: usize,
    pub oversize: usize,
    pub boundary_touching: usize,
    pub truncated: usize,
    pub seed: u64,
    /// Largest certified quadrature error over all Lanczos clusters.
    pub max_remainder: f64,
}

impl AnnealedEstimate {
    /// CSV with columns
    /// `t,mean_return,stderr_return,mean_inv_size,stderr_inv_size,bound,in_window`.
    pub fn to_csv(&self, bound: &[BoundPoint]) -> String {
        let mut out = String::from("t,mean_return,stderr_return,mean_inv_size,stderr_inv_size,bound,in_window\n");
        for (i, t) in self.t_grid.iter().enumerate() {
            let (b, w) = bound.get(i).map_or((f64::NAN, false), |p| (p.value, p.in_window));
            let _ = writeln!(
                out,
                "{t:?},{:?},{:?},{:?},{:?},{b:?},{w}",
                self.mean_return[i], self.stderr_return[i], self.mean_inv_size, self.stderr_inv_size
            );
        }
        out
    }

    /// Whether the mean return is nonincreasing in `t` up to `k` combined
    /// standard errors.
    pub fn is_monotone(&self, k: f64) -> bool {
        (1..self.t_grid.len()).all(|i| {
            let slack = k * (self.stderr_return[i].powi(2) + self.stderr_return[i - 1].powi(2)).sqrt();
            self.mean_return[i] <= self.mean_return[i - 1] + slack + 1e-12
        })
    }
}

enum Outcome {
    Accepted { returns: Vec<f64>, size: usize, remainder: f64 },
    Oversize,
}

struct Drawn {
    outcome: Outcome,
    touches: bool,
    truncated: bool,
}

/// Annealed return probabilities on `t_grid` (sorted, nonnegative) from
/// `n_samples` clusters drawn by `sampler`.
///
/// Box experiments fail when more than 1% of origin clusters touch the
/// boundary.
pub fn annealed_return(
    sampler: &Sampler,
    t_grid: &[f64],
    n_samples: usize,
    seed: u64,
    opts: &AnnealedOptions,
) -> Result<AnnealedEstimate> {
    sampler.validate()?;
    if t_grid.iter().any(|t| !(*t >= 0.0)) || t_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::OutOfRange("time grid must be sorted and nonnegative".into()));
    }
    let t_max = t_grid.last().copied().unwrap_or(0.0);
    let drawn = map_indexed(n_samples, opts.execution, |i| -> Result<Drawn> {
        let s = sampler.sample(seed, i as u64)?;
        let outcome = match origin_measure(&s, opts, t_max) {
            Ok(m) => Outcome::Accepted {
                returns: t_grid.iter().map(|&t| heat(&m, t)).collect(),
                size: s.size(),
                remainder: m.heat_remainder_bound(t_max),
            },
            Err(Error::Oversize { .. }) => Outcome::Oversize,
            Err(e) => return Err(e),
        };
        Ok(Drawn { outcome, touches: s.touches_boundary, truncated: s.truncated })
    });
    let drawn = drawn.into_iter().collect::<Result<Vec<_>>>()?;

    let boundary_touching = drawn.iter().filter(|d| d.touches).count();
    if matches!(sampler, Sampler::Bernoulli { geometry: Geometry::Lattice { periodic: false, .. }, .. }) {
        check_boundary_rule(boundary_touching, n_samples)?;
    }
    let accepted: Vec<(&Vec<f64>, usize)> = drawn
        .iter()
        .filter_map(|d| match &d.outcome {
            Outcome::Accepted { returns, size, .. } => Some((returns, *size)),
            Outcome::Oversize => None,
        })
        .collect();
    let max_remainder = drawn
        .iter()
        .filter_map(|d| match d.outcome {
            Outcome::Accepted { remainder, .. } => Some(remainder),
            Outcome::Oversize => None,
        })
        .fold(0.0, f64::max);

    let inv = mean_stderr(accepted.iter().map(|(_, n)| 1.0 / *n as f64));
    let size = mean_stderr(accepted.iter().map(|(_, n)| *n as f64));
    let mut est = AnnealedEstimate {
        t_grid: t_grid.to_vec(),
        mean_return: Vec::with_capacity(t_grid.len()),
        stderr_return: Vec::with_capacity(t_grid.len()),
        mean_inv_size: inv.mean,
        stderr_inv_size: inv.stderr,
        mean_excess: Vec::with_capacity(t_grid.len()),
        stderr_excess: Vec::with_capacity(t_grid.len()),
        mean_size: size.mean,
        stderr_size: size.stderr,
        n_samples,
        accepted: accepted.len(),
        oversize: n_samples - accepted.len(),
        boundary_touching,
        truncated: drawn.iter().filter(|d| d.truncated).count(),
        seed,
        max_remainder,
    };
    for k in 0..t_grid.len() {
        let r = mean_stderr(accepted.iter().map(|(ret, _)| ret[k]));
        let x = mean_stderr(accepted.iter().map(|(ret, n)| ret[k] - 1.0 / *n as f64));
        est.mean_return.push(r.mean);
        est.stderr_return.push(r.stderr);
        est.mean_excess.push(x.mean);
        est.stderr_excess.push(x.stderr);
    }
    Ok(est)
}

/// Fixed-origin versus cluster-averaged annealed return on a torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassTransport {
    pub t: f64,
    pub fixed_origin: MeanStderr,
    pub averaged: MeanStderr,
    /// Paired difference `fixed - averaged`.
    pub difference: MeanStderr,
    pub z_score: f64,
    pub oversize: usize,
}

/// Estimates `E P^o[X_t = o]` and `E[(1/|C_o|) sum_{k in C_o} P^k[X_t = k]]`
/// on the same clusters.
pub fn mass_transport_check(cfg: &PercolationConfig, t: f64, opts: &AnnealedOptions) -> Result<MassTransport> {
    cfg.validate()?;
    if !matches!(cfg.geometry, Geometry::Lattice { periodic: true, .. }) {
        return Err(Error::OutOfRange("mass transport check needs a periodic lattice".into()));
    }
    if !(t >= 0.0) {
        return Err(Error::OutOfRange(format!("time must be nonnegative, got {t}")));
    }
    let pairs = map_indexed(cfg.n_samples, opts.execution, |i| -> Result<Option<(f64, f64)>> {
        let s = sample_origin_cluster(cfg, i as u64)?;
        if s.size() > opts.spectral_limit {
            return Ok(None);
        }
        if s.size() == 1 {
            return Ok(Some((1.0, 1.0)));
        }
        let m = spectral_measure_at(&rrw_kernel(&s.graph, s.delta)?, s.origin);
        let trace = m.values.iter().map(|x| (-t * (1.0 - x)).exp()).sum::<f64>() / s.size() as f64;
        Ok(Some((heat(&m, t), trace)))
    });
    let pairs = pairs.into_iter().collect::<Result<Vec<_>>>()?;
    let kept: Vec<(f64, f64)> = pairs.iter().flatten().copied().collect();
    let difference = mean_stderr(kept.iter().map(|(a, b)| a - b));
    Ok(MassTransport {
        t,
        fixed_origin: mean_stderr(kept.iter().map(|p| p.0)),
        averaged: mean_stderr(kept.iter().map(|p| p.1)),
        difference,
        z_score: difference.z_score(),
        oversize: pairs.len() - kept.len(),
    })
}
