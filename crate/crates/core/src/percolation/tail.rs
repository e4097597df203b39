use serde::{Deserialize, Serialize};

use super::stats::{linear_fit, mean_stderr, MeanStderr};
use super::{check_boundary_rule, sample_origin_cluster, Geometry, PercolationConfig};
use crate::error::Result;
use crate::par::{map_indexed, Execution};

/// Empirical law of the origin cluster size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSizeLaw {
    /// Distinct observed sizes, ascending.
    pub sizes: Vec<usize>,
    pub counts: Vec<usize>,
    pub n_samples: usize,
    /// Estimate of `chi = E|C_o|`.
    pub chi: MeanStderr,
    pub inv_size: MeanStderr,
    pub truncated: usize,
    pub boundary_touching: usize,
}

impl ClusterSizeLaw {
    pub fn frequency(&self, m: usize) -> f64 {
        self.sizes
            .binary_search(&m)
            .map_or(0.0, |i| self.counts[i] as f64 / self.n_samples as f64)
    }

    /// Empirical `P[|C_o| >= m]`.
    pub fn survival(&self, m: usize) -> f64 {
        let from = self.sizes.partition_point(|&s| s < m);
        self.counts[from..].iter().sum::<usize>() as f64 / self.n_samples as f64
    }

    /// Binomial standard error of [`ClusterSizeLaw::survival`].
    pub fn survival_stderr(&self, m: usize) -> f64 {
        let s = self.survival(m);
        (s * (1.0 - s) / self.n_samples as f64).sqrt()
    }

    /// `(m, P[|C_o| >= m])` at every observed size.
    pub fn survival_curve(&self) -> Vec<(usize, f64)> {
        self.sizes.iter().map(|&m| (m, self.survival(m))).collect()
    }

    /// Slope of `ln P[|C_o| >= m]` against `ln m` over observed sizes in
    /// `[m_min, m_max]`.
    pub fn loglog_slope(&self, m_min: usize, m_max: usize) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .survival_curve()
            .into_iter()
            .filter(|&(m, s)| m >= m_min && m <= m_max && s > 0.0)
            .map(|(m, s)| ((m as f64).ln(), s.ln()))
            .collect();
        let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        linear_fit(&x, &y).map(|f| f.0)
    }

    /// Slope of `ln P[|C_o| >= m]` against `m` over `[m_min, m_max]`.
    pub fn loglinear_slope(&self, m_min: usize, m_max: usize) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .survival_curve()
            .into_iter()
            .filter(|&(m, s)| m >= m_min && m <= m_max && s > 0.0)
            .map(|(m, s)| (m as f64, s.ln()))
            .collect();
        let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        linear_fit(&x, &y).map(|f| f.0)
    }

    /// Observed sizes `m >= chi^2` where the survival exceeds
    /// `2 exp(-m / (2 chi^2)) + k * stderr`.
    pub fn exponential_tail_violations(&self, k: f64) -> Vec<usize> {
        let l = self.chi.mean * self.chi.mean;
        self.sizes
            .iter()
            .copied()
            .filter(|&m| m as f64 >= l)
            .filter(|&m| self.survival(m) > 2.0 * (-(m as f64) / (2.0 * l)).exp() + k * self.survival_stderr(m))
            .collect()
    }
}

/// Samples origin cluster sizes under `cfg`. Box configurations obey the 1%
/// boundary rule.
pub fn cluster_size_tail(cfg: &PercolationConfig, execution: Execution) -> Result<ClusterSizeLaw> {
    cfg.validate()?;
    let draws = map_indexed(cfg.n_samples, execution, |i| {
        sample_origin_cluster(cfg, i as u64).map(|s| (s.size(), s.touches_boundary, s.truncated))
    });
    let draws = draws.into_iter().collect::<Result<Vec<_>>>()?;
    let boundary_touching = draws.iter().filter(|d| d.1).count();
    if matches!(cfg.geometry, Geometry::Lattice { periodic: false, .. }) {
        check_boundary_rule(boundary_touching, draws.len())?;
    }
    let mut sorted: Vec<usize> = draws.iter().map(|d| d.0).collect();
    sorted.sort_unstable();
    let mut sizes = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for m in sorted {
        if sizes.last() == Some(&m) {
            *counts.last_mut().expect("nonempty") += 1;
        } else {
            sizes.push(m);
            counts.push(1);
        }
    }
    Ok(ClusterSizeLaw {
        sizes,
        counts,
        n_samples: draws.len(),
        chi: mean_stderr(draws.iter().map(|d| d.0 as f64)),
        inv_size: mean_stderr(draws.iter().map(|d| 1.0 / d.0 as f64)),
        truncated: draws.iter().filter(|d| d.2).count(),
        boundary_touching,
    })
}
