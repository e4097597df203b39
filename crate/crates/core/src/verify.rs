//! Randomised and exhaustive verification suites over graph and tree
//! corpora. Each suite returns a [`SuiteReport`] listing every named
//! inequality family with its worst violation.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    corollary_path_comparison, gen_second_bound, haupt_bound, higher_eigenvalue_bound, linspace,
    trivial_bound, BoundConstants,
};
use crate::error::{Error, Result};
use crate::graph::{random_connected_graph, random_tree, EdgeSet, FiniteGraph};
use crate::interlacing::{check_laplacian_interlacing, check_rrw_interlacing, unit_eigenvalue_multiplicity};
use crate::par::{map_indexed, Execution};
use crate::rng::{sample_rng, SampleRng};
use crate::spectral::{
    discrete_trace_average, heat_trace_average, lazy_trace_average, rrw_spectrum, three_laplacian_spectra,
};
use crate::trees::{central_edge, free_trees, greedy_splits, split_ratio_ceiling};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Interlacing,
    Laplacian,
    Trees,
    Bounds,
    Sandwich,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Interlacing, Suite::Laplacian, Suite::Trees, Suite::Bounds, Suite::Sandwich];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Interlacing => "interlacing",
            Suite::Laplacian => "laplacian",
            Suite::Trees => "trees",
            Suite::Bounds => "bounds",
            Suite::Sandwich => "sandwich",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::OutOfRange(format!("unknown suite {s:?}")))
    }
}

/// Tally of one inequality family. A check fails when its violation
/// (left side minus right side) exceeds the tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
    pub max_violation: f64,
    pub first_failure: Option<String>,
}

impl Check {
    pub fn new(name: &str) -> Self {
        Check { name: name.into(), checks: 0, failures: 0, max_violation: f64::NEG_INFINITY, first_failure: None }
    }

    pub fn record<F: FnOnce() -> String>(&mut self, violation: f64, tol: f64, context: F) {
        self.checks += 1;
        self.max_violation = self.max_violation.max(violation);
        if !(violation <= tol) {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(format!("{} (violation {violation:e}, tolerance {tol:e})", context()));
            }
        }
    }

    /// Folds `other` into `self`; the earlier first failure wins.
    pub fn merge(&mut self, other: &Check) {
        self.checks += other.checks;
        self.failures += other.failures;
        self.max_violation = self.max_violation.max(other.max_violation);
        if self.first_failure.is_none() {
            self.first_failure.clone_from(&other.first_failure);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<Check>,
    /// Diagnostics that are reported but not asserted.
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub trials: usize,
    pub seed: u64,
    /// Free trees of every order up to this are enumerated.
    pub exhaustive_n: usize,
    /// Largest order of the random trees.
    pub max_tree_order: usize,
    /// Graphs in the intermediate-time domination check.
    pub haupt_graphs: usize,
    pub execution: Execution,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            trials: 500,
            seed: 1,
            exhaustive_n: 10,
            max_tree_order: 400,
            haupt_graphs: 100,
            execution: Execution::default(),
        }
    }
}

fn fold(names: &[&str], parts: Vec<Result<Vec<Check>>>) -> Result<Vec<Check>> {
    let mut total: Vec<Check> = names.iter().map(|n| Check::new(n)).collect();
    for part in parts {
        for (acc, c) in total.iter_mut().zip(part?) {
            acc.merge(&c);
        }
    }
    Ok(total)
}

/// Connected graph of order in `[n_min, n_max]`, maximum degree at most
/// `delta` drawn from `[d_min, d_max]`.
fn random_instance(rng: &mut SampleRng, n_min: usize, n_max: usize, d_min: usize, d_max: usize) -> Result<(FiniteGraph, usize)> {
    let n = rng.random_range(n_min..=n_max);
    let delta = rng.random_range(d_min..=d_max);
    let extra = rng.random_range(0..=n);
    Ok((random_connected_graph(n, delta, extra, rng.random())?, delta))
}

pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<SuiteReport> {
    match suite {
        Suite::Interlacing => interlacing_suite(params),
        Suite::Laplacian => laplacian_suite(params),
        Suite::Trees => trees_suite(params),
        Suite::Bounds => bounds_suite(params),
        Suite::Sandwich => sandwich_suite(params),
    }
}

/// RRW interlacing under removal of up to four edges from connected graphs
/// with `n <= 14`, `delta <= 4`.
pub fn interlacing_suite(params: &SuiteParams) -> Result<SuiteReport> {
    let names = ["rrw_interlacing", "unit_multiplicity"];
    let parts = map_indexed(params.trials, params.execution, |i| -> Result<Vec<Check>> {
        let mut rng = sample_rng(params.seed, i as u64);
        let (g, delta) = random_instance(&mut rng, 2, 14, 2, 4)?;
        let k = rng.random_range(0..=g.size().min(4));
        let picked = sample(&mut rng, g.size(), k).into_iter().map(|j| g.edges()[j]).collect();
        let r = EdgeSet::new(picked)?;
        let rep = check_rrw_interlacing(&g, &r, delta)?;
        let mut il = Check::new(names[0]);
        il.record(rep.max_violation, rep.tolerance, || format!("trial {i}: n={} delta={delta} R={:?}", g.order(), r.edges()));
        let reduced = g.remove_edges(&r)?;
        let mut unit = Check::new(names[1]);
        let mult = unit_eigenvalue_multiplicity(&reduced, delta)?;
        let comps = reduced.connected_components().len();
        unit.record((mult as f64 - comps as f64).abs(), 0.0, || format!("trial {i}: {mult} unit eigenvalues, {comps} components"));
        Ok(vec![il, unit])
    });
    Ok(SuiteReport { suite: Suite::Interlacing, seed: params.seed, trials: params.trials, checks: fold(&names, parts)?, notes: vec![] })
}

/// Laplacian interlacing under single-edge removal.
pub fn laplacian_suite(params: &SuiteParams) -> Result<SuiteReport> {
    let names = ["laplacian_interlacing"];
    let parts = map_indexed(params.trials, params.execution, |i| -> Result<Vec<Check>> {
        let mut rng = sample_rng(params.seed, i as u64);
        let (g, _) = random_instance(&mut rng, 2, 14, 2, 4)?;
        let e = g.edges()[rng.random_range(0..g.size())];
        let rep = check_laplacian_interlacing(&g, e)?;
        let mut c = Check::new(names[0]);
        c.record(rep.max_violation, rep.tolerance, || format!("trial {i}: n={} e={e:?}", g.order()));
        Ok(vec![c])
    });
    Ok(SuiteReport { suite: Suite::Laplacian, seed: params.seed, trials: params.trials, checks: fold(&names, parts)?, notes: vec![] })
}

pub const SANDWICH_TIMES: [f64; 4] = [0.1, 1.0, 10.0, 100.0];

/// SRW/RRW/lazy trace sandwich, the eigenvalue chains behind it, and the
/// discrete/continuous comparison for `n = 1..=10`.
///
/// `comp2_right` is the upper comparison with the plain discrete chain,
/// `comp2_right_lazy` the same with the lazy chain `(I + A)/2`.
pub fn sandwich_suite(params: &SuiteParams) -> Result<SuiteReport> {
    let names = [
        "srw_below_rrw",
        "rrw_below_scaled_srw",
        "eigenvalue_chain",
        "comp2_left",
        "comp2_right",
        "comp2_right_lazy",
    ];
    let tol = 1e-12;
    let parts = map_indexed(params.trials, params.execution, |i| -> Result<Vec<Check>> {
        let mut rng = sample_rng(params.seed, i as u64);
        let (g, delta) = random_instance(&mut rng, 2, 20, 2, 4)?;
        let d = delta as f64;
        let nf = g.order() as f64;
        let (srw, rrw, lazy) = three_laplacian_spectra(&g, delta)?;
        let mut checks: Vec<Check> = names.iter().map(|n| Check::new(n)).collect();
        let srw_trace = |t: f64| srw.values.iter().map(|l| (-t * l).exp()).sum::<f64>() / nf;
        let rrw_trace = |t: f64| rrw.values.iter().map(|l| (-t * l).exp()).sum::<f64>() / nf;
        for t in SANDWICH_TIMES {
            checks[0].record(srw_trace(t) - rrw_trace(t), tol, || format!("graph {i}, t={t}"));
            checks[1].record(rrw_trace(t) - srw_trace(t / d), tol, || format!("graph {i}, t={t}"));
        }
        for j in 0..g.order() {
            checks[2].record(rrw.values[j] - srw.values[j], tol, || format!("graph {i}, j={}", j + 1));
            checks[2].record(lazy.values[j] - rrw.values[j], tol, || format!("graph {i}, j={}", j + 1));
        }
        let beta = rrw_spectrum(&g, delta)?;
        for n in 1..=10u32 {
            let c2 = heat_trace_average(&beta, 2.0 * n as f64);
            let d4 = discrete_trace_average(&beta, 4 * n);
            let d1 = discrete_trace_average(&beta, n);
            let l1 = lazy_trace_average(&beta, n);
            let tail = (-2.0 * n as f64).exp();
            checks[3].record(d4 - 2.0 * c2, tol, || format!("graph {i}, n={n}"));
            checks[4].record(c2 - d1 - tail, tol, || {
                format!("graph {i} (order {}, delta {delta}, edges {:?}), n={n}", g.order(), g.edges())
            });
            checks[5].record(c2 - l1 - tail, tol, || format!("graph {i}, n={n}"));
        }
        Ok(checks)
    });
    Ok(SuiteReport { suite: Suite::Sandwich, seed: params.seed, trials: params.trials, checks: fold(&names, parts)?, notes: vec![] })
}

/// All free trees of order `2..=exhaustive_n` followed by `random_count`
/// random trees of order in `[2, max_order]` and maximum degree in `[2, 5]`.
pub fn tree_corpus(exhaustive_n: usize, random_count: usize, max_order: usize, seed: u64) -> Result<Vec<FiniteGraph>> {
    let mut out = Vec::new();
    for n in 2..=exhaustive_n {
        out.extend(free_trees(n)?);
    }
    for i in 0..random_count {
        let mut rng = sample_rng(seed, i as u64);
        let n = rng.random_range(2..=max_order.max(2));
        let d = rng.random_range(2..=5);
        out.push(random_tree(n, d, rng.random())?);
    }
    Ok(out)
}

/// Degree parameter used for a tree: its maximum degree, at least two.
pub fn tree_delta(t: &FiniteGraph) -> usize {
    t.max_degree().max(2)
}

/// Central split ratio in `[1, 4(delta - 1) - 1]` with `delta` the maximum
/// degree.
pub fn trees_suite(params: &SuiteParams) -> Result<SuiteReport> {
    let corpus = tree_corpus(params.exhaustive_n, params.trials, params.max_tree_order, params.seed)?;
    let names = ["central_split_ratio"];
    let parts = map_indexed(corpus.len(), params.execution, |i| -> Result<Vec<Check>> {
        let t = &corpus[i];
        let delta = tree_delta(t);
        let split = central_edge(t)?;
        let ceiling = split_ratio_ceiling(delta);
        let mut c = Check::new(names[0]);
        c.record((1.0 - split.ratio).max(split.ratio - ceiling), 0.0, || {
            format!("tree {i}: order {} delta {delta} ratio {}", t.order(), split.ratio)
        });
        Ok(vec![c])
    });
    let notes = vec![format!("{} trees ({} random)", corpus.len(), params.trials)];
    Ok(SuiteReport { suite: Suite::Trees, seed: params.seed, trials: params.trials, checks: fold(&names, parts)?, notes })
}

/// Higher-eigenvalue bound, path comparison, second-eigenvalue bound and
/// splitting schedule on the tree corpus, plus intermediate-time domination
/// on random connected graphs of maximum degree 3.
pub fn bounds_suite(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = tree_bounds_suite(params)?;
    let haupt = haupt_suite(params.haupt_graphs, params.seed, params.execution)?;
    report.checks.extend(haupt.checks.into_iter().filter(|c| c.name == "haupt_domination"));
    report.notes.extend(haupt.notes);
    Ok(report)
}

pub fn tree_bounds_suite(params: &SuiteParams) -> Result<SuiteReport> {
    let corpus = tree_corpus(params.exhaustive_n, params.trials, params.max_tree_order, params.seed)?;
    let names = ["higher_eigenvalue", "path_comparison", "second_eigenvalue", "splitting_schedule"];
    let tol = 1e-12;
    let parts = map_indexed(corpus.len(), params.execution, |i| -> Result<Vec<Check>> {
        let t = &corpus[i];
        let n = t.order();
        let delta = tree_delta(t);
        let beta = rrw_spectrum(t, delta)?;
        let mut checks: Vec<Check> = names.iter().map(|n| Check::new(n)).collect();
        for b in 0..=n - 2 {
            let hb = higher_eigenvalue_bound(n, delta, b)?;
            checks[0].record(beta.nth(b + 2) - hb, tol, || format!("tree {i}: order {n} delta {delta} B={b}"));
            let (idx, pb) = corollary_path_comparison(n, delta, b)?;
            checks[1].record(beta.nth(b + 1) - pb, tol, || format!("tree {i}: order {n} delta {delta} B={b} index {idx}"));
        }
        checks[2].record(beta.nth(2) - gen_second_bound(n, delta), tol, || format!("tree {i}: order {n} delta {delta}"));
        for (b, s) in greedy_splits(t, n - 1, delta)?.iter().enumerate() {
            checks[3].record(s.largest_component as f64 - s.bound * (1.0 + 1e-12), 0.0, || {
                format!("tree {i}: order {n} delta {delta} B={b} largest {}", s.largest_component)
            });
        }
        Ok(checks)
    });
    let notes = vec![format!("{} trees ({} random)", corpus.len(), params.trials)];
    Ok(SuiteReport { suite: Suite::Bounds, seed: params.seed, trials: params.trials, checks: fold(&names, parts)?, notes })
}

pub const HAUPT_GRID_POINTS: usize = 20;

/// Exact average return versus the intermediate-time bound on `graphs`
/// random connected graphs (order 50..=200, `delta = 3`) at 20 points of
/// each window; `haupt_improvement` asks the bound to be strictly below the
/// spectral-gap bound on the lower half of the window.
pub fn haupt_suite(graphs: usize, seed: u64, execution: Execution) -> Result<SuiteReport> {
    let names = ["haupt_domination", "haupt_improvement"];
    let delta = 3;
    let parts = map_indexed(graphs, execution, |i| -> Result<Vec<Check>> {
        let mut rng = sample_rng(seed ^ 0x5eed_0006, i as u64);
        let n = rng.random_range(50..=200);
        let extra = rng.random_range(0..=n / 4);
        let g = random_connected_graph(n, delta, extra, rng.random())?;
        let k = BoundConstants::new(delta, n)?;
        let spec = rrw_spectrum(&g, delta)?;
        let mut checks: Vec<Check> = names.iter().map(|n| Check::new(n)).collect();
        let grid = linspace(k.t_check, k.t_hat, HAUPT_GRID_POINTS);
        let mid = 0.5 * (k.t_check + k.t_hat);
        for &t in &grid {
            let b = haupt_bound(n, delta, t)?;
            let exact = heat_trace_average(&spec, t);
            checks[0].record(exact - b.value, 1e-12, || format!("graph {i}: order {n}, t={t}"));
            if t <= mid {
                let gap = b.value - trivial_bound(n, delta, t);
                checks[1].record(gap, -f64::MIN_POSITIVE, || format!("graph {i}: order {n}, t={t}, bound {} vs trivial {}", b.value, trivial_bound(n, delta, t)));
            }
        }
        Ok(checks)
    });
    let checks = fold(&names, parts)?;
    let imp = &checks[1];
    let notes = vec![format!(
        "bound below the spectral-gap bound at {} of {} lower-half grid points",
        imp.checks - imp.failures,
        imp.checks
    )];
    Ok(SuiteReport { suite: Suite::Bounds, seed, trials: graphs, checks, notes })
}
