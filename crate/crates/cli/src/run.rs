use rrw_core::bounds::{
    app_terms, bperc_terms, bperc_threshold, critical2d_bound, critical2d_floor, haupt_bound, lifshitz_bound,
    linspace, logspace, tree_critical_lower, trivial_bound, BoundConstants, BoundCurve,
};
use rrw_core::experiments::{
    critical_tree_experiment, geometric_experiment, ids_experiment, mass_transport_experiment,
    subcritical_experiment, SIGMA, Z_LIMIT,
};
use rrw_core::par::Execution;
use rrw_core::percolation::{AnnealedOptions, PercolationConfig};
use rrw_core::verify::{run_suite, Suite, SuiteParams};

use crate::args::{BoundKind, BoundsArgs, Cli, Command, Experiment, IdsArgs, PercolateArgs, TimeGrid, VerifyArgs};
use crate::output::Outputs;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] rrw_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn usage(e: rrw_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn need<T: Copy>(v: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("{what} requires {flag}")))
}

fn check_p(p: f64) -> Result<f64, CliError> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(CliError::Usage(format!("--p must lie in [0, 1], got {p}")))
    }
}

/// Runs the parsed command; `Ok(passed)` on completion.
pub fn dispatch(cli: &Cli, argv: &[String]) -> Result<bool, CliError> {
    #[cfg(feature = "parallel")]
    if cli.threads > 0 {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let (stem, seed) = match &cli.command {
        Command::Verify(a) => (format!("verify_{}", Suite::from(a.suite)), Some(a.seed)),
        Command::Percolate(a) => (format!("percolate_{}", experiment_name(a.experiment)), Some(a.seed)),
        Command::Ids(a) => ("ids".to_string(), Some(a.seed)),
        Command::Bounds(a) => (format!("bounds_{}", bound_name(a.kind)), None),
    };
    let mut out = Outputs::new(&cli.out, &stem)?;
    let (passed, summary) = match &cli.command {
        Command::Verify(a) => verify(a, exec, &mut out)?,
        Command::Percolate(a) => percolate(a, exec, &mut out)?,
        Command::Ids(a) => ids(a, exec, &mut out)?,
        Command::Bounds(a) => bounds(a, &mut out)?,
    };
    for line in &summary {
        println!("{line}");
    }
    println!("{}", if passed { "PASS" } else { "FAIL" });
    let subcommand = stem.split('_').next().unwrap_or_default().to_string();
    out.finish(&subcommand, argv, cli, seed, passed, summary)?;
    Ok(passed)
}

fn experiment_name(e: Experiment) -> &'static str {
    match e {
        Experiment::Subcritical => "subcritical",
        Experiment::CriticalTree => "critical-tree",
        Experiment::MassTransport => "mass-transport",
        Experiment::Geometric => "geometric",
    }
}

fn bound_name(k: BoundKind) -> &'static str {
    match k {
        BoundKind::Haupt => "haupt",
        BoundKind::Trivial => "trivial",
        BoundKind::App => "app",
        BoundKind::Bperc => "bperc",
        BoundKind::Critical2d => "critical2d",
        BoundKind::TreeLower => "tree-lower",
        BoundKind::Lifshitz => "lifshitz",
    }
}

type Outcome = (bool, Vec<String>);

fn verify(a: &VerifyArgs, execution: Execution, out: &mut Outputs) -> Result<Outcome, CliError> {
    let params = SuiteParams {
        trials: a.trials,
        seed: a.seed,
        exhaustive_n: a.exhaustive_n,
        max_tree_order: a.max_tree_order,
        haupt_graphs: a.haupt_graphs,
        execution,
    };
    let report = run_suite(a.suite.into(), &params)?;
    out.write_json(&report)?;
    let mut summary: Vec<String> = report
        .checks
        .iter()
        .map(|c| {
            let mut line = format!(
                "{}: {} checks, {} failures, max violation {:e}",
                c.name, c.checks, c.failures, c.max_violation
            );
            if let Some(f) = &c.first_failure {
                line.push_str(&format!("; first failure: {f}"));
            }
            line
        })
        .collect();
    summary.extend(report.notes.iter().cloned());
    Ok((report.passed(), summary))
}

fn opts(execution: Execution, limit: Option<usize>, default_limit: usize) -> AnnealedOptions {
    AnnealedOptions { spectral_limit: limit.unwrap_or(default_limit), execution, ..AnnealedOptions::default() }
}

fn grid_or(g: &TimeGrid, fallback: impl FnOnce() -> Vec<f64>) -> Result<Vec<f64>, CliError> {
    if g.t.is_none() && g.t_min.is_none() && g.t_max.is_none() && g.t_points.is_none() {
        Ok(fallback())
    } else {
        g.resolve(f64::NAN, f64::NAN, 20).and_then(|v| {
            if v.iter().any(|x| x.is_nan()) {
                Err(CliError::Usage("a time range needs both --t-min and --t-max".into()))
            } else {
                Ok(v)
            }
        })
    }
}

fn percolate(a: &PercolateArgs, execution: Execution, out: &mut Outputs) -> Result<Outcome, CliError> {
    if let Some(p) = a.p {
        check_p(p)?;
    }
    match a.experiment {
        Experiment::Subcritical => {
            let cfg = PercolationConfig::lattice(
                a.side.unwrap_or(64),
                a.dim.unwrap_or(2),
                false,
                a.p.unwrap_or(0.3),
                a.seed,
                a.samples.unwrap_or(1000),
            );
            cfg.validate().map_err(usage)?;
            let t = grid_or(&a.grid, || logspace(1.0, 1e4, 20))?;
            let r = subcritical_experiment(&cfg, &t, &opts(execution, a.spectral_limit, 2000))?;
            out.write("csv", &r.to_csv())?;
            out.write_json(&r)?;
            let e = &r.estimate;
            Ok((
                r.passed,
                vec![
                    format!("chi estimate {:.6} +- {:.2e}", e.mean_size, e.stderr_size),
                    format!("window t >= {:.6}: {} of {} grid points", r.threshold, r.window_points, t.len()),
                    format!("E[1/|C_o|] = {:.6} +- {:.2e}", e.mean_inv_size, e.stderr_inv_size),
                    format!("domination violations beyond {SIGMA} stderr: {:?}", r.violations),
                    format!("monotone within {SIGMA} stderr: {}", r.monotone),
                    format!("oversize {}, boundary-touching {}", e.oversize, e.boundary_touching),
                ],
            ))
        }
        Experiment::CriticalTree => {
            if a.p.is_some() {
                return Err(CliError::Usage("critical-tree fixes p = 1/branching; drop --p".into()));
            }
            if a.branching < 2 {
                return Err(CliError::Usage("--branching must be >= 2".into()));
            }
            let cfg = PercolationConfig::critical_tree(a.branching, a.size_cap, a.seed, a.samples.unwrap_or(20_000));
            cfg.validate().map_err(usage)?;
            let t = grid_or(&a.grid, || vec![4.0, 16.0, 64.0])?;
            let r = critical_tree_experiment(&cfg, &t, &opts(execution, a.spectral_limit, a.size_cap))?;
            out.write("csv", &r.to_csv())?;
            out.write_json(&r)?;
            let e = &r.estimate;
            let mut summary: Vec<String> = (0..t.len())
                .map(|k| {
                    format!(
                        "t={}: excess {:.6e} +- {:.2e}, lower bound {:.6e}",
                        t[k], e.mean_excess[k], e.stderr_excess[k], r.lower[k]
                    )
                })
                .collect();
            summary.push(format!("lower-bound violations: {:?}", r.violations));
            summary.push(format!("violations with the e^-4 constant: {:?}", r.violations_stated));
            summary.push(format!("truncated {}, oversize {}", e.truncated, e.oversize));
            Ok((r.passed, summary))
        }
        Experiment::MassTransport => {
            let cfg = PercolationConfig::lattice(
                a.side.unwrap_or(8),
                a.dim.unwrap_or(2),
                true,
                a.p.unwrap_or(0.3),
                a.seed,
                a.samples.unwrap_or(10_000),
            );
            cfg.validate().map_err(usage)?;
            let t = grid_or(&a.grid, || vec![5.0])?;
            let r = mass_transport_experiment(&cfg, &t, &opts(execution, a.spectral_limit, 2000))?;
            out.write("csv", &r.to_csv())?;
            out.write_json(&r)?;
            let mut summary: Vec<String> = r
                .checks
                .iter()
                .map(|m| {
                    format!(
                        "t={}: fixed {:.8} averaged {:.8} z={:.3}",
                        m.t, m.fixed_origin.mean, m.averaged.mean, m.z_score
                    )
                })
                .collect();
            summary.push(format!("|z| limit {Z_LIMIT}"));
            Ok((r.passed, summary))
        }
        Experiment::Geometric => {
            if !(a.n_hat >= 1.0) || a.delta < 2 {
                return Err(CliError::Usage("--n-hat must be >= 1 and --delta >= 2".into()));
            }
            let lo = a.delta as f64 / (4.0 * a.n_hat);
            let t = grid_or(&a.grid, || linspace(lo, 100.0, 20))?;
            let r = geometric_experiment(
                a.n_hat,
                a.delta,
                &t,
                a.samples.unwrap_or(2000),
                a.seed,
                &opts(execution, a.spectral_limit, 2000),
            )?;
            out.write("csv", &r.to_csv())?;
            out.write_json(&r)?;
            Ok((
                r.passed,
                vec![
                    format!("window t >= {lo}: {} of {} grid points", r.window_points, t.len()),
                    format!("mean size {:.6}", r.estimate.mean_size),
                    format!("domination violations beyond {SIGMA} stderr: {:?}", r.violations),
                    format!("monotone within {SIGMA} stderr: {}", r.monotone),
                ],
            ))
        }
    }
}

fn ids(a: &IdsArgs, execution: Execution, out: &mut Outputs) -> Result<Outcome, CliError> {
    if a.periodic {
        return Err(CliError::Usage("ids runs on boxes; --periodic is not supported".into()));
    }
    check_p(a.p)?;
    if a.e_points == 0 {
        return Err(CliError::Usage("--e-points must be positive".into()));
    }
    let cfg = PercolationConfig::lattice(a.side, a.dim, false, a.p, a.seed, a.samples);
    cfg.validate().map_err(usage)?;
    if let Some(e) = &a.e {
        if e.iter().any(|&x| !(x > 0.0)) {
            return Err(CliError::Usage("--e energies must be positive".into()));
        }
    }
    let t = a.t.clone().unwrap_or_default();
    let r = ids_experiment(&cfg, a.e.as_deref(), a.e_points, &t, &opts(execution, None, usize::MAX))?;
    out.write("csv", &r.curve.to_csv())?;
    out.write_json(&r)?;
    let mut summary = vec![
        format!("chi estimate {:.6}, E_hat {:.6e}", r.chi, r.curve.e_hat),
        format!("N(0) = {:.6} +- {:.2e}", r.curve.ids0.mean, r.curve.ids0.stderr),
        format!("Lifshitz violations beyond {SIGMA} stderr: {:?}", r.violations),
    ];
    for c in &r.laplace {
        summary.push(format!(
            "t={}: trace side {:.6e}, return side {:.6e}, difference {:.3e} +- {:.2e}, allowance {:.3e}",
            c.t, c.ids_side.mean, c.return_side.mean, c.difference.mean, c.difference.stderr, c.boundary_term
        ));
    }
    Ok((r.passed, summary))
}

fn curve(variable: &str, grid: Vec<f64>, pts: Vec<(f64, bool)>, window: (f64, f64)) -> BoundCurve {
    let (values, in_window) = pts.into_iter().unzip();
    BoundCurve { variable: variable.into(), grid, values, in_window, window }
}

fn bounds(a: &BoundsArgs, out: &mut Outputs) -> Result<Outcome, CliError> {
    let what = format!("bounds {}", bound_name(a.kind));
    let mut summary = Vec::new();
    let c = match a.kind {
        BoundKind::Haupt => {
            let n = need(a.n, "--n", &what)?;
            let delta = need(a.delta, "--delta", &what)?;
            let k = BoundConstants::new(delta, n).map_err(usage)?;
            let t = a.grid.resolve(k.t_check, k.t_hat, 50)?;
            let pts = t
                .iter()
                .map(|&x| haupt_bound(n, delta, x).map(|b| (b.value, b.in_window)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            summary.push(format!("window [{:.6}, {:.6}]", k.t_check, k.t_hat));
            curve("t", t, pts, (k.t_check, k.t_hat))
        }
        BoundKind::Trivial => {
            let n = need(a.n, "--n", &what)?;
            let delta = need(a.delta, "--delta", &what)?;
            if n == 0 || delta == 0 {
                return Err(CliError::Usage("--n and --delta must be positive".into()));
            }
            let t = a.grid.resolve(1.0, 1000.0, 50)?;
            let pts = t.iter().map(|&x| (trivial_bound(n, delta, x), x >= 0.0)).collect();
            curve("t", t, pts, (0.0, f64::INFINITY))
        }
        BoundKind::App => {
            let n_hat = need(a.n_hat, "--n-hat", &what)?;
            let delta = need(a.delta, "--delta", &what)?;
            let inv = need(a.inv_size, "--inv-size", &what)?;
            let lo = delta as f64 / (4.0 * n_hat);
            let t = a.grid.resolve(lo, 100.0, 50)?;
            let pts = t
                .iter()
                .map(|&x| {
                    if x >= lo {
                        app_terms(x, n_hat, delta, inv).map(|b| (b.total(), true))
                    } else {
                        Ok((f64::NAN, false))
                    }
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            summary.push(format!("window t >= {lo}"));
            curve("t", t, pts, (lo, f64::INFINITY))
        }
        BoundKind::Bperc => {
            let chi = need(a.chi, "--chi", &what)?;
            let d = need(a.dim, "--dim", &what)?;
            let inv = need(a.inv_size, "--inv-size", &what)?;
            let lo = bperc_threshold(chi, d).map_err(usage)?;
            let t = a.grid.resolve(lo, 100.0 * lo, 50)?;
            let pts = t
                .iter()
                .map(|&x| {
                    if x >= lo {
                        bperc_terms(x, chi, d, inv).map(|b| (b.total(), true))
                    } else {
                        Ok((f64::NAN, false))
                    }
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            summary.push(format!("window t >= {lo}"));
            curve("t", t, pts, (lo, f64::INFINITY))
        }
        BoundKind::Critical2d => {
            let theta = need(a.theta, "--theta", &what)?;
            let t = a.grid.resolve(1.0, 100.0, 10)?;
            let mut w = f64::NAN;
            let pts = t
                .iter()
                .map(|&x| {
                    critical2d_bound(x, theta, a.b_bar).map(|(wx, v)| {
                        w = wx;
                        (v, true)
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            summary.push(format!("w = {w:?}"));
            summary.push(format!("w > 1/2: {}", w > 0.5));
            summary.push(format!("supremum over Theta: {:?}", critical2d_floor()));
            curve("t", t, pts, (0.0, f64::INFINITY))
        }
        BoundKind::TreeLower => {
            let t = a.grid.resolve(1.0, 100.0, 20)?;
            let pts = t.iter().map(|&x| (tree_critical_lower(x), x >= 1.0)).collect();
            curve("t", t, pts, (1.0, f64::INFINITY))
        }
        BoundKind::Lifshitz => {
            let chi = need(a.chi, "--chi", &what)?;
            let d = need(a.dim, "--dim", &what)?;
            let e_hat = lifshitz_bound(1.0, chi, d).map_err(usage)?.e_hat;
            let points = a.e_points.unwrap_or(40);
            let lo = a.e_min.unwrap_or(2.0 * e_hat / points as f64);
            let hi = a.e_max.unwrap_or(2.0 * e_hat);
            if !(lo > 0.0 && lo <= hi) || points == 0 {
                return Err(CliError::Usage(format!("energy range [{lo}, {hi}] must be positive and nonempty")));
            }
            let e = linspace(lo, hi, points);
            let pts = e
                .iter()
                .map(|&x| lifshitz_bound(x, chi, d).map(|b| (b.value, b.in_window)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            summary.push(format!("E_hat = {e_hat:?}"));
            curve("E", e, pts, (0.0, e_hat))
        }
    };
    out.write("csv", &c.to_csv())?;
    summary.insert(0, format!("{} rows, {} in window", c.grid.len(), c.in_window.iter().filter(|w| **w).count()));
    Ok((true, summary))
}
