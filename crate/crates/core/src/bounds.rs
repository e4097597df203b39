//! Closed-form evaluators for the return-probability and eigenvalue bounds.
//!
//! Evaluators that carry a validity window return the formula value together
//! with an `in_window` flag instead of failing, so that curves can show where
//! a bound applies and where the plain spectral-gap bound takes over.

use std::f64::consts::{E, PI};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::path_rrw_eigenvalue;

/// `nu = 1 / ((delta - 1) ln 16)`.
pub fn nu(delta: usize) -> Result<f64> {
    if delta < 2 {
        return Err(Error::OutOfRange(format!("nu needs delta >= 2, got {delta}")));
    }
    Ok(1.0 / ((delta as f64 - 1.0) * 16f64.ln()))
}

/// Derived constants for maximum degree `delta` and order `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub delta: usize,
    pub n: usize,
    pub nu: f64,
    pub a: f64,
    pub t_check: f64,
    pub t_hat: f64,
    pub r: f64,
    pub b: f64,
    pub q: f64,
    pub rho: f64,
}

impl BoundConstants {
    pub fn new(delta: usize, n: usize) -> Result<Self> {
        let nu = nu(delta)?;
        let d = delta as f64;
        let nf = n as f64;
        Ok(BoundConstants {
            delta,
            n,
            nu,
            a: 1.0 + (PI * d).sqrt() / 2f64.powf(1.0 - nu),
            t_check: 4f64.powf(1.0 + nu) * nf.powf(1.0 - nu),
            t_hat: 4f64.powf(-(1.0 + nu).powi(2) / nu) * nf.powi(4),
            r: nu / (1.0 + nu),
            b: (1.0 - nu) / (1.0 + nu),
            q: 1.0 - 1.0 / (4.0 * (d - 1.0)),
            rho: 4f64.powf((1.0 + nu).powi(2) / (2.0 * nu)),
        })
    }

    pub fn window_nonempty(&self) -> bool {
        self.t_check <= self.t_hat
    }
}

/// Smallest order `N` whose intermediate time window `[t_check, t_hat]` is
/// nonempty.
pub fn smallest_window_order(delta: usize) -> Result<usize> {
    let mut n = 1;
    while !BoundConstants::new(delta, n)?.window_nonempty() {
        n += 1;
    }
    Ok(n)
}

/// A bound value and whether its argument lies in the theorem's window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub value: f64,
    pub in_window: bool,
}

/// Intermediate-time bound on the average return probability of the RRW on a
/// connected graph of order `n` and maximum degree `delta >= 3`:
/// `1/N + a (N^{1-nu} / sqrt t)^{1/(1+nu)} exp(-4t / (delta N^2))`,
/// valid on `[t_check, t_hat]`.
pub fn haupt_bound(n: usize, delta: usize, t: f64) -> Result<BoundPoint> {
    if !(t > 0.0) {
        return Err(Error::OutOfRange(format!("time must be positive, got {t}")));
    }
    if n == 0 {
        return Err(Error::InvalidSize("n must be positive".into()));
    }
    let k = BoundConstants::new(delta, n)?;
    let nf = n as f64;
    let value = 1.0 / nf
        + k.a * (nf.powf(1.0 - k.nu) / t.sqrt()).powf(1.0 / (1.0 + k.nu))
            * (-4.0 * t / (delta as f64 * nf * nf)).exp();
    Ok(BoundPoint {
        value,
        in_window: delta >= 3 && k.t_check <= t && t <= k.t_hat,
    })
}

/// Spectral-gap bound `1/N + ((N-1)/N) exp(-4t / (delta N^2))`.
pub fn trivial_bound(n: usize, delta: usize, t: f64) -> f64 {
    let nf = n as f64;
    1.0 / nf + (nf - 1.0) / nf * (-4.0 * t / (delta as f64 * nf * nf)).exp()
}

/// Second-eigenvalue bound for trees, `1 - 4 / (delta N^2)`.
pub fn gen_second_bound(n: usize, delta: usize) -> f64 {
    1.0 - 4.0 / (delta as f64 * (n as f64).powi(2))
}

fn check_b(n: usize, big_b: usize) -> Result<()> {
    if n < 2 || big_b > n - 2 {
        return Err(Error::OutOfRange(format!("B = {big_b} outside [0, {}]", n as i64 - 2)));
    }
    Ok(())
}

/// `beta_{B+2} <= 1 - (4 / (delta N^2)) ((B+1)/2)^{2 nu}`.
pub fn higher_eigenvalue_bound(n: usize, delta: usize, big_b: usize) -> Result<f64> {
    check_b(n, big_b)?;
    let nu = nu(delta)?;
    Ok(1.0
        - 4.0 / (delta as f64 * (n as f64).powi(2)) * ((big_b as f64 + 1.0) / 2.0).powf(2.0 * nu))
}

/// Path comparison `beta_{B+1} <= beta^o_{[(B/2)^nu] + 1}` on `P_N`. Returns
/// the path index and the eigenvalue there.
pub fn corollary_path_comparison(n: usize, delta: usize, big_b: usize) -> Result<(usize, f64)> {
    check_b(n, big_b)?;
    let nu = nu(delta)?;
    let index = (big_b as f64 / 2.0).powf(nu).floor() as usize + 1;
    Ok((index, path_rrw_eigenvalue(n, delta, index)))
}

/// The four summands of the annealed bound for geometric cluster sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppTerms {
    pub inv_size: f64,
    pub c: f64,
    pub stretched: f64,
    pub rho_term: f64,
    pub tail: f64,
}

impl AppTerms {
    pub fn total(&self) -> f64 {
        self.inv_size + self.stretched + self.rho_term + self.tail
    }
}

/// Annealed return bound for invariant percolation with cluster-size law
/// `P[|C| = m] ~ exp(-m / n_hat)`, valid for `t >= delta / (4 n_hat)`.
pub fn app_terms(t: f64, n_hat: f64, delta: usize, e_inv_size: f64) -> Result<AppTerms> {
    if !(n_hat >= 1.0) {
        return Err(Error::OutOfRange(format!("n_hat must be >= 1, got {n_hat}")));
    }
    let d = delta as f64;
    let threshold = d / (4.0 * n_hat);
    if !(t >= threshold) {
        return Err(Error::OutOfRange(format!("t = {t} below validity threshold {threshold}")));
    }
    let k = BoundConstants::new(delta, 1)?;
    let c = app_constant(n_hat, delta)?;
    Ok(AppTerms {
        inv_size: e_inv_size,
        c,
        stretched: c
            * t.powf(-(1.0 + k.r) / 6.0)
            * (-(4.0 * t / (d * n_hat * n_hat)).powf(1.0 / 3.0)).exp(),
        rho_term: k.rho.sqrt() * t.powf(0.25) * (-4.0 * t.sqrt() / (d * k.rho)).exp(),
        tail: (-t / (16.0 * n_hat)).exp(),
    })
}

/// `c = a (1 + e (1 + (n_hat + 1)^{1/(1+2 nu)}))`.
pub fn app_constant(n_hat: f64, delta: usize) -> Result<f64> {
    let k = BoundConstants::new(delta, 1)?;
    Ok(k.a * (1.0 + E * (1.0 + (n_hat + 1.0).powf(1.0 / (1.0 + 2.0 * k.nu)))))
}

pub fn app_bound(t: f64, n_hat: f64, delta: usize, e_inv_size: f64) -> Result<f64> {
    Ok(app_terms(t, n_hat, delta, e_inv_size)?.total())
}

/// Summands of the subcritical Bernoulli bound on `Z^d` (degree `2d`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BpercTerms {
    pub inv_size: f64,
    pub stretched: f64,
    pub rho_term: f64,
    pub tail: f64,
    pub gap_term: f64,
}

impl BpercTerms {
    pub fn total(&self) -> f64 {
        self.inv_size + self.stretched + self.rho_term + self.tail + self.gap_term
    }
}

/// `max{ d / (4 chi^2), 4^{1+nu} chi^{2(1-nu)} }`.
pub fn bperc_threshold(chi: f64, d: usize) -> Result<f64> {
    let nu = nu(2 * d)?;
    Ok((d as f64 / (4.0 * chi * chi)).max(4f64.powf(1.0 + nu) * chi.powf(2.0 * (1.0 - nu))))
}

pub fn bperc_terms(t: f64, chi: f64, d: usize, e_inv_size: f64) -> Result<BpercTerms> {
    if d == 0 {
        return Err(Error::OutOfRange("dimension must be >= 1".into()));
    }
    if !(chi >= 1.0) {
        return Err(Error::OutOfRange(format!("chi must be >= 1, got {chi}")));
    }
    let threshold = bperc_threshold(chi, d)?;
    if !(t >= threshold) {
        return Err(Error::OutOfRange(format!("t = {t} below validity threshold {threshold}")));
    }
    let k = BoundConstants::new(2 * d, 1)?;
    let df = d as f64;
    let c_bar = 160.0 * df.sqrt() * chi.powi(4);
    let chi4 = chi.powi(-4);
    Ok(BpercTerms {
        inv_size: e_inv_size,
        stretched: c_bar * t.powf(-(1.0 + k.r) / 6.0) * (-(2.0 * t / df * chi4).powf(1.0 / 3.0)).exp(),
        rho_term: k.rho.sqrt() * t.powf(0.25) * (-2.0 * t.sqrt() / (df * k.rho)).exp(),
        tail: (-t / 32.0 / (chi * chi)).exp(),
        gap_term: k.a * chi.powf(k.b) * t.powf(-1.0 / (2.0 * (1.0 + k.nu))) * (-2.0 * t / df * chi4).exp(),
    })
}

pub fn bperc_bound(t: f64, chi: f64, d: usize, e_inv_size: f64) -> Result<f64> {
    Ok(bperc_terms(t, chi, d, e_inv_size)?.total())
}

/// `nu` at degree 4, the square lattice.
pub fn nu_square_lattice() -> f64 {
    1.0 / (3.0 * 16f64.ln())
}

/// Exponent `w(Theta) = (1/2)(3 + 2nu) / (3 + nu + (1 + nu)/Theta)` of the
/// critical planar bound.
pub fn critical2d_exponent(theta: f64) -> f64 {
    let nu = nu_square_lattice();
    0.5 * (3.0 + 2.0 * nu) / (3.0 + nu + (1.0 + nu) / theta)
}

/// Supremum of [`critical2d_exponent`] as `Theta -> inf`,
/// `(1/2)(1 + 1/(1 + 9 ln 16))`.
pub fn critical2d_floor() -> f64 {
    0.5 * (1.0 + 1.0 / (1.0 + 9.0 * 16f64.ln()))
}

/// Returns `(w, C t^{-w/Theta})` with `C = 1 + 2^nu sqrt(pi) + b_bar`.
pub fn critical2d_bound(t: f64, theta: f64, b_bar: f64) -> Result<(f64, f64)> {
    if !(theta >= 5.0) {
        return Err(Error::OutOfRange(format!("Theta must be >= 5, got {theta}")));
    }
    if !(t > 0.0) {
        return Err(Error::OutOfRange(format!("time must be positive, got {t}")));
    }
    let nu = nu_square_lattice();
    let w = critical2d_exponent(theta);
    let c = 1.0 + 2f64.powf(nu) * PI.sqrt() + b_bar;
    Ok((w, c * t.powf(-w / theta)))
}

/// Lower bound `(e^{-12} / 15) t^{-3/2}` on `E[P^o] - E[1/|C|]` for critical
/// percolation on the binary tree (`t >= 1`).
pub fn tree_critical_lower(t: f64) -> f64 {
    (-12f64).exp() / 15.0 * t.powf(-1.5)
}

/// The same power law with the constant `e^{-4} / 15`.
pub fn tree_critical_lower_stated(t: f64) -> f64 {
    (-4f64).exp() / 15.0 * t.powf(-1.5)
}

/// Lifshitz-tail bound on `N(E) - N(0)` for subcritical Bernoulli percolation
/// on `Z^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifshitzBound {
    pub value: f64,
    pub e_hat: f64,
    pub e_hat_candidates: [f64; 4],
    pub in_window: bool,
    pub alpha: f64,
    pub big_a: f64,
    pub big_b: f64,
    pub beta: f64,
}

pub fn lifshitz_bound(energy: f64, chi: f64, d: usize) -> Result<LifshitzBound> {
    if !(energy > 0.0) {
        return Err(Error::OutOfRange(format!("energy must be positive, got {energy}")));
    }
    if d == 0 || !(chi >= 1.0) {
        return Err(Error::OutOfRange(format!("need d >= 1 and chi >= 1 (d = {d}, chi = {chi})")));
    }
    let delta = 2 * d;
    let k = BoundConstants::new(delta, 1)?;
    let df = d as f64;
    let rho = k.rho;
    let c_bar = 160.0 * df.sqrt() * chi.powi(4);
    let alpha = 4.0 / (3.0 * 3f64.sqrt()) * chi.powi(-4);
    let expo = (1.0 + k.r) / 6.0;
    let big_a = 3.0 * 3f64.sqrt() * 2f64.powf(-expo) * c_bar * (df * chi.powi(4)).powf(expo);
    let big_b = 3.0 * rho.sqrt() * (2.0 / df).powf(0.25) / 3f64.powf(3.0 / 8.0) / chi;
    let beta = 2.0 * 2f64.sqrt() / (3f64.sqrt() * df).powf(1.5) / (rho * chi * chi);
    let candidates = [
        df.powf(1.0 / 3.0) * chi.powf(4.0 / 3.0) / (3.0 * 2f64.powf(1.0 / 3.0)),
        (rho.sqrt() / 6.0) / (df.powf(2.0 / 3.0) * chi.powf(4.0 / 3.0)),
        2f64.powf(1.0 / 3.0) * rho.powf(4.0 / 3.0) / (768.0 * chi.powi(4)),
        (8.0 / 3.0) / (delta as f64 * rho * chi).powf(4.0 / 3.0),
    ];
    let e_hat = candidates.iter().copied().fold(f64::INFINITY, f64::min);
    let value = big_a * energy * (-alpha / energy.sqrt()).exp()
        + big_b * energy.powf(-3.0 / 8.0) * (-beta * energy.powf(-0.75)).exp();
    Ok(LifshitzBound {
        value,
        e_hat,
        e_hat_candidates: candidates,
        in_window: energy <= e_hat,
        alpha,
        big_a,
        big_b,
        beta,
    })
}

/// A bound sampled on a grid of the independent variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    /// Column name of the independent variable, `t` or `E`.
    pub variable: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub in_window: Vec<bool>,
    pub window: (f64, f64),
}

impl BoundCurve {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},value,in_window\n", self.variable);
        for ((x, v), w) in self.grid.iter().zip(&self.values).zip(&self.in_window) {
            let _ = writeln!(out, "{x:?},{v:?},{w}");
        }
        out
    }
}

/// `points` evenly spaced values on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![lo],
        _ => (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// `points` geometrically spaced values on `[lo, hi]`, `lo > 0`.
pub fn logspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    linspace(lo.ln(), hi.ln(), points).into_iter().map(f64::exp).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_values() {
        assert!((nu(4).unwrap() - 0.12022).abs() < 1e-5);
        assert!((nu(4).unwrap() - 0.12).abs() < 0.005);
        assert!((nu(3).unwrap() - 0.180337).abs() < 1e-6);
        assert!(nu(1).is_err());
    }

    #[test]
    fn window_at_hundred() {
        let k = BoundConstants::new(3, 100).unwrap();
        assert!((k.t_check - 223.85).abs() < 0.01, "{}", k.t_check);
        assert!((k.t_hat - 2232.43).abs() < 0.01, "{}", k.t_hat);
        let cross = 1e8 * 4f64.powf(-(1.180337f64).powi(2) / 0.180337);
        assert!((k.t_hat - cross).abs() / cross < 1e-5);
        assert!(k.window_nonempty());
        assert!((k.q - 0.875).abs() < 1e-15);
        assert!((k.r - k.nu / (1.0 + k.nu)).abs() < 1e-15);
    }

    #[test]
    fn smallest_window_is_49_at_degree_three() {
        assert_eq!(smallest_window_order(3).unwrap(), 49);
    }

    #[test]
    fn constants_are_finite_and_positive() {
        for delta in 2..=12 {
            for n in [1, 10, 1000] {
                let k = BoundConstants::new(delta, n).unwrap();
                for x in [k.nu, k.a, k.t_check, k.t_hat, k.r, k.b, k.q, k.rho] {
                    assert!(x.is_finite() && x > 0.0);
                }
                let json = serde_json::to_string(&k).unwrap();
                let back: BoundConstants = serde_json::from_str(&json).unwrap();
                assert!((back.nu - k.nu).abs() <= 1e-15 && (back.t_hat - k.t_hat).abs() <= 1e-9 * k.t_hat);
            }
        }
    }

    #[test]
    fn haupt_examples() {
        let single = haupt_bound(1, 3, 1.0).unwrap();
        assert!(single.value >= 1.0);
        assert!(!single.in_window);
        let mid = haupt_bound(100, 3, 500.0).unwrap();
        assert!(mid.in_window && mid.value.is_finite());
        // at this order the bound exceeds one across the window
        let k = BoundConstants::new(3, 100).unwrap();
        for t in linspace(k.t_check, k.t_hat, 20) {
            assert!(haupt_bound(100, 3, t).unwrap().value > 1.0);
        }
        // for large N it undercuts the trivial bound in the upper part of the window
        let k = BoundConstants::new(3, 2000).unwrap();
        assert!(haupt_bound(2000, 3, 1e7).unwrap().value < trivial_bound(2000, 3, 1e7));
        assert!(haupt_bound(2000, 3, k.t_check).unwrap().value > trivial_bound(2000, 3, k.t_check));
        assert!(haupt_bound(100, 3, 0.0).is_err());
    }

    #[test]
    fn trivial_examples() {
        assert_eq!(trivial_bound(100, 3, 0.0), 1.0);
        assert_eq!(trivial_bound(1, 3, 55.0), 1.0);
        let v = trivial_bound(100, 3, 500.0);
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn higher_examples() {
        assert!(higher_eigenvalue_bound(2, 3, 1).is_err());
        let v = higher_eigenvalue_bound(10, 3, 0).unwrap();
        let nu3 = nu(3).unwrap();
        assert!((v - (1.0 - 4.0 / 300.0 * 0.5f64.powf(2.0 * nu3))).abs() < 1e-15);
        assert!((v - 0.98962).abs() < 1e-5);
        // B = 0 is weaker than the second-eigenvalue bound
        assert!(v > gen_second_bound(10, 3));
    }

    #[test]
    fn corollary_examples() {
        assert_eq!(corollary_path_comparison(10, 3, 0).unwrap(), (1, 1.0));
        let (idx, bound) = corollary_path_comparison(20, 3, 8).unwrap();
        assert_eq!(idx, 2);
        assert_eq!(bound, path_rrw_eigenvalue(20, 3, 2));
        assert!(corollary_path_comparison(3, 3, 2).is_err());
    }

    #[test]
    fn app_examples() {
        for (n_hat, delta) in [(2.0, 3), (4.0, 4), (1.0, 6)] {
            let t0 = delta as f64 / (4.0 * n_hat);
            let terms = app_terms(t0, n_hat, delta, 0.3).unwrap();
            assert!(terms.stretched > 0.0 && terms.rho_term > 0.0 && terms.tail > 0.0);
            assert!(terms.total().is_finite());
            assert!(app_bound(t0 * 0.99, n_hat, delta, 0.3).is_err());
        }
        // c <= 24 sqrt(d) n_hat for delta = 2d
        for d in 1..=4usize {
            for n_hat in [1.0, 2.0, 4.0, 10.0, 100.0] {
                let c = app_constant(n_hat, 2 * d).unwrap();
                assert!(c <= 24.0 * (d as f64).sqrt() * n_hat, "d={d} n_hat={n_hat} c={c}");
            }
        }
    }

    #[test]
    fn bperc_examples() {
        let t0 = bperc_threshold(1.0, 2).unwrap();
        assert!(bperc_bound(t0, 1.0, 2, 1.0).unwrap() >= 1.0);
        let t2 = bperc_threshold(2.0, 2).unwrap();
        let terms = bperc_terms(t2, 2.0, 2, 0.5).unwrap();
        assert!(terms.total().is_finite());
        assert!([terms.stretched, terms.rho_term, terms.tail, terms.gap_term].iter().all(|&x| x > 0.0));
        assert!(bperc_bound(t2 * 0.9, 2.0, 2, 0.5).is_err());
    }

    #[test]
    fn critical2d_exponent_properties() {
        let nu = nu_square_lattice();
        let limit = 0.5 * (3.0 + 2.0 * nu) / (3.0 + nu);
        assert!((critical2d_exponent(1e12) - limit).abs() < 1e-10);
        // the floor coincides with the infinite-Theta limit
        assert!((critical2d_floor() - limit).abs() < 1e-12);
        assert!((critical2d_floor() - 0.5 * (1.0 + nu / (3.0 + nu))).abs() < 1e-12);
        let w5 = critical2d_exponent(5.0);
        assert!((w5 - 0.5 * 3.240450 / (3.120225 + 1.120225 / 5.0)).abs() < 1e-5);
        assert!(w5 < 0.5);
        // w exceeds one half exactly when Theta > (1 + nu) / nu
        let pivot = (1.0 + nu) / nu;
        assert!(critical2d_exponent(pivot * 0.999) < 0.5);
        assert!(critical2d_exponent(pivot * 1.001) > 0.5);
        let grid = linspace(5.0, 100.0, 96);
        assert!(grid.windows(2).all(|w| critical2d_exponent(w[0]) < critical2d_exponent(w[1])));
        assert!(grid.iter().all(|&th| critical2d_exponent(th) < critical2d_floor()));
        assert!(critical2d_bound(1.0, 4.0, 1.0).is_err());
        let (w, v) = critical2d_bound(10.0, 5.0, 1.0).unwrap();
        assert_eq!(w, w5);
        assert!(v > 0.0);
    }

    #[test]
    fn tree_lower_examples() {
        assert!((tree_critical_lower(1.0) - 4.096e-7).abs() < 1e-10);
        let ratio = tree_critical_lower(3.0) / tree_critical_lower(6.0);
        assert!((ratio - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(tree_critical_lower_stated(2.0) > tree_critical_lower(2.0));
    }

    #[test]
    fn lifshitz_examples() {
        let tiny = lifshitz_bound(1e-12, 2.0, 2).unwrap();
        assert!(tiny.value < 1e-30);
        let b = lifshitz_bound(1e-6, 2.0, 2).unwrap();
        assert_eq!(b.e_hat, b.e_hat_candidates.iter().copied().fold(f64::INFINITY, f64::min));
        assert!(b.e_hat_candidates.iter().all(|x| x.is_finite() && *x > 0.0));
        let at_hat = lifshitz_bound(b.e_hat, 2.0, 2).unwrap();
        assert!(at_hat.in_window);
        assert!(!lifshitz_bound(b.e_hat * 1.01, 2.0, 2).unwrap().in_window);
        assert!(lifshitz_bound(0.0, 2.0, 2).is_err());
    }

    #[test]
    fn curve_csv() {
        let grid = linspace(1.0, 2.0, 3);
        let curve = BoundCurve {
            variable: "t".into(),
            values: grid.iter().map(|&t| tree_critical_lower(t)).collect(),
            in_window: vec![true; 3],
            window: (1.0, f64::INFINITY),
            grid,
        };
        let csv = curve.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,value,in_window");
        assert_eq!(lines.len(), 4);
        let v: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(v, tree_critical_lower(1.0));
    }
}
