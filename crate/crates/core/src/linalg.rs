//! Dense symmetric eigensolvers.
//!
//! Two independent routes are provided:
//!
//! * [`jacobi_eigh`]: cyclic Jacobi rotations, eigenvalues and eigenvectors.
//!   Unconditionally robust; O(n^3) per sweep.
//! * [`tridiagonalize`] + [`tridiagonal_eigen`]: Householder reduction that
//!   keeps the first basis vector fixed, then implicit QL with Wilkinson
//!   shifts. Besides the eigenvalues it can return the squared first
//!   components of the eigenvectors, i.e. the spectral measure of `e_0`.
//!
//! [`krylov_measure`] computes the same spectral measure from a sparse
//! operator by Lanczos with full reorthogonalisation; it stops either on an
//! invariant subspace (exact) or once the Gauss quadrature remainder for
//! `exp(-t(1-x))` is certified below a tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense real symmetric matrix, row-major; symmetry is maintained by every
/// mutator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = x;
        }
        m
    }

    /// Builds from the upper triangle `f(i, j)`, `i <= j`, mirrored below.
    pub fn from_upper<F: Fn(usize, usize) -> f64>(n: usize, f: F) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let x = f(i, j);
                m.data[i * n + j] = x;
                m.data[j * n + i] = x;
            }
        }
        m
    }

    /// Rejects rows of the wrong length or asymmetric input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSize("matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::OutOfRange(format!("asymmetric entry ({i}, {j})")));
                }
            }
        }
        Ok(SymmetricMatrix { n, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.n + j] = x;
        self.data[j * self.n + i] = x;
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.n + j] += x;
        if i != j {
            self.data[j * self.n + i] += x;
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        if self.n != other.n {
            return Err(Error::InvalidSize("dimension mismatch".into()));
        }
        Ok(SymmetricMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scaled(&self, factor: f64) -> SymmetricMatrix {
        SymmetricMatrix {
            n: self.n,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    /// `y = M x`.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// Simultaneous row/column permutation: entry `(i, j)` of the result is
    /// `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> SymmetricMatrix {
        SymmetricMatrix::from_upper(self.n, |i, j| self.get(perm[i], perm[j]))
    }
}

/// Eigenvalues (unsorted, matching columns) and column-major eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// `vectors[k * n + i]` is component `i` of eigenvector `k`.
    pub vectors: Vec<f64>,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> &[f64] {
        let n = self.values.len();
        &self.vectors[k * n..(k + 1) * n]
    }

    /// Component `i` of eigenvector `k`.
    pub fn component(&self, k: usize, i: usize) -> f64 {
        self.vectors[k * self.values.len() + i]
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigendecomposition. Sweeps until the off-diagonal Frobenius
/// norm drops below `1e-13 * ||m||_F`.
pub fn jacobi_eigh(m: &SymmetricMatrix) -> EigenDecomposition {
    let n = m.dim();
    let mut a = m.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = m.frobenius_norm();
    let target = 1e-13 * scale;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= target || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                // rows of v hold eigenvector components; column k of the
                // rotation product is eigenvector k
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    // transpose to column-major eigenvectors
    let mut vectors = vec![0.0; n * n];
    for k in 0..n {
        for i in 0..n {
            vectors[k * n + i] = v[i * n + k];
        }
    }
    EigenDecomposition { values, vectors }
}

/// Symmetric tridiagonal matrix: `diag[i]` and `off[i]` at `(i, i+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// Householder reduction `Q^T M Q = T` with `Q e_0 = e_0`, so the spectral
/// measure of the first basis vector is preserved.
pub fn tridiagonalize(m: &SymmetricMatrix) -> Tridiagonal {
    let n = m.dim();
    if n == 0 {
        return Tridiagonal { diag: vec![], off: vec![] };
    }
    let mut a = m.data.clone();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        diag[k] = a[k * n + k];
        let lo = k + 1;
        let x0 = a[lo * n + k];
        let tail: f64 = (lo + 1..n).map(|i| a[i * n + k] * a[i * n + k]).sum();
        if tail == 0.0 {
            off[k] = x0;
            continue;
        }
        let norm = (x0 * x0 + tail).sqrt();
        let alpha = if x0 > 0.0 { -norm } else { norm };
        off[k] = alpha;
        v[lo] = x0 - alpha;
        for i in lo + 1..n {
            v[i] = a[i * n + k];
        }
        let vtv = v[lo] * v[lo] + tail;
        let beta = 2.0 / vtv;
        // p = beta * B v on the trailing block
        for i in lo..n {
            let row = &a[i * n + lo..i * n + n];
            p[i] = beta * row.iter().zip(&v[lo..n]).map(|(x, y)| x * y).sum::<f64>();
        }
        let kappa = 0.5 * beta * (lo..n).map(|i| v[i] * p[i]).sum::<f64>();
        for i in lo..n {
            p[i] -= kappa * v[i];
        }
        for i in lo..n {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a[i * n + lo..i * n + n];
            for (j, x) in row.iter_mut().enumerate() {
                *x -= vi * p[lo + j] + wi * v[lo + j];
            }
        }
    }
    diag[n - 1] = a[(n - 1) * n + n - 1];
    Tridiagonal { diag, off }
}

/// Eigenvalues of a symmetric tridiagonal matrix (implicit QL, Wilkinson
/// shift), optionally with the first component of every eigenvector.
pub fn tridiagonal_eigen(t: &Tridiagonal, first_row: bool) -> (Vec<f64>, Option<Vec<f64>>) {
    let n = t.diag.len();
    let mut d = t.diag.clone();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&t.off);
    let mut z: Vec<f64> = if first_row {
        let mut z = vec![0.0; n];
        if n > 0 {
            z[0] = 1.0;
        }
        z
    } else {
        Vec::new()
    };
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                // numerically converged to working precision
                e[l] = 0.0;
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if first_row {
                    let fz = z[i + 1];
                    z[i + 1] = s * z[i] + c * fz;
                    z[i] = c * z[i] - s * fz;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    (d, if first_row { Some(z) } else { None })
}

/// All eigenvalues (unsorted) via Householder + QL.
pub fn symmetric_eigenvalues(m: &SymmetricMatrix) -> Vec<f64> {
    tridiagonal_eigen(&tridiagonalize(m), false).0
}

/// Discrete spectral measure of a unit vector: atoms `values[k]` with
/// masses `weights[k]` (summing to one).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    /// `true` when the Krylov space was exhausted, so the measure is exact.
    pub exact: bool,
    /// Natural log of `prod beta_j^2` over the recurrence, used by the
    /// quadrature remainder bound; `-inf` when exact.
    pub log_remainder_factor: f64,
}

impl SpectralMeasure {
    /// `sum_k w_k f(x_k)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.values.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Upper bound on the quadrature error of `exp(-t(1-x))` for spectra in
    /// `[-1, 1]`: `t^{2k} / (2k)! * prod beta_j^2`.
    pub fn heat_remainder_bound(&self, t: f64) -> f64 {
        if self.exact || t == 0.0 {
            return 0.0;
        }
        let k = self.values.len() as f64;
        (2.0 * k * t.ln() - ln_factorial(2 * self.values.len()) + self.log_remainder_factor).exp()
    }
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Spectral measure of basis vector `origin` under a dense symmetric matrix,
/// exact up to roundoff.
pub fn spectral_measure_at(m: &SymmetricMatrix, origin: usize) -> SpectralMeasure {
    let n = m.dim();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(0, origin);
    let t = tridiagonalize(&m.permuted(&perm));
    let (values, z) = tridiagonal_eigen(&t, true);
    let weights = z.unwrap_or_default().into_iter().map(|x| x * x).collect();
    SpectralMeasure { values, weights, exact: true, log_remainder_factor: f64::NEG_INFINITY }
}

/// Lanczos from basis vector `origin` with full reorthogonalisation.
///
/// `apply(x, y)` must compute `y = M x` for a symmetric `M` with spectrum in
/// `[-1, 1]`. Iteration stops on breakdown (exact measure), after `n` steps,
/// or once [`SpectralMeasure::heat_remainder_bound`] at `t_max` is below
/// `tol`.
pub fn krylov_measure<F>(n: usize, origin: usize, apply: F, t_max: f64, tol: f64) -> SpectralMeasure
where
    F: Fn(&[f64], &mut [f64]),
{
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut q = vec![0.0; n];
    q[origin] = 1.0;
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut log_factor = 0.0;
    let log_tol = tol.ln();
    let mut exact = false;
    loop {
        apply(&q, &mut w);
        let alpha: f64 = q.iter().zip(&w).map(|(a, b)| a * b).sum();
        alphas.push(alpha);
        basis.push(q.clone());
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for b in &basis {
                let c: f64 = b.iter().zip(&w).map(|(x, y)| x * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let k = alphas.len();
        if beta <= 1e-12 || k == n {
            exact = true;
            break;
        }
        log_factor += 2.0 * beta.ln();
        let bound = 2.0 * k as f64 * t_max.ln() - ln_factorial(2 * k) + log_factor;
        if t_max > 0.0 && bound < log_tol {
            betas.push(beta);
            break;
        }
        betas.push(beta);
        for (qi, wi) in q.iter_mut().zip(&w) {
            *qi = wi / beta;
        }
    }
    let k = alphas.len();
    let t = Tridiagonal { diag: alphas, off: betas[..k - 1].to_vec() };
    let (values, z) = tridiagonal_eigen(&t, true);
    let weights = z.unwrap_or_default().into_iter().map(|x| x * x).collect();
    SpectralMeasure {
        values,
        weights,
        exact,
        log_remainder_factor: if exact { f64::NEG_INFINITY } else { log_factor },
    }
}
