//! Thick-restart Lanczos for the lowest eigenpairs of a symmetric operator.
//!
//! The Krylov basis is kept fully orthogonal (two Gram-Schmidt passes per
//! step) and the projected matrix is formed explicitly, so a restart simply
//! keeps the lowest Ritz vectors plus the current residual direction.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A real symmetric linear operator applied matrix-free.
pub trait SymmetricOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

#[derive(Clone, Debug)]
pub struct LanczosConfig {
    /// Basis size before a restart.
    pub max_basis: usize,
    pub max_restarts: usize,
    /// Residual tolerance relative to the largest Ritz value magnitude (floored at 1).
    pub tol: f64,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        LanczosConfig {
            max_basis: 96,
            max_restarts: 200,
            tol: 1e-11,
            seed: 0x5eed,
        }
    }
}

/// Lowest eigenpairs in ascending order.
#[derive(Clone, Debug)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// True residual norms `‖A v - θ v‖`.
    pub residuals: Vec<f64>,
    pub matvecs: usize,
}

/// Deterministic start vector: normalized all-ones plus a seeded perturbation.
pub fn start_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| 1.0 + rng.random_range(-1.0..1.0)).collect();
    normalize(&mut v);
    v
}

/// Lowest `nev` eigenpairs of `op`.
pub fn lowest_eigenpairs<A: SymmetricOperator + ?Sized>(
    op: &A,
    nev: usize,
    config: &LanczosConfig,
) -> Result<Eigenpairs> {
    let n = op.dim();
    if nev == 0 || nev > n {
        return Err(Error::Parameter(format!("cannot compute {nev} eigenpairs of a {n}-dimensional operator")));
    }
    let m = config.max_basis.max(nev + 8).min(n);
    let keep = (nev + 6).min(m / 2).max(nev);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x9e37_79b9_7f4a_7c15);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    // Projected matrix, grown column by column.
    let mut proj = DMatrix::<f64>::zeros(m, m);
    let mut next = start_vector(n, config.seed);
    let mut w = vec![0.0; n];
    let mut matvecs = 0usize;
    let mut last_residuals = vec![f64::INFINITY; nev];

    for _restart in 0..=config.max_restarts {
        let mut beta = 0.0;
        while basis.len() < m {
            basis.push(std::mem::take(&mut next));
            let j = basis.len() - 1;
            op.apply(&basis[j], &mut w);
            matvecs += 1;
            for i in 0..=j {
                let t = dot(&basis[i], &w);
                proj[(i, j)] = t;
                proj[(j, i)] = t;
            }
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    axpy(-c, b, &mut w);
                }
            }
            beta = norm(&w);
            let scale = proj.view((0, 0), (j + 1, j + 1)).amax().max(1.0);
            if beta <= 1e-13 * scale {
                // Invariant subspace: continue with a fresh orthogonal direction.
                beta = 0.0;
                if basis.len() == n {
                    break;
                }
                next = fresh_direction(&basis, n, &mut rng);
            } else {
                next = w.iter().map(|x| x / beta).collect();
            }
            let k = basis.len();
            if k >= nev && (k == m || k % 8 == 0 || basis.len() == n) {
                let (theta, s) = ritz(&proj, k);
                let tol = config.tol * theta.iter().fold(1.0f64, |a, t| a.max(t.abs()));
                let estimates: Vec<f64> = (0..nev).map(|i| beta * s[(k - 1, i)].abs()).collect();
                if estimates.iter().all(|&r| r <= tol) {
                    let pairs = finish(op, &basis, &theta, &s, nev, matvecs);
                    if pairs.residuals.iter().all(|&r| r <= 10.0 * tol) || basis.len() == n {
                        return Ok(pairs);
                    }
                }
            }
            if basis.len() == n {
                break;
            }
        }
        let k = basis.len();
        let (theta, s) = ritz(&proj, k);
        if k == n {
            return Ok(finish(op, &basis, &theta, &s, nev, matvecs));
        }
        last_residuals = (0..nev).map(|i| beta * s[(k - 1, i)].abs()).collect();
        // Keep the lowest Ritz vectors; `next` already holds the residual direction.
        let kept: Vec<Vec<f64>> = (0..keep).map(|c| combine(&basis, &s, c)).collect();
        basis = kept;
        proj.fill(0.0);
        for (i, t) in theta.iter().take(keep).enumerate() {
            proj[(i, i)] = *t;
        }
    }
    Err(Error::NoConvergence {
        iterations: matvecs,
        residuals: last_residuals,
    })
}

fn ritz(proj: &DMatrix<f64>, k: usize) -> (Vec<f64>, DMatrix<f64>) {
    let sub = proj.view((0, 0), (k, k)).into_owned();
    let eig = SymmetricEigen::new(sub);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let theta = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let s = DMatrix::from_fn(k, k, |r, c| eig.eigenvectors[(r, order[c])]);
    (theta, s)
}

fn combine(basis: &[Vec<f64>], s: &DMatrix<f64>, col: usize) -> Vec<f64> {
    let n = basis[0].len();
    let mut y = vec![0.0; n];
    for (r, b) in basis.iter().enumerate() {
        axpy(s[(r, col)], b, &mut y);
    }
    normalize(&mut y);
    y
}

fn finish<A: SymmetricOperator + ?Sized>(
    op: &A,
    basis: &[Vec<f64>],
    theta: &[f64],
    s: &DMatrix<f64>,
    nev: usize,
    mut matvecs: usize,
) -> Eigenpairs {
    let n = op.dim();
    let mut values = Vec::with_capacity(nev);
    let mut vectors = Vec::with_capacity(nev);
    let mut residuals = Vec::with_capacity(nev);
    let mut ay = vec![0.0; n];
    for (c, &t) in theta.iter().enumerate().take(nev) {
        let y = combine(basis, s, c);
        op.apply(&y, &mut ay);
        matvecs += 1;
        // Rayleigh quotient of the normalized vector.
        let rq = dot(&y, &ay);
        let r = ay.iter().zip(&y).map(|(a, b)| (a - rq * b).powi(2)).sum::<f64>().sqrt();
        debug_assert!((rq - t).abs() <= 1e-6 * t.abs().max(1.0));
        values.push(rq);
        vectors.push(y);
        residuals.push(r);
    }
    log::debug!("lanczos: {matvecs} matvecs, residuals {residuals:?}");
    Eigenpairs {
        values,
        vectors,
        residuals,
        matvecs,
    }
}

fn fresh_direction(basis: &[Vec<f64>], n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        for _ in 0..2 {
            for b in basis {
                let c = dot(b, &v);
                axpy(-c, b, &mut v);
            }
        }
        if norm(&v) > 1e-8 {
            normalize(&mut v);
            return v;
        }
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub(crate) fn normalize(v: &mut [f64]) {
    let n = norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Dense matrix wrapped as an operator; used by tests and small problems.
impl SymmetricOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (r, yr) in y.iter_mut().enumerate() {
            *yr = self.row(r).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}
