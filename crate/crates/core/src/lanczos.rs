//! Matrix-free Lanczos for the lowest eigenvalue of a real symmetric
//! operator, with full reorthogonalization.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Convergence threshold on the Ritz residual `|H y - θ y|`.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Seed of the pseudo-random start vector.
    pub seed: u64,
    /// Solve the projected problem every this many steps.
    pub check_every: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            tolerance: 1e-10,
            max_iterations: 600,
            seed: 0x5eed,
            check_every: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosResult {
    pub eigenvalue: f64,
    pub residual: f64,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Deterministic random start vector; entries outside `support` are zero.
pub fn random_start(dim: usize, seed: u64, support: impl Fn(usize) -> bool) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim)
        .map(|i| {
            let v: f64 = rng.random::<f64>() - 0.5;
            if support(i) {
                v
            } else {
                0.0
            }
        })
        .collect()
}

fn lowest_ritz(alphas: &[f64], betas: &[f64]) -> (f64, f64) {
    let k = alphas.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (idx, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty tridiagonal");
    (theta, eig.eigenvectors[(k - 1, idx)])
}

/// Lowest eigenvalue of the operator `apply` (writing `H v` into its
/// second argument) starting from `start`.
///
/// The Krylov space stays inside any invariant subspace that contains the
/// start vector, so a start vector supported on one symmetry sector yields
/// that sector's lowest eigenvalue.
pub fn lowest_eigenvalue<F>(apply: F, start: Vec<f64>, opts: &LanczosOptions) -> Result<LanczosResult>
where
    F: Fn(&[f64], &mut [f64]),
{
    let dim = start.len();
    let norm = dot(&start, &start).sqrt();
    if dim == 0 || norm == 0.0 || !norm.is_finite() {
        return Err(Error::Invalid("Lanczos start vector is zero".into()));
    }
    let mut basis: Vec<Vec<f64>> = vec![start.iter().map(|v| v / norm).collect()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    let max_iter = opts.max_iterations.min(dim).max(1);
    let mut last = (f64::NAN, f64::INFINITY);

    for j in 0..max_iter {
        apply(&basis[j], &mut w);
        let alpha = dot(&basis[j], &w);
        alphas.push(alpha);
        // Two passes of classical Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                axpy(-c, q, &mut w);
            }
        }
        let beta = dot(&w, &w).sqrt();
        let exhausted = beta <= 1e-13 * alpha.abs().max(1.0) || j + 1 == dim;
        if exhausted || (j + 1) % opts.check_every == 0 || j + 1 == max_iter {
            let (theta, last_component) = lowest_ritz(&alphas, &betas);
            let residual = if exhausted { 0.0 } else { (beta * last_component).abs() };
            last = (theta, residual);
            if residual <= opts.tolerance {
                return Ok(LanczosResult {
                    eigenvalue: theta,
                    residual,
                    iterations: j + 1,
                });
            }
        }
        if exhausted {
            break;
        }
        betas.push(beta);
        basis.push(w.iter().map(|v| v / beta).collect());
    }
    Err(Error::LanczosNotConverged {
        iterations: alphas.len(),
        residual: last.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_operator() {
        let diag = [3.0, -1.5, 2.0, 0.25, 7.0];
        let apply = |v: &[f64], out: &mut [f64]| {
            for i in 0..v.len() {
                out[i] = diag[i] * v[i];
            }
        };
        let r = lowest_eigenvalue(apply, random_start(5, 1, |_| true), &LanczosOptions::default())
            .unwrap();
        assert!((r.eigenvalue + 1.5).abs() < 1e-12);
    }

    #[test]
    fn restricted_start_stays_in_subspace() {
        let diag = [3.0, -1.5, 2.0, 0.25];
        let apply = |v: &[f64], out: &mut [f64]| {
            for i in 0..v.len() {
                out[i] = diag[i] * v[i];
            }
        };
        let start = random_start(4, 2, |i| i % 2 == 0);
        let r = lowest_eigenvalue(apply, start, &LanczosOptions::default()).unwrap();
        assert!((r.eigenvalue - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_start_is_rejected() {
        let apply = |_: &[f64], _: &mut [f64]| {};
        assert!(lowest_eigenvalue(apply, vec![0.0; 3], &LanczosOptions::default()).is_err());
    }
}
