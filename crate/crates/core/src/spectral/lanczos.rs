use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LaplacianSource;
use crate::graph::SparseSym;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Largest,
    SecondLargest,
    /// Smallest eigenvalue orthogonal to the all-ones vector.
    Gap,
    Smallest,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LanczosConfig {
    /// Basis size per restart cycle.
    pub krylov_dim: usize,
    /// Matvec budget; `None` means `10·D`.
    pub max_matvecs: Option<usize>,
    /// Residual target; `None` means `1e-8·max(1, d)`.
    pub residual_tol: Option<f64>,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        LanczosConfig {
            krylov_dim: 96,
            max_matvecs: None,
            residual_tol: None,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit-norm eigenvector.
    pub vector: Vec<f64>,
    /// `‖Lx - λx‖`.
    pub residual: f64,
    pub matvecs: usize,
}

/// One extremal eigenpair by restarted Lanczos with full
/// reorthogonalization.
pub fn extremal_eigenpair(
    g: &(impl LaplacianSource + ?Sized),
    which: Which,
    cfg: &LanczosConfig,
) -> Result<EigenPair> {
    let lap = g.laplacian();
    let n = lap.dim();
    let tol = cfg.residual_tol.unwrap_or(1e-8 * g.scale());
    let budget = cfg.max_matvecs.unwrap_or(10 * n).max(1);
    let ones = vec![1.0 / (n as f64).sqrt(); n];
    match which {
        Which::Largest => solve(lap, &[], true, cfg, tol, budget),
        Which::Smallest => solve(lap, &[], false, cfg, tol, budget),
        Which::Gap => solve(lap, &[ones], false, cfg, tol, budget),
        Which::SecondLargest => {
            let top = solve(lap, &[], true, cfg, tol, budget)?;
            let mut second = solve(lap, &[top.vector], true, cfg, tol, budget.saturating_sub(top.matvecs).max(1))?;
            second.matvecs += top.matvecs;
            Ok(second)
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    // twice is enough
    for _ in 0..2 {
        for q in against {
            let c = dot(v, q);
            axpy(-c, q, v);
        }
    }
}

fn solve(
    lap: &SparseSym,
    deflate: &[Vec<f64>],
    largest: bool,
    cfg: &LanczosConfig,
    tol: f64,
    budget: usize,
) -> Result<EigenPair> {
    let n = lap.dim();
    if n <= deflate.len() {
        return Err(Error::OutOfRange(format!(
            "no eigenpair left on {n} vertices after deflating {}",
            deflate.len()
        )));
    }
    let avail = n - deflate.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let random_unit = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        loop {
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
            orthogonalize(&mut v, deflate);
            let nv = norm(&v);
            if nv > 1e-8 {
                v.iter_mut().for_each(|x| *x /= nv);
                return v;
            }
        }
    };
    let mut start = random_unit(&mut rng);
    let mut matvecs = 0;
    let mut best_residual = f64::INFINITY;
    let mut w = vec![0.0; n];
    loop {
        let m = cfg.krylov_dim.max(2).min(avail);
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alphas = Vec::with_capacity(m);
        let mut betas: Vec<f64> = Vec::with_capacity(m);
        let mut exhausted = false;
        for j in 0..m {
            lap.matvec(&basis[j], &mut w);
            matvecs += 1;
            let a = dot(&w, &basis[j]);
            axpy(-a, &basis[j], &mut w);
            if j > 0 {
                axpy(-betas[j - 1], &basis[j - 1], &mut w);
            }
            orthogonalize(&mut w, deflate);
            orthogonalize(&mut w, &basis);
            alphas.push(a);
            if j + 1 == m {
                break;
            }
            let b = norm(&w);
            if b <= 1e-12 * (a.abs() + betas.last().copied().unwrap_or(0.0)).max(1e-300) {
                // Krylov space is invariant: its Ritz pairs are exact
                exhausted = true;
                break;
            }
            betas.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
            if matvecs >= budget {
                break;
            }
        }

        let k = alphas.len();
        let t = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                alphas[i]
            } else if i + 1 == j {
                betas[i]
            } else if j + 1 == i {
                betas[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let pick = (0..k)
            .reduce(|a, b| {
                let better = if largest {
                    eig.eigenvalues[b] > eig.eigenvalues[a]
                } else {
                    eig.eigenvalues[b] < eig.eigenvalues[a]
                };
                if better {
                    b
                } else {
                    a
                }
            })
            .expect("nonempty Krylov basis");
        let mut x = vec![0.0; n];
        for (i, q) in basis.iter().enumerate().take(k) {
            axpy(eig.eigenvectors[(i, pick)], q, &mut x);
        }
        orthogonalize(&mut x, deflate);
        let nx = norm(&x);
        x.iter_mut().for_each(|v| *v /= nx);
        lap.matvec(&x, &mut w);
        matvecs += 1;
        let value = dot(&x, &w);
        axpy(-value, &x, &mut w);
        let residual = norm(&w);
        best_residual = best_residual.min(residual);
        if residual <= tol {
            return Ok(EigenPair {
                value,
                vector: x,
                residual,
                matvecs,
            });
        }
        if matvecs >= budget {
            return Err(Error::NonConvergence {
                matvecs,
                best_residual,
            });
        }
        start = if exhausted {
            // restart from fresh directions so the missing part of the space
            // gets explored
            let mut v = random_unit(&mut rng);
            axpy(1.0, &x, &mut v);
            orthogonalize(&mut v, deflate);
            let nv = norm(&v);
            v.iter_mut().for_each(|c| *c /= nv);
            v
        } else {
            x
        };
    }
}
