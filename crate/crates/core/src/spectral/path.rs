use crate::combinatorics::Partition;
use crate::weights::{box_alpha, WeightSet};
use crate::{Error, Result};

use super::{SpectrumMultiset, SPECTRUM_RTOL};

/// Largest number of `r`-subset sums `hook_eigenvalues` will form.
pub const DEFAULT_HOOK_CAP: u128 = 1_000_000;

/// Symmetric tridiagonal matrix, eigenvalues by Sturm-sequence bisection.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len().saturating_sub(1),
                actual: off.len(),
            });
        }
        Ok(SymTridiagonal { diag, off })
    }

    /// The weighted path Laplacian: `α_{k-1} + α_k` on the diagonal and
    /// `-α_k` beside it.
    pub fn path_laplacian(alphas: &[f64]) -> Self {
        let n = alphas.len() + 1;
        let diag = (0..n)
            .map(|i| {
                let left = if i > 0 { alphas[i - 1] } else { 0.0 };
                let right = if i < n - 1 { alphas[i] } else { 0.0 };
                left + right
            })
            .collect();
        let off = alphas.iter().map(|a| -a).collect();
        SymTridiagonal { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE * self.norm_bound().max(1.0);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                let b = self.off[i - 1];
                q = self.diag[i] - x - b * b / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected until the bracket
    /// stops shrinking in floating point.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.dim());
        let (mut lo, mut hi) = self.gershgorin();
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return mid;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.eigenvalue(k)).collect()
    }
}

/// The `N` eigenvalues of the weighted path Laplacian, `0 = λ₁ < … < λ_N`.
///
/// The zero mode is exact: it is pinned rather than bisected. A tie between
/// neighbours cannot happen for positive weights and is reported as a
/// numerical failure.
pub fn path_spectrum(w: &WeightSet) -> Result<SpectrumMultiset> {
    let values = path_values(w)?;
    Ok(SpectrumMultiset::new(values, SPECTRUM_RTOL * w.scale()))
}

fn path_values(w: &WeightSet) -> Result<Vec<f64>> {
    let t = SymTridiagonal::path_laplacian(w.alphas());
    let mut values = t.eigenvalues();
    values[0] = 0.0;
    for pair in values.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::Numerical(format!(
                "path spectrum not strictly increasing: {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(values)
}

/// All `C(N-1, r)` sums of `r` distinct nonzero path eigenvalues, labelled
/// by the hook `[N-r, 1^r]`.
pub fn hook_eigenvalues(w: &WeightSet, r: usize) -> Result<SpectrumMultiset> {
    let n = w.n();
    if r == 0 || r >= n {
        return Err(Error::OutOfRange(format!("hook index r = {r} outside 1..{}", n.saturating_sub(1))));
    }
    let count = binomial(n as u128 - 1, r as u128);
    if count > DEFAULT_HOOK_CAP {
        return Err(Error::CapExceeded {
            what: "hook eigenvalue sums",
            value: count,
            cap: DEFAULT_HOOK_CAP,
        });
    }
    let lambdas = &path_values(w)?[1..];
    let label = Partition::hook(n, r)?;
    let mut sums = Vec::with_capacity(count as usize);
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        sums.push((idx.iter().map(|&i| lambdas[i]).sum::<f64>(), label.clone()));
        // next r-subset in lexicographic order
        let m = lambdas.len();
        let Some(pos) = (0..r).rev().find(|&i| idx[i] < m - r + i) else {
            break;
        };
        idx[pos] += 1;
        for j in pos + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(SpectrumMultiset::labeled(sums, SPECTRUM_RTOL * w.scale()))
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `λ₂` of the path, which is also the gap of the full `N!`-vertex
/// Cayley graph.
pub fn spectral_gap(w: &WeightSet) -> Result<f64> {
    if w.n() < 2 {
        return Err(Error::OutOfRange("spectral gap needs at least two particles".into()));
    }
    Ok(path_values(w)?[1])
}

/// Closed-form gap for equal box weights:
/// `π²N(N+1)(2N+1)/(3L³) · (1 - cos(π/N))`.
pub fn box_gap(n: usize, length: f64) -> Result<f64> {
    let alpha = box_alpha(n, length)?;
    let half = std::f64::consts::PI / (2.0 * n as f64);
    // 1 - cos(x) = 2 sin²(x/2), without the cancellation
    Ok(2.0 * alpha * 2.0 * half.sin().powi(2))
}
