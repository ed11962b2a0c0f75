//! Laplacian spectra: dense full diagonalization, Krylov extremal
//! eigenpairs, the weighted path spectrum and the gap formulas built on it.

mod lanczos;
mod path;

use nalgebra::{DMatrix, SymmetricEigen};

pub use lanczos::{extremal_eigenpair, EigenPair, LanczosConfig, Which};
pub use path::{box_gap, hook_eigenvalues, path_spectrum, spectral_gap, SymTridiagonal, DEFAULT_HOOK_CAP};

use crate::graph::{SchreierGraph, SparseSym, WeightedGraph};
use crate::{Error, Partition, Result};

/// Largest matrix handed to the dense eigensolver by default.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Relative tolerance for multiset comparisons, scaled by `max(1, d)`.
pub const SPECTRUM_RTOL: f64 = 1e-9;

/// Anything with a graph Laplacian and a natural energy scale.
pub trait LaplacianSource {
    fn laplacian(&self) -> &SparseSym;

    /// `max(1, d)` for Schreier graphs, `max(1, max degree)` otherwise.
    fn scale(&self) -> f64;
}

impl LaplacianSource for SchreierGraph {
    fn laplacian(&self) -> &SparseSym {
        SchreierGraph::laplacian(self)
    }

    fn scale(&self) -> f64 {
        self.weights().scale()
    }
}

impl LaplacianSource for WeightedGraph {
    fn laplacian(&self) -> &SparseSym {
        WeightedGraph::laplacian(self)
    }

    fn scale(&self) -> f64 {
        self.laplacian().diagonal().into_iter().fold(1.0, f64::max)
    }
}

impl LaplacianSource for SparseSym {
    fn laplacian(&self) -> &SparseSym {
        self
    }

    fn scale(&self) -> f64 {
        self.diagonal().into_iter().fold(1.0, f64::max)
    }
}

/// A sorted eigenvalue multiset with an absolute matching tolerance and,
/// optionally, a symmetry class per eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumMultiset {
    values: Vec<f64>,
    tolerance: f64,
    labels: Option<Vec<Partition>>,
}

impl SpectrumMultiset {
    pub fn new(mut values: Vec<f64>, tolerance: f64) -> Self {
        values.sort_by(f64::total_cmp);
        SpectrumMultiset {
            values,
            tolerance,
            labels: None,
        }
    }

    /// Sorts by value; ties keep their label order stable.
    pub fn labeled(mut pairs: Vec<(f64, Partition)>, tolerance: f64) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (values, labels) = pairs.into_iter().unzip();
        SpectrumMultiset {
            values,
            tolerance,
            labels: Some(labels),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[Partition]> {
        self.labels.as_deref()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// The `k`-th smallest value, 0-based.
    pub fn nth(&self, k: usize) -> Option<f64> {
        self.values.get(k).copied()
    }

    /// Pairs every value with its label, if labelled.
    pub fn iter_labeled(&self) -> impl Iterator<Item = (f64, Option<&Partition>)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (v, self.labels.as_ref().map(|l| &l[i])))
    }

    /// How many values lie within `tol` of `x`.
    pub fn count_near(&self, x: f64, tol: f64) -> usize {
        self.values.iter().filter(|&&v| (v - x).abs() <= tol).count()
    }

    /// Greedy matching on the two sorted lists: every value of `self` is
    /// paired with a distinct value of `other` within `tol`.
    pub fn is_submultiset_of(&self, other: &SpectrumMultiset, tol: f64) -> bool {
        let mut j = 0;
        for &x in &self.values {
            while j < other.values.len() && other.values[j] < x - tol {
                j += 1;
            }
            if j == other.values.len() || (other.values[j] - x).abs() > tol {
                return false;
            }
            j += 1;
        }
        true
    }

    /// Same length and element-wise within `tol` after sorting.
    pub fn approx_eq(&self, other: &SpectrumMultiset, tol: f64) -> bool {
        self.len() == other.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| (a - b).abs() <= tol)
    }

    /// Largest element-wise deviation from `other` (infinite when lengths
    /// differ).
    pub fn max_deviation(&self, other: &SpectrumMultiset) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Groups values closer than `tol` to their neighbour; returns each
    /// cluster's mean and size.
    pub fn clusters(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize, f64)> = Vec::new();
        for &v in &self.values {
            match out.last_mut() {
                Some((sum, count, last)) if v - *last <= tol => {
                    *sum += v;
                    *count += 1;
                    *last = v;
                }
                _ => out.push((v, 1, v)),
            }
        }
        out.into_iter().map(|(s, c, _)| (s / c as f64, c)).collect()
    }

    /// Is `K ↔ 2c - K` a bijection of the multiset?
    pub fn is_symmetric_about(&self, center: f64, tol: f64) -> bool {
        let n = self.values.len();
        (0..n).all(|i| (self.values[i] + self.values[n - 1 - i] - 2.0 * center).abs() <= tol)
    }
}

/// All eigenvalues by a dense symmetric eigensolve.
pub fn full_spectrum(g: &(impl LaplacianSource + ?Sized)) -> Result<SpectrumMultiset> {
    full_spectrum_capped(g, DEFAULT_DENSE_CAP)
}

pub fn full_spectrum_capped(g: &(impl LaplacianSource + ?Sized), cap: usize) -> Result<SpectrumMultiset> {
    let lap = g.laplacian();
    check_dense_cap(lap, cap)?;
    let values: Vec<f64> = lap.to_dense().symmetric_eigenvalues().iter().copied().collect();
    let spectrum = SpectrumMultiset::new(values, SPECTRUM_RTOL * g.scale());
    check_spectrum(lap, &spectrum, g.scale())?;
    Ok(spectrum)
}

/// Eigenvalues with orthonormal eigenvectors as matching columns.
pub fn full_eigensystem(g: &(impl LaplacianSource + ?Sized)) -> Result<(SpectrumMultiset, DMatrix<f64>)> {
    let lap = g.laplacian();
    check_dense_cap(lap, DEFAULT_DENSE_CAP)?;
    let eig = SymmetricEigen::new(lap.to_dense());
    let mut order: Vec<usize> = (0..lap.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(lap.dim(), lap.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
    let spectrum = SpectrumMultiset::new(values, SPECTRUM_RTOL * g.scale());
    check_spectrum(lap, &spectrum, g.scale())?;
    Ok((spectrum, vectors))
}

fn check_dense_cap(lap: &SparseSym, cap: usize) -> Result<()> {
    if lap.dim() > cap {
        return Err(Error::CapExceeded {
            what: "dense eigensolve dimension",
            value: lap.dim() as u128,
            cap: cap as u128,
        });
    }
    Ok(())
}

/// Positive semidefiniteness and trace consistency.
fn check_spectrum(lap: &SparseSym, s: &SpectrumMultiset, scale: f64) -> Result<()> {
    let trace = lap.trace();
    if (s.sum() - trace).abs() > SPECTRUM_RTOL * trace.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "eigenvalue sum {} differs from trace {trace}",
            s.sum()
        )));
    }
    if let Some(min) = s.min() {
        if min < -SPECTRUM_RTOL * scale {
            return Err(Error::Numerical(format!("negative Laplacian eigenvalue {min}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, cartesian_product};
    use crate::weights::{random_weights, uniform_weights};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn assert_values(s: &SpectrumMultiset, want: &[f64]) {
        assert_eq!(s.len(), want.len());
        for (a, b) in s.values().iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{:?} vs {want:?}", s.values());
        }
    }

    #[test]
    fn hexagon_and_path() {
        let w = uniform_weights(3, 1.0).unwrap();
        let hex = full_spectrum(&build_graph(&p(&[1, 1, 1]), &w).unwrap()).unwrap();
        // 6-cycle: 2 - 2 cos(2πk/6)
        let mut oracle: Vec<f64> = (0..6)
            .map(|k| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * k as f64 / 6.0).cos())
            .collect();
        oracle.sort_by(f64::total_cmp);
        assert_values(&hex, &oracle);
        assert_values(&hex, &[0.0, 1.0, 1.0, 3.0, 3.0, 4.0]);

        let p3 = full_spectrum(&build_graph(&p(&[2, 1]), &w).unwrap()).unwrap();
        assert_values(&p3, &[0.0, 1.0, 3.0]);

        let single = full_spectrum(&build_graph(&p(&[3]), &w).unwrap()).unwrap();
        assert_values(&single, &[0.0]);
    }

    #[test]
    fn dense_cap() {
        let w = uniform_weights(4, 1.0).unwrap();
        let g = build_graph(&Partition::column(4).unwrap(), &w).unwrap();
        assert!(matches!(full_spectrum_capped(&g, 10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn eigensystem_columns_are_eigenvectors() {
        let w = random_weights(4, 2, (0.1, 10.0)).unwrap();
        let g = build_graph(&p(&[2, 1, 1]), &w).unwrap();
        let (s, vecs) = full_eigensystem(&g).unwrap();
        for (c, &lambda) in s.values().iter().enumerate() {
            let x: Vec<f64> = vecs.column(c).iter().copied().collect();
            let ax = g.laplacian().apply(&x);
            let res: f64 = ax.iter().zip(&x).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
            assert!(res < 1e-10 * w.scale());
        }
    }

    #[test]
    fn product_spectrum_is_pairwise_sums() {
        let edge = WeightedGraph::path(&[1.0]).unwrap();
        let square = cartesian_product(&edge, &edge).unwrap();
        assert_values(&full_spectrum(&square).unwrap(), &[0.0, 2.0, 2.0, 4.0]);

        for seed in 0..5 {
            let a = random_weights(4, seed, (0.1, 10.0)).unwrap();
            let b = random_weights(3, seed + 100, (0.1, 10.0)).unwrap();
            let g1 = build_graph(&p(&[2, 1, 1]), &a).unwrap().graph().clone();
            let g2 = build_graph(&p(&[1, 1, 1]), &b).unwrap().graph().clone();
            let s1 = full_spectrum(&g1).unwrap();
            let s2 = full_spectrum(&g2).unwrap();
            let sums: Vec<f64> = s1
                .values()
                .iter()
                .flat_map(|x| s2.values().iter().map(move |y| x + y))
                .collect();
            let prod = full_spectrum(&cartesian_product(&g1, &g2).unwrap()).unwrap();
            let tol = 1e-9 * (a.total() + b.total()).max(1.0);
            assert!(prod.approx_eq(&SpectrumMultiset::new(sums, tol), tol));
        }
    }

    #[test]
    fn multiset_matching() {
        let big = SpectrumMultiset::new(vec![0.0, 1.0, 1.0, 3.0, 3.0, 4.0], 1e-9);
        let small = SpectrumMultiset::new(vec![3.0, 1.0, 0.0], 1e-9);
        assert!(small.is_submultiset_of(&big, 1e-9));
        let too_many = SpectrumMultiset::new(vec![1.0, 1.0, 1.0], 1e-9);
        assert!(!too_many.is_submultiset_of(&big, 1e-9));
        let off = SpectrumMultiset::new(vec![1.0 + 1e-6], 1e-9);
        assert!(!off.is_submultiset_of(&big, 1e-9));
        assert!(off.is_submultiset_of(&big, 1e-5));
        assert_eq!(big.clusters(1e-9), vec![(0.0, 1), (1.0, 2), (3.0, 2), (4.0, 1)]);
        assert!(big.is_symmetric_about(2.0, 1e-12));
        assert_eq!(big.count_near(1.0, 1e-9), 2);
    }
}
