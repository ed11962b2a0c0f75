//! Young's orthogonal form of the symmetric group and the decomposition of a
//! snippet-space spectrum into blocks, one per symmetry class.
//!
//! In the orthogonal form the adjacent transposition `s_k = (k, k+1)` acts
//! on the standard tableaux of shape `μ` through the axial distance
//! `r = c(k+1) - c(k)`, where `c = col - row` is the content of a cell:
//! `ρ(s_k) T = T/r + √(1 - 1/r²) s_k T`. Every generator comes out real
//! symmetric, so `Σ α_k ρ(s_k)` can be handed straight to a symmetric
//! eigensolver.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{irrep_dimension, kostka_number, partitions_of, standard_tableaux, Tableau};
use crate::graph::SchreierGraph;
use crate::spectral::{SpectrumMultiset, SPECTRUM_RTOL};
use crate::weights::WeightSet;
use crate::{Error, Partition, Result};

/// Largest irrep dimension built by default.
pub const DEFAULT_BLOCK_CAP: u64 = 5_000;

/// Tolerance for the involution, braid and commutation checks.
pub const RELATION_TOL: f64 = 1e-12;

/// The orthogonal-form matrices of `s_1, …, s_{N-1}` on `S^μ`.
#[derive(Clone, Debug)]
pub struct IrrepBlock {
    shape: Partition,
    basis: Vec<Tableau>,
    generators: Vec<DMatrix<f64>>,
}

/// Largest deviations found by [`IrrepBlock::relation_defects`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RelationDefects {
    pub symmetry: f64,
    pub involution: f64,
    pub braid: f64,
    pub commutation: f64,
}

impl RelationDefects {
    pub fn max(&self) -> f64 {
        self.symmetry.max(self.involution).max(self.braid).max(self.commutation)
    }
}

impl IrrepBlock {
    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Standard tableaux in row-reading lexicographic order.
    pub fn basis(&self) -> &[Tableau] {
        &self.basis
    }

    pub fn generators(&self) -> &[DMatrix<f64>] {
        &self.generators
    }

    /// `ρ(s_k)`, `k` in `1..N`.
    pub fn generator(&self, k: usize) -> &DMatrix<f64> {
        &self.generators[k - 1]
    }

    /// `Σ α_k ρ(s_k)`.
    pub fn weighted_sum(&self, w: &WeightSet) -> Result<DMatrix<f64>> {
        if w.n() != self.shape.n() {
            return Err(Error::SizeMismatch {
                left: self.shape.n(),
                right: w.n(),
            });
        }
        let dim = self.dimension();
        let mut m = DMatrix::zeros(dim, dim);
        for (g, &a) in self.generators.iter().zip(w.alphas()) {
            m += g * a;
        }
        Ok(m)
    }

    /// Max-entry deviations from `ρ = ρᵀ`, `ρ² = 1`, the braid relation on
    /// neighbouring generators and commutation of distant ones.
    pub fn relation_defects(&self) -> RelationDefects {
        let dim = self.dimension();
        let id = DMatrix::<f64>::identity(dim, dim);
        let dev = |m: DMatrix<f64>| m.abs().max();
        let mut d = RelationDefects::default();
        let g = &self.generators;
        for (i, a) in g.iter().enumerate() {
            d.symmetry = d.symmetry.max(dev(a - a.transpose()));
            d.involution = d.involution.max(dev(a * a - &id));
            if let Some(b) = g.get(i + 1) {
                d.braid = d.braid.max(dev(a * b * a - b * a * b));
            }
            for b in g.iter().skip(i + 2) {
                d.commutation = d.commutation.max(dev(a * b - b * a));
            }
        }
        d
    }
}

/// Builds and verifies the orthogonal form of `S^μ`.
pub fn young_orthogonal_block(mu: &Partition) -> Result<IrrepBlock> {
    young_orthogonal_block_capped(mu, DEFAULT_BLOCK_CAP)
}

pub fn young_orthogonal_block_capped(mu: &Partition, cap: u64) -> Result<IrrepBlock> {
    let dim = irrep_dimension(mu);
    if dim > cap {
        return Err(Error::CapExceeded {
            what: "irrep dimension",
            value: dim as u128,
            cap: cap as u128,
        });
    }
    let basis = standard_tableaux(mu)?;
    let index: HashMap<Vec<usize>, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, t)| (t.reading_word(), i))
        .collect();
    let n = mu.n();
    let dim = basis.len();
    let mut generators = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        let mut m = DMatrix::zeros(dim, dim);
        for (i, t) in basis.iter().enumerate() {
            let (r1, c1) = t.find(k).expect("standard tableau holds every label");
            let (r2, c2) = t.find(k + 1).expect("standard tableau holds every label");
            let r = (c2 as f64 - r2 as f64) - (c1 as f64 - r1 as f64);
            m[(i, i)] = 1.0 / r;
            if r1 != r2 && c1 != c2 {
                let swapped: Vec<usize> = t
                    .reading_word()
                    .into_iter()
                    .map(|e| match e {
                        e if e == k => k + 1,
                        e if e == k + 1 => k,
                        e => e,
                    })
                    .collect();
                let j = index[&swapped];
                m[(i, j)] = (1.0 - 1.0 / (r * r)).sqrt();
            }
        }
        generators.push(m);
    }
    let block = IrrepBlock {
        shape: mu.clone(),
        basis,
        generators,
    };
    let defects = block.relation_defects();
    if defects.max() > RELATION_TOL {
        return Err(Error::Representation(format!(
            "orthogonal form of {mu} violates its relations: {defects:?}"
        )));
    }
    Ok(block)
}

/// Eigenvalues `d - λ` for `λ` in the spectrum of `Σ α_k ρ_μ(s_k)`,
/// labelled `μ`.
pub fn block_spectrum(mu: &Partition, w: &WeightSet) -> Result<SpectrumMultiset> {
    let block = young_orthogonal_block(mu)?;
    spectrum_of_block(&block, w)
}

pub fn spectrum_of_block(block: &IrrepBlock, w: &WeightSet) -> Result<SpectrumMultiset> {
    let d = w.total();
    let values = block.weighted_sum(w)?.symmetric_eigenvalues();
    let pairs = values.iter().map(|&l| (d - l, block.shape().clone())).collect();
    Ok(SpectrumMultiset::labeled(pairs, SPECTRUM_RTOL * w.scale()))
}

/// The symmetry classes present in `σ(V^ν)` with their multiplicities
/// `k_{μν}`, in reverse lexicographic order of `μ`.
pub fn symmetry_classes(nu: &Partition) -> Result<Vec<(Partition, u64)>> {
    let mut out = Vec::new();
    for mu in partitions_of(nu.n())? {
        if mu.dominates(nu)? {
            let k = kostka_number(&mu, nu)?;
            if k > 0 {
                out.push((mu, k));
            }
        }
    }
    Ok(out)
}

/// `σ(V^ν)` assembled from blocks: each `μ ⊵ ν` contributes its block
/// spectrum `k_{μν}` times.
pub fn mixture_spectrum_by_symmetry(nu: &Partition, w: &WeightSet) -> Result<SpectrumMultiset> {
    if w.n() != nu.n() {
        return Err(Error::SizeMismatch {
            left: nu.n(),
            right: w.n(),
        });
    }
    let classes = symmetry_classes(nu)?;
    let blocks: Vec<Result<SpectrumMultiset>> = classes
        .par_iter()
        .map(|(mu, _)| block_spectrum(mu, w))
        .collect();
    let mut pairs = Vec::new();
    for ((mu, k), spectrum) in classes.iter().zip(blocks) {
        let spectrum = spectrum?;
        for _ in 0..*k {
            pairs.extend(spectrum.values().iter().map(|&v| (v, mu.clone())));
        }
    }
    Ok(SpectrumMultiset::labeled(pairs, SPECTRUM_RTOL * w.scale()))
}

/// Symmetry class of an eigenvector, decided by which block spectra hold
/// its eigenvalue.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Unique(Partition),
    /// Several classes share the eigenvalue within tolerance.
    Ambiguous(Vec<Partition>),
}

impl Classification {
    pub fn unique(&self) -> Option<&Partition> {
        match self {
            Classification::Unique(mu) => Some(mu),
            Classification::Ambiguous(_) => None,
        }
    }

    pub fn candidates(&self) -> Vec<&Partition> {
        match self {
            Classification::Unique(mu) => vec![mu],
            Classification::Ambiguous(all) => all.iter().collect(),
        }
    }
}

/// Labels `vector` by the classes among `candidates` (default: every
/// `μ ⊵ ν` present in the graph) whose block spectrum contains its
/// Rayleigh quotient.
pub fn classify_eigenvector(
    g: &SchreierGraph,
    vector: &[f64],
    candidates: Option<&[Partition]>,
) -> Result<Classification> {
    let lap = g.laplacian();
    if vector.len() != lap.dim() {
        return Err(Error::DimensionMismatch {
            expected: lap.dim(),
            actual: vector.len(),
        });
    }
    let norm2: f64 = vector.iter().map(|x| x * x).sum();
    if norm2 == 0.0 {
        return Err(Error::Numerical("cannot classify the zero vector".into()));
    }
    let w = g.weights();
    let tol = SPECTRUM_RTOL * w.scale();
    let ax = lap.apply(vector);
    let value = ax.iter().zip(vector).map(|(a, b)| a * b).sum::<f64>() / norm2;
    let residual = ax
        .iter()
        .zip(vector)
        .map(|(a, b)| (a - value * b).powi(2))
        .sum::<f64>()
        .sqrt()
        / norm2.sqrt();
    if residual > 1e-8 * w.scale() {
        return Err(Error::Numerical(format!(
            "not an eigenvector: residual {residual:e}"
        )));
    }
    let shapes: Vec<Partition> = match candidates {
        Some(c) => c.to_vec(),
        None => symmetry_classes(g.mixture())?.into_iter().map(|(mu, _)| mu).collect(),
    };
    let mut hits = Vec::new();
    for mu in shapes {
        if block_spectrum(&mu, w)?.count_near(value, tol) > 0 {
            hits.push(mu);
        }
    }
    match hits.len() {
        0 => Err(Error::Unclassified(value)),
        1 => Ok(Classification::Unique(hits.pop().expect("one hit"))),
        _ => Ok(Classification::Ambiguous(hits)),
    }
}
