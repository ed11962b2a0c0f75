//! Physics-facing results: the strong-coupling ground state of a mixture,
//! its first-order energy, the ordering of symmetry classes by energy slope,
//! the coset-sign construction and the interchange-process random walk.

mod walk;

use rayon::prelude::*;
use serde::Serialize;

pub use walk::{interchange_walk, JumpCount, RateEstimate, WalkConfig, WalkStats};

use crate::combinatorics::{irrep_dimension, partitions_of};
use crate::graph::SchreierGraph;
use crate::irreps::{block_spectrum, classify_eigenvector, Classification};
use crate::snippets::SnippetSpace;
use crate::spectral::{extremal_eigenpair, full_eigensystem, LanczosConfig, Which, DEFAULT_DENSE_CAP, SPECTRUM_RTOL};
use crate::weights::WeightSet;
use crate::{Error, Partition, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    Dense,
    Lanczos,
}

/// The largest eigenpair of `V^ν`: the energy slope `K_max` of the ground
/// state, `E(1/g) = E_A - K_max/g + o(1/g)`, and its snippet amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContactReport {
    pub mixture: Partition,
    pub k_max: f64,
    pub symmetry: Classification,
    /// Unit norm, largest-magnitude entry positive.
    pub eigenvector: Vec<f64>,
    pub residual: f64,
    pub method: SolveMethod,
}

impl ContactReport {
    /// The unique symmetry class, if the eigenvalue is not shared.
    pub fn label(&self) -> Option<&Partition> {
        self.symmetry.unique()
    }

    /// `E(1/g) = E_A - K/g`, with `E_A` left symbolic.
    pub fn energy_formula(&self) -> String {
        format!("E(1/g) = E_A - {}/g", self.k_max)
    }
}

/// Ground state of the mixture `ν`: dense when `D_ν` fits the dense cap,
/// Lanczos otherwise.
pub fn ground_state(nu: &Partition, w: &WeightSet) -> Result<ContactReport> {
    let g = SchreierGraph::build(nu, w)?;
    ground_state_of(&g)
}

pub fn ground_state_of(g: &SchreierGraph) -> Result<ContactReport> {
    let n = g.vertex_count();
    let (k_max, mut vector, method) = if n <= DEFAULT_DENSE_CAP {
        let (spectrum, vecs) = full_eigensystem(g)?;
        let top = spectrum.max().expect("nonempty graph");
        (top, vecs.column(n - 1).iter().copied().collect::<Vec<_>>(), SolveMethod::Dense)
    } else {
        let pair = extremal_eigenpair(g, Which::Largest, &LanczosConfig::default())?;
        (pair.value, pair.vector, SolveMethod::Lanczos)
    };
    let pivot = vector
        .iter()
        .enumerate()
        .fold(0, |best, (i, x)| if x.abs() > vector[best].abs() { i } else { best });
    if vector[pivot] < 0.0 {
        vector.iter_mut().for_each(|x| *x = -*x);
    }
    let residual = residual(g, &vector, k_max);
    if residual > 1e-8 * g.weights().scale() {
        return Err(Error::Numerical(format!("ground state residual {residual:e}")));
    }
    let symmetry = classify_eigenvector(g, &vector, None)?;
    Ok(ContactReport {
        mixture: g.mixture().clone(),
        k_max,
        symmetry,
        eigenvector: vector,
        residual,
        method,
    })
}

/// `‖V x - K x‖`.
pub fn residual(g: &SchreierGraph, x: &[f64], k: f64) -> f64 {
    g.laplacian()
        .apply(x)
        .iter()
        .zip(x)
        .map(|(a, b)| (a - k * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// First-order strong-coupling energy `E_A - K/g`.
pub fn energy_at(report: &ContactReport, e_a: f64, g: f64) -> Result<f64> {
    if g.is_nan() || g <= 0.0 {
        return Err(Error::OutOfRange(format!("coupling g = {g} must be positive")));
    }
    Ok(e_a - report.k_max / g)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassRow {
    pub shape: Partition,
    pub dimension: u64,
    pub k_max: f64,
}

/// One pair of classes `(upper, lower)` with `upper` first in reverse
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub upper: Partition,
    pub lower: Partition,
    /// `upper ⊵ lower`.
    pub comparable: bool,
    /// `K_max[upper] - K_max[lower]`.
    pub difference: f64,
    /// For comparable pairs: does `K_max[upper] ≤ K_max[lower]` hold?
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiebMattisTable {
    pub n: usize,
    pub tolerance: f64,
    pub classes: Vec<ClassRow>,
    pub comparisons: Vec<Comparison>,
    pub violations: usize,
}

impl LiebMattisTable {
    pub fn comparable_pairs(&self) -> usize {
        self.comparisons.iter().filter(|c| c.comparable).count()
    }
}

/// `K_max` of every symmetry class of `n` particles, and a check that
/// `μ ⊵ μ'` implies `K_max[μ] ≤ K_max[μ']` on every comparable pair.
/// Incomparable pairs are listed with their numeric difference.
pub fn lieb_mattis_table(n: usize, w: &WeightSet) -> Result<LiebMattisTable> {
    if w.n() != n {
        return Err(Error::SizeMismatch { left: n, right: w.n() });
    }
    let shapes = partitions_of(n)?;
    let classes = shapes
        .par_iter()
        .map(|mu| {
            let k_max = block_spectrum(mu, w)?.max().expect("blocks are nonempty");
            Ok(ClassRow {
                shape: mu.clone(),
                dimension: irrep_dimension(mu),
                k_max,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tolerance = SPECTRUM_RTOL * w.scale();
    let mut comparisons = Vec::new();
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            let comparable = a.shape.dominates(&b.shape)?;
            let difference = a.k_max - b.k_max;
            comparisons.push(Comparison {
                upper: a.shape.clone(),
                lower: b.shape.clone(),
                comparable,
                difference,
                holds: comparable.then_some(difference <= tolerance),
            });
        }
    }
    let violations = comparisons.iter().filter(|c| c.holds == Some(false)).count();
    Ok(LiebMattisTable {
        n,
        tolerance,
        classes,
        comparisons,
        violations,
    })
}

/// `ã_i = sign(P_i)·|a_i|`: moves any vector onto the coset-sign pattern.
pub fn sign_flip_vector(space: &SnippetSpace, a: &[f64]) -> Result<Vec<f64>> {
    if a.len() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            actual: a.len(),
        });
    }
    Ok(a.iter()
        .zip(space.signs())
        .map(|(x, &s)| f64::from(s) * x.abs())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::spectral::full_spectrum;
    use crate::weights::{random_weights, uniform_weights};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn cayley_ground_state() {
        let w = random_weights(4, 12, (0.1, 10.0)).unwrap();
        let r = ground_state(&Partition::column(4).unwrap(), &w).unwrap();
        assert!((r.k_max - 2.0 * w.total()).abs() < 1e-9 * w.scale());
        assert_eq!(r.label(), Some(&Partition::column(4).unwrap()));
        assert_eq!(r.method, SolveMethod::Dense);
        let norm: f64 = r.eigenvector.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_component() {
        let w = uniform_weights(4, 1.0).unwrap();
        let r = ground_state(&Partition::row(4).unwrap(), &w).unwrap();
        assert_eq!(r.k_max, 0.0);
        assert_eq!(r.eigenvector, vec![1.0]);
        assert_eq!(r.label(), Some(&Partition::row(4).unwrap()));
    }

    #[test]
    fn two_two_matches_dense_max() {
        let w = uniform_weights(4, 1.0).unwrap();
        let r = ground_state(&p(&[2, 2]), &w).unwrap();
        let dense = full_spectrum(&build_graph(&p(&[2, 2]), &w).unwrap()).unwrap();
        assert!((r.k_max - dense.max().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn generic_label_is_the_mixture() {
        for nu in partitions_of(5).unwrap() {
            let w = random_weights(5, 77, (0.1, 10.0)).unwrap();
            let r = ground_state(&nu, &w).unwrap();
            assert_eq!(r.label(), Some(&nu), "{nu}");
        }
    }

    #[test]
    fn energies() {
        let w = uniform_weights(3, 1.0).unwrap();
        let r = ground_state(&Partition::column(3).unwrap(), &w).unwrap();
        assert!((energy_at(&r, 10.0, 2.0).unwrap() - 8.0).abs() < 1e-12);
        assert!((energy_at(&r, 10.0, 1e12).unwrap() - 10.0).abs() < 1e-10);
        assert!(energy_at(&r, 10.0, 0.0).is_err());
        assert!(energy_at(&r, 10.0, -1.0).is_err());
        let trivial = ground_state(&Partition::row(3).unwrap(), &w).unwrap();
        assert_eq!(energy_at(&trivial, 3.5, 0.7).unwrap(), 3.5);
        assert_eq!(trivial.energy_formula(), "E(1/g) = E_A - 0/g");
    }

    #[test]
    fn lieb_mattis_three() {
        let w = uniform_weights(3, 1.0).unwrap();
        let t = lieb_mattis_table(3, &w).unwrap();
        let k: Vec<f64> = t.classes.iter().map(|c| c.k_max).collect();
        assert!(k[0].abs() < 1e-14 && (k[1] - 3.0).abs() < 1e-14 && (k[2] - 4.0).abs() < 1e-14);
        assert_eq!(t.violations, 0);
        assert_eq!(t.comparable_pairs(), 3);
    }

    #[test]
    fn lieb_mattis_six_flags_incomparable() {
        let w = random_weights(6, 3, (0.1, 10.0)).unwrap();
        let t = lieb_mattis_table(6, &w).unwrap();
        assert_eq!(t.violations, 0);
        assert_eq!(t.classes.len(), 11);
        let pair = t
            .comparisons
            .iter()
            .find(|c| c.upper == p(&[4, 1, 1]) && c.lower == p(&[3, 3]))
            .unwrap();
        assert!(!pair.comparable);
        assert_eq!(pair.holds, None);
        assert!(t.classes[0].k_max.abs() < 1e-12 * w.scale());
        assert!((t.classes[10].k_max - 2.0 * w.total()).abs() < 1e-9 * w.scale());
    }

    #[test]
    fn sign_flip() {
        let w = random_weights(5, 5, (0.1, 10.0)).unwrap();
        let g = build_graph(&p(&[2, 2, 1]), &w).unwrap();
        let r = ground_state_of(&g).unwrap();
        let flipped = sign_flip_vector(g.space(), &r.eigenvector).unwrap();
        assert!(residual(&g, &flipped, r.k_max) < 1e-8 * w.scale());
        let n1: f64 = flipped.iter().map(|x| x * x).sum();
        assert!((n1 - 1.0).abs() < 1e-12);
        let ones = sign_flip_vector(g.space(), &vec![1.0; g.vertex_count()]).unwrap();
        let signs: Vec<f64> = g.space().signs().iter().map(|&s| f64::from(s)).collect();
        assert_eq!(ones, signs);
        assert!(sign_flip_vector(g.space(), &[1.0]).is_err());
    }
}
