//! Weighted Schreier graphs `X(𝔖_ν ⊂ 𝔖_N, S_C)` and their Laplacians.
//!
//! Vertices are the snippets of a mixture in lexicographic order; an edge
//! joins two snippets that differ by swapping positions `k, k+1` holding
//! different components, and carries weight `α_k`. The Laplacian of this
//! graph is the exchange matrix `V^ν`.

mod export;
mod sparse;

use std::collections::{HashSet, VecDeque};

pub use export::{export_graph, ExportFormat, ExportedEdge, ExportedGraph};
pub use sparse::SparseSym;

use crate::snippets::{word_letters, SnippetSpace, DEFAULT_SNIPPET_CAP};
use crate::{Error, Partition, Result, WeightSet};

/// Cap on the vertex count of a Cartesian product.
pub const DEFAULT_PRODUCT_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// A finite undirected graph with positive edge weights and its Laplacian.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    laplacian: SparseSym,
}

impl WeightedGraph {
    pub fn new(labels: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let n = labels.len();
        let mut seen = HashSet::new();
        for e in &edges {
            if e.u >= n || e.v >= n || e.u == e.v {
                return Err(Error::OutOfRange(format!("edge ({}, {}) on {n} vertices", e.u, e.v)));
            }
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(Error::InvalidWeights(format!("edge weight {}", e.weight)));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(Error::OutOfRange(format!("multi-edge ({}, {})", e.u, e.v)));
            }
        }
        let laplacian = SparseSym::laplacian(n, edges.iter().map(|e| (e.u, e.v, e.weight)));
        Ok(WeightedGraph {
            labels,
            edges,
            laplacian,
        })
    }

    /// Path graph on `weights.len() + 1` vertices with bond `i` weighted
    /// `weights[i]`.
    pub fn path(weights: &[f64]) -> Result<Self> {
        let labels = (0..=weights.len()).map(|i| i.to_string()).collect();
        let edges = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| Edge { u: i, v: i + 1, weight: w })
            .collect();
        WeightedGraph::new(labels, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn laplacian(&self) -> &SparseSym {
        &self.laplacian
    }

    /// Weighted degree of every vertex.
    pub fn degrees(&self) -> Vec<f64> {
        self.laplacian.diagonal()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    /// BFS 2-colouring; `None` when an odd cycle exists.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let adj = self.adjacency();
        let mut color = vec![u8::MAX; self.vertex_count()];
        for start in 0..self.vertex_count() {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn component_count(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count()];
        let mut count = 0;
        for start in 0..self.vertex_count() {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let degrees = self.degrees();
        let scale = degrees.iter().fold(1.0f64, |m, d| m.max(d.abs()));
        let tol = 1e-12 * scale;
        fn all_equal(mut ds: impl Iterator<Item = f64>, tol: f64) -> bool {
            match ds.next() {
                None => true,
                Some(first) => ds.all(|d| (d - first).abs() <= tol),
            }
        }
        let regular = all_equal(degrees.iter().copied(), tol);
        let biregular = self.two_coloring().is_some_and(|color| {
            (0..2).all(|side| {
                all_equal(degrees.iter().zip(&color).filter(|(_, &c)| c == side).map(|(d, _)| *d), tol)
            })
        });
        let max_edge_degree_sum = self
            .edges
            .iter()
            .map(|e| degrees[e.u] + degrees[e.v])
            .fold(0.0, f64::max);
        DegreeProfile {
            degrees,
            regular,
            biregular,
            max_edge_degree_sum,
        }
    }
}

/// Weighted degrees and the regularity flags built from them.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeProfile {
    pub degrees: Vec<f64>,
    pub regular: bool,
    /// Bipartite with constant degree on each side.
    pub biregular: bool,
    /// `max deg(u) + deg(v)` over edges, an upper bound on `λ_max`.
    pub max_edge_degree_sum: f64,
}

/// The two sides of a bipartite Schreier graph, split by coset sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
}

/// `X(𝔖_ν ⊂ 𝔖_N, S_C)` with weights `α_k` on the generator `(k, k+1)`.
#[derive(Clone, Debug)]
pub struct SchreierGraph {
    space: SnippetSpace,
    weights: WeightSet,
    generators: Vec<usize>,
    graph: WeightedGraph,
}

impl SchreierGraph {
    pub fn build(mixture: &Partition, weights: &WeightSet) -> Result<Self> {
        Self::build_capped(mixture, weights, DEFAULT_SNIPPET_CAP)
    }

    pub fn build_capped(mixture: &Partition, weights: &WeightSet, cap: u128) -> Result<Self> {
        if weights.n() != mixture.n() {
            return Err(Error::DimensionMismatch {
                expected: mixture.n(),
                actual: weights.n(),
            });
        }
        let space = SnippetSpace::enumerate_capped(mixture, cap)?;
        Ok(Self::from_space(space, weights.clone()))
    }

    fn from_space(space: SnippetSpace, weights: WeightSet) -> Self {
        let n = space.n();
        let mut edges = Vec::new();
        let mut generators = Vec::new();
        for i in 0..space.len() {
            for k in 1..n {
                if let Some(j) = space.neighbour(i, k) {
                    if i < j {
                        edges.push(Edge {
                            u: i,
                            v: j,
                            weight: weights.alpha(k),
                        });
                        generators.push(k);
                    }
                }
            }
        }
        let labels = space.words().iter().map(|w| word_letters(w)).collect();
        // distinct generators always reach distinct neighbours
        let graph = WeightedGraph::new(labels, edges).expect("Schreier graphs have no multi-edges");
        SchreierGraph {
            space,
            weights,
            generators,
            graph,
        }
    }

    pub fn space(&self) -> &SnippetSpace {
        &self.space
    }

    pub fn mixture(&self) -> &Partition {
        self.space.mixture()
    }

    pub fn weights(&self) -> &WeightSet {
        &self.weights
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn laplacian(&self) -> &SparseSym {
        self.graph.laplacian()
    }

    pub fn vertex_count(&self) -> usize {
        self.space.len()
    }

    /// Edges as `(u, v, k)` with `k` the generator index `1..=N-1`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.graph.edges().iter().zip(&self.generators).map(|(e, &k)| (e.u, e.v, k))
    }

    pub fn edge_count(&self) -> usize {
        self.generators.len()
    }

    /// `d = Σ α_k`.
    pub fn total_weight(&self) -> f64 {
        self.weights.total()
    }

    /// Splits the vertices by coset sign after confirming, by an independent
    /// BFS colouring, that every edge joins opposite signs.
    pub fn bipartition(&self) -> Option<Bipartition> {
        let color = self.graph.two_coloring()?;
        let signs = self.space.signs();
        let agrees = self
            .graph
            .edges()
            .iter()
            .all(|e| signs[e.u] != signs[e.v] && color[e.u] != color[e.v]);
        if !agrees {
            return None;
        }
        let (positive, negative): (Vec<usize>, Vec<usize>) =
            (0..self.vertex_count()).partition(|&i| signs[i] > 0);
        Some(Bipartition { positive, negative })
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        self.graph.degree_profile()
    }
}

pub fn build_graph(mixture: &Partition, weights: &WeightSet) -> Result<SchreierGraph> {
    SchreierGraph::build(mixture, weights)
}

/// Cartesian product `G₁ □ G₂`: `(a, b) ~ (a', b)` when `a ~ a'` in `G₁`,
/// and `(a, b) ~ (a, b')` when `b ~ b'` in `G₂`, with the factor's weight.
/// Vertex `(a, b)` gets index `a · |G₂| + b`.
pub fn cartesian_product(g1: &WeightedGraph, g2: &WeightedGraph) -> Result<WeightedGraph> {
    cartesian_product_capped(g1, g2, DEFAULT_PRODUCT_CAP)
}

pub fn cartesian_product_capped(g1: &WeightedGraph, g2: &WeightedGraph, cap: usize) -> Result<WeightedGraph> {
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    let total = n1.checked_mul(n2).filter(|&t| t <= cap).ok_or(Error::CapExceeded {
        what: "product vertex count",
        value: n1 as u128 * n2 as u128,
        cap: cap as u128,
    })?;
    let mut labels = Vec::with_capacity(total);
    for a in g1.labels() {
        for b in g2.labels() {
            labels.push(format!("({a},{b})"));
        }
    }
    let mut edges = Vec::with_capacity(g1.edges().len() * n2 + g2.edges().len() * n1);
    for e in g1.edges() {
        for b in 0..n2 {
            edges.push(Edge {
                u: e.u * n2 + b,
                v: e.v * n2 + b,
                weight: e.weight,
            });
        }
    }
    for e in g2.edges() {
        for a in 0..n1 {
            edges.push(Edge {
                u: a * n2 + e.u,
                v: a * n2 + e.v,
                weight: e.weight,
            });
        }
    }
    WeightedGraph::new(labels, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::partitions_of;
    use crate::weights::{random_weights, uniform_weights};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Adjacency by comparing every pair of words: neighbours differ in
    /// exactly two consecutive positions holding swapped letters.
    fn brute_edges(space: &SnippetSpace) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 0..space.len() {
            for j in i + 1..space.len() {
                let (a, b) = (space.word(i), space.word(j));
                let diff: Vec<usize> = (0..a.len()).filter(|&t| a[t] != b[t]).collect();
                if diff.len() == 2 && diff[1] == diff[0] + 1 && a[diff[0]] == b[diff[1]] && a[diff[1]] == b[diff[0]] {
                    out.push((i, j, diff[0] + 1));
                }
            }
        }
        out
    }

    #[test]
    fn two_two_graph_matches_brute_force_adjacency() {
        let w = WeightSet::explicit(vec![1.0, 2.0, 3.0]).unwrap();
        let g = build_graph(&p(&[2, 2]), &w).unwrap();
        assert_eq!(g.vertex_count(), 6);
        let mut edges: Vec<_> = g.edges().collect();
        edges.sort();
        assert_eq!(edges, brute_edges(g.space()));
        assert_eq!(g.edge_count(), 6);
        let abab = g.space().position(&[1, 2, 1, 2]).unwrap();
        assert_eq!(g.laplacian().get(abab, abab), 6.0);
        let baab = g.space().position(&[2, 1, 1, 2]).unwrap();
        let abba = g.space().position(&[1, 2, 2, 1]).unwrap();
        let aabb = g.space().position(&[1, 1, 2, 2]).unwrap();
        assert_eq!(g.laplacian().get(abab, baab), -1.0);
        assert_eq!(g.laplacian().get(abab, aabb), -2.0);
        assert_eq!(g.laplacian().get(abab, abba), -3.0);
    }

    #[test]
    fn edges_match_brute_force_for_all_small_mixtures() {
        for n in 2..=6 {
            for nu in partitions_of(n).unwrap() {
                let w = random_weights(n, n as u64, (0.1, 10.0)).unwrap();
                let g = build_graph(&nu, &w).unwrap();
                let mut edges: Vec<_> = g.edges().collect();
                edges.sort();
                assert_eq!(edges, brute_edges(g.space()), "{nu}");
                let lap = g.laplacian();
                assert!(lap.is_symmetric());
                assert!(lap.max_row_sum() <= 1e-12 * w.scale());
                for (u, v, k) in g.edges() {
                    assert_eq!(lap.get(u, v), -w.alpha(k));
                }
                assert_eq!(g.graph().component_count(), 1);
            }
        }
    }

    #[test]
    fn single_component_mixture() {
        let g = build_graph(&p(&[4]), &uniform_weights(4, 1.0).unwrap()).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.laplacian().get(0, 0), 0.0);
        assert!(g.is_bipartite());
    }

    #[test]
    fn hook_mixture_is_the_weighted_path() {
        let n = 6;
        let w = random_weights(n, 3, (0.1, 10.0)).unwrap();
        let g = build_graph(&p(&[n - 1, 1]), &w).unwrap();
        // order vertices by the position of the lone `b`
        let pos: Vec<usize> = (0..n)
            .map(|i| g.space().word(i).iter().position(|&c| c == 2).unwrap())
            .collect();
        let lap = g.laplacian();
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (pos[i], pos[j]);
                let want = if a == b {
                    (if a > 0 { w.alphas()[a - 1] } else { 0.0 }) + (if a + 1 < n { w.alphas()[a] } else { 0.0 })
                } else if a.abs_diff(b) == 1 {
                    -w.alphas()[a.min(b)]
                } else {
                    0.0
                };
                assert_eq!(lap.get(i, j), want);
            }
        }
    }

    #[test]
    fn bipartitions() {
        let w = uniform_weights(4, 1.0).unwrap();
        let g = build_graph(&p(&[2, 2]), &w).unwrap();
        let parts = g.bipartition().unwrap();
        // aabb, abba, baab, bbaa against abab, baba
        assert_eq!((parts.positive.len(), parts.negative.len()), (4, 2));
        let g5 = build_graph(&p(&[1, 1, 1, 1, 1]), &uniform_weights(5, 1.0).unwrap()).unwrap();
        let parts = g5.bipartition().unwrap();
        assert_eq!((parts.positive.len(), parts.negative.len()), (60, 60));
        for n in 2..=6 {
            for nu in partitions_of(n).unwrap() {
                let g = build_graph(&nu, &uniform_weights(n, 1.0).unwrap()).unwrap();
                assert!(g.is_bipartite(), "{nu}");
            }
        }
        let triangle = WeightedGraph::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![
                Edge { u: 0, v: 1, weight: 1.0 },
                Edge { u: 1, v: 2, weight: 1.0 },
                Edge { u: 0, v: 2, weight: 1.0 },
            ],
        )
        .unwrap();
        assert!(triangle.two_coloring().is_none());
    }

    #[test]
    fn degree_profiles() {
        let w = random_weights(5, 11, (0.1, 10.0)).unwrap();
        let cayley = build_graph(&Partition::column(5).unwrap(), &w).unwrap();
        let prof = cayley.degree_profile();
        assert!(prof.regular);
        assert!(prof.biregular);
        for d in &prof.degrees {
            assert!((d - w.total()).abs() <= 1e-12 * w.total());
        }

        let path = build_graph(&p(&[4, 1]), &uniform_weights(5, 1.0).unwrap()).unwrap();
        let prof = path.degree_profile();
        let mut degs = prof.degrees.clone();
        degs.sort_by(f64::total_cmp);
        assert_eq!(degs, vec![1.0, 1.0, 2.0, 2.0, 2.0]);
        assert!(!prof.regular);
        assert!(!prof.biregular);

        // (2,2) uniform: degree = number of admissible swaps, counted directly
        let g = build_graph(&p(&[2, 2]), &uniform_weights(4, 1.0).unwrap()).unwrap();
        let prof = g.degree_profile();
        for i in 0..g.vertex_count() {
            let w = g.space().word(i);
            let swaps = (0..3).filter(|&t| w[t] != w[t + 1]).count();
            assert_eq!(prof.degrees[i], swaps as f64);
        }
    }

    #[test]
    fn fig_two_vertex_census() {
        let w = uniform_weights(5, 1.0).unwrap();
        let counts: Vec<usize> = [[4, 1].as_slice(), &[3, 2], &[3, 1, 1], &[2, 2, 1], &[2, 1, 1, 1], &[1, 1, 1, 1, 1]]
            .iter()
            .map(|parts| build_graph(&p(parts), &w).unwrap().vertex_count())
            .collect();
        assert_eq!(counts, vec![5, 10, 20, 30, 60, 120]);
    }

    #[test]
    fn product_structure() {
        let edge = WeightedGraph::path(&[1.0]).unwrap();
        let square = cartesian_product(&edge, &edge).unwrap();
        assert_eq!(square.vertex_count(), 4);
        assert_eq!(square.edges().len(), 4);
        assert!(square.degree_profile().regular);
        assert_eq!(square.component_count(), 1);

        let point = WeightedGraph::new(vec!["*".into()], vec![]).unwrap();
        let g = WeightedGraph::path(&[0.5, 2.0, 1.5]).unwrap();
        let same = cartesian_product(&g, &point).unwrap();
        assert_eq!(same.laplacian(), g.laplacian());

        assert!(cartesian_product_capped(&g, &g, 10).is_err());
    }

    #[test]
    fn mismatched_weights_rejected() {
        let w = uniform_weights(4, 1.0).unwrap();
        assert!(build_graph(&p(&[2, 1]), &w).is_err());
    }
}
