//! Sparse symmetric nonnegative matrices stored as weighted edge lists.
//!
//! Only strictly positive off-diagonal entries are kept; absent pairs read
//! as zero and the diagonal is never stored.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{Graph, VertexSubset};
use crate::{Vertex, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("vertex {vertex} out of range for a {n}x{n} matrix")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("diagonal entry ({0}, {0}) cannot be stored")]
    SelfLoop(Vertex),
    #[error("entry ({0}, {1}) has zero weight")]
    ZeroWeight(Vertex, Vertex),
    #[error("pair ({0}, {1}) listed twice")]
    DuplicatePair(Vertex, Vertex),
    #[error("matrix has no nonzero off-diagonal entries")]
    NoEdges,
}

/// A symmetric nonnegative matrix on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityMatrix {
    n: usize,
    /// `(x, y, w)` with `x < y`, sorted by `(x, y)`.
    edges: Vec<(Vertex, Vertex, Weight)>,
    offsets: Vec<usize>,
    adjacency: Vec<(Vertex, Weight)>,
}

impl SimilarityMatrix {
    /// Builds a matrix from `(x, y, w)` triples. Orientation of a pair does not
    /// matter but each unordered pair may appear only once.
    pub fn new<I>(n: usize, entries: I) -> Result<Self, MatrixError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Weight)>,
    {
        let mut edges = Vec::new();
        for (x, y, w) in entries {
            for v in [x, y] {
                if v >= n {
                    return Err(MatrixError::VertexOutOfRange { vertex: v, n });
                }
            }
            if x == y {
                return Err(MatrixError::SelfLoop(x));
            }
            if w == 0 {
                return Err(MatrixError::ZeroWeight(x, y));
            }
            edges.push((x.min(y), x.max(y), w));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(MatrixError::DuplicatePair(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_edges(n, edges))
    }

    /// `edges` must already be normalized (`x < y`, sorted, unique, positive).
    pub(crate) fn from_sorted_edges(n: usize, edges: Vec<(Vertex, Vertex, Weight)>) -> Self {
        let mut degree = vec![0usize; n + 1];
        for &(x, y, _) in &edges {
            degree[x + 1] += 1;
            degree[y + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut adjacency = vec![(0, 0); 2 * edges.len()];
        // Scanning edges in (x, y) order leaves every list sorted by neighbor.
        for &(x, y, w) in &edges {
            adjacency[fill[y]] = (x, w);
            fill[y] += 1;
        }
        for &(x, y, w) in &edges {
            adjacency[fill[x]] = (y, w);
            fill[x] += 1;
        }
        SimilarityMatrix {
            n,
            edges,
            offsets,
            adjacency,
        }
    }

    /// Normalizes arbitrary `(x, y, w)` triples over `0..n` (no loops, no
    /// repeated pairs) with two counting-sort passes, in `O(n + m)`.
    pub(crate) fn from_unsorted_edges(n: usize, edges: Vec<(Vertex, Vertex, Weight)>) -> Self {
        let edges: Vec<_> = edges.into_iter().map(|(x, y, w)| (x.min(y), x.max(y), w)).collect();
        let by_y = counting_sort(n, edges, |e| e.1);
        let sorted = counting_sort(n, by_y, |e| e.0);
        Self::from_sorted_edges(n, sorted)
    }

    pub fn edgeless(n: usize) -> Self {
        Self::from_sorted_edges(n, Vec::new())
    }

    /// Builds a matrix from a dense row-major table, ignoring the diagonal and
    /// reading only the upper triangle.
    pub fn from_dense(rows: &[Vec<Weight>]) -> Self {
        let n = rows.len();
        let mut edges = Vec::new();
        for (x, row) in rows.iter().enumerate() {
            for (y, &w) in row.iter().enumerate().skip(x + 1) {
                if w > 0 {
                    edges.push((x, y, w));
                }
            }
        }
        Self::from_sorted_edges(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored (upper-triangular) nonzero entries.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex, Weight)] {
        &self.edges
    }

    /// Neighbors of `v` with their weights, sorted by neighbor.
    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, Weight)] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Entry `A[x][y]`; zero for absent pairs and for the diagonal.
    pub fn weight(&self, x: Vertex, y: Vertex) -> Weight {
        let list = self.neighbors(x);
        match list.binary_search_by_key(&y, |&(v, _)| v) {
            Ok(i) => list[i].1,
            Err(_) => 0,
        }
    }

    pub fn support(&self) -> Graph {
        self.level_graph(1)
    }

    /// Graph of the pairs whose entry is at least `threshold` (`threshold > 0`).
    pub fn level_graph(&self, threshold: Weight) -> Graph {
        let threshold = threshold.max(1);
        let lists = (0..self.n)
            .map(|v| {
                self.neighbors(v)
                    .iter()
                    .filter(|&&(_, w)| w >= threshold)
                    .map(|&(u, _)| u)
                    .collect()
            })
            .collect();
        Graph::from_sorted_lists(lists)
    }

    /// Distinct stored weights in increasing order.
    pub fn distinct_weights(&self) -> Vec<Weight> {
        let mut ws: Vec<Weight> = self.edges.iter().map(|e| e.2).collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    }

    pub fn distinct_weight_count(&self) -> usize {
        self.distinct_weights().len()
    }

    pub fn min_weight(&self) -> Option<Weight> {
        self.edges.iter().map(|e| e.2).min()
    }

    /// Principal submatrix on `subset`. Vertex `i` of the result is `subset[i]`
    /// of `self`, which the returned label map records.
    pub fn restrict(&self, subset: &VertexSubset) -> Submatrix {
        let index: HashMap<Vertex, usize> = subset
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut edges = Vec::new();
        for &v in subset.iter() {
            let i = index[&v];
            for &(u, w) in self.neighbors(v) {
                if let Some(&j) = index.get(&u) {
                    if i < j {
                        edges.push((i, j, w));
                    }
                }
            }
        }
        edges.sort_unstable();
        Submatrix {
            matrix: Self::from_sorted_edges(subset.len(), edges),
            labels: subset.as_slice().to_vec(),
        }
    }

    /// Drops every entry equal to the smallest stored weight.
    pub fn strip_min(&self) -> Result<(SimilarityMatrix, Weight), MatrixError> {
        let a_min = self.min_weight().ok_or(MatrixError::NoEdges)?;
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(_, _, w)| w > a_min)
            .collect();
        Ok((Self::from_sorted_edges(self.n, edges), a_min))
    }

    /// `A_pi`: entry `(i, j)` of the result is `A[pi[i]][pi[j]]`.
    ///
    /// Panics unless `order` is a permutation of `0..n`.
    pub fn permuted(&self, order: &[Vertex]) -> SimilarityMatrix {
        assert_eq!(order.len(), self.n);
        let mut position = vec![usize::MAX; self.n];
        for (i, &v) in order.iter().enumerate() {
            assert!(position[v] == usize::MAX, "not a permutation");
            position[v] = i;
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(x, y, w)| {
                let (a, b) = (position[x], position[y]);
                (a.min(b), a.max(b), w)
            })
            .collect();
        edges.sort_unstable();
        Self::from_sorted_edges(self.n, edges)
    }
}

/// Stable counting sort of `items` by a key in `0..n`.
fn counting_sort<T: Copy>(n: usize, items: Vec<T>, key: impl Fn(&T) -> usize) -> Vec<T> {
    let mut start = vec![0usize; n + 1];
    for item in &items {
        start[key(item) + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let mut out: Vec<Option<T>> = vec![None; items.len()];
    for item in items {
        let k = key(&item);
        out[start[k]] = Some(item);
        start[k] += 1;
    }
    out.into_iter().map(|x| x.expect("every slot filled")).collect()
}

/// A principal submatrix together with the labels of its rows in the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submatrix {
    pub matrix: SimilarityMatrix,
    pub labels: Vec<Vertex>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> SimilarityMatrix {
        SimilarityMatrix::new(3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)]).unwrap()
    }

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let a = SimilarityMatrix::new(4, [(2, 0, 5), (0, 1, 1), (3, 1, 2)]).unwrap();
        assert_eq!(a.neighbors(0), &[(1, 1), (2, 5)]);
        assert_eq!(a.neighbors(1), &[(0, 1), (3, 2)]);
        for &(x, y, w) in a.edges() {
            assert_eq!(a.weight(x, y), w);
            assert_eq!(a.weight(y, x), w);
        }
        assert_eq!(a.weight(2, 3), 0);
        assert_eq!(a.weight(1, 1), 0);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            SimilarityMatrix::new(2, [(0, 0, 1)]),
            Err(MatrixError::SelfLoop(0))
        );
        assert_eq!(
            SimilarityMatrix::new(2, [(0, 1, 0)]),
            Err(MatrixError::ZeroWeight(0, 1))
        );
        assert_eq!(
            SimilarityMatrix::new(2, [(0, 1, 1), (1, 0, 2)]),
            Err(MatrixError::DuplicatePair(0, 1))
        );
        assert!(matches!(
            SimilarityMatrix::new(2, [(0, 2, 1)]),
            Err(MatrixError::VertexOutOfRange { vertex: 2, .. })
        ));
    }

    #[test]
    fn uniform_matrix_has_all_edges() {
        let a = SimilarityMatrix::from_dense(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(a.edge_count(), 3);
        assert!(a.edges().iter().all(|e| e.2 == 1));
        assert_eq!(a.distinct_weight_count(), 1);
    }

    #[test]
    fn support_of_edgeless_and_triangle() {
        assert_eq!(SimilarityMatrix::edgeless(4).support(), Graph::edgeless(4));
        let g = triangle().support();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(SimilarityMatrix::edgeless(0).distinct_weight_count(), 0);
    }

    #[test]
    fn strip_min_on_triangle_leaves_path() {
        let (stripped, a_min) = triangle().strip_min().unwrap();
        assert_eq!(a_min, 1);
        assert_eq!(stripped.edges(), &[(0, 2, 3), (1, 2, 2)]);
        assert_eq!(stripped.distinct_weights(), vec![2, 3]);
    }

    #[test]
    fn strip_min_single_weight_is_edgeless() {
        let a = SimilarityMatrix::new(3, [(0, 1, 4), (1, 2, 4)]).unwrap();
        let (stripped, a_min) = a.strip_min().unwrap();
        assert_eq!(a_min, 4);
        assert_eq!(stripped.edge_count(), 0);
        assert_eq!(
            SimilarityMatrix::edgeless(2).strip_min(),
            Err(MatrixError::NoEdges)
        );
    }

    #[test]
    fn restrict_identity_singleton_and_labels() {
        let a = triangle();
        let full = a.restrict(&VertexSubset::full(3));
        assert_eq!(full.matrix, a);
        let one = a.restrict(&VertexSubset::new(vec![1]).unwrap());
        assert_eq!(one.matrix.n(), 1);
        assert_eq!(one.matrix.edge_count(), 0);
        let sub = a.restrict(&VertexSubset::new(vec![2, 0]).unwrap());
        assert_eq!(sub.labels, vec![2, 0]);
        assert_eq!(sub.matrix.weight(0, 1), 3);
    }

    #[test]
    fn unsorted_edges_are_normalized() {
        let a = SimilarityMatrix::from_unsorted_edges(4, vec![(3, 1, 2), (2, 0, 5), (0, 1, 1)]);
        assert_eq!(a, SimilarityMatrix::new(4, [(0, 1, 1), (0, 2, 5), (1, 3, 2)]).unwrap());
    }

    #[test]
    fn permuted_moves_entries() {
        let a = triangle();
        let p = a.permuted(&[2, 0, 1]);
        assert_eq!(p.weight(0, 1), a.weight(2, 0));
        assert_eq!(p.weight(1, 2), a.weight(0, 1));
        assert_eq!(p.weight(0, 2), a.weight(2, 1));
    }
}
