//! Unweighted simple graphs in compressed adjacency form.

use std::collections::HashMap;

use crate::Vertex;

/// An undirected simple graph on vertices `0..n`.
///
/// Neighbor lists are sorted ascending and never contain the vertex itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<Vertex>,
}

impl Graph {
    /// Builds a graph from an edge list. Self-loops and repeated edges are dropped.
    ///
    /// Panics if an endpoint is out of range.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut lists: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for (x, y) in edges {
            assert!(x < n && y < n, "edge ({x}, {y}) out of range for {n} vertices");
            if x != y {
                lists[x].push(y);
                lists[y].push(x);
            }
        }
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
        }
        Self::from_sorted_lists(lists)
    }

    pub(crate) fn from_sorted_lists(lists: Vec<Vec<Vertex>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let mut neighbors = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        for list in lists {
            neighbors.extend(list);
            offsets.push(neighbors.len());
        }
        Graph { offsets, neighbors }
    }

    pub fn edgeless(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, x: Vertex, y: Vertex) -> bool {
        self.neighbors(x).binary_search(&y).is_ok()
    }

    /// Edges `(x, y)` with `x < y`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.vertex_count()).flat_map(move |x| {
            self.neighbors(x)
                .iter()
                .copied()
                .filter(move |&y| x < y)
                .map(move |y| (x, y))
        })
    }

    /// Connected components, each sorted ascending, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || self.components().len() == 1
    }

    /// Induced subgraph on `subset`; vertex `i` of the result is `subset[i]`.
    pub fn induced(&self, subset: &VertexSubset) -> Graph {
        let index: HashMap<Vertex, usize> = subset
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let lists = subset
            .iter()
            .map(|&v| {
                let mut list: Vec<Vertex> = self
                    .neighbors(v)
                    .iter()
                    .filter_map(|w| index.get(w).copied())
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Graph::from_sorted_lists(lists)
    }
}

/// An ordered list of distinct vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSubset(Vec<Vertex>);

impl VertexSubset {
    /// Returns `None` if `vertices` has a duplicate.
    pub fn new(vertices: Vec<Vertex>) -> Option<Self> {
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(VertexSubset(vertices))
    }

    pub fn full(n: usize) -> Self {
        VertexSubset((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vertex> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }
}

impl std::ops::Deref for VertexSubset {
    type Target = [Vertex];

    fn deref(&self) -> &[Vertex] {
        &self.0
    }
}
