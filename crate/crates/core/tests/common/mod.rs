//! Instance generators shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use robinsonian::{Graph, SimilarityMatrix, Weight, WeakLinearOrder};

pub const APPENDIX: &str = include_str!("../data/appendix.txt");
pub const FIG1: &str = include_str!("../data/fig1.txt");

pub fn appendix() -> SimilarityMatrix {
    let options = robinsonian::LoadOptions {
        dissimilarity: true,
        ..Default::default()
    };
    robinsonian::load_matrix(APPENDIX, &options).unwrap()
}

pub fn fig1() -> SimilarityMatrix {
    robinsonian::load_matrix(FIG1, &Default::default()).unwrap()
}

/// Converts 1-based labels.
pub fn zero_based(labels: &[usize]) -> Vec<usize> {
    labels.iter().map(|&v| v - 1).collect()
}

/// A uniformly random symmetric matrix with entries in `0..=max`.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, max: Weight, density: f64) -> SimilarityMatrix {
    let mut entries = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if rng.gen_bool(density) {
                let w = rng.gen_range(1..=max);
                entries.push((x, y, w));
            }
        }
    }
    SimilarityMatrix::new(n, entries).unwrap()
}

/// A random Robinson matrix in the identity order: random entries pushed down
/// until every entry is at most its inner neighbors in its row and column.
pub fn random_robinson<R: Rng>(rng: &mut R, n: usize, max: Weight, density: f64) -> SimilarityMatrix {
    let mut a = vec![vec![0; n]; n];
    for gap in 1..n {
        for i in 0..n - gap {
            let k = i + gap;
            let mut w = if rng.gen_bool(density) {
                rng.gen_range(1..=max)
            } else {
                0
            };
            if gap > 1 {
                w = w.min(a[i][k - 1]).min(a[i + 1][k]);
            }
            a[i][k] = w;
        }
    }
    let mut entries = Vec::new();
    for (i, row) in a.iter().enumerate() {
        for (k, &w) in row.iter().enumerate().skip(i + 1) {
            if w > 0 {
                entries.push((i, k, w));
            }
        }
    }
    SimilarityMatrix::new(n, entries).unwrap()
}

pub fn shuffled<R: Rng>(rng: &mut R, matrix: &SimilarityMatrix) -> SimilarityMatrix {
    let mut order: Vec<usize> = (0..matrix.n()).collect();
    order.shuffle(rng);
    matrix.permuted(&order)
}

/// Rows at sorted random positions on a line; each row sees its `band`
/// nearest successors with a weight in `1..=levels` decreasing with distance.
pub fn line_matrix<R: Rng>(rng: &mut R, n: usize, band: usize, levels: Weight) -> SimilarityMatrix {
    let max_gap = 3u64;
    let mut position = Vec::with_capacity(n);
    let mut x = 0u64;
    for _ in 0..n {
        x += rng.gen_range(1..=max_gap);
        position.push(x);
    }
    let span = band as u64 * max_gap;
    let mut entries = Vec::with_capacity(n * band);
    for i in 0..n {
        for k in i + 1..(i + band + 1).min(n) {
            let d = position[k] - position[i];
            entries.push((i, k, levels - (d - 1) * levels / span));
        }
    }
    SimilarityMatrix::new(n, entries).unwrap()
}

/// The graph on `n` vertices whose edges are the set bits of `mask` over the
/// pairs `(x, y)`, `x < y`, in lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for x in 0..n {
        for y in x + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((x, y));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, edges)
}

pub fn binary_matrix(graph: &Graph) -> SimilarityMatrix {
    SimilarityMatrix::new(graph.vertex_count(), graph.edges().map(|(x, y)| (x, y, 1))).unwrap()
}

/// A random weak order of `0..n` with at most `max_blocks` blocks.
pub fn random_weak_order<R: Rng>(rng: &mut R, n: usize, max_blocks: usize) -> WeakLinearOrder {
    let mut vertices: Vec<usize> = (0..n).collect();
    vertices.shuffle(rng);
    let blocks = rng.gen_range(1..=max_blocks.min(n).max(1));
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); blocks];
    for (i, v) in vertices.into_iter().enumerate() {
        // Seed every block once, then scatter the rest.
        let b = if i < blocks { i } else { rng.gen_range(0..blocks) };
        parts[b].push(v);
    }
    parts.retain(|p| !p.is_empty());
    WeakLinearOrder::from_blocks(parts).unwrap()
}
