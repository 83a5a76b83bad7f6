//! Brute-force ground truth for small instances.
//!
//! Nothing here is used by the recognizer itself.

use std::cell::Cell;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::Graph;
use crate::matrix::SimilarityMatrix;
use crate::order::WeakLinearOrder;
use crate::straight_enum::blocks_of;
use crate::{Vertex, Weight};

/// Default bound on `n` for exhaustive searches.
pub const DEFAULT_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("not a permutation of the {n} rows")]
    BadPermutation { n: usize },
    #[error("{n} vertices exceed the brute-force cap of {cap}")]
    TooLarge { n: usize, cap: usize },
}

/// Distinct linear orders, sorted.
pub type PermutationSet = BTreeSet<Vec<Vertex>>;

fn dense(matrix: &SimilarityMatrix) -> Vec<Vec<Weight>> {
    let n = matrix.n();
    let mut rows = vec![vec![0; n]; n];
    for &(x, y, w) in matrix.edges() {
        rows[x][y] = w;
        rows[y][x] = w;
    }
    rows
}

fn check_permutation(n: usize, pi: &[Vertex]) -> Result<(), OracleError> {
    let mut seen = vec![false; n];
    if pi.len() != n || pi.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(OracleError::BadPermutation { n });
    }
    Ok(())
}

/// Whether `A[pi[i]][pi[k]] <= min(A[pi[i]][pi[j]], A[pi[j]][pi[k]])` for all
/// `i < j < k`. The identity is used when `pi` is `None`. Cubic in `n`.
pub fn is_robinson(matrix: &SimilarityMatrix, pi: Option<&[Vertex]>) -> Result<bool, OracleError> {
    let n = matrix.n();
    let identity: Vec<Vertex>;
    let pi = match pi {
        Some(pi) => {
            check_permutation(n, pi)?;
            pi
        }
        None => {
            identity = (0..n).collect();
            &identity
        }
    };
    let a = dense(matrix);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (x, y, z) = (pi[i], pi[j], pi[k]);
                if a[x][z] > a[x][y].min(a[y][z]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Same answer as [`is_robinson`] in `O(n + m log m)`, for matrices too large
/// for the cubic check: every row must hold a nonincreasing run of nonzero
/// entries on each side of the diagonal, starting right next to it.
pub fn is_robinson_sparse(matrix: &SimilarityMatrix, pi: &[Vertex]) -> Result<bool, OracleError> {
    let n = matrix.n();
    check_permutation(n, pi)?;
    let mut position = vec![0; n];
    for (i, &v) in pi.iter().enumerate() {
        position[v] = i;
    }
    let mut right: Vec<(usize, Weight)> = Vec::new();
    let mut left: Vec<(usize, Weight)> = Vec::new();
    for v in 0..n {
        let p = position[v];
        right.clear();
        left.clear();
        for &(u, w) in matrix.neighbors(v) {
            let q = position[u];
            if q > p {
                right.push((q - p, w));
            } else {
                left.push((p - q, w));
            }
        }
        for side in [&mut right, &mut left] {
            side.sort_unstable();
            let mut last = Weight::MAX;
            for (expected, &(distance, w)) in side.iter().enumerate() {
                if distance != expected + 1 || w > last {
                    return Ok(false);
                }
                last = w;
            }
        }
    }
    Ok(true)
}

/// Every order of the rows making `matrix` Robinson, by exhaustive search
/// over prefixes (a prefix is extended only while it satisfies the
/// condition on its own triples).
pub fn brute_force(matrix: &SimilarityMatrix, cap: usize) -> Result<PermutationSet, OracleError> {
    let n = matrix.n();
    if n > cap {
        return Err(OracleError::TooLarge { n, cap });
    }
    let a = dense(matrix);
    let mut found = PermutationSet::new();
    let mut prefix = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(&mut prefix, &mut used, &mut |prefix: &[Vertex]| {
        let &z = prefix.last().unwrap();
        let p = prefix.len() - 1;
        (0..p).all(|i| (i + 1..p).all(|j| a[prefix[i]][z] <= a[prefix[i]][prefix[j]].min(a[prefix[j]][z])))
    }, &mut |order| {
        found.insert(order.to_vec());
    });
    Ok(found)
}

/// Depth-first enumeration of all orders whose every prefix is accepted by
/// `accept` (called on each prefix after its last element is added).
fn extend(
    prefix: &mut Vec<Vertex>,
    used: &mut [bool],
    accept: &mut dyn FnMut(&[Vertex]) -> bool,
    emit: &mut dyn FnMut(&[Vertex]),
) {
    if prefix.len() == used.len() {
        emit(prefix);
        return;
    }
    for v in 0..used.len() {
        if used[v] {
            continue;
        }
        prefix.push(v);
        if accept(prefix) {
            used[v] = true;
            extend(prefix, used, accept, emit);
            used[v] = false;
        }
        prefix.pop();
    }
}

/// Whether some order of the vertices has `x < y < z` and `xz` an edge imply
/// that `xy` and `yz` are edges.
pub fn is_unit_interval_bf(graph: &Graph, cap: usize) -> Result<bool, OracleError> {
    let n = graph.vertex_count();
    if n > cap {
        return Err(OracleError::TooLarge { n, cap });
    }
    let mut adjacent = vec![vec![false; n]; n];
    for (x, y) in graph.edges() {
        adjacent[x][y] = true;
        adjacent[y][x] = true;
    }
    let any = Cell::new(false);
    let mut prefix = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(&mut prefix, &mut used, &mut |prefix: &[Vertex]| {
        // Once an order is found, refuse everything to end the search early.
        if any.get() {
            return false;
        }
        let &z = prefix.last().unwrap();
        let p = prefix.len() - 1;
        (0..p).all(|i| {
            !adjacent[prefix[i]][z] || (i + 1..p).all(|j| adjacent[prefix[i]][prefix[j]] && adjacent[prefix[j]][z])
        })
    }, &mut |_| any.set(true));
    Ok(any.get())
}

/// Whether `phi` is a straight enumeration of `graph`: its blocks are exactly
/// the classes of equal closed neighborhoods, and for every block, the blocks
/// it is adjacent to together with itself form a run of consecutive blocks.
pub fn is_straight_enumeration(graph: &Graph, phi: &WeakLinearOrder) -> bool {
    let n = graph.vertex_count();
    if phi.len() != n || (0..n).any(|v| !phi.contains(v)) {
        return false;
    }
    let mut expected: Vec<Vec<Vertex>> = blocks_of(graph);
    let mut actual: Vec<Vec<Vertex>> = phi
        .blocks()
        .map(|b| {
            let mut b = b.to_vec();
            b.sort_unstable();
            b
        })
        .collect();
    expected.sort();
    actual.sort();
    if expected != actual {
        return false;
    }
    for (i, block) in phi.blocks().enumerate() {
        let v = block[0];
        let mut seen: Vec<usize> = graph
            .neighbors(v)
            .iter()
            .map(|&u| phi.block_index(u).unwrap())
            .chain(std::iter::once(i))
            .collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.windows(2).any(|w| w[1] != w[0] + 1) {
            return false;
        }
    }
    true
}
