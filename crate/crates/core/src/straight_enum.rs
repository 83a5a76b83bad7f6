//! Straight enumerations of connected unit interval graphs (three-sweep Lex-BFS).

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::Graph;
use crate::lexbfs::{lex_bfs_plus, lex_bfs_plus_connected};
use crate::order::WeakLinearOrder;
use crate::Vertex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StraightEnumError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not a unit interval graph (closed neighborhood of vertex {} is not consecutive)", .vertex + 1)]
    NotUnitInterval { vertex: Vertex },
    #[error("sweep order does not list every vertex exactly once")]
    BadSweep,
}

/// Computes the straight enumeration of a connected graph from a Lex-BFS
/// order `sigma` of it, or reports that the graph is not unit interval.
///
/// Two Lex-BFS+ sweeps follow `sigma`; on the last one every closed
/// neighborhood must occupy a run of consecutive positions, and vertices with
/// the same run form one block. Blocks are listed in the order of the last
/// sweep.
pub fn straight_enumeration(
    graph: &Graph,
    sigma: &[Vertex],
) -> Result<WeakLinearOrder, StraightEnumError> {
    let n = graph.vertex_count();
    if sigma.len() != n {
        return Err(StraightEnumError::BadSweep);
    }
    if n == 1 {
        return Ok(WeakLinearOrder::single_block(vec![sigma[0]]).expect("one vertex"));
    }
    let mut seen = vec![false; n];
    for &v in sigma {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(StraightEnumError::BadSweep);
        }
    }

    let (plus, connected) = lex_bfs_plus_connected(graph, sigma);
    if !connected {
        return Err(StraightEnumError::NotConnected);
    }
    let final_sweep = lex_bfs_plus(graph, &plus);

    let mut rank = vec![0; n];
    for (i, &v) in final_sweep.iter().enumerate() {
        rank[v] = i;
    }
    let mut tau = Vec::with_capacity(n);
    let mut bounds = vec![0];
    let mut current: Option<(usize, usize)> = None;
    for &v in &final_sweep {
        let (lmn, rmn) = graph
            .neighbors(v)
            .iter()
            .fold((rank[v], rank[v]), |(lo, hi), &u| (lo.min(rank[u]), hi.max(rank[u])));
        if rmn - lmn != graph.degree(v) {
            return Err(StraightEnumError::NotUnitInterval { vertex: v });
        }
        if current.is_some_and(|c| c != (lmn, rmn)) {
            bounds.push(tau.len());
        }
        current = Some((lmn, rmn));
        tau.push(v);
    }
    bounds.push(n);
    Ok(WeakLinearOrder::from_parts(tau, bounds).expect("sweep lists each vertex once"))
}

/// Classes of vertices with equal closed neighborhoods, ordered by smallest
/// member, each sorted ascending.
pub fn blocks_of(graph: &Graph) -> Vec<Vec<Vertex>> {
    let mut classes: HashMap<Vec<Vertex>, usize> = HashMap::new();
    let mut out: Vec<Vec<Vertex>> = Vec::new();
    for v in 0..graph.vertex_count() {
        let mut closed = graph.neighbors(v).to_vec();
        let at = closed.partition_point(|&u| u < v);
        closed.insert(at, v);
        let id = *classes.entry(closed).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[id].push(v);
    }
    out
}
