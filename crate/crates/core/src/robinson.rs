//! The recursive recognizer.
//!
//! Each recursion node receives a matrix and a weak linear order `psi` of its
//! rows. The connected components of the support are ordered compatibly with
//! `psi`; every component gets the straight enumeration of its support,
//! refined against `psi` (in either orientation), and, once the smallest
//! weight of the component is removed, becomes a child node with the refined
//! order as its `psi`. Nodes are kept on an explicit stack since the depth can
//! exceed `n`.

use std::fmt;

use thiserror::Error;

use crate::lexbfs::co_lex_bfs;
use crate::matrix::SimilarityMatrix;
use crate::order::{BlockList, WeakLinearOrder};
use crate::straight_enum::straight_enumeration;
use crate::{Vertex, Weight};

/// The step at which recognition stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    /// The components of a level graph cannot be ordered compatibly with `psi`.
    ComponentOrdering,
    /// A component of a level graph is not a unit interval graph.
    StraightEnumeration,
    /// Neither orientation of a straight enumeration is compatible with `psi`.
    Refinement,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::ComponentOrdering => "component-ordering",
            Stage::StraightEnumeration => "straight-enumeration",
            Stage::Refinement => "refinement",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecognitionError {
    #[error("no compatible order exists (stopped at {stage})")]
    NotCompatible { stage: Stage },
    #[error("matrix is not Robinsonian (stopped at {stage})")]
    NotRobinsonian { stage: Stage },
    #[error("the weak order is not over the rows of the matrix")]
    VertexSetMismatch,
}

impl RecognitionError {
    pub fn stage(&self) -> Option<Stage> {
        match *self {
            RecognitionError::NotCompatible { stage } | RecognitionError::NotRobinsonian { stage } => {
                Some(stage)
            }
            RecognitionError::VertexSetMismatch => None,
        }
    }
}

/// Shape of the recursion tree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecursionStats {
    /// Longest chain of nested calls on matrices with at least one edge.
    pub depth: usize,
    /// Number of recursion nodes.
    pub nodes: usize,
    /// Distinct nonzero entries of the input.
    pub levels: usize,
    /// `(rows, nonzero pairs, smallest entry)` of every node's matrix, in
    /// processing order.
    pub per_node: Vec<(usize, usize, Option<Weight>)>,
}

/// How a component sits in the `psi` of its recursion node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    /// Meets at least two blocks.
    Spanning,
    /// The only component contained in its block.
    Alone,
    /// One of several components contained in block `i`.
    Shared(usize),
}

/// One component handled at one recursion node. Labels are rows of the
/// original matrix.
#[derive(Clone, Debug)]
pub struct ComponentRecord {
    /// In visit order.
    pub vertices: Vec<Vertex>,
    /// Depth of the recursion node, 1 at the root.
    pub depth: usize,
    pub straight_enumeration: BlockList,
    pub refined: BlockList,
    pub placement: Placement,
    /// Nonzero pairs inside the component.
    pub edge_count: usize,
    /// Smallest entry of the component, removed before recursing.
    pub stripped: Option<Weight>,
    /// Records of the child node's components; `None` when nothing is left
    /// after stripping.
    pub children: Option<Vec<usize>>,
}

/// Every component record of a run, in processing order.
#[derive(Clone, Debug, Default)]
pub struct Trace {
    pub records: Vec<ComponentRecord>,
    /// Components of the root node in component order.
    pub roots: Vec<usize>,
    pub stats: RecursionStats,
}

impl Trace {
    /// The concatenation of the leaf refinements, left to right.
    pub fn final_order(&self) -> WeakLinearOrder {
        let mut leaves = Vec::new();
        let mut stack: Vec<usize> = self.roots.iter().rev().copied().collect();
        while let Some(r) = stack.pop() {
            match &self.records[r].children {
                Some(children) => stack.extend(children.iter().rev()),
                None => leaves.push(&self.records[r].refined),
            }
        }
        BlockList::concatenate(leaves)
    }
}

struct Task {
    matrix: SimilarityMatrix,
    psi: WeakLinearOrder,
    labels: Vec<Vertex>,
    depth: usize,
    parent: Option<usize>,
}

/// Runs the recursion, stopping at the first failing stage. The trace holds
/// everything processed up to that point.
fn run(matrix: &SimilarityMatrix, psi: &WeakLinearOrder) -> (Trace, Option<Stage>) {
    let mut trace = Trace::default();
    trace.stats.levels = matrix.distinct_weight_count();
    let mut stack = vec![Task {
        matrix: matrix.clone(),
        psi: psi.clone(),
        labels: (0..matrix.n()).collect(),
        depth: 1,
        parent: None,
    }];
    while let Some(task) = stack.pop() {
        if let Err(stage) = process(task, &mut trace, &mut stack) {
            return (trace, Some(stage));
        }
    }
    debug_assert!(trace.stats.depth <= trace.stats.levels);
    (trace, None)
}

fn process(task: Task, trace: &mut Trace, stack: &mut Vec<Task>) -> Result<(), Stage> {
    let Task {
        matrix,
        psi,
        labels,
        depth,
        parent,
    } = task;
    let n = matrix.n();
    let stats = &mut trace.stats;
    stats.nodes += 1;
    stats.per_node.push((n, matrix.edge_count(), matrix.min_weight()));
    if matrix.edge_count() > 0 {
        stats.depth = stats.depth.max(depth);
    }

    let ordering = co_lex_bfs(&matrix.support(), &psi).map_err(|_| Stage::ComponentOrdering)?;
    let c = ordering.components.len();

    // Renumber each component's vertices in visit order.
    let mut comp_of = vec![0; n];
    let mut local = vec![0; n];
    for (k, comp) in ordering.components.iter().enumerate() {
        for (j, &v) in comp.iter().enumerate() {
            comp_of[v] = k;
            local[v] = j;
        }
    }

    let mut taus: Vec<Vec<Vertex>> = vec![Vec::new(); c];
    let mut bounds: Vec<Vec<usize>> = vec![vec![0]; c];
    let mut last_block = vec![usize::MAX; c];
    for (b, block) in psi.blocks().enumerate() {
        for &v in block {
            let k = comp_of[v];
            if last_block[k] != b && !taus[k].is_empty() {
                bounds[k].push(taus[k].len());
            }
            last_block[k] = b;
            taus[k].push(local[v]);
        }
    }

    let mut edges: Vec<Vec<(Vertex, Vertex, Weight)>> = vec![Vec::new(); c];
    for &(x, y, w) in matrix.edges() {
        edges[comp_of[x]].push((local[x], local[y], w));
    }

    let mut contained = vec![0usize; psi.block_count()];
    for &(bmin, bmax) in &ordering.block_span {
        if bmin == bmax {
            contained[bmin] += 1;
        }
    }

    let first_record = trace.records.len();
    let mut children = Vec::new();
    let parts = ordering
        .components
        .iter()
        .zip(taus)
        .zip(bounds)
        .zip(edges)
        .zip(&ordering.block_span);
    for ((((comp, tau), mut bounds), edges), &(bmin, bmax)) in parts {
        let size = comp.len();
        bounds.push(size);
        let psi_k = WeakLinearOrder::from_parts(tau, bounds).expect("restriction of psi");
        let sub = SimilarityMatrix::from_unsorted_edges(size, edges);
        let sigma: Vec<Vertex> = (0..size).collect();
        let phi = straight_enumeration(&sub.support(), &sigma)
            .map_err(|_| Stage::StraightEnumeration)?;
        let refined = psi_k
            .refine(&phi)
            .or_else(|_| psi_k.refine(&phi.reverse()))
            .map_err(|_| Stage::Refinement)?;

        let placement = if bmin != bmax {
            Placement::Spanning
        } else if contained[bmin] == 1 {
            Placement::Alone
        } else {
            Placement::Shared(bmin)
        };
        let vertices: Vec<Vertex> = comp.iter().map(|&v| labels[v]).collect();
        let record = trace.records.len();
        let mut stripped = None;
        let mut recurse = None;
        if let Ok((rest, a_min)) = sub.strip_min() {
            stripped = Some(a_min);
            if rest.edge_count() > 0 {
                recurse = Some(rest);
            }
        }
        trace.records.push(ComponentRecord {
            straight_enumeration: phi.relabel(&vertices),
            refined: refined.relabel(&vertices),
            depth,
            placement,
            edge_count: sub.edge_count(),
            stripped,
            children: None,
            vertices: vertices.clone(),
        });
        if let Some(rest) = recurse {
            children.push(Task {
                matrix: rest,
                psi: refined,
                labels: vertices,
                depth: depth + 1,
                parent: Some(record),
            });
        }
    }

    let ids: Vec<usize> = (first_record..trace.records.len()).collect();
    match parent {
        Some(p) => trace.records[p].children = Some(ids),
        None => trace.roots = ids,
    }
    stack.extend(children.into_iter().rev());
    Ok(())
}

fn check_ground_set(matrix: &SimilarityMatrix, psi: &WeakLinearOrder) -> Result<(), RecognitionError> {
    let n = matrix.n();
    if psi.len() != n || (0..n).any(|v| !psi.contains(v)) {
        return Err(RecognitionError::VertexSetMismatch);
    }
    Ok(())
}

/// The full record of a run of [`robinson`].
pub fn robinson_trace(
    matrix: &SimilarityMatrix,
    psi: &WeakLinearOrder,
) -> Result<Trace, RecognitionError> {
    check_ground_set(matrix, psi)?;
    match run(matrix, psi) {
        (trace, None) => Ok(trace),
        (_, Some(stage)) => Err(RecognitionError::NotCompatible { stage }),
    }
}

/// A weak linear order compatible with `psi` and with straight enumerations
/// of all level graphs of `matrix`, if one exists.
///
/// The rows of `matrix` are expected to be ordered compatibly with `psi`.
pub fn robinson(
    matrix: &SimilarityMatrix,
    psi: &WeakLinearOrder,
) -> Result<WeakLinearOrder, RecognitionError> {
    robinson_trace(matrix, psi).map(|t| t.final_order())
}

/// Outcome of a successful recognition.
#[derive(Clone, Debug)]
pub struct Recognition {
    /// Rows in an order that makes the matrix Robinson.
    pub order: Vec<Vertex>,
    /// Every linear order compatible with this one works.
    pub phi: WeakLinearOrder,
    pub stats: RecursionStats,
}

/// Decides whether `matrix` is Robinsonian. On success the returned order
/// lists each block of the final weak order in ascending label order.
pub fn robinsonian(matrix: &SimilarityMatrix) -> Result<Recognition, RecognitionError> {
    let psi = WeakLinearOrder::single_block((0..matrix.n()).collect()).expect("distinct rows");
    match run(matrix, &psi) {
        (trace, None) => {
            let phi = trace.final_order();
            let order = phi
                .blocks()
                .flat_map(|b| {
                    let mut b = b.to_vec();
                    b.sort_unstable();
                    b
                })
                .collect();
            Ok(Recognition {
                order,
                phi,
                stats: trace.stats,
            })
        }
        (_, Some(stage)) => Err(RecognitionError::NotRobinsonian { stage }),
    }
}

/// Recursion statistics of [`robinsonian`], also for rejected matrices (the
/// nodes processed before stopping).
pub fn recursion_trace(matrix: &SimilarityMatrix) -> RecursionStats {
    let psi = WeakLinearOrder::single_block((0..matrix.n()).collect()).expect("distinct rows");
    run(matrix, &psi).0.stats
}
