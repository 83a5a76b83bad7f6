//! Lexicographic breadth-first search by partition refinement.
//!
//! Unvisited vertices are kept in an ordered list of classes; all vertices of a
//! class share the same lexicographic label and classes appear in decreasing
//! label order. Visiting a vertex moves its unvisited neighbors out of each
//! class into a fresh class placed just before it. Labels are never
//! materialized.
//!
//! Every class stays sorted by the rank of its vertices in an initial order:
//! adjacency lists are pre-sorted by that rank and split-off vertices are
//! appended in list order. The next vertex to visit is therefore always the
//! lowest-ranked vertex of the first class, which is how the tie-breaking
//! rules of Lex-BFS+ and CO-Lex-BFS are realized in linear time.

use thiserror::Error;

use crate::graph::Graph;
use crate::order::WeakLinearOrder;
use crate::Vertex;

const NIL: usize = usize::MAX;

#[derive(Clone, Copy)]
struct Class {
    head: usize,
    tail: usize,
    prev: usize,
    next: usize,
    /// Pivot step that last split this class, and the class it split into.
    stamp: usize,
    split: usize,
}

struct Refiner {
    classes: Vec<Class>,
    first: usize,
    vnext: Vec<usize>,
    vprev: Vec<usize>,
    class_of: Vec<usize>,
}

impl Refiner {
    fn new(initial: &[Vertex], n: usize) -> Self {
        let mut r = Refiner {
            classes: Vec::with_capacity(n),
            first: NIL,
            vnext: vec![NIL; n],
            vprev: vec![NIL; n],
            class_of: vec![0; n],
        };
        if let (Some(&head), Some(&tail)) = (initial.first(), initial.last()) {
            r.classes.push(Class {
                head,
                tail,
                prev: NIL,
                next: NIL,
                stamp: NIL,
                split: NIL,
            });
            r.first = 0;
            for w in initial.windows(2) {
                r.vnext[w[0]] = w[1];
                r.vprev[w[1]] = w[0];
            }
        }
        r
    }

    fn remove(&mut self, v: Vertex) {
        let c = self.class_of[v];
        let (p, nx) = (self.vprev[v], self.vnext[v]);
        if p == NIL {
            self.classes[c].head = nx;
        } else {
            self.vnext[p] = nx;
        }
        if nx == NIL {
            self.classes[c].tail = p;
        } else {
            self.vprev[nx] = p;
        }
        self.vprev[v] = NIL;
        self.vnext[v] = NIL;
        if self.classes[c].head == NIL {
            let Class { prev, next, .. } = self.classes[c];
            if prev == NIL {
                self.first = next;
            } else {
                self.classes[prev].next = next;
            }
            if next != NIL {
                self.classes[next].prev = prev;
            }
        }
    }

    fn append(&mut self, c: usize, v: Vertex) {
        let tail = self.classes[c].tail;
        if tail == NIL {
            self.classes[c].head = v;
        } else {
            self.vnext[tail] = v;
        }
        self.vprev[v] = tail;
        self.classes[c].tail = v;
        self.class_of[v] = c;
    }

    /// New empty class placed immediately before `c`.
    fn insert_before(&mut self, c: usize) -> usize {
        let id = self.classes.len();
        let prev = self.classes[c].prev;
        self.classes.push(Class {
            head: NIL,
            tail: NIL,
            prev,
            next: c,
            stamp: NIL,
            split: NIL,
        });
        if prev == NIL {
            self.first = id;
        } else {
            self.classes[prev].next = id;
        }
        self.classes[c].prev = id;
        id
    }
}

/// Runs one Lex-BFS sweep. Ties are broken toward the vertex that comes first
/// in `initial`, which must list every vertex of `graph` once.
///
/// `visit(step, v, fresh)` is called for every vertex in visit order; `fresh`
/// is true when `v` has no visited neighbor, i.e. its label is empty.
fn sweep<F>(graph: &Graph, initial: &[Vertex], mut visit: F) -> Vec<Vertex>
where
    F: FnMut(usize, Vertex, bool),
{
    let n = graph.vertex_count();
    assert_eq!(initial.len(), n, "initial order must list every vertex");

    // Adjacency lists re-sorted by rank in `initial`.
    let mut offsets = vec![0usize; n + 1];
    for v in 0..n {
        offsets[v + 1] = offsets[v] + graph.degree(v);
    }
    let mut fill = offsets.clone();
    let mut ranked = vec![0; offsets[n]];
    for &u in initial {
        for &w in graph.neighbors(u) {
            ranked[fill[w]] = u;
            fill[w] += 1;
        }
    }

    let mut refiner = Refiner::new(initial, n);
    let mut visited = vec![false; n];
    let mut touched = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let pivot = refiner.classes[refiner.first].head;
        refiner.remove(pivot);
        visited[pivot] = true;
        visit(step, pivot, !touched[pivot]);
        order.push(pivot);
        for &w in &ranked[offsets[pivot]..offsets[pivot + 1]] {
            if visited[w] {
                continue;
            }
            touched[w] = true;
            let c = refiner.class_of[w];
            if refiner.classes[c].stamp != step {
                let fresh = refiner.insert_before(c);
                refiner.classes[c].stamp = step;
                refiner.classes[c].split = fresh;
            }
            let target = refiner.classes[c].split;
            refiner.remove(w);
            refiner.append(target, w);
        }
    }
    order
}

/// A Lex-BFS order starting at `start`; remaining ties go to the smaller vertex.
pub fn lex_bfs(graph: &Graph, start: Vertex) -> Vec<Vertex> {
    let n = graph.vertex_count();
    assert!(start < n, "start vertex out of range");
    let initial: Vec<Vertex> = std::iter::once(start)
        .chain((0..n).filter(|&v| v != start))
        .collect();
    sweep(graph, &initial, |_, _, _| {})
}

/// Lex-BFS+ of `graph` with respect to `previous`: every tie is broken in favor
/// of the vertex appearing last in `previous`.
pub fn lex_bfs_plus(graph: &Graph, previous: &[Vertex]) -> Vec<Vertex> {
    let initial: Vec<Vertex> = previous.iter().rev().copied().collect();
    sweep(graph, &initial, |_, _, _| {})
}

/// Like [`lex_bfs_plus`], also reporting whether the graph is connected.
pub(crate) fn lex_bfs_plus_connected(graph: &Graph, previous: &[Vertex]) -> (Vec<Vertex>, bool) {
    let initial: Vec<Vertex> = previous.iter().rev().copied().collect();
    let mut connected = true;
    let order = sweep(graph, &initial, |step, _, fresh| {
        if fresh && step > 0 {
            connected = false;
        }
    });
    (order, connected)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComponentOrderError {
    #[error("the weak order is not over the graph's vertex set")]
    VertexSetMismatch,
    #[error("component {component} spans a block it does not contain")]
    UncoveredInnerBlock { component: usize },
    #[error("components {first} and {second} interleave in the weak order")]
    Interleaved { first: usize, second: usize },
}

/// Connected components ordered compatibly with a weak linear order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentOrdering {
    /// `V_1, ..., V_c`; each component lists its vertices in visit order.
    pub components: Vec<Vec<Vertex>>,
    /// All vertices, component by component.
    pub sigma: Vec<Vertex>,
    /// For each component, the indices of the first and last blocks of the
    /// weak order that it meets.
    pub block_span: Vec<(usize, usize)>,
}

#[derive(Clone, Copy)]
struct OpenComponent {
    start: usize,
    end: usize,
    min_pos: usize,
    max_pos: usize,
    span: (usize, usize),
}

/// Finds the connected components of `graph` and orders them so that
/// `V_1 <=_psi ... <=_psi V_c`, or reports that no such order exists.
///
/// The search is a Lex-BFS whose ties go to the vertex coming first in `psi`
/// (earliest position of `psi.tau()`). Each finished component is checked
/// against the one currently before it and swapped with it when it fits
/// inside that component's first block.
pub fn co_lex_bfs(
    graph: &Graph,
    psi: &WeakLinearOrder,
) -> Result<ComponentOrdering, ComponentOrderError> {
    let n = graph.vertex_count();
    if psi.len() != n || (0..n).any(|v| !psi.contains(v)) {
        return Err(ComponentOrderError::VertexSetMismatch);
    }

    let mut opened: Vec<OpenComponent> = Vec::new();
    let visits = sweep(graph, psi.tau(), |step, v, fresh| {
        let pos = psi.position(v).unwrap();
        if fresh {
            opened.push(OpenComponent {
                start: step,
                end: step,
                min_pos: pos,
                max_pos: pos,
                span: (0, 0),
            });
        }
        let current = opened.last_mut().expect("first visit opens a component");
        current.end = step + 1;
        current.min_pos = current.min_pos.min(pos);
        current.max_pos = current.max_pos.max(pos);
    });

    let mut sequence: Vec<usize> = Vec::with_capacity(opened.len());
    for id in 0..opened.len() {
        let comp = opened[id];
        let (bmin, bmax) = (
            psi.block_index(psi.tau()[comp.min_pos]).unwrap(),
            psi.block_index(psi.tau()[comp.max_pos]).unwrap(),
        );
        opened[id].span = (bmin, bmax);
        if bmax > bmin + 1 {
            // Inner blocks form the interval between the end of B_min and the
            // start of B_max; all of it must belong to this component.
            let inner = psi.block_range(bmin).end..psi.block_range(bmax).start;
            let inside = visits[comp.start..comp.end]
                .iter()
                .filter(|&&v| inner.contains(&psi.position(v).unwrap()))
                .count();
            if inside != inner.len() {
                return Err(ComponentOrderError::UncoveredInnerBlock { component: id });
            }
        }
        match sequence.last().copied() {
            Some(prev) if bmin == bmax && (bmin, bmin) != opened[prev].span && bmin == opened[prev].span.0 => {
                let last = sequence.len() - 1;
                sequence.insert(last, id);
            }
            Some(prev) if bmin < opened[prev].span.1 => {
                return Err(ComponentOrderError::Interleaved {
                    first: prev,
                    second: id,
                });
            }
            _ => sequence.push(id),
        }
    }

    let components: Vec<Vec<Vertex>> = sequence
        .iter()
        .map(|&id| visits[opened[id].start..opened[id].end].to_vec())
        .collect();
    Ok(ComponentOrdering {
        sigma: components.concat(),
        block_span: sequence.iter().map(|&id| opened[id].span).collect(),
        components,
    })
}
