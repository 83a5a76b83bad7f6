//! Weak linear orders (ordered partitions) and their common refinement.
//!
//! A [`WeakLinearOrder`] stores a linear order `tau` of its elements in which
//! every block is a contiguous interval, together with the block boundaries.
//! Membership and block lookups are array indexed, so elements should be
//! small integers (vertex ids).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::Vertex;

const ABSENT: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("vertex {} appears more than once", .0 + 1)]
    DuplicateVertex(Vertex),
    #[error("empty block")]
    EmptyBlock,
    #[error("the orders are defined over different vertex sets")]
    VertexSetMismatch,
    #[error("the parts share vertex {}", .0 + 1)]
    OverlappingSupports(Vertex),
    #[error("the orders are not compatible")]
    Incompatible,
    #[error("cannot parse weak linear order: {0}")]
    Parse(String),
}

/// An ordered partition `(B_1, ..., B_p)` of a finite vertex set.
#[derive(Clone, Debug)]
pub struct WeakLinearOrder {
    tau: Vec<Vertex>,
    /// Start of every block in `tau`, followed by `tau.len()`.
    bounds: Vec<usize>,
    /// Vertex -> position in `tau`, `ABSENT` for vertices outside the ground set.
    position_of: Vec<usize>,
    /// Position -> block index.
    block_of: Vec<usize>,
}

impl WeakLinearOrder {
    pub fn from_blocks<B, I>(blocks: B) -> Result<Self, OrderError>
    where
        B: IntoIterator<Item = I>,
        I: IntoIterator<Item = Vertex>,
    {
        let mut tau = Vec::new();
        let mut bounds = vec![0];
        for block in blocks {
            tau.extend(block);
            if tau.len() == *bounds.last().unwrap() {
                return Err(OrderError::EmptyBlock);
            }
            bounds.push(tau.len());
        }
        Self::from_parts(tau, bounds)
    }

    /// The order with a single block.
    pub fn single_block(vertices: Vec<Vertex>) -> Result<Self, OrderError> {
        if vertices.is_empty() {
            return Self::from_parts(vertices, vec![0]);
        }
        let len = vertices.len();
        Self::from_parts(vertices, vec![0, len])
    }

    /// The linear order `order[0] < order[1] < ...`.
    pub fn linear(order: Vec<Vertex>) -> Result<Self, OrderError> {
        let bounds = (0..=order.len()).collect();
        Self::from_parts(order, bounds)
    }

    pub(crate) fn from_parts(tau: Vec<Vertex>, bounds: Vec<usize>) -> Result<Self, OrderError> {
        debug_assert!(bounds.first() == Some(&0) && bounds.last() == Some(&tau.len()));
        let size = tau.iter().max().map_or(0, |&m| m + 1);
        let mut position_of = vec![ABSENT; size];
        for (i, &v) in tau.iter().enumerate() {
            if position_of[v] != ABSENT {
                return Err(OrderError::DuplicateVertex(v));
            }
            position_of[v] = i;
        }
        let mut block_of = vec![0; tau.len()];
        for (b, w) in bounds.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(OrderError::EmptyBlock);
            }
            block_of[w[0]..w[1]].fill(b);
        }
        Ok(WeakLinearOrder {
            tau,
            bounds,
            position_of,
            block_of,
        })
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.bounds.len() - 1
    }

    /// A linear order compatible with this weak order.
    pub fn tau(&self) -> &[Vertex] {
        &self.tau
    }

    pub fn block(&self, index: usize) -> &[Vertex] {
        &self.tau[self.bounds[index]..self.bounds[index + 1]]
    }

    pub fn blocks(&self) -> impl ExactSizeIterator<Item = &[Vertex]> + DoubleEndedIterator + '_ {
        self.bounds.windows(2).map(move |w| &self.tau[w[0]..w[1]])
    }

    /// Range of `tau` positions occupied by block `index`.
    pub fn block_range(&self, index: usize) -> std::ops::Range<usize> {
        self.bounds[index]..self.bounds[index + 1]
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.position(v).is_some()
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        match self.position_of.get(v) {
            Some(&p) if p != ABSENT => Some(p),
            _ => None,
        }
    }

    pub fn block_index(&self, v: Vertex) -> Option<usize> {
        self.position(v).map(|p| self.block_of[p])
    }

    pub fn is_linear(&self) -> bool {
        self.block_count() == self.len()
    }

    /// `(B_p, ..., B_1)`.
    pub fn reverse(&self) -> Self {
        let n = self.tau.len();
        let tau: Vec<Vertex> = self.blocks().rev().flatten().copied().collect();
        let bounds = self.bounds.iter().rev().map(|&b| n - b).collect();
        Self::from_parts(tau, bounds).expect("reversal keeps blocks valid")
    }

    /// `psi[U]`: blocks intersected with `subset`, empty blocks dropped.
    /// Vertices of `subset` outside the ground set are ignored.
    pub fn restrict(&self, subset: &[Vertex]) -> Self {
        let mut positions: Vec<usize> = subset.iter().filter_map(|&v| self.position(v)).collect();
        positions.sort_unstable();
        positions.dedup();
        let mut tau = Vec::with_capacity(positions.len());
        let mut bounds = vec![0];
        let mut current = None;
        for p in positions {
            let b = self.block_of[p];
            if current.is_some_and(|c| c != b) {
                bounds.push(tau.len());
            }
            current = Some(b);
            tau.push(self.tau[p]);
        }
        if !tau.is_empty() {
            bounds.push(tau.len());
        }
        Self::from_parts(tau, bounds).expect("restriction keeps blocks valid")
    }

    /// `(psi_1, psi_2, ...)` for orders over pairwise disjoint sets.
    pub fn concatenate<'a, I>(parts: I) -> Result<Self, OrderError>
    where
        I: IntoIterator<Item = &'a WeakLinearOrder>,
    {
        let mut tau = Vec::new();
        let mut bounds = vec![0];
        for part in parts {
            let offset = tau.len();
            tau.extend_from_slice(&part.tau);
            bounds.extend(part.bounds[1..].iter().map(|b| b + offset));
        }
        Self::from_parts(tau, bounds).map_err(|e| match e {
            OrderError::DuplicateVertex(v) => OrderError::OverlappingSupports(v),
            other => other,
        })
    }

    /// True iff the linear order `pi` never puts `y` before `x` when `x <_psi y`.
    /// Returns false if `pi` is not an ordering of exactly this ground set.
    pub fn is_compatible_with(&self, pi: &[Vertex]) -> bool {
        if pi.len() != self.len() {
            return false;
        }
        let mut seen = vec![false; self.len()];
        let mut last_block = 0;
        for &v in pi {
            let Some(p) = self.position(v) else {
                return false;
            };
            if std::mem::replace(&mut seen[p], true) {
                return false;
            }
            let b = self.block_of[p];
            if b < last_block {
                return false;
            }
            last_block = b;
        }
        true
    }

    fn same_ground_set(&self, other: &Self) -> bool {
        self.len() == other.len() && other.tau.iter().all(|&v| self.contains(v))
    }

    /// The common refinement `self ∧ other`, or [`OrderError::Incompatible`].
    ///
    /// Blocks `C_1, C_2, ...` of `other` are peeled off left to right. Each
    /// `C_k` must swallow every remaining block of `self` that lies strictly
    /// before the last `self`-block it meets; the refinement then emits
    /// `self[C_k]`. Runs in `O(len)`.
    pub fn refine(&self, other: &Self) -> Result<Self, OrderError> {
        if !self.same_ground_set(other) {
            return Err(OrderError::VertexSetMismatch);
        }
        let p = self.block_count();
        let mut remaining: Vec<usize> = self.bounds.windows(2).map(|w| w[1] - w[0]).collect();
        let mut first_live = 0;
        let mut tau = Vec::with_capacity(self.len());
        let mut bounds = vec![0];
        let mut buckets: Vec<Vec<Vertex>> = Vec::new();

        for chunk in other.blocks() {
            let block_max = chunk
                .iter()
                .map(|&v| self.block_index(v).unwrap())
                .max()
                .expect("blocks are nonempty");
            // Blocks before `block_max` must be entirely inside `chunk`.
            let inner = chunk
                .iter()
                .filter(|&&v| self.block_index(v).unwrap() < block_max)
                .count();
            let needed: usize = remaining[first_live..block_max].iter().sum();
            if inner != needed {
                return Err(OrderError::Incompatible);
            }
            // Every vertex of `chunk` sits in a live block in first_live..=block_max.
            let span = block_max + 1 - first_live;
            buckets.resize_with(span.max(buckets.len()), Vec::new);
            for &v in chunk {
                buckets[self.block_index(v).unwrap() - first_live].push(v);
            }
            for bucket in &mut buckets[..span] {
                if !bucket.is_empty() {
                    tau.append(bucket);
                    bounds.push(tau.len());
                }
            }
            for &v in chunk {
                remaining[self.block_index(v).unwrap()] -= 1;
            }
            while first_live < p && remaining[first_live] == 0 {
                first_live += 1;
            }
        }
        Self::from_parts(tau, bounds)
    }

    /// Parses `({1,3},{2})` with 1-based labels.
    pub fn parse(text: &str) -> Result<Self, OrderError> {
        text.parse()
    }
}

/// The blocks of a weak linear order without lookup tables; cheap to build
/// over a few vertices with large labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockList {
    tau: Vec<Vertex>,
    bounds: Vec<usize>,
}

impl BlockList {
    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn blocks(&self) -> impl ExactSizeIterator<Item = &[Vertex]> + DoubleEndedIterator + '_ {
        self.bounds.windows(2).map(move |w| &self.tau[w[0]..w[1]])
    }

    pub fn to_order(&self) -> WeakLinearOrder {
        WeakLinearOrder::from_parts(self.tau.clone(), self.bounds.clone())
            .expect("block lists come from valid orders")
    }

    pub(crate) fn concatenate<'a>(parts: impl IntoIterator<Item = &'a BlockList>) -> WeakLinearOrder {
        let mut tau = Vec::new();
        let mut bounds = vec![0];
        for part in parts {
            let offset = tau.len();
            tau.extend_from_slice(&part.tau);
            bounds.extend(part.bounds[1..].iter().map(|b| b + offset));
        }
        WeakLinearOrder::from_parts(tau, bounds).expect("parts are disjoint")
    }
}

impl WeakLinearOrder {
    /// Blocks with every vertex `v` replaced by `labels[v]`.
    pub(crate) fn relabel(&self, labels: &[Vertex]) -> BlockList {
        BlockList {
            tau: self.tau.iter().map(|&v| labels[v]).collect(),
            bounds: self.bounds.clone(),
        }
    }
}

impl PartialEq for WeakLinearOrder {
    /// Equal iff the same blocks appear in the same order.
    fn eq(&self, other: &Self) -> bool {
        self.bounds == other.bounds
            && self.same_ground_set(other)
            && self
                .tau
                .iter()
                .enumerate()
                .all(|(p, &v)| other.block_index(v) == Some(self.block_of[p]))
    }
}

impl Eq for WeakLinearOrder {}

impl fmt::Display for WeakLinearOrder {
    /// Renders blocks with 1-based labels, each block sorted ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, block) in self.blocks().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let mut sorted = block.to_vec();
            sorted.sort_unstable();
            write!(f, "{{")?;
            for (j, v) in sorted.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", v + 1)?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for WeakLinearOrder {
    type Err = OrderError;

    fn from_str(s: &str) -> Result<Self, OrderError> {
        let bad = |m: &str| OrderError::Parse(m.to_string());
        let body = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| bad("expected '(' ... ')'"))?
            .trim();
        let mut blocks = Vec::new();
        let mut rest = body;
        while !rest.is_empty() {
            let open = rest.strip_prefix('{').ok_or_else(|| bad("expected '{'"))?;
            let close = open.find('}').ok_or_else(|| bad("unclosed block"))?;
            let block = open[..close]
                .split(',')
                .map(|t| match t.trim().parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(bad("labels must be positive integers")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            blocks.push(block);
            rest = open[close + 1..].trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
            }
        }
        Self::from_blocks(blocks)
    }
}
