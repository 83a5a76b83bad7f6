//! PQ-trees of all Robinson orderings.
//!
//! The tree is assembled bottom-up from the component records of a
//! recognition run. A component whose matrix runs out of entries yields a
//! Q-node over its refined blocks (a block of several vertices becomes a
//! P-node over them, a single vertex a bare leaf). A component that recursed
//! yields a Q-node over the merged trees of its child components:
//!
//! * a component meeting several blocks of `psi` is spliced in, its own
//!   Q-node dropped;
//! * a component alone in its block is attached as a subtree;
//! * components sharing a block are gathered under one new P-node.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigUint;
use serde_json::{json, Value};
use thiserror::Error;

use crate::matrix::SimilarityMatrix;
use crate::order::WeakLinearOrder;
use crate::robinson::{robinson_trace, Placement, RecognitionError, Trace};
use crate::Vertex;

/// A node of a PQ-tree. Leaves carry 0-based vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PqNode {
    Leaf(Vertex),
    /// Children may be arranged in any order.
    P(Vec<PqNode>),
    /// Children keep their order, up to reversal.
    Q(Vec<PqNode>),
}

impl PqNode {
    /// A P-node, or the child itself when there is only one.
    pub fn p(mut children: Vec<PqNode>) -> PqNode {
        if children.len() == 1 {
            children.pop().unwrap()
        } else {
            PqNode::P(children)
        }
    }

    /// A Q-node, or the child itself when there is only one.
    pub fn q(mut children: Vec<PqNode>) -> PqNode {
        if children.len() == 1 {
            children.pop().unwrap()
        } else {
            PqNode::Q(children)
        }
    }

    pub fn children(&self) -> &[PqNode] {
        match self {
            PqNode::Leaf(_) => &[],
            PqNode::P(c) | PqNode::Q(c) => c,
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            match node {
                PqNode::Leaf(v) => out.push(*v),
                PqNode::P(c) | PqNode::Q(c) => stack.extend(c.iter().rev()),
            }
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PqError {
    #[error("unknown tree format `{0}` (expected bracket, json or dot)")]
    UnknownFormat(String),
    #[error("cannot parse tree: {0}")]
    Parse(String),
    #[error("leaves are not the distinct vertices 0..n")]
    BadLeaves,
    #[error("internal node with fewer than two children")]
    ThinNode,
}

/// Output formats of [`PqTree::serialize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeFormat {
    /// `Q[1,P(2,3,4),P(5,6)]` with 1-based leaves.
    Bracket,
    /// Nested `{"type": "P"|"Q", "children": [...]}`, leaves as
    /// `{"type": "leaf", "label": k}` with 1-based `k`.
    Json,
    /// Graphviz.
    Dot,
}

impl FromStr for TreeFormat {
    type Err = PqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bracket" => Ok(TreeFormat::Bracket),
            "json" => Ok(TreeFormat::Json),
            "dot" => Ok(TreeFormat::Dot),
            _ => Err(PqError::UnknownFormat(s.to_string())),
        }
    }
}

/// A PQ-tree over the vertices `0..n`.
///
/// The empty tree (n = 0) is represented by a P-node without children; every
/// other internal node has at least two children.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PqTree {
    root: PqNode,
}

impl PqTree {
    /// Checks that leaves are `0..n` without repetition and that internal
    /// nodes have at least two children.
    pub fn new(root: PqNode) -> Result<Self, PqError> {
        let leaves = root.leaves();
        let mut seen = vec![false; leaves.len()];
        for &v in &leaves {
            if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                return Err(PqError::BadLeaves);
            }
        }
        if !leaves.is_empty() {
            let mut stack = vec![&root];
            while let Some(node) = stack.pop() {
                if let PqNode::P(c) | PqNode::Q(c) = node {
                    if c.len() < 2 {
                        return Err(PqError::ThinNode);
                    }
                    stack.extend(c);
                }
            }
        }
        Ok(PqTree { root })
    }

    pub fn root(&self) -> &PqNode {
        &self.root
    }

    pub fn leaf_count(&self) -> usize {
        self.root.leaves().len()
    }

    /// Equal trees have equal canonical forms whenever they encode the same
    /// orders: P-children are sorted by their smallest leaf, every Q-node is
    /// oriented so that its first child's smallest leaf is below its last
    /// child's, and Q-nodes with two children become P-nodes.
    pub fn canonicalize(&self) -> PqTree {
        PqTree {
            root: canonical(&self.root).0,
        }
    }

    /// Number of leaf orders encoded: `k!` per P-node and 2 per Q-node.
    pub fn count_orders(&self) -> BigUint {
        let mut count = BigUint::from(1u32);
        let mut stack = vec![&self.root];
        while let Some(node) = stack.pop() {
            match node {
                PqNode::Leaf(_) => {}
                PqNode::P(c) => {
                    for k in 2..=c.len() {
                        count *= k;
                    }
                    stack.extend(c);
                }
                PqNode::Q(c) => {
                    if c.len() >= 2 {
                        count *= 2u32;
                    }
                    stack.extend(c);
                }
            }
        }
        count
    }

    /// Lazily enumerates the encoded leaf orders, each exactly once.
    pub fn frontier(&self) -> Frontier {
        Frontier::new(&self.root)
    }

    pub fn serialize(&self, format: TreeFormat) -> String {
        match format {
            TreeFormat::Bracket => self.to_string(),
            TreeFormat::Json => to_json(&self.root).to_string(),
            TreeFormat::Dot => to_dot(&self.root),
        }
    }

    /// Reads the bracket or JSON form.
    pub fn parse(text: &str, format: TreeFormat) -> Result<Self, PqError> {
        let root = match format {
            TreeFormat::Bracket => BracketParser::new(text).parse()?,
            TreeFormat::Json => {
                let value: Value =
                    serde_json::from_str(text).map_err(|e| PqError::Parse(e.to_string()))?;
                from_json(&value)?
            }
            TreeFormat::Dot => return Err(PqError::Parse("DOT input is not supported".into())),
        };
        PqTree::new(root)
    }
}

impl fmt::Display for PqTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracket(&self.root, f)
    }
}

impl FromStr for PqTree {
    type Err = PqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PqTree::parse(s, TreeFormat::Bracket)
    }
}

fn canonical(node: &PqNode) -> (PqNode, Vertex) {
    match node {
        PqNode::Leaf(v) => (PqNode::Leaf(*v), *v),
        PqNode::P(c) | PqNode::Q(c) => {
            let mut children: Vec<(PqNode, Vertex)> = c.iter().map(canonical).collect();
            let min = children.iter().map(|c| c.1).min().unwrap_or(usize::MAX);
            let as_p = matches!(node, PqNode::P(_)) || children.len() == 2;
            if as_p {
                children.sort_by_key(|c| c.1);
            } else if children.first().map(|c| c.1) > children.last().map(|c| c.1) {
                children.reverse();
            }
            let children: Vec<PqNode> = children.into_iter().map(|c| c.0).collect();
            let node = if as_p {
                PqNode::p(children)
            } else {
                PqNode::q(children)
            };
            (node, min)
        }
    }
}

fn write_bracket(node: &PqNode, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (open, close, children) = match node {
        PqNode::Leaf(v) => return write!(f, "{}", v + 1),
        PqNode::P(c) => ("P(", ")", c),
        PqNode::Q(c) => ("Q[", "]", c),
    };
    f.write_str(open)?;
    for (i, child) in children.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write_bracket(child, f)?;
    }
    f.write_str(close)
}

fn to_json(node: &PqNode) -> Value {
    match node {
        PqNode::Leaf(v) => json!({"type": "leaf", "label": v + 1}),
        PqNode::P(c) => json!({"type": "P", "children": c.iter().map(to_json).collect::<Vec<_>>()}),
        PqNode::Q(c) => json!({"type": "Q", "children": c.iter().map(to_json).collect::<Vec<_>>()}),
    }
}

fn from_json(value: &Value) -> Result<PqNode, PqError> {
    let bad = |what: &str| PqError::Parse(format!("{what} in {value}"));
    match value.get("type").and_then(Value::as_str) {
        Some("leaf") => {
            let label = value.get("label").and_then(Value::as_u64).ok_or_else(|| bad("missing label"))?;
            if label == 0 {
                return Err(bad("labels start at 1"));
            }
            Ok(PqNode::Leaf(label as usize - 1))
        }
        Some(kind @ ("P" | "Q")) => {
            let children = value
                .get("children")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("missing children"))?
                .iter()
                .map(from_json)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(if kind == "P" {
                PqNode::P(children)
            } else {
                PqNode::Q(children)
            })
        }
        _ => Err(bad("missing or unknown type")),
    }
}

fn to_dot(root: &PqNode) -> String {
    let mut out = String::from("graph pqtree {\n");
    let mut next = 0usize;
    let mut stack: Vec<(&PqNode, Option<usize>)> = vec![(root, None)];
    while let Some((node, parent)) = stack.pop() {
        let id = next;
        next += 1;
        let attrs = match node {
            PqNode::Leaf(v) => format!("label=\"{}\", shape=plaintext", v + 1),
            PqNode::P(_) => "label=\"P\", shape=circle".to_string(),
            PqNode::Q(_) => "label=\"Q\", shape=box".to_string(),
        };
        let _ = writeln!(out, "  n{id} [{attrs}];");
        if let Some(p) = parent {
            let _ = writeln!(out, "  n{p} -- n{id};");
        }
        for child in node.children().iter().rev() {
            stack.push((child, Some(id)));
        }
    }
    out.push_str("}\n");
    out
}

struct BracketParser<'a> {
    text: &'a [u8],
    at: usize,
}

impl<'a> BracketParser<'a> {
    fn new(text: &'a str) -> Self {
        BracketParser {
            text: text.as_bytes(),
            at: 0,
        }
    }

    fn error(&self, message: &str) -> PqError {
        PqError::Parse(format!("{message} at offset {}", self.at))
    }

    fn skip_space(&mut self) {
        while self.text.get(self.at).is_some_and(|c| c.is_ascii_whitespace()) {
            self.at += 1;
        }
    }

    fn parse(mut self) -> Result<PqNode, PqError> {
        let node = self.node()?;
        self.skip_space();
        if self.at != self.text.len() {
            return Err(self.error("trailing input"));
        }
        Ok(node)
    }

    fn node(&mut self) -> Result<PqNode, PqError> {
        self.skip_space();
        match self.text.get(self.at) {
            Some(b'P') => self.list(b'(', b')').map(PqNode::P),
            Some(b'Q') => self.list(b'[', b']').map(PqNode::Q),
            Some(c) if c.is_ascii_digit() => {
                let start = self.at;
                while self.text.get(self.at).is_some_and(u8::is_ascii_digit) {
                    self.at += 1;
                }
                let digits = std::str::from_utf8(&self.text[start..self.at]).unwrap();
                match digits.parse::<usize>() {
                    Ok(label) if label > 0 => Ok(PqNode::Leaf(label - 1)),
                    _ => Err(self.error("leaf labels start at 1")),
                }
            }
            _ => Err(self.error("expected P, Q or a label")),
        }
    }

    fn list(&mut self, open: u8, close: u8) -> Result<Vec<PqNode>, PqError> {
        self.at += 1;
        self.skip_space();
        if self.text.get(self.at) != Some(&open) {
            return Err(self.error("expected opening bracket"));
        }
        self.at += 1;
        let mut children = Vec::new();
        loop {
            self.skip_space();
            if self.text.get(self.at) == Some(&close) && children.is_empty() {
                self.at += 1;
                return Ok(children);
            }
            children.push(self.node()?);
            self.skip_space();
            match self.text.get(self.at) {
                Some(b',') => self.at += 1,
                Some(&c) if c == close => {
                    self.at += 1;
                    return Ok(children);
                }
                _ => return Err(self.error("expected `,` or closing bracket")),
            }
        }
    }
}

/// Odometer over the arrangements of every internal node.
pub struct Frontier {
    /// Arena in preorder; `children` index into it.
    kinds: Vec<Kind>,
    arrangement: Vec<Vec<usize>>,
    done: bool,
}

enum Kind {
    Leaf(Vertex),
    P,
    Q,
}

impl Frontier {
    fn new(root: &PqNode) -> Self {
        let mut kinds = Vec::new();
        let mut arrangement = Vec::new();
        let mut stack: Vec<(&PqNode, Option<usize>)> = vec![(root, None)];
        while let Some((node, parent)) = stack.pop() {
            let id = kinds.len();
            kinds.push(match node {
                PqNode::Leaf(v) => Kind::Leaf(*v),
                PqNode::P(_) => Kind::P,
                PqNode::Q(_) => Kind::Q,
            });
            arrangement.push(Vec::new());
            if let Some(p) = parent {
                arrangement[p].push(id);
            }
            for child in node.children().iter().rev() {
                stack.push((child, Some(id)));
            }
        }
        Frontier {
            kinds,
            arrangement,
            done: false,
        }
    }

    fn current(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut stack = vec![0];
        while let Some(id) = stack.pop() {
            match self.kinds[id] {
                Kind::Leaf(v) => out.push(v),
                _ => stack.extend(self.arrangement[id].iter().rev()),
            }
        }
        out
    }

    /// Moves to the next arrangement; false once all have been produced.
    fn advance(&mut self) -> bool {
        for id in 0..self.kinds.len() {
            let list = &mut self.arrangement[id];
            match self.kinds[id] {
                Kind::Leaf(_) => continue,
                Kind::Q if list.len() >= 2 => {
                    list.reverse();
                    // The original orientation has the smaller first child
                    // id; having returned to it means this digit wrapped.
                    if list[0] > list[list.len() - 1] {
                        return true;
                    }
                }
                Kind::Q => {}
                Kind::P => {
                    if next_permutation(list) {
                        return true;
                    }
                    list.sort_unstable();
                }
            }
        }
        false
    }
}

impl Iterator for Frontier {
    type Item = Vec<Vertex>;

    fn next(&mut self) -> Option<Vec<Vertex>> {
        if self.done || self.kinds.is_empty() {
            return None;
        }
        let order = self.current();
        self.done = !self.advance();
        Some(order)
    }
}

/// Rearranges into the next lexicographic permutation; false (and leaves the
/// slice untouched) when it is already the last one.
fn next_permutation(list: &mut [usize]) -> bool {
    let Some(i) = (1..list.len()).rev().find(|&i| list[i - 1] < list[i]) else {
        return false;
    };
    let j = (i..list.len()).rev().find(|&j| list[j] > list[i - 1]).unwrap();
    list.swap(i - 1, j);
    list[i..].reverse();
    true
}

/// The tree of a successful run, built bottom-up over the records.
fn assemble(trace: &Trace) -> PqNode {
    // Children of the Q-node of every record. Records of a child node always
    // come after their parent record, so a reverse sweep sees them first.
    let mut gamma: Vec<Option<Vec<PqNode>>> = vec![None; trace.records.len()];
    for r in (0..trace.records.len()).rev() {
        let record = &trace.records[r];
        let children = match &record.children {
            None => record
                .refined
                .blocks()
                .map(|b| PqNode::p(b.iter().map(|&v| PqNode::Leaf(v)).collect()))
                .collect(),
            Some(ids) => merge(trace, ids, &mut gamma),
        };
        gamma[r] = Some(children);
    }
    let items = merge(trace, &trace.roots, &mut gamma);
    match items.len() {
        0 => PqNode::P(Vec::new()),
        _ => PqNode::q(items),
    }
}

/// The items placed under the node of a recursion node with components `ids`.
fn merge(trace: &Trace, ids: &[usize], gamma: &mut [Option<Vec<PqNode>>]) -> Vec<PqNode> {
    let mut shared: HashMap<usize, Vec<usize>> = HashMap::new();
    for &id in ids {
        if let Placement::Shared(block) = trace.records[id].placement {
            shared.entry(block).or_default().push(id);
        }
    }
    let mut take = |id: usize| gamma[id].take().expect("each record is merged once");
    let mut items = Vec::new();
    for &id in ids {
        match trace.records[id].placement {
            Placement::Spanning => items.extend(take(id)),
            Placement::Alone => items.push(PqNode::q(take(id))),
            Placement::Shared(block) => {
                if let Some(group) = shared.remove(&block) {
                    items.push(PqNode::p(group.into_iter().map(|g| PqNode::q(take(g))).collect()));
                }
            }
        }
    }
    items
}

/// The PQ-tree of all weak orders that [`crate::robinson::robinson`] could
/// return for `psi`, up to reversal.
///
/// The components of the top level are merged as at every inner node; when
/// this yields a single subtree it is the root, otherwise a Q-node holds them.
pub fn robinson_pq(matrix: &SimilarityMatrix, psi: &WeakLinearOrder) -> Result<PqTree, RecognitionError> {
    let trace = robinson_trace(matrix, psi)?;
    Ok(PqTree {
        root: assemble(&trace),
    })
}

/// The PQ-tree whose frontier is exactly the set of orders making `matrix`
/// Robinson.
pub fn robinsonian_pq(matrix: &SimilarityMatrix) -> Result<PqTree, RecognitionError> {
    let psi = WeakLinearOrder::single_block((0..matrix.n()).collect()).expect("distinct rows");
    let tree = robinson_pq(matrix, &psi).map_err(|e| match e {
        RecognitionError::NotCompatible { stage } => RecognitionError::NotRobinsonian { stage },
        other => other,
    })?;
    if tree.leaf_count() != matrix.n() {
        return Err(RecognitionError::NotRobinsonian {
            stage: crate::robinson::Stage::Refinement,
        });
    }
    Ok(tree)
}
