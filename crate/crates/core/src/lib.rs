//! Recognition of Robinsonian similarity matrices.
//!
//! A symmetric nonnegative matrix is Robinson when its entries never increase
//! moving away from the diagonal along a row or column, and Robinsonian when
//! some simultaneous row/column permutation makes it Robinson. The recognizer
//! here works on the level graphs of the matrix: it orders their connected
//! components with a Lex-BFS variant, computes straight enumerations with
//! three Lex-BFS sweeps, and refines them against each other recursively,
//! peeling off one weight level per call. All Robinson orderings are returned
//! as a PQ-tree by [`pqtree::robinsonian_pq`].

pub mod graph;
pub mod input;
pub mod lexbfs;
pub mod matrix;
pub mod oracle;
pub mod order;
pub mod pqtree;
pub mod robinson;
pub mod straight_enum;

/// Vertices (rows of the matrix) are numbered `0..n`.
pub type Vertex = usize;
/// Matrix entries are integer multiples of a fixed unit; see [`input`].
pub type Weight = u64;

pub use graph::{Graph, VertexSubset};
pub use input::{load_matrix, InputFormat, LoadError, LoadOptions};
pub use lexbfs::{co_lex_bfs, lex_bfs, lex_bfs_plus, ComponentOrdering};
pub use matrix::{MatrixError, SimilarityMatrix};
pub use order::{OrderError, WeakLinearOrder};
pub use pqtree::{robinsonian_pq, PqNode, PqTree};
pub use robinson::{robinson, robinsonian, RecognitionError, RecursionStats, Stage};
pub use straight_enum::straight_enumeration;
