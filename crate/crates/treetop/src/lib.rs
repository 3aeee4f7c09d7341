//! Executable machinery for rooted topological-minor embeddings of trees,
//! ray linkages in one-ended hosts, witness tribes and the staged
//! disjoint-copy construction, at finite "desk" scale.
//!
//! Hosts are finitely presented one-ended infinite graphs (a finite base, a
//! repeated unit, optional global vertices); every infinitary notion is
//! replaced by a bounded surrogate that carries its bounds, and every search
//! result is a certificate that re-verifies independently.

pub mod config;
pub mod embed;
pub mod flow;
pub mod gen;
pub mod graph;
pub mod horde;
pub mod io;
pub mod linkage;
pub mod matching;
pub mod pgraph;
pub mod tree;
pub mod tribe;
pub mod wqo;

pub use graph::{FiniteGraph, VertexId};
pub use tree::{NodeId, RootedTree, TreeSource};

/// Three-valued search result: found, definitively absent after exhaustive
/// search, or undetermined because a budget or depth bound ran out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    /// Exhaustive search completed without a hit.
    Absent,
    /// Budget or depth exhausted; not a refutation.
    Undetermined,
}

impl<T> Outcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Found(t) => Outcome::Found(f(t)),
            Outcome::Absent => Outcome::Absent,
            Outcome::Undetermined => Outcome::Undetermined,
        }
    }
}
