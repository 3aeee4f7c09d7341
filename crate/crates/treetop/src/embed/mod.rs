//! Subdivision witnesses and their algebra: verification, restriction and
//! composition, plus rooted embedding search in trees and subdivision search
//! in arbitrary finite graphs.

mod graph_embed;
mod tree_embed;

pub use graph_embed::{find_subdivision_in_graph, SubdivisionSearch};
pub use tree_embed::{
    find_rooted_embedding, find_rooted_embedding_anchored, rooted_embeds, TreeEmbedder,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{FiniteGraph, VertexId};
use crate::tree::{NodeId, RootedTree, TreeError};

/// Host structures a pattern tree can be embedded into.
pub trait Host {
    type V: Copy + Ord + fmt::Display + fmt::Debug;

    fn has_vertex(&self, v: Self::V) -> bool;
    fn adjacent(&self, a: Self::V, b: Self::V) -> bool;
    /// Tree order of a rooted host; `None` when the host is not rooted.
    fn order_leq(&self, a: Self::V, b: Self::V) -> Option<bool>;
    fn label(&self, v: Self::V) -> Option<u32>;
}

impl Host for RootedTree {
    type V = NodeId;

    fn has_vertex(&self, v: NodeId) -> bool {
        self.contains(v)
    }

    fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        matches!(self.parent_of(a), Ok(Some(p)) if p == b)
            || matches!(self.parent_of(b), Ok(Some(p)) if p == a)
    }

    fn order_leq(&self, a: NodeId, b: NodeId) -> Option<bool> {
        self.leq(a, b).ok()
    }

    fn label(&self, v: NodeId) -> Option<u32> {
        self.label_of(v).ok().flatten()
    }
}

impl Host for FiniteGraph {
    type V = VertexId;

    fn has_vertex(&self, v: VertexId) -> bool {
        self.contains(v)
    }

    fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        FiniteGraph::adjacent(self, a, b)
    }

    fn order_leq(&self, _: VertexId, _: VertexId) -> Option<bool> {
        None
    }

    fn label(&self, _: VertexId) -> Option<u32> {
        None
    }
}

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("pinned vertex {0} is forbidden")]
    PinForbidden(VertexId),
    #[error("pinned vertices not distinct: {0}")]
    PinsCollide(VertexId),
    #[error("pinned vertex {0} not in the host")]
    PinMissing(VertexId),
    #[error("pattern of the witness does not match")]
    PatternMismatch,
}

/// First violated witness clause, for diagnostics.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessViolation {
    #[error("branch map not total: node {0} unmapped")]
    BranchNotTotal(NodeId),
    #[error("branch vertex of node {0} missing from host")]
    BranchOutsideHost(NodeId),
    #[error("branch map not injective at node {0}")]
    BranchNotInjective(NodeId),
    #[error("edge ({0},{1}) has no path")]
    EdgeMissing(NodeId, NodeId),
    #[error("edge ({0},{1}) path endpoints mismatch")]
    EndpointMismatch(NodeId, NodeId),
    #[error("edge ({0},{1}) not a path in the host")]
    NotAPath(NodeId, NodeId),
    #[error("paths not internally disjoint")]
    PathsShareVertex,
    #[error("path passes through a branch vertex")]
    PathHitsBranch,
    #[error("tree order not preserved on edge ({0},{1})")]
    OrderViolated(NodeId, NodeId),
    #[error("labels not preserved at node {0}")]
    LabelMismatch(NodeId),
    #[error("stray path keyed by non-edge {0}")]
    StrayPath(NodeId),
}

/// A subdivision witness: branch vertices `H(v)` per pattern node, and one
/// host path per pattern edge, keyed by the child end of the edge. Paths run
/// from the parent's branch vertex to the child's, inclusive.
#[derive(Clone)]
pub struct EmbeddingWitness<H: Host> {
    pub pattern: Arc<RootedTree>,
    pub branch: BTreeMap<NodeId, H::V>,
    pub paths: BTreeMap<NodeId, Vec<H::V>>,
}

impl<H: Host> PartialEq for EmbeddingWitness<H> {
    fn eq(&self, other: &Self) -> bool {
        self.pattern == other.pattern
            && self.branch == other.branch
            && self.paths == other.paths
    }
}

impl<H: Host> Eq for EmbeddingWitness<H> {}

impl<H: Host> fmt::Debug for EmbeddingWitness<H> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Witness(pattern n={}, root -> {})",
            self.pattern.len(),
            self.branch[&self.pattern.root_id()]
        )
    }
}

impl<H: Host> EmbeddingWitness<H> {
    /// The branch vertex H(v).
    pub fn image_of(&self, v: NodeId) -> Option<H::V> {
        self.branch.get(&v).copied()
    }

    /// All host vertices used by the witness (branch vertices and paths).
    pub fn vertex_set(&self) -> BTreeSet<H::V> {
        let mut s: BTreeSet<H::V> = self.branch.values().copied().collect();
        for p in self.paths.values() {
            s.extend(p.iter().copied());
        }
        s
    }

    pub fn disjoint_from(&self, other: &EmbeddingWitness<H>) -> bool {
        let a = self.vertex_set();
        other.vertex_set().iter().all(|v| !a.contains(v))
    }

    /// H(Sp): restriction to a subtree of the pattern (node ids preserved).
    pub fn restrict(&self, sub: &RootedTree) -> Result<EmbeddingWitness<H>, EmbedError> {
        // Every sub node must exist in the pattern with the same parent.
        for id in sub.preorder_ids() {
            if !self.pattern.contains(id) {
                return Err(TreeError::UnknownNode(id).into());
            }
            match sub.parent_of(id)? {
                None => {}
                Some(p) => {
                    if self.pattern.parent_of(id)? != Some(p) {
                        return Err(TreeError::NotASubtree(id, "parent differs").into());
                    }
                }
            }
        }
        let keep: BTreeSet<NodeId> = sub.node_set();
        let branch = self
            .branch
            .iter()
            .filter(|(k, _)| keep.contains(k))
            .map(|(k, v)| (*k, *v))
            .collect();
        let paths = self
            .paths
            .iter()
            .filter(|(c, _)| keep.contains(c) && sub.parent_of(**c).ok().flatten().is_some())
            .map(|(c, p)| (*c, p.clone()))
            .collect();
        Ok(EmbeddingWitness {
            pattern: Arc::new(sub.clone()),
            branch,
            paths,
        })
    }

    /// The subdivided image of the pattern path `ids[0] .. ids[last]`, where
    /// consecutive ids are pattern edges (parent to child). Returns the host
    /// walk including both branch endpoints.
    pub fn path_image(&self, ids: &[NodeId]) -> Option<Vec<H::V>> {
        let mut out: Vec<H::V> = vec![self.image_of(ids[0])?];
        for w in ids.windows(2) {
            let seg = self.paths.get(&w[1])?;
            if *seg.first()? != self.image_of(w[0])? {
                return None;
            }
            out.extend(seg[1..].iter().copied());
        }
        Some(out)
    }
}

/// Checks every witness invariant against the host; the error names the
/// first violated clause.
pub fn verify_witness<H: Host>(
    w: &EmbeddingWitness<H>,
    host: &H,
) -> Result<(), WitnessViolation> {
    let pat = &w.pattern;
    let mut images: BTreeMap<H::V, NodeId> = BTreeMap::new();
    for id in pat.preorder_ids() {
        let v = *w.branch.get(&id).ok_or(WitnessViolation::BranchNotTotal(id))?;
        if !host.has_vertex(v) {
            return Err(WitnessViolation::BranchOutsideHost(id));
        }
        if images.insert(v, id).is_some() {
            return Err(WitnessViolation::BranchNotInjective(id));
        }
        if let (Some(pl), Some(hl)) = (pat.label_of(id).unwrap_or(None), host.label(v)) {
            if pl != hl {
                return Err(WitnessViolation::LabelMismatch(id));
            }
        }
    }
    for c in w.paths.keys() {
        if !pat.contains(*c) || pat.parent_of(*c).map_err(|_| WitnessViolation::StrayPath(*c))?.is_none() {
            return Err(WitnessViolation::StrayPath(*c));
        }
    }
    let mut interior_seen: BTreeSet<H::V> = BTreeSet::new();
    for (p, c) in pat.edges() {
        let path = w.paths.get(&c).ok_or(WitnessViolation::EdgeMissing(p, c))?;
        let (bp, bc) = (w.branch[&p], w.branch[&c]);
        if path.len() < 2 || *path.first().unwrap() != bp || *path.last().unwrap() != bc {
            return Err(WitnessViolation::EndpointMismatch(p, c));
        }
        let distinct: BTreeSet<_> = path.iter().collect();
        if distinct.len() != path.len()
            || !path.iter().all(|&v| host.has_vertex(v))
            || !path.windows(2).all(|ab| host.adjacent(ab[0], ab[1]))
        {
            return Err(WitnessViolation::NotAPath(p, c));
        }
        for &v in &path[1..path.len() - 1] {
            if images.contains_key(&v) {
                return Err(WitnessViolation::PathHitsBranch);
            }
            if !interior_seen.insert(v) {
                return Err(WitnessViolation::PathsShareVertex);
            }
        }
        if let Some(false) = host.order_leq(bp, bc) {
            return Err(WitnessViolation::OrderViolated(p, c));
        }
    }
    Ok(())
}

/// Witness composition: from `inner : S ≤_r T` (tree host) and
/// `outer : T ≤ U`, builds the witness of `S ≤ U`. The inner host tree must
/// be the outer pattern (same node ids).
pub fn compose_witnesses<H: Host>(
    inner: &EmbeddingWitness<RootedTree>,
    outer: &EmbeddingWitness<H>,
) -> Result<EmbeddingWitness<H>, EmbedError> {
    let mut branch = BTreeMap::new();
    for (s, t) in &inner.branch {
        let u = outer.image_of(*t).ok_or(EmbedError::PatternMismatch)?;
        branch.insert(*s, u);
    }
    let mut paths = BTreeMap::new();
    for (_p, c) in inner.pattern.edges() {
        let tpath = &inner.paths[&c];
        let upath = outer.path_image(tpath).ok_or(EmbedError::PatternMismatch)?;
        paths.insert(c, upath);
    }
    Ok(EmbeddingWitness {
        pattern: inner.pattern.clone(),
        branch,
        paths,
    })
}

pub type TreeWitness = EmbeddingWitness<RootedTree>;
pub type GraphWitness = EmbeddingWitness<FiniteGraph>;
