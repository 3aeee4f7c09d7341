//! Finite rooted trees with a tree order, stable node ids and optional labels.
//!
//! Node ids are small integers that survive subtree extraction, so maps keyed
//! by nodes (branch maps of witnesses, slice sets) stay meaningful across
//! restrictions. Child lists keep insertion order; all search tie-breaking
//! downstream refers to that order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Identifier of a tree node. Stable across subtree extraction.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("node {0} not connected to the root")]
    Unrooted(NodeId),
    #[error("parent cycle through node {0}")]
    Cycle(NodeId),
    #[error("labels must be total: node {0} unlabelled")]
    PartialLabels(NodeId),
    #[error("{0} is not a subtree of the pattern: {1}")]
    NotASubtree(NodeId, &'static str),
    #[error("subtree must contain the root")]
    MissingRoot,
}

/// A finite rooted tree. Immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct RootedTree {
    ids: Vec<NodeId>,
    slot_of: BTreeMap<NodeId, usize>,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<u32>,
    preorder: Vec<usize>,
    pre_rank: Vec<usize>,
    labels: Option<Vec<u32>>,
}

impl fmt::Debug for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootedTree(root={}, n={})", self.root_id(), self.len())
    }
}

impl RootedTree {
    /// Builds a tree from `(node, parent)` records given in insertion order.
    /// The root appears with `parent = None`. Children keep insertion order.
    pub fn build(records: &[(NodeId, Option<NodeId>)]) -> Result<Self, TreeError> {
        Self::build_labelled_opt(records, None)
    }

    /// Builds a labelled tree; `labels` must cover every node.
    pub fn build_labelled(
        records: &[(NodeId, Option<NodeId>)],
        labels: &BTreeMap<NodeId, u32>,
    ) -> Result<Self, TreeError> {
        Self::build_labelled_opt(records, Some(labels))
    }

    fn build_labelled_opt(
        records: &[(NodeId, Option<NodeId>)],
        labels: Option<&BTreeMap<NodeId, u32>>,
    ) -> Result<Self, TreeError> {
        let mut slot_of = BTreeMap::new();
        let mut ids = Vec::with_capacity(records.len());
        for (id, _) in records {
            if slot_of.insert(*id, ids.len()).is_some() {
                return Err(TreeError::DuplicateNode(*id));
            }
            ids.push(*id);
        }
        let n = ids.len();
        let mut parent = vec![None; n];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut root = None;
        for (i, (id, p)) in records.iter().enumerate() {
            match p {
                None => {
                    if root.is_some() {
                        return Err(TreeError::Unrooted(*id));
                    }
                    root = Some(i);
                }
                Some(p) => {
                    let ps = *slot_of.get(p).ok_or(TreeError::UnknownNode(*p))?;
                    parent[i] = Some(ps);
                    children[ps].push(i);
                }
            }
        }
        let root = root.ok_or(TreeError::MissingRoot)?;
        // Depth assignment doubles as the acyclicity / connectivity check.
        let mut depth = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        depth[root] = 0;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            for &c in &children[v] {
                if depth[c] != u32::MAX {
                    return Err(TreeError::Cycle(ids[c]));
                }
                depth[c] = depth[v] + 1;
                stack.push(c);
            }
        }
        if order.len() != n {
            let stray = (0..n).find(|&i| depth[i] == u32::MAX).unwrap();
            return Err(TreeError::Unrooted(ids[stray]));
        }
        let labels = match labels {
            None => None,
            Some(m) => {
                let mut v = Vec::with_capacity(n);
                for &id in &ids {
                    v.push(*m.get(&id).ok_or(TreeError::PartialLabels(id))?);
                }
                Some(v)
            }
        };
        let mut t = RootedTree {
            ids,
            slot_of,
            root,
            parent,
            children,
            depth,
            preorder: Vec::new(),
            pre_rank: Vec::new(),
            labels,
        };
        t.rebuild_preorder();
        Ok(t)
    }

    fn rebuild_preorder(&mut self) {
        let n = self.ids.len();
        self.preorder = Vec::with_capacity(n);
        self.pre_rank = vec![0; n];
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            self.pre_rank[v] = self.preorder.len();
            self.preorder.push(v);
            for &c in self.children[v].iter().rev() {
                stack.push(c);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn root_id(&self) -> NodeId {
        self.ids[self.root]
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.slot_of.contains_key(&id)
    }

    fn slot(&self, id: NodeId) -> Result<usize, TreeError> {
        self.slot_of.get(&id).copied().ok_or(TreeError::UnknownNode(id))
    }

    /// Node ids in canonical pre-order (root first, children in child order).
    pub fn preorder_ids(&self) -> Vec<NodeId> {
        self.preorder.iter().map(|&s| self.ids[s]).collect()
    }

    /// Position of a node in the canonical pre-order.
    pub fn pre_rank(&self, id: NodeId) -> Result<usize, TreeError> {
        Ok(self.pre_rank[self.slot(id)?])
    }

    pub fn parent_of(&self, id: NodeId) -> Result<Option<NodeId>, TreeError> {
        Ok(self.parent[self.slot(id)?].map(|s| self.ids[s]))
    }

    /// N⁺(t): the children of `t` in canonical order. For an edge `e = t t'`
    /// of the tree, `e⁻ = t` and `e⁺ = t'`.
    pub fn children_of(&self, id: NodeId) -> Result<Vec<NodeId>, TreeError> {
        Ok(self.children[self.slot(id)?]
            .iter()
            .map(|&s| self.ids[s])
            .collect())
    }

    pub fn degree(&self, id: NodeId) -> Result<usize, TreeError> {
        let s = self.slot(id)?;
        Ok(self.children[s].len() + usize::from(self.parent[s].is_some()))
    }

    pub fn depth_of(&self, id: NodeId) -> Result<u32, TreeError> {
        Ok(self.depth[self.slot(id)?])
    }

    /// Height of the subtree below `id` (0 for a leaf).
    pub fn height_below(&self, id: NodeId) -> Result<u32, TreeError> {
        let top = self.slot(id)?;
        let mut h = 0;
        let mut stack = vec![top];
        while let Some(v) = stack.pop() {
            h = h.max(self.depth[v] - self.depth[top]);
            stack.extend(self.children[v].iter().copied());
        }
        Ok(h)
    }

    pub fn label_of(&self, id: NodeId) -> Result<Option<u32>, TreeError> {
        let s = self.slot(id)?;
        Ok(self.labels.as_ref().map(|l| l[s]))
    }

    pub fn is_labelled(&self) -> bool {
        self.labels.is_some()
    }

    /// Tree order: `x ≤ y` iff the unique root–`y` path passes through `x`.
    pub fn leq(&self, x: NodeId, y: NodeId) -> Result<bool, TreeError> {
        let xs = self.slot(x)?;
        let mut v = self.slot(y)?;
        let dx = self.depth[xs];
        while self.depth[v] > dx {
            v = self.parent[v].unwrap();
        }
        Ok(v == xs)
    }

    /// T_t: the subtree rooted at `t`, with node ids and child order preserved
    /// and labels restricted.
    pub fn subtree_at(&self, t: NodeId) -> Result<RootedTree, TreeError> {
        let top = self.slot(t)?;
        let mut keep = Vec::new();
        let mut stack = vec![top];
        while let Some(v) = stack.pop() {
            keep.push(v);
            for &c in self.children[v].iter().rev() {
                stack.push(c);
            }
        }
        self.induced(&keep, top)
    }

    /// Restriction to an explicit node set that must form a subtree: one
    /// minimal node, every other node's parent also in the set.
    pub fn induced_subtree(&self, nodes: &BTreeSet<NodeId>) -> Result<RootedTree, TreeError> {
        if nodes.is_empty() {
            return Err(TreeError::MissingRoot);
        }
        let mut slots = Vec::with_capacity(nodes.len());
        for &id in nodes {
            slots.push(self.slot(id)?);
        }
        let inset: BTreeSet<usize> = slots.iter().copied().collect();
        let mut top = None;
        for &s in &slots {
            match self.parent[s] {
                Some(p) if inset.contains(&p) => {}
                _ => {
                    if top.replace(s).is_some() {
                        return Err(TreeError::NotASubtree(self.ids[s], "not connected"));
                    }
                }
            }
        }
        let top = top.ok_or(TreeError::NotASubtree(self.ids[slots[0]], "no minimal node"))?;
        // Keep canonical order by walking the host tree from the top.
        let mut keep = Vec::new();
        let mut stack = vec![top];
        while let Some(v) = stack.pop() {
            keep.push(v);
            for &c in self.children[v].iter().rev() {
                if inset.contains(&c) {
                    stack.push(c);
                }
            }
        }
        if keep.len() != nodes.len() {
            return Err(TreeError::NotASubtree(self.ids[top], "not connected"));
        }
        self.induced(&keep, top)
    }

    fn induced(&self, keep: &[usize], top: usize) -> Result<RootedTree, TreeError> {
        let mut records = Vec::with_capacity(keep.len());
        let keepset: BTreeSet<usize> = keep.iter().copied().collect();
        for &v in keep {
            let p = if v == top {
                None
            } else {
                let p = self.parent[v].unwrap();
                debug_assert!(keepset.contains(&p));
                Some(self.ids[p])
            };
            records.push((self.ids[v], p));
        }
        let labels = self.labels.as_ref().map(|l| {
            keep.iter()
                .map(|&v| (self.ids[v], l[v]))
                .collect::<BTreeMap<_, _>>()
        });
        match labels {
            Some(l) => RootedTree::build_labelled(&records, &l),
            None => RootedTree::build(&records),
        }
    }

    /// Truncates the subtree to `depth` levels below the root (0 = root only).
    pub fn truncate_depth(&self, depth: u32) -> RootedTree {
        let keep: Vec<usize> = self
            .preorder
            .iter()
            .copied()
            .filter(|&v| self.depth[v] - self.depth[self.root] <= depth)
            .collect();
        self.induced(&keep, self.root).expect("depth cut is a subtree")
    }

    /// Drops labels.
    pub fn unlabelled(&self) -> RootedTree {
        let mut t = self.clone();
        t.labels = None;
        t
    }

    /// Re-labels the tree with the given total labelling.
    pub fn with_labels(&self, labels: &BTreeMap<NodeId, u32>) -> Result<RootedTree, TreeError> {
        let records: Vec<(NodeId, Option<NodeId>)> = self
            .ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, self.parent[i].map(|p| self.ids[p])))
            .collect();
        RootedTree::build_labelled(&records, labels)
    }

    /// All node ids, ascending.
    pub fn ids_sorted(&self) -> Vec<NodeId> {
        let mut v = self.ids.clone();
        v.sort();
        v
    }

    /// Edges as (parent, child) pairs in pre-order of the child.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.preorder
            .iter()
            .filter_map(|&v| self.parent[v].map(|p| (self.ids[p], self.ids[v])))
            .collect()
    }

    pub fn node_set(&self) -> BTreeSet<NodeId> {
        self.ids.iter().copied().collect()
    }
}

/// A finite expansion of a tree that may stand for an infinite one: nodes
/// whose child list was cut at the expansion horizon are `infinite`, leaves
/// that are truncation cuts rather than real leaves are `truncated`.
#[derive(Clone, Debug)]
pub struct TreeSource {
    pub tree: RootedTree,
    pub infinite: BTreeSet<NodeId>,
    pub truncated: BTreeSet<NodeId>,
}

impl TreeSource {
    pub fn finite(tree: RootedTree) -> Self {
        TreeSource {
            tree,
            infinite: BTreeSet::new(),
            truncated: BTreeSet::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(i: u32) -> NodeId {
        NodeId(i)
    }

    pub(crate) fn path(len: usize) -> RootedTree {
        let mut rec = vec![(n(0), None)];
        for i in 1..len as u32 {
            rec.push((n(i), Some(n(i - 1))));
        }
        RootedTree::build(&rec).unwrap()
    }

    #[test]
    fn root_is_minimum_and_reflexive() {
        let t = path(5);
        for i in 0..5 {
            assert!(t.leq(n(0), n(i)).unwrap());
            assert!(t.leq(n(i), n(i)).unwrap());
        }
    }

    #[test]
    fn path_order_is_linear() {
        // path a-b-c rooted at a: c <= b is false
        let t = path(3);
        assert!(!t.leq(n(2), n(1)).unwrap());
        assert!(t.leq(n(1), n(2)).unwrap());
    }

    #[test]
    fn unknown_node_is_input_error() {
        let t = path(3);
        assert!(matches!(t.leq(n(9), n(0)), Err(TreeError::UnknownNode(_))));
        assert!(matches!(t.subtree_at(n(9)), Err(TreeError::UnknownNode(_))));
        assert!(matches!(t.children_of(n(9)), Err(TreeError::UnknownNode(_))));
    }

    #[test]
    fn subtree_preserves_ids() {
        let t = path(3);
        let s = t.subtree_at(n(1)).unwrap();
        assert_eq!(s.root_id(), n(1));
        assert_eq!(s.len(), 2);
        assert!(s.contains(n(2)));
        let whole = t.subtree_at(n(0)).unwrap();
        assert_eq!(whole, t);
    }

    #[test]
    fn star_children_in_order() {
        let rec = vec![
            (n(0), None),
            (n(1), Some(n(0))),
            (n(2), Some(n(0))),
            (n(3), Some(n(0))),
        ];
        let t = RootedTree::build(&rec).unwrap();
        assert_eq!(t.children_of(n(0)).unwrap(), vec![n(1), n(2), n(3)]);
        assert_eq!(t.children_of(n(1)).unwrap(), Vec::<NodeId>::new());
    }

    #[test]
    fn cycle_rejected() {
        // Parent references that loop must fail.
        let rec = vec![(n(0), None), (n(1), Some(n(2))), (n(2), Some(n(1)))];
        assert!(RootedTree::build(&rec).is_err());
    }
}
