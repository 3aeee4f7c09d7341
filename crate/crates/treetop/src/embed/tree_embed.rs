//! Rooted topological-minor search between rooted trees.
//!
//! `S` embeds at a host node `t` iff the root of `S` can anchor at some
//! `t' ≥ t` and the child subtrees of `S` match into pairwise distinct child
//! branches of `t'`, recursively; the child assignment is a maximum bipartite
//! matching. Memoized on (pattern node, host node).

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::matching::{hopcroft_karp, saturates_left};
use crate::tree::{NodeId, RootedTree};

use super::{EmbeddingWitness, TreeWitness};

struct View {
    ids: Vec<NodeId>,
    children: Vec<Vec<usize>>,
    label: Vec<Option<u32>>,
    subsize: Vec<usize>,
    height: Vec<u32>,
}

impl View {
    fn new(t: &RootedTree) -> View {
        let ids = t.preorder_ids();
        let rank: BTreeMap<NodeId, usize> =
            ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let n = ids.len();
        let mut children = vec![Vec::new(); n];
        let mut label = vec![None; n];
        for (i, &id) in ids.iter().enumerate() {
            children[i] = t
                .children_of(id)
                .unwrap()
                .into_iter()
                .map(|c| rank[&c])
                .collect();
            label[i] = t.label_of(id).unwrap();
        }
        let mut subsize = vec![1usize; n];
        let mut height = vec![0u32; n];
        for i in (0..n).rev() {
            for &c in &children[i] {
                subsize[i] += subsize[c];
                height[i] = height[i].max(height[c] + 1);
            }
        }
        View {
            ids,
            children,
            label,
            subsize,
            height,
        }
    }
}

/// Memoized embedding decision procedure for one (pattern, host) pair.
pub struct TreeEmbedder<'a> {
    s: &'a RootedTree,
    t: &'a RootedTree,
    sv: View,
    tv: View,
    labelled: bool,
    anchored: Vec<Option<bool>>,
    floating: Vec<Option<bool>>,
}

impl<'a> TreeEmbedder<'a> {
    pub fn new(s: &'a RootedTree, t: &'a RootedTree) -> TreeEmbedder<'a> {
        let sv = View::new(s);
        let tv = View::new(t);
        let n = sv.ids.len() * tv.ids.len();
        TreeEmbedder {
            s,
            t,
            sv,
            tv,
            labelled: s.is_labelled() && t.is_labelled(),
            anchored: vec![None; n],
            floating: vec![None; n],
        }
    }

    fn at(&self, si: usize, ti: usize) -> usize {
        si * self.tv.ids.len() + ti
    }

    /// H(s) = t exactly.
    fn anchored(&mut self, si: usize, ti: usize) -> bool {
        if let Some(v) = self.anchored[self.at(si, ti)] {
            return v;
        }
        let v = self.anchored_inner(si, ti);
        let at = self.at(si, ti);
        self.anchored[at] = Some(v);
        v
    }

    fn anchored_inner(&mut self, si: usize, ti: usize) -> bool {
        if self.labelled && self.sv.label[si] != self.tv.label[ti] {
            return false;
        }
        if self.sv.subsize[si] > self.tv.subsize[ti] || self.sv.height[si] > self.tv.height[ti] {
            return false;
        }
        let ks = self.sv.children[si].clone();
        let kt = self.tv.children[ti].clone();
        if ks.len() > kt.len() {
            return false;
        }
        if ks.is_empty() {
            return true;
        }
        let mut adj = vec![Vec::new(); ks.len()];
        for (l, &sc) in ks.iter().enumerate() {
            for (r, &tc) in kt.iter().enumerate() {
                if self.floating(sc, tc) {
                    adj[l].push(r);
                }
            }
            if adj[l].is_empty() {
                return false;
            }
        }
        saturates_left(ks.len(), kt.len(), &adj)
    }

    /// H(s) anywhere in T_t.
    fn floating(&mut self, si: usize, ti: usize) -> bool {
        if let Some(v) = self.floating[self.at(si, ti)] {
            return v;
        }
        // placeholder blocks re-entry on the same pair (trees are acyclic, so
        // plain recursion terminates; the cell is only read after write)
        let mut v = self.anchored(si, ti);
        if !v {
            let kt = self.tv.children[ti].clone();
            v = kt.into_iter().any(|tc| self.floating(si, tc));
        }
        let at = self.at(si, ti);
        self.floating[at] = Some(v);
        v
    }

    /// Decision: (S, root) ≤_r (T, root).
    pub fn embeds(&mut self) -> bool {
        if self.sv.ids.is_empty() {
            return true;
        }
        self.floating(0, 0)
    }

    /// Decision with the pattern root forced onto the host root.
    pub fn embeds_anchored(&mut self) -> bool {
        self.anchored(0, 0)
    }

    /// Lexicographically least witness under canonical child order: the
    /// sequence of host pre-order ranks of branch images, read in pattern
    /// pre-order, is minimized.
    pub fn witness(&mut self) -> Option<TreeWitness> {
        if !self.embeds() {
            return None;
        }
        let anchor = (0..self.tv.ids.len()).find(|&ti| self.anchored(0, ti))?;
        self.extract(anchor)
    }

    /// Witness with the pattern root anchored at the host root.
    pub fn witness_anchored(&mut self) -> Option<TreeWitness> {
        if !self.embeds_anchored() {
            return None;
        }
        self.extract(0)
    }

    fn extract(&mut self, root_anchor: usize) -> Option<TreeWitness> {
        let mut branch: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        let mut paths: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        self.assign(0, root_anchor, &mut branch, &mut paths)?;
        Some(EmbeddingWitness {
            pattern: Arc::new(self.s.clone()),
            branch,
            paths,
        })
    }

    /// Least anchored vertex (by host pre-order) for pattern node `si` within
    /// the host subtree below `b`.
    fn min_anchor(&mut self, si: usize, b: usize) -> Option<usize> {
        // host pre-order indices of T_b form the contiguous range
        // [b, b + subsize(b))
        (b..b + self.tv.subsize[b]).find(|&ti| self.anchored(si, ti))
    }

    fn assign(
        &mut self,
        si: usize,
        ti: usize,
        branch: &mut BTreeMap<NodeId, NodeId>,
        paths: &mut BTreeMap<NodeId, Vec<NodeId>>,
    ) -> Option<()> {
        branch.insert(self.sv.ids[si], self.tv.ids[ti]);
        let ks = self.sv.children[si].clone();
        let mut avail: Vec<usize> = self.tv.children[ti].clone();
        for (pos, &sc) in ks.iter().enumerate() {
            // candidate branches sorted by their least anchor vertex
            let mut cands: Vec<(usize, usize)> = Vec::new();
            for &b in &avail {
                if self.floating(sc, b) {
                    if let Some(v) = self.min_anchor(sc, b) {
                        cands.push((v, b));
                    }
                }
            }
            cands.sort_unstable();
            let rest: Vec<usize> = ks[pos + 1..].to_vec();
            let mut chosen = None;
            for (v, b) in cands {
                let remaining: Vec<usize> =
                    avail.iter().copied().filter(|&x| x != b).collect();
                if self.rest_feasible(&rest, &remaining) {
                    chosen = Some((v, b));
                    break;
                }
            }
            let (v, b) = chosen?;
            avail.retain(|&x| x != b);
            // unique host path from ti down to v
            let path = self.host_path(ti, v);
            paths.insert(self.sv.ids[sc], path);
            self.assign(sc, v, branch, paths)?;
        }
        Some(())
    }

    fn rest_feasible(&mut self, rest: &[usize], avail: &[usize]) -> bool {
        if rest.is_empty() {
            return true;
        }
        if rest.len() > avail.len() {
            return false;
        }
        let mut adj = vec![Vec::new(); rest.len()];
        for (l, &sc) in rest.iter().enumerate() {
            for (r, &b) in avail.iter().enumerate() {
                if self.floating(sc, b) {
                    adj[l].push(r);
                }
            }
        }
        hopcroft_karp(rest.len(), avail.len(), &adj)
            .iter()
            .all(|m| m.is_some())
    }

    fn host_path(&self, from: usize, to: usize) -> Vec<NodeId> {
        let mut up = vec![self.tv.ids[to]];
        let mut cur = self.tv.ids[to];
        while cur != self.tv.ids[from] {
            cur = self.t.parent_of(cur).unwrap().unwrap();
            up.push(cur);
        }
        up.reverse();
        up
    }
}

/// Decision form of [`find_rooted_embedding`].
pub fn rooted_embeds(s: &RootedTree, t: &RootedTree) -> bool {
    TreeEmbedder::new(s, t).embeds()
}

/// Searches for a rooted subdivision of `S` in the rooted tree `T`; returns
/// the lexicographically least witness under canonical child order, or `None`
/// when `(S, root) ≰_r (T, root)`. When both trees are labelled the witness
/// preserves labels on branch vertices.
pub fn find_rooted_embedding(s: &RootedTree, t: &RootedTree) -> Option<TreeWitness> {
    TreeEmbedder::new(s, t).witness()
}

/// Like [`find_rooted_embedding`] but with the pattern root mapped to the
/// host root (used for root-fixing forest comparisons).
pub fn find_rooted_embedding_anchored(s: &RootedTree, t: &RootedTree) -> Option<TreeWitness> {
    TreeEmbedder::new(s, t).witness_anchored()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::verify_witness;
    use crate::gen;
    use crate::tree::NodeId;

    fn n(i: u32) -> NodeId {
        NodeId(i)
    }

    #[test]
    fn short_path_into_long_path() {
        let s = gen::path_tree(2);
        let t = gen::path_tree(4);
        let w = find_rooted_embedding(&s, &t).expect("paths embed in longer paths");
        verify_witness(&w, &t).unwrap();
        // lexicographically least witness hugs the host root
        assert_eq!(w.branch[&n(0)], n(0));
        assert_eq!(w.branch[&n(1)], n(1));
    }

    #[test]
    fn star_needs_degree() {
        // K_{1,3} rooted at its center cannot map into a max-degree-2 host
        let s = gen::star_tree(3);
        for len in 2..7 {
            let t = gen::path_tree(len);
            assert!(find_rooted_embedding(&s, &t).is_none());
        }
    }

    #[test]
    fn reflexivity_small() {
        for t in [gen::path_tree(5), gen::star_tree(4), gen::spider(&[1, 2, 3])] {
            let w = find_rooted_embedding(&t, &t).expect("reflexive");
            verify_witness(&w, &t).unwrap();
            for id in t.preorder_ids() {
                assert_eq!(w.branch[&id], id);
            }
        }
    }

    #[test]
    fn label_mismatch_blocks() {
        use std::collections::BTreeMap;
        let s = gen::path_tree(2);
        let t = gen::path_tree(2);
        let l1: BTreeMap<NodeId, u32> = [(n(0), 1), (n(1), 1)].into();
        let l2: BTreeMap<NodeId, u32> = [(n(0), 1), (n(1), 2)].into();
        let s = s.with_labels(&l1).unwrap();
        let t2 = t.with_labels(&l2).unwrap();
        assert!(find_rooted_embedding(&s, &t2).is_none());
        let t1 = t.with_labels(&l1).unwrap();
        assert!(find_rooted_embedding(&s, &t1).is_some());
    }

    #[test]
    fn anchored_vs_floating() {
        // P2 anchors at the root of P3; a spider child does not.
        let s = gen::path_tree(2);
        let t = gen::path_tree(3);
        assert!(find_rooted_embedding_anchored(&s, &t).is_some());
        // pattern: star with 2 leaves; host: path — anchored fails, floating fails too
        let star = gen::star_tree(2);
        assert!(find_rooted_embedding_anchored(&star, &t).is_none());
        // host: root with two children; star anchors at root
        let y = gen::spider(&[1, 1]);
        assert!(find_rooted_embedding_anchored(&star, &y).is_some());
    }
}
