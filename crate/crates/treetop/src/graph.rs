//! Finite graphs over tagged vertex ids.
//!
//! Truncations of periodic presentations, and any ad-hoc finite host, use the
//! same indexed adjacency structure. Vertex ids order as Base < Unit < Global
//! with units sorted by (copy, local); that order is the tie-break used by
//! every deterministic search in the crate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// A vertex of a finitely presented host graph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexId {
    /// Vertex of the finite base graph.
    Base(u32),
    /// Vertex `u` of unit copy `n`: `Unit(n, u)`.
    Unit(u32, u32),
    /// Global vertex, adjacent to a fixed local pattern in every copy.
    Global(u32),
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Base(b) => write!(f, "b{b}"),
            VertexId::Unit(n, u) => write!(f, "u{n}.{u}"),
            VertexId::Global(g) => write!(f, "g{g}"),
        }
    }
}

impl FromStr for VertexId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad vertex id `{s}`");
        match s.as_bytes().first() {
            Some(b'b') => s[1..].parse().map(VertexId::Base).map_err(|_| bad()),
            Some(b'g') => s[1..].parse().map(VertexId::Global).map_err(|_| bad()),
            Some(b'u') => {
                let (n, u) = s[1..].split_once('.').ok_or_else(bad)?;
                Ok(VertexId::Unit(
                    n.parse().map_err(|_| bad())?,
                    u.parse().map_err(|_| bad())?,
                ))
            }
            _ => Err(bad()),
        }
    }
}

impl VertexId {
    /// Copy index for depth scheduling; base and globals count as 0.
    pub fn copy_index(&self) -> u32 {
        match self {
            VertexId::Unit(n, _) => *n,
            _ => 0,
        }
    }
}

/// Indexed finite graph with deterministic (sorted) adjacency.
#[derive(Clone)]
pub struct FiniteGraph {
    verts: Vec<VertexId>,
    index: BTreeMap<VertexId, usize>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl fmt::Debug for FiniteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGraph(n={}, m={})", self.len(), self.edge_count)
    }
}

impl FiniteGraph {
    pub fn from_edges(vertices: &[VertexId], edges: &[(VertexId, VertexId)]) -> FiniteGraph {
        let mut all: BTreeSet<VertexId> = vertices.iter().copied().collect();
        for &(a, b) in edges {
            all.insert(a);
            all.insert(b);
        }
        let verts: Vec<VertexId> = all.into_iter().collect();
        let index: BTreeMap<VertexId, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); verts.len()];
        let mut edge_count = 0;
        for &(a, b) in edges {
            let (ia, ib) = (index[&a], index[&b]);
            if ia != ib && adj[ia].insert(ib) {
                adj[ib].insert(ia);
                edge_count += 1;
            }
        }
        FiniteGraph {
            verts,
            index,
            adj: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
            edge_count,
        }
    }

    /// Convenience for tests: vertices 0..n as `Base(i)`.
    pub fn from_usize_edges(n: usize, edges: &[(usize, usize)]) -> FiniteGraph {
        let vs: Vec<VertexId> = (0..n as u32).map(VertexId::Base).collect();
        let es: Vec<(VertexId, VertexId)> = edges
            .iter()
            .map(|&(a, b)| (VertexId::Base(a as u32), VertexId::Base(b as u32)))
            .collect();
        FiniteGraph::from_edges(&vs, &es)
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    pub fn idx(&self, v: VertexId) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn vertex(&self, i: usize) -> VertexId {
        self.verts[i]
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.verts
    }

    pub fn neighbors_idx(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        match self.idx(v) {
            Some(i) => self.adj[i].iter().map(|&j| self.verts[j]).collect(),
            None => Vec::new(),
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.idx(v).map_or(0, |i| self.adj[i].len())
    }

    pub fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        match (self.idx(a), self.idx(b)) {
            (Some(i), Some(j)) => self.adj[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    /// Edges as (smaller, larger) pairs, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &j in nbrs {
                if i < j {
                    out.push((self.verts[i], self.verts[j]));
                }
            }
        }
        out
    }

    /// Connected component of `seed` in the graph minus `removed`.
    pub fn component_without(
        &self,
        seed: VertexId,
        removed: &BTreeSet<VertexId>,
    ) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        let seed = match self.idx(seed) {
            Some(i) if !removed.contains(&self.verts[i]) => i,
            _ => return out,
        };
        let mut seen = vec![false; self.len()];
        seen[seed] = true;
        let mut stack = vec![seed];
        while let Some(v) = stack.pop() {
            out.insert(self.verts[v]);
            for &w in &self.adj[v] {
                if !seen[w] && !removed.contains(&self.verts[w]) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out
    }

    /// All connected components of the graph minus `removed`, each sorted,
    /// listed by their least vertex.
    pub fn components_without(&self, removed: &BTreeSet<VertexId>) -> Vec<BTreeSet<VertexId>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for i in 0..self.len() {
            if seen[i] || removed.contains(&self.verts[i]) {
                continue;
            }
            let comp = self.component_without(self.verts[i], removed);
            for v in &comp {
                seen[self.index[v]] = true;
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        self.component_without(self.verts[0], &BTreeSet::new()).len() == self.len()
    }

    /// Checks that `seq` is a path: consecutive vertices adjacent, no repeats.
    pub fn is_path(&self, seq: &[VertexId]) -> bool {
        if seq.is_empty() {
            return false;
        }
        let distinct: BTreeSet<_> = seq.iter().collect();
        if distinct.len() != seq.len() {
            return false;
        }
        seq.iter().all(|&v| self.contains(v))
            && seq.windows(2).all(|w| self.adjacent(w[0], w[1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_basics() {
        let g = FiniteGraph::from_usize_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        assert_eq!(g.len(), 6);
        assert_eq!(g.edge_count(), 6);
        assert!(g.adjacent(VertexId::Base(0), VertexId::Base(5)));
        assert!(g.is_connected());
        let mut cut = BTreeSet::new();
        cut.insert(VertexId::Base(1));
        cut.insert(VertexId::Base(4));
        let comps = g.components_without(&cut);
        assert_eq!(comps.len(), 2);
    }

    #[test]
    fn vertex_id_roundtrip_and_order() {
        for s in ["b3", "u2.7", "g0"] {
            let v: VertexId = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!(VertexId::Base(9) < VertexId::Unit(0, 0));
        assert!(VertexId::Unit(1, 9) < VertexId::Unit(2, 0));
        assert!(VertexId::Unit(9, 9) < VertexId::Global(0));
        assert!("u3".parse::<VertexId>().is_err());
    }
}
