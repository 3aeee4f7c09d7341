//! Generators for trees, finite graphs and host presentations used by tests,
//! benchmarks and the shipped example inputs.

use std::collections::BTreeMap;

use crate::graph::FiniteGraph;
use crate::pgraph::{GlobalSpec, Presentation, SpineSpec};
use crate::tree::{NodeId, RootedTree, TreeSource};

fn n(i: u32) -> NodeId {
    NodeId(i)
}

/// Path with `len` vertices rooted at one end.
pub fn path_tree(len: usize) -> RootedTree {
    let mut rec = vec![(n(0), None)];
    for i in 1..len as u32 {
        rec.push((n(i), Some(n(i - 1))));
    }
    RootedTree::build(&rec).unwrap()
}

/// Star with `leaves` leaves rooted at the center.
pub fn star_tree(leaves: usize) -> RootedTree {
    let mut rec = vec![(n(0), None)];
    for i in 1..=leaves as u32 {
        rec.push((n(i), Some(n(0))));
    }
    RootedTree::build(&rec).unwrap()
}

/// Spider: center with one path leg per entry, leg `i` having `legs[i]`
/// edges. Rooted at the center.
pub fn spider(legs: &[usize]) -> RootedTree {
    let mut rec = vec![(n(0), None)];
    let mut next = 1u32;
    for &len in legs {
        let mut prev = n(0);
        for _ in 0..len {
            rec.push((n(next), Some(prev)));
            prev = n(next);
            next += 1;
        }
    }
    RootedTree::build(&rec).unwrap()
}

/// Comb: a spine of `spine` vertices, each spine vertex carrying one tooth
/// path with `tooth` edges. Rooted at the spine start. Spine node ids come
/// first (0..spine), teeth after.
pub fn comb_tree(spine: usize, tooth: usize) -> RootedTree {
    let mut rec = vec![(n(0), None)];
    for i in 1..spine as u32 {
        rec.push((n(i), Some(n(i - 1))));
    }
    let mut next = spine as u32;
    for i in 0..spine as u32 {
        let mut prev = n(i);
        for _ in 0..tooth {
            rec.push((n(next), Some(prev)));
            prev = n(next);
            next += 1;
        }
    }
    RootedTree::build(&rec).unwrap()
}

/// Comb expansion standing for the infinite comb: the spine tip is marked as
/// a truncation cut.
pub fn comb_source(spine: usize, tooth: usize) -> TreeSource {
    let mut src = TreeSource::finite(comb_tree(spine, tooth));
    src.truncated.insert(n(spine as u32 - 1));
    src
}

/// Ray expansion: a path whose tip is a truncation cut.
pub fn ray_source(len: usize) -> TreeSource {
    let mut src = TreeSource::finite(path_tree(len));
    src.truncated.insert(n(len as u32 - 1));
    src
}

/// Hub expansion standing for a tree with one vertex of infinite degree: the
/// root's child `hub` carries `arms` paths of `arm_len` edges each; the hub
/// is marked infinite-degree.
pub fn hub_source(arms: usize, arm_len: usize) -> TreeSource {
    let mut rec = vec![(n(0), None), (n(1), Some(n(0)))];
    let mut next = 2u32;
    for _ in 0..arms {
        let mut prev = n(1);
        for _ in 0..arm_len {
            rec.push((n(next), Some(prev)));
            prev = n(next);
            next += 1;
        }
    }
    let mut src = TreeSource::finite(RootedTree::build(&rec).unwrap());
    src.infinite.insert(n(1));
    src
}

/// All rooted trees with exactly `size` nodes as parent vectors
/// (`parent[i] < i`), deduplicated up to rooted isomorphism. Node ids are
/// 0..size with 0 the root.
pub fn all_rooted_trees(size: usize) -> Vec<RootedTree> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut parents = vec![0usize; size];
    enumerate_parents(1, size, &mut parents, &mut |p| {
        let rec: Vec<(NodeId, Option<NodeId>)> = (0..size)
            .map(|i| {
                (
                    n(i as u32),
                    if i == 0 { None } else { Some(n(p[i] as u32)) },
                )
            })
            .collect();
        let t = RootedTree::build(&rec).unwrap();
        if seen.insert(canonical_code(&t, t.root_id())) {
            out.push(t);
        }
    });
    out
}

fn enumerate_parents(
    i: usize,
    size: usize,
    parents: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if i == size {
        f(parents);
        return;
    }
    for p in 0..i {
        parents[i] = p;
        enumerate_parents(i + 1, size, parents, f);
    }
}

/// AHU-style canonical code of the subtree at `v` (label-aware).
pub fn canonical_code(t: &RootedTree, v: NodeId) -> String {
    let mut codes: Vec<String> = t
        .children_of(v)
        .unwrap()
        .into_iter()
        .map(|c| canonical_code(t, c))
        .collect();
    codes.sort();
    let lab = match t.label_of(v).unwrap() {
        Some(l) => format!("{l}"),
        None => String::new(),
    };
    format!("{lab}({})", codes.join(""))
}

/// All distinct 2-labellings of `t` (labels 1 and 2), deduplicated up to
/// labelled rooted isomorphism.
pub fn two_labellings(t: &RootedTree) -> Vec<RootedTree> {
    let ids = t.preorder_ids();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << ids.len()) {
        let labels: BTreeMap<NodeId, u32> = ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, 1 + ((mask >> i) & 1)))
            .collect();
        let lt = t.with_labels(&labels).unwrap();
        if seen.insert(canonical_code(&lt, lt.root_id())) {
            out.push(lt);
        }
    }
    out
}

/// Uniform random recursive tree with `size` nodes (parent of node i chosen
/// uniformly among 0..i). Deterministic in the generator.
pub fn random_tree(size: usize, rng: &mut impl FnMut(usize) -> usize) -> RootedTree {
    let mut rec = vec![(n(0), None)];
    for i in 1..size {
        let p = rng(i);
        rec.push((n(i as u32), Some(n(p as u32))));
    }
    RootedTree::build(&rec).unwrap()
}

/// The one-ended comb-ladder of repeated rungs: per copy two vertices (0
/// bottom, 1 top), one rung edge, and one bottom spine edge to the next copy.
/// There is no top rail.
pub fn rung_ladder() -> Presentation {
    Presentation {
        n_base: 0,
        base_edges: vec![],
        n_unit: 2,
        unit_edges: vec![(0, 1)],
        base_links: vec![],
        unit_links: vec![(0, 0)],
        globals: vec![],
        spine: SpineSpec {
            at: 0,
            step: vec![(0, 0), (1, 0)],
        },
    }
}

/// Grid strip of `width` horizontal rails: the unit is a column of `width`
/// vertices joined vertically; consecutive copies are joined rail by rail.
/// `column_grid(2)` is the classic two-rail ladder; large widths approximate
/// the half-grid. The spine is rail 0.
pub fn column_grid(width: u32) -> Presentation {
    Presentation {
        n_base: 0,
        base_edges: vec![],
        n_unit: width,
        unit_edges: (0..width.saturating_sub(1)).map(|j| (j, j + 1)).collect(),
        base_links: vec![],
        unit_links: (0..width).map(|j| (j, j)).collect(),
        globals: vec![],
        spine: SpineSpec {
            at: 0,
            step: vec![(0, 0), (1, 0)],
        },
    }
}

/// The classic two-rail ladder.
pub fn ladder() -> Presentation {
    column_grid(2)
}

/// Two disjoint grid strips of widths `wa` and `wb`, glued only at a base
/// connector vertex adjacent to the first vertex of each strip. The spine
/// runs along strip A, so the designated end lives there; strip B is a
/// second escape direction.
pub fn two_strip(wa: u32, wb: u32) -> Presentation {
    let w = wa + wb;
    let mut unit_edges = Vec::new();
    for j in 0..wa.saturating_sub(1) {
        unit_edges.push((j, j + 1));
    }
    for j in wa..w.saturating_sub(1) {
        unit_edges.push((j, j + 1));
    }
    Presentation {
        n_base: 1,
        base_edges: vec![],
        n_unit: w,
        unit_edges,
        base_links: vec![(0, 0), (0, wa)],
        unit_links: (0..w).map(|j| (j, j)).collect(),
        globals: vec![],
        spine: SpineSpec {
            at: 0,
            step: vec![(0, 0), (1, 0)],
        },
    }
}

/// Column grid with `globals` global vertices, each adjacent to every unit
/// local in every copy; globals dominate the end.
pub fn glob_grid(width: u32, globals: u32) -> Presentation {
    let mut p = column_grid(width);
    p.globals = (0..globals)
        .map(|_| GlobalSpec {
            unit_adj: (0..width).collect(),
            base_adj: vec![],
        })
        .collect();
    p
}

/// w x h grid graph with vertices Base(row * w + col).
pub fn grid_graph(w: usize, h: usize) -> FiniteGraph {
    let mut edges = Vec::new();
    let at = |r: usize, c: usize| r * w + c;
    for r in 0..h {
        for c in 0..w {
            if c + 1 < w {
                edges.push((at(r, c), at(r, c + 1)));
            }
            if r + 1 < h {
                edges.push((at(r, c), at(r + 1, c)));
            }
        }
    }
    FiniteGraph::from_usize_edges(w * h, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts_match_oeis() {
        // rooted trees: 1, 1, 2, 4, 9, 20, 48
        let counts: Vec<usize> = (1..=7).map(|k| all_rooted_trees(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48]);
    }

    #[test]
    fn labelled_counts() {
        // 2-labelled rooted trees on 1..=4 nodes: 2, 4, 14, 52
        let mut counts = Vec::new();
        for k in 1..=4 {
            let mut c = 0;
            for t in all_rooted_trees(k) {
                c += two_labellings(&t).len();
            }
            counts.push(c);
        }
        assert_eq!(counts, vec![2, 4, 14, 52]);
    }

    #[test]
    fn comb_shape() {
        let c = comb_tree(3, 1);
        assert_eq!(c.len(), 6);
        assert_eq!(c.children_of(NodeId(0)).unwrap().len(), 2);
        assert_eq!(c.children_of(NodeId(2)).unwrap().len(), 1);
    }
}
