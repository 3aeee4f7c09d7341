//! Tree text format: one line per node `id parent [label]`, the root with
//! parent `-`. Optional `meta infinite <id>` and `meta truncated <id>` lines
//! mark expansion artifacts of infinite trees.

use std::collections::BTreeMap;

use crate::tree::{NodeId, RootedTree, TreeSource};

use super::{content_lines, ParseError};

pub fn parse_tree(text: &str) -> Result<TreeSource, ParseError> {
    let mut records: Vec<(NodeId, Option<NodeId>)> = Vec::new();
    let mut labels: BTreeMap<NodeId, u32> = BTreeMap::new();
    let mut any_label = false;
    let mut infinite = Vec::new();
    let mut truncated = Vec::new();
    for (lineno, line) in content_lines(text) {
        let mut parts = line.split_whitespace();
        let first = parts.next().unwrap();
        if first == "meta" {
            let kind = parts
                .next()
                .ok_or_else(|| ParseError::new(lineno, "meta needs a kind"))?;
            let id: u32 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| ParseError::new(lineno, "meta needs a node id"))?;
            match kind {
                "infinite" => infinite.push(NodeId(id)),
                "truncated" => truncated.push(NodeId(id)),
                other => {
                    return Err(ParseError::new(lineno, format!("unknown meta `{other}`")))
                }
            }
            continue;
        }
        let id: u32 = first
            .parse()
            .map_err(|_| ParseError::new(lineno, format!("bad node id `{first}`")))?;
        let parent = parts
            .next()
            .ok_or_else(|| ParseError::new(lineno, "missing parent column"))?;
        let parent = if parent == "-" {
            None
        } else {
            Some(NodeId(parent.parse().map_err(|_| {
                ParseError::new(lineno, format!("bad parent id `{parent}`"))
            })?))
        };
        if let Some(lab) = parts.next() {
            let lab: u32 = lab
                .parse()
                .map_err(|_| ParseError::new(lineno, format!("bad label `{lab}`")))?;
            labels.insert(NodeId(id), lab);
            any_label = true;
        }
        if parts.next().is_some() {
            return Err(ParseError::new(lineno, "trailing tokens"));
        }
        records.push((NodeId(id), parent));
    }
    let tree = if any_label {
        RootedTree::build_labelled(&records, &labels)
    } else {
        RootedTree::build(&records)
    }
    .map_err(|e| ParseError::new(0, e))?;
    let mut src = TreeSource::finite(tree);
    for id in infinite {
        if !src.tree.contains(id) {
            return Err(ParseError::new(0, format!("meta infinite: unknown node {id}")));
        }
        src.infinite.insert(id);
    }
    for id in truncated {
        if !src.tree.contains(id) {
            return Err(ParseError::new(0, format!("meta truncated: unknown node {id}")));
        }
        src.truncated.insert(id);
    }
    Ok(src)
}

pub fn write_tree(src: &TreeSource) -> String {
    let mut out = String::new();
    for id in src.tree.preorder_ids() {
        let parent = src.tree.parent_of(id).unwrap();
        match parent {
            None => out.push_str(&format!("{id} -")),
            Some(p) => out.push_str(&format!("{id} {p}")),
        }
        if let Some(l) = src.tree.label_of(id).unwrap() {
            out.push_str(&format!(" {l}"));
        }
        out.push('\n');
    }
    for id in &src.infinite {
        out.push_str(&format!("meta infinite {id}\n"));
    }
    for id in &src.truncated {
        out.push_str(&format!("meta truncated {id}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let src = crate::gen::comb_source(3, 1);
        let text = write_tree(&src);
        let back = parse_tree(&text).unwrap();
        assert_eq!(back.tree, src.tree);
        assert_eq!(back.truncated, src.truncated);
    }

    #[test]
    fn rejects_cycles() {
        let text = "0 -\n1 2\n2 1\n";
        assert!(parse_tree(text).is_err());
    }

    #[test]
    fn rejects_junk() {
        assert!(parse_tree("0 - 1 junk\n").is_err());
        assert!(parse_tree("x -\n").is_err());
        assert!(parse_tree("0\n").is_err());
        assert!(parse_tree("meta sideways 0\n").is_err());
    }
}
