//! Graphviz export. Node and edge order follow the input structures, which are canonical,
//! so identical inputs give identical text.

use std::fmt::Write;

use crate::arn::{BipartiteTree, Color, Origin};
use crate::cubing::CubeComplex;
use crate::dunwoody::RealizedTree;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
];

fn color(k: usize) -> &'static str {
    PALETTE[k % PALETTE.len()]
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected tree with one line per edge, labeled by its plus element and colored by part.
pub fn tree_dot(t: &RealizedTree) -> String {
    let mut parts: Vec<&str> = Vec::new();
    let mut out = String::from("graph tree {\n  node [shape=point];\n");
    for (i, v) in t.vertices.iter().enumerate() {
        writeln!(out, "  n{i} [tooltip={}];", quote(&v.id)).unwrap();
    }
    for e in t.edges.iter().filter(|e| !e.element.ends_with('*')) {
        let k = parts.iter().position(|p| *p == e.part).unwrap_or_else(|| {
            parts.push(&e.part);
            parts.len() - 1
        });
        writeln!(out, "  n{} -- n{} [label={}, color={}];", e.tail, e.head, quote(&e.element), quote(color(k))).unwrap();
    }
    out.push_str("}\n");
    out
}

/// 1-skeleton of a cubing, edges colored by hyperplane.
pub fn cubing_dot(c: &CubeComplex) -> String {
    let mut out = String::from("graph cubing {\n  node [shape=circle];\n");
    for (i, u) in c.vertices.iter().enumerate() {
        let chosen: Vec<&str> = u.chosen().map(|id| c.names[id].as_str()).collect();
        writeln!(out, "  v{i} [label=\"{i}\", tooltip={}];", quote(&chosen.join(" "))).unwrap();
    }
    for e in &c.edges {
        let name = &c.names[2 * e.pair];
        writeln!(out, "  v{} -- v{} [label={}, color={}];", e.from, e.to, quote(name), quote(color(e.pair))).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Bipartite tree: V0 nodes as boxes, V1 nodes as circles, origins as tooltips.
pub fn bipartite_dot(t: &BipartiteTree) -> String {
    let mut out = String::from("graph arn {\n");
    for (i, n) in t.nodes.iter().enumerate() {
        let shape = match n.color {
            Color::V0 => "box",
            Color::V1 => "circle",
        };
        let origin = match n.origin {
            Origin::Block(b) => format!("block {b}"),
            Origin::Cut(v) => format!("cut vertex {v}"),
            Origin::Free => "free".to_string(),
        };
        writeln!(out, "  t{i} [shape={shape}, label={}, tooltip={}];", quote(&n.label), quote(&origin)).unwrap();
    }
    for &(a, b) in &t.edges {
        writeln!(out, "  t{a} -- t{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Node and edge counts of a DOT text produced here.
pub fn dot_counts(text: &str) -> (usize, usize) {
    let mut nodes = 0;
    let mut edges = 0;
    for line in text.lines().map(str::trim) {
        if line.contains(" -- ") {
            edges += 1;
        } else if line.ends_with("];") && !line.starts_with("node ") {
            nodes += 1;
        }
    }
    (nodes, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arn::build_arn;
    use crate::cubing::{build_cubing, CubingCaps};
    use crate::dunwoody::build_tree;
    use crate::pocset::{CornerStatus::*, OrderMode, Pocset};

    fn p4() -> Pocset {
        Pocset::builder()
            .elements(["A", "B"])
            .corner("A", "B", [Large, Large, Large, Large])
            .build()
            .unwrap()
    }

    fn n4() -> Pocset {
        Pocset::builder()
            .elements(["A", "B"])
            .corner("A", "B", [Large, Empty, Large, Large])
            .build()
            .unwrap()
    }

    #[test]
    fn single_pair_tree() {
        let p = Pocset::builder().element("A").build().unwrap();
        let text = tree_dot(&build_tree(&p).unwrap());
        assert_eq!(dot_counts(&text), (2, 1));
    }

    #[test]
    fn p4_cubing_has_two_colors() {
        let c = build_cubing(&p4(), OrderMode::Subset, None, CubingCaps::default()).unwrap();
        let text = cubing_dot(&c);
        assert_eq!(dot_counts(&text), (4, 4));
        let colors: std::collections::BTreeSet<&str> =
            text.lines().filter(|l| l.contains(" -- ")).filter_map(|l| l.split("color=").nth(1)).collect();
        assert_eq!(colors.len(), 2);
    }

    #[test]
    fn n4_arn() {
        let p = n4();
        let c = build_cubing(&p, OrderMode::Almost, None, CubingCaps::default()).unwrap();
        let text = bipartite_dot(&build_arn(&p, &c).unwrap().tree);
        assert_eq!(dot_counts(&text), (3, 2));
        assert_eq!(text.matches("shape=box").count(), 2);
        assert_eq!(text.matches("shape=circle").count(), 1);
    }

    #[test]
    fn export_is_deterministic() {
        let p = n4();
        let a = cubing_dot(&build_cubing(&p, OrderMode::Almost, None, CubingCaps::default()).unwrap());
        let b = cubing_dot(&build_cubing(&p, OrderMode::Almost, None, CubingCaps::default()).unwrap());
        assert_eq!(a, b);
    }
}
