use std::collections::BTreeMap;

use serde::Serialize;

use crate::dunwoody::{build_tree, verify_realization, RealizedTree, TreeEdge, TreeVertex};
use crate::error::{Error, Result};
use crate::pocset::Pocset;
use crate::uf::UnionFind;

#[derive(Clone, Debug, Serialize)]
pub struct CollapseCheck {
    pub part: String,
    pub edges: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatibilityTree {
    pub tree: RealizedTree,
    /// Edge orbits under the action fragment, counting each copy of a repeated part.
    pub edge_orbits: usize,
    pub collapses: Vec<CollapseCheck>,
}

impl CompatibilityTree {
    pub fn ok(&self) -> bool {
        self.collapses.iter().all(|c| c.ok)
    }
}

/// Joint tree of a crossing-free pocset. A part with multiplicity `m > 1` stands for `m`
/// isomorphic splittings: each of its edges is subdivided into `m` edges `A#1..A#m`, with
/// `A#1` on the side of `A*`, and the copies become parts `part#1..part#m`.
pub fn compatibility_tree(p: &Pocset, multiplicities: &BTreeMap<String, usize>) -> Result<CompatibilityTree> {
    for name in multiplicities.keys() {
        if p.part_index(name).is_none() {
            return Err(Error::Malformed(format!("multiplicity for unknown part {name}")));
        }
    }
    for a in (0..p.n_elements()).step_by(2) {
        for b in (a + 2..p.n_elements()).step_by(2) {
            if p.crosses(a, b) {
                return Err(Error::Crossing(p.name(a), p.name(b)));
            }
        }
    }
    let base = build_tree(p)?;
    let mult = |part: &str| multiplicities.get(part).copied().unwrap_or(1).max(1);
    let mut tree = RealizedTree { vertices: base.vertices.clone(), edges: Vec::new() };
    for e in base.edges.iter().filter(|e| !e.element.ends_with('*')) {
        let m = mult(&e.part);
        if m == 1 {
            tree.edges.push(e.clone());
            tree.edges.push(reversed(e, format!("{}*", e.element)));
            continue;
        }
        let mut at = e.tail;
        for k in 1..=m {
            let next = if k == m {
                e.head
            } else {
                tree.vertices.push(TreeVertex { id: format!("{}#{k}", e.element), class: vec![] });
                tree.vertices.len() - 1
            };
            let fwd = TreeEdge { element: format!("{}#{k}", e.element), part: format!("{}#{k}", e.part), tail: at, head: next };
            tree.edges.push(reversed(&fwd, format!("{}#{k}*", e.element)));
            tree.edges.push(fwd);
            at = next;
        }
    }
    tree.edges.sort_by(|x, y| (&x.element, x.tail).cmp(&(&y.element, y.tail)));
    for v in &mut tree.vertices {
        v.class.clear();
    }
    for e in &tree.edges {
        tree.vertices[e.head].class.push(e.element.clone());
    }
    for v in &mut tree.vertices {
        v.class.sort();
        v.id = v.class.first().cloned().unwrap_or_default();
    }

    let mut collapses = Vec::new();
    for (j, part) in p.parts().iter().enumerate() {
        let m = mult(part);
        let sub = p.restrict(|q| p.part_of(2 * q) == j);
        for k in 1..=m {
            let (label, target) = if m == 1 {
                (part.clone(), sub.clone())
            } else {
                (format!("{part}#{k}"), sub.renamed(|b| format!("{b}#{k}"), |q| format!("{q}#{k}")))
            };
            let collapsed = tree.collapse(|e| e.part == label);
            let ok = verify_realization(&collapsed, &target).ok;
            collapses.push(CollapseCheck { part: label, edges: collapsed.edge_count(), ok });
        }
    }

    let mut uf = UnionFind::new(p.n_pairs());
    for g in p.action() {
        for q in 0..p.n_pairs() {
            if let Some(b) = g.apply(2 * q) {
                uf.union(q, b / 2);
            }
        }
    }
    let mut edge_orbits = 0;
    for q in 0..p.n_pairs() {
        if uf.find(q) == q {
            edge_orbits += mult(p.part_name_of(2 * q));
        }
    }
    Ok(CompatibilityTree { tree, edge_orbits, collapses })
}

fn reversed(e: &TreeEdge, element: String) -> TreeEdge {
    TreeEdge { element, part: e.part.clone(), tail: e.head, head: e.tail }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_parts_give_a_path() {
        let p = Pocset::builder().elements(["A", "B"]).relation("A", "B").build().unwrap();
        let c = compatibility_tree(&p, &BTreeMap::new()).unwrap();
        assert_eq!((c.tree.vertex_count(), c.tree.edge_count()), (3, 2));
        assert!(c.ok());
        assert!(c.collapses.iter().all(|x| x.edges == 1));
        assert_eq!(c.edge_orbits, 2);
    }

    #[test]
    fn multiplicity_subdivides() {
        let p = Pocset::builder().element("A").build().unwrap();
        let m = BTreeMap::from([("A".to_string(), 2)]);
        let c = compatibility_tree(&p, &m).unwrap();
        assert_eq!((c.tree.vertex_count(), c.tree.edge_count()), (3, 2));
        assert!(c.tree.edge("A#1").is_some() && c.tree.edge("A#2*").is_some());
        assert_eq!(c.collapses.len(), 2);
        assert!(c.ok(), "{:?}", c.collapses);
        assert_eq!(c.edge_orbits, 2);
    }

    #[test]
    fn crossing_is_rejected_with_witness() {
        let p = Pocset::builder().elements(["A", "B"]).build().unwrap();
        match compatibility_tree(&p, &BTreeMap::new()) {
            Err(Error::Crossing(a, b)) => assert_eq!((a.as_str(), b.as_str()), ("A", "B")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn action_merges_edge_orbits() {
        let p = Pocset::builder()
            .elements(["A", "B"])
            .part("X", &["A", "B"])
            .relation("A", "B")
            .generator("g", &[("A", "B")])
            .build()
            .unwrap();
        let c = compatibility_tree(&p, &BTreeMap::new()).unwrap();
        assert_eq!(c.edge_orbits, 1);
        assert!(c.ok());
    }
}
