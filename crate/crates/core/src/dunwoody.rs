//! Realizing a nested pocset as the directed edge set of a tree, and checking a realization.
//!
//! Vertices are the classes of the equivalence generated by `e ~ f` when `e < f*` with
//! nothing strictly between. Each class collects the directed edges pointing into one
//! vertex, so edge `A` runs from the class of `A*` to the class of `A`, and `A ≤ B` holds
//! exactly when some simple path starts with `A` and ends with `B`.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pocset::{pair_of, star, validate_pocset, ElemId, Pocset};
use crate::report::ValidationReport;
use crate::uf::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeVertex {
    /// Canonically least member of `class`.
    pub id: String,
    /// Directed edges whose head is this vertex.
    pub class: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeEdge {
    pub element: String,
    pub part: String,
    pub tail: usize,
    pub head: usize,
}

/// A tree whose directed edges are named by signed elements. `edges` holds both
/// orientations of every undirected edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizedTree {
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<TreeEdge>,
}

impl RealizedTree {
    pub fn edge(&self, element: &str) -> Option<&TreeEdge> {
        self.edges.iter().find(|e| e.element == element)
    }

    /// Undirected edge count.
    pub fn edge_count(&self) -> usize {
        self.edges.len() / 2
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Contracts every edge rejected by `keep`.
    pub fn collapse(&self, keep: impl Fn(&TreeEdge) -> bool) -> RealizedTree {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            if !keep(e) {
                uf.union(e.tail, e.head);
            }
        }
        let (cls, k) = uf.classes();
        let kept: Vec<&TreeEdge> = self.edges.iter().filter(|e| keep(e)).collect();
        let mut classes: Vec<Vec<String>> = vec![Vec::new(); k];
        for e in &kept {
            classes[cls[e.head]].push(e.element.clone());
        }
        let vertices = classes
            .into_iter()
            .map(|class| TreeVertex { id: class.first().cloned().unwrap_or_default(), class })
            .collect();
        let edges = kept
            .iter()
            .map(|e| TreeEdge { element: e.element.clone(), part: e.part.clone(), tail: cls[e.tail], head: cls[e.head] })
            .collect();
        RealizedTree { vertices, edges }
    }

    fn is_tree(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 || self.edge_count() + 1 != n {
            return false;
        }
        let mut uf = UnionFind::new(n);
        let mut merged = 0;
        for e in &self.edges {
            if uf.union(e.tail, e.head) {
                merged += 1;
            }
        }
        merged + 1 == n
    }
}

/// Builds the tree of a nested pocset.
pub fn build_tree(p: &Pocset) -> Result<RealizedTree> {
    let r = validate_pocset(p, true);
    if let Some(v) = r.violations.first() {
        return Err(if v.axiom == "comparable" {
            Error::Crossing(v.witness[0].clone(), v.witness[1].clone())
        } else {
            Error::Axiom { axiom: v.axiom.clone(), witness: v.witness.clone() }
        });
    }
    let n = p.n_elements();
    let mut uf = UnionFind::new(n);
    for (e, c) in p.cover_pairs() {
        uf.union(e, star(c));
    }
    let (cls, k) = uf.classes();
    let mut classes: Vec<Vec<ElemId>> = vec![Vec::new(); k];
    for x in 0..n {
        classes[cls[x]].push(x);
    }
    let vertices: Vec<TreeVertex> =
        classes.iter().map(|c| TreeVertex { id: p.name(c[0]), class: p.names(c.iter().copied()) }).collect();
    let edges = (0..n)
        .map(|a| TreeEdge {
            element: p.name(a),
            part: p.part_name_of(a).to_string(),
            tail: cls[star(a)],
            head: cls[a],
        })
        .collect();
    let t = RealizedTree { vertices, edges };
    if n > 0 && !t.is_tree() {
        return Err(Error::Internal(format!(
            "vertex classes do not form a tree: {} vertices for {} edges",
            t.vertex_count(),
            t.edge_count()
        )));
    }
    if n == 0 {
        return Ok(RealizedTree { vertices: vec![TreeVertex { id: String::new(), class: vec![] }], edges: vec![] });
    }
    Ok(t)
}

/// Checks that `t` is a tree realizing `p`: every element is exactly one directed edge, starring
/// reverses edges, and `A ≤ B` iff a simple path starts with edge `A` and ends with edge `B`.
pub fn verify_realization(t: &RealizedTree, p: &Pocset) -> ValidationReport {
    let mut r = ValidationReport::new();
    let n = p.n_elements();
    let mut edge_of: Vec<Option<usize>> = vec![None; n];
    for (k, e) in t.edges.iter().enumerate() {
        match p.id_of(&e.element) {
            Ok(id) if edge_of[id].is_none() => edge_of[id] = Some(k),
            Ok(_) => r.push("edge-set", vec![e.element.clone(), "repeated".into()]),
            Err(_) => r.push("edge-set", vec![e.element.clone(), "not in pocset".into()]),
        }
        if e.tail >= t.vertices.len() || e.head >= t.vertices.len() {
            r.push("edge-set", vec![e.element.clone(), "dangling".into()]);
            return r;
        }
    }
    if let Some(a) = (0..n).find(|&a| edge_of[a].is_none()) {
        r.push("edge-set", vec![p.name(a), "missing".into()]);
    }
    if !r.ok {
        return r;
    }
    let edge = |a: ElemId| &t.edges[edge_of[a].unwrap()];
    if let Some(a) = (0..n).find(|&a| edge(a).tail != edge(star(a)).head || edge(a).head != edge(star(a)).tail) {
        r.push("star-reversal", vec![p.name(a)]);
    }
    if !t.is_tree() {
        r.push("tree", vec![format!("{} vertices", t.vertex_count()), format!("{} edges", t.edge_count())]);
    }
    if !r.ok {
        r.note("order/path check skipped: not a tree with a valid edge set");
        return r;
    }
    // Elements leaving each vertex.
    let mut out: HashMap<usize, Vec<ElemId>> = HashMap::new();
    for a in 0..n {
        out.entry(edge(a).tail).or_default().push(a);
    }
    for a in 0..n {
        let mut reach = vec![false; n];
        reach[a] = true;
        let mut stack = vec![(edge(a).head, pair_of(a))];
        while let Some((v, from)) = stack.pop() {
            for &e in out.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                if pair_of(e) != from {
                    reach[e] = true;
                    stack.push((edge(e).head, pair_of(e)));
                }
            }
        }
        if let Some(b) = (0..n).find(|&b| reach[b] != p.leq(a, b)) {
            let what = if reach[b] { "path without order" } else { "order without path" };
            r.push("order-path", vec![p.name(a), p.name(b), what.into()]);
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class_sets(t: &RealizedTree) -> Vec<Vec<String>> {
        let mut v: Vec<Vec<String>> = t.vertices.iter().map(|v| v.class.clone()).collect();
        v.sort();
        v
    }

    #[test]
    fn single_pair() {
        let p = Pocset::builder().element("A").build().unwrap();
        let t = build_tree(&p).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (2, 1));
        assert!(verify_realization(&t, &p).ok);
    }

    #[test]
    fn two_chain_classes() {
        let p = Pocset::builder().elements(["A", "B"]).relation("A", "B").build().unwrap();
        let t = build_tree(&p).unwrap();
        assert_eq!(class_sets(&t), vec![vec!["A", "B*"], vec!["A*"], vec!["B"]]);
        let a = t.edge("A").unwrap();
        let b = t.edge("B").unwrap();
        // A runs into the middle vertex, B leaves it.
        assert_eq!(a.head, b.tail);
        assert!(verify_realization(&t, &p).ok);
    }

    #[test]
    fn tripod_classes() {
        let p = Pocset::builder()
            .elements(["A", "B", "C"])
            .relation("A", "B*")
            .relation("A", "C*")
            .relation("B", "C*")
            .build()
            .unwrap();
        let t = build_tree(&p).unwrap();
        assert_eq!(class_sets(&t), vec![vec!["A", "B", "C"], vec!["A*"], vec!["B*"], vec!["C*"]]);
        assert_eq!(t.vertices.iter().find(|v| v.class.len() == 3).unwrap().id, "A");
        assert!(verify_realization(&t, &p).ok);
    }

    #[test]
    fn flipped_edge_is_caught() {
        let p = Pocset::builder().elements(["A", "B"]).relation("A", "B").build().unwrap();
        let mut t = build_tree(&p).unwrap();
        for e in &mut t.edges {
            if e.element.starts_with('B') {
                std::mem::swap(&mut e.tail, &mut e.head);
            }
        }
        let r = verify_realization(&t, &p);
        assert!(r.has("order-path"), "{r:?}");
    }

    #[test]
    fn crossing_is_rejected_with_witness() {
        let p = Pocset::builder().elements(["A", "B"]).build().unwrap();
        assert_eq!(build_tree(&p).unwrap_err(), Error::Crossing("A".into(), "B".into()));
    }

    #[test]
    fn collapse_keeps_one_part() {
        let p = Pocset::builder().elements(["A", "B"]).relation("A", "B").build().unwrap();
        let t = build_tree(&p).unwrap();
        let c = t.collapse(|e| e.part == "A");
        assert_eq!((c.vertex_count(), c.edge_count()), (2, 1));
        assert!(verify_realization(&c, &p.restrict(|q| p.base(q) == "A")).ok);
    }
}
