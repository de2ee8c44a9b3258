use serde::Serialize;

use super::iso::gtree_isomorphic;
use super::tree::{Arn, BipartiteTree, Color};
use crate::cubing::CubeComplex;
use crate::dunwoody::{verify_realization, RealizedTree, TreeEdge, TreeVertex};
use crate::pocset::Pocset;
use crate::uf::UnionFind;

/// Edge of a refinement. Edges inserted for the part carry the plus element they realize,
/// directed as in a realized tree: the half-space of the element lies behind the tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinedEdge {
    pub tail: usize,
    pub head: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refinement {
    pub nodes: Vec<(Color, String)>,
    pub edges: Vec<RefinedEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnclosureResult {
    pub encloses: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement: Option<Refinement>,
}

impl EnclosureResult {
    fn no(reason: String) -> Self {
        EnclosureResult { encloses: false, reason: Some(reason), refinement: None }
    }
}

/// Does the orbit of the V0 node `v0` enclose part `part`?
///
/// Every block of the orbit holding hyperplanes of the part is replaced by the tree dual to
/// those hyperplanes, with the block's corners attached to the pieces containing them.
/// The orbit encloses the part when contracting the inserted edges gives back the
/// neighborhood tree and contracting everything else gives a tree realizing the part.
pub fn verify_enclosure(arn: &Arn, p: &Pocset, c: &CubeComplex, v0: usize, part: usize) -> EnclosureResult {
    let t = &arn.tree;
    let d = &arn.decomposition;
    if t.nodes.get(v0).map(|n| n.color) != Some(Color::V0) {
        return EnclosureResult::no(format!("node {v0} is not a V0 node"));
    }
    let orbit = t.orbit_of(v0);
    let orbit_blocks: Vec<usize> = orbit.iter().filter_map(|&v| arn.block_of_node(v)).collect();
    let part_pairs = p.pairs_in_part(part);
    let in_part = |q: usize| p.part_of(2 * q) == part;
    let mut hosts: Vec<usize> = orbit_blocks.iter().copied().filter(|&b| d.blocks[b].pairs.iter().any(|&q| in_part(q))).collect();
    hosts.sort_unstable();
    if hosts.is_empty() {
        return EnclosureResult::no(format!("the orbit holds no hyperplane of part {}", p.parts()[part]));
    }
    if let Some(&q) = part_pairs.iter().find(|&&q| d.block_of_pair(q).is_none_or(|b| !orbit_blocks.contains(&b))) {
        return EnclosureResult::no(format!("hyperplane {} lies outside the orbit", p.base(q)));
    }

    // Nodes of the refinement: untouched tree nodes, then the pieces of each host block.
    let mut nodes: Vec<(Color, String)> = Vec::new();
    let mut node_of = vec![usize::MAX; t.nodes.len()];
    for (v, n) in t.nodes.iter().enumerate() {
        if arn.block_of_node(v).is_some_and(|b| hosts.contains(&b)) {
            continue;
        }
        node_of[v] = nodes.len();
        nodes.push((n.color, n.label.clone()));
    }
    let mut edges: Vec<RefinedEdge> = Vec::new();
    for &(a, b) in &t.edges {
        if node_of[a] != usize::MAX && node_of[b] != usize::MAX {
            edges.push(RefinedEdge { tail: node_of[a], head: node_of[b], element: None });
        }
    }
    for &b in &hosts {
        let block = &d.blocks[b];
        let local: Vec<usize> = block.vertices.clone();
        let pos = |v: usize| local.binary_search(&v).unwrap();
        let mut uf = UnionFind::new(local.len());
        for &e in &block.edges {
            let ce = &c.edges[e];
            if !in_part(ce.pair) {
                uf.union(pos(ce.from), pos(ce.to));
            }
        }
        let (cls, k) = uf.classes();
        let base = nodes.len();
        for piece in 0..k {
            nodes.push((Color::V0, format!("{}.{}", t.nodes[b].label, piece)));
        }
        let mut dual: Vec<(usize, usize, usize)> = Vec::new();
        for &e in &block.edges {
            let ce = &c.edges[e];
            if !in_part(ce.pair) {
                continue;
            }
            // `from` holds the plus element; a tree edge points away from its half-space.
            let (tail, head) = (base + cls[pos(ce.from)], base + cls[pos(ce.to)]);
            match dual.iter().find(|d| d.0 == ce.pair) {
                Some(&(_, t0, h0)) if (t0, h0) != (tail, head) => {
                    return EnclosureResult::no(format!("hyperplane {} is not dual to a single edge", p.base(ce.pair)));
                }
                Some(_) => {}
                None => dual.push((ce.pair, tail, head)),
            }
        }
        dual.sort_unstable();
        for (q, tail, head) in dual {
            edges.push(RefinedEdge { tail, head, element: Some(p.base(q).to_string()) });
        }
        for &cv in &block.corners {
            let v1 = t.nodes.iter().position(|n| n.origin == super::tree::Origin::Cut(cv)).unwrap();
            edges.push(RefinedEdge { tail: base + cls[pos(cv)], head: node_of[v1], element: None });
        }
    }
    let refinement = Refinement { nodes, edges };
    let n = refinement.nodes.len();
    let mut uf = UnionFind::new(n);
    let is_tree = refinement.edges.len() + 1 == n && refinement.edges.iter().all(|e| uf.union(e.tail, e.head));
    if !is_tree {
        return EnclosureResult { encloses: false, reason: Some("refinement is not a tree".into()), refinement: Some(refinement) };
    }

    // Collapse the inserted edges: must give back the neighborhood tree.
    let mut uf = UnionFind::new(n);
    for e in &refinement.edges {
        if e.element.is_some() {
            uf.union(e.tail, e.head);
        }
    }
    let (cls, k) = uf.classes();
    let mut colors = vec![Color::V0; k];
    for v in 0..n {
        colors[cls[v]] = refinement.nodes[v].0;
    }
    let mut plain = BipartiteTree::new();
    for v in 0..n {
        plain.add_node(refinement.nodes[v].0, refinement.nodes[v].1.clone());
    }
    for e in &refinement.edges {
        plain.add_edge(e.tail, e.head);
    }
    let collapsed = plain.quotient(&cls, &colors);
    let mut bare = t.clone();
    bare.action.clear();
    if gtree_isomorphic(&collapsed, &bare, true).is_none() {
        return EnclosureResult {
            encloses: false,
            reason: Some("collapsing the new edges does not give back the tree".into()),
            refinement: Some(refinement),
        };
    }

    // Collapse everything else: must realize the part.
    let mut uf = UnionFind::new(n);
    for e in &refinement.edges {
        if e.element.is_none() {
            uf.union(e.tail, e.head);
        }
    }
    let (cls, k) = uf.classes();
    let mut rt = RealizedTree { vertices: vec![TreeVertex { id: String::new(), class: vec![] }; k], edges: vec![] };
    for e in &refinement.edges {
        if let Some(name) = &e.element {
            let part_name = p.parts()[part].clone();
            rt.edges.push(TreeEdge { element: name.clone(), part: part_name.clone(), tail: cls[e.tail], head: cls[e.head] });
            rt.edges.push(TreeEdge { element: format!("{name}*"), part: part_name, tail: cls[e.head], head: cls[e.tail] });
            rt.vertices[cls[e.head]].class.push(name.clone());
            rt.vertices[cls[e.tail]].class.push(format!("{name}*"));
        }
    }
    for v in &mut rt.vertices {
        v.id = v.class.first().cloned().unwrap_or_default();
    }
    let sub = p.restrict(|q| p.part_of(2 * q) == part);
    let r = verify_realization(&rt, &sub);
    if !r.ok {
        return EnclosureResult {
            encloses: false,
            reason: Some(format!("collapsed refinement does not realize the part: {:?}", r.violations[0])),
            refinement: Some(refinement),
        };
    }
    EnclosureResult { encloses: true, reason: None, refinement: Some(refinement) }
}
