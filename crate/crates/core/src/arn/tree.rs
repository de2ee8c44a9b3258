use serde::Serialize;

use super::blocks::{cross_connected_components, decompose, Decomposition};
use crate::cubing::{CubeComplex, Ultrafilter};
use crate::error::{Error, Result};
use crate::pocset::{pair_of, OrderMode, Pocset};
use crate::uf::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Color {
    V0,
    V1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    /// Index into the decomposition's blocks.
    Block(usize),
    /// Cubing vertex.
    Cut(usize),
    /// Built by hand or by contraction.
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    pub color: Color,
    pub origin: Origin,
    pub label: String,
}

/// A named partial map on nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphMap {
    pub name: String,
    pub map: Vec<Option<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BipartiteTree {
    pub nodes: Vec<TreeNode>,
    pub edges: Vec<(usize, usize)>,
    pub action: Vec<GraphMap>,
}

impl BipartiteTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, color: Color, label: impl Into<String>) -> usize {
        self.nodes.push(TreeNode { color, origin: Origin::Free, label: label.into() });
        for g in &mut self.action {
            g.map.push(None);
        }
        self.nodes.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.edges.push((a.min(b), a.max(b)));
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    pub fn count(&self, color: Color) -> usize {
        self.nodes.iter().filter(|n| n.color == color).count()
    }

    pub fn is_bipartite(&self) -> bool {
        self.edges.iter().all(|&(a, b)| self.nodes[a].color != self.nodes[b].color)
    }

    pub fn is_tree(&self) -> bool {
        let n = self.nodes.len();
        if n == 0 || self.edges.len() + 1 != n {
            return false;
        }
        let mut uf = UnionFind::new(n);
        self.edges.iter().all(|&(a, b)| uf.union(a, b))
    }

    /// Orbits of nodes of `color` under the action, each ascending.
    pub fn orbits(&self, color: Color) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.nodes.len());
        for g in &self.action {
            for (a, b) in g.map.iter().enumerate() {
                if let Some(b) = b {
                    uf.union(a, *b);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.nodes.len()];
        for v in 0..self.nodes.len() {
            if self.nodes[v].color != color {
                continue;
            }
            let r = uf.find(v);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(v);
        }
        out
    }

    pub fn orbit_of(&self, v: usize) -> Vec<usize> {
        self.orbits(self.nodes[v].color).into_iter().find(|o| o.contains(&v)).unwrap_or_else(|| vec![v])
    }

    /// Merges nodes with equal `class`; each class takes the given color. Loops from
    /// contracted edges are dropped and parallel edges merged. Maps are carried over where
    /// they respect the classes.
    pub fn quotient(&self, class: &[usize], colors: &[Color]) -> BipartiteTree {
        let k = colors.len();
        let mut labels: Vec<Vec<String>> = vec![Vec::new(); k];
        for (v, &c) in class.iter().enumerate() {
            labels[c].push(self.nodes[v].label.clone());
        }
        let nodes = (0..k)
            .map(|c| TreeNode { color: colors[c], origin: Origin::Free, label: labels[c].join("+") })
            .collect();
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| (class[a].min(class[b]), class[a].max(class[b])))
            .filter(|(a, b)| a != b)
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let action = self
            .action
            .iter()
            .map(|g| {
                let mut map = vec![None; k];
                let mut bad = vec![false; k];
                for (a, b) in g.map.iter().enumerate() {
                    if let Some(b) = b {
                        match map[class[a]] {
                            Some(x) if x != class[*b] => bad[class[a]] = true,
                            _ => map[class[a]] = Some(class[*b]),
                        }
                    }
                }
                for c in 0..k {
                    if bad[c] {
                        map[c] = None;
                    }
                }
                GraphMap { name: g.name.clone(), map }
            })
            .collect();
        BipartiteTree { nodes, edges, action }
    }

    /// Repeatedly removes V1 nodes of degree at most one.
    pub fn prune_v1_leaves(&self) -> BipartiteTree {
        let mut alive = vec![true; self.nodes.len()];
        loop {
            let mut deg = vec![0; self.nodes.len()];
            for &(a, b) in &self.edges {
                if alive[a] && alive[b] {
                    deg[a] += 1;
                    deg[b] += 1;
                }
            }
            let dead: Vec<usize> = (0..self.nodes.len())
                .filter(|&v| alive[v] && self.nodes[v].color == Color::V1 && deg[v] <= 1)
                .collect();
            if dead.is_empty() || dead.len() == alive.iter().filter(|a| **a).count() {
                break;
            }
            for v in dead {
                alive[v] = false;
            }
        }
        self.induced(&alive)
    }

    pub fn induced(&self, keep: &[bool]) -> BipartiteTree {
        let mut new = vec![None; self.nodes.len()];
        let mut nodes = Vec::new();
        for v in 0..self.nodes.len() {
            if keep[v] {
                new[v] = Some(nodes.len());
                nodes.push(self.nodes[v].clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((new[a]?, new[b]?)))
            .collect();
        let action = self
            .action
            .iter()
            .map(|g| GraphMap {
                name: g.name.clone(),
                map: (0..self.nodes.len()).filter(|&v| keep[v]).map(|v| g.map[v].and_then(|w| new[w])).collect(),
            })
            .collect();
        BipartiteTree { nodes, edges, action }
    }
}

/// The algebraic regular neighborhood of a pocset: one V0 node per block of the cubing's
/// 1-skeleton, one V1 node per cut vertex, joined when the cut vertex lies in the block.
#[derive(Clone, Debug, Serialize)]
pub struct Arn {
    pub decomposition: Decomposition,
    pub components: Vec<Vec<usize>>,
    pub tree: BipartiteTree,
}

impl Arn {
    /// Tree node of a block.
    pub fn block_node(&self, block: usize) -> usize {
        block
    }

    pub fn block_of_node(&self, node: usize) -> Option<usize> {
        match self.tree.nodes[node].origin {
            Origin::Block(b) => Some(b),
            _ => None,
        }
    }
}

pub fn build_arn(p: &Pocset, c: &CubeComplex) -> Result<Arn> {
    if c.mode != OrderMode::Almost {
        return Err(Error::Malformed("the neighborhood is built from the almost-inclusion cubing".into()));
    }
    if c.vertices.is_empty() || c.component_of(0).len() != c.vertices.len() {
        return Err(Error::Disconnected);
    }
    let d = decompose(c);
    let mut t = BipartiteTree::new();
    for (k, b) in d.blocks.iter().enumerate() {
        let names: Vec<String> = b.pairs.iter().map(|&q| p.base(q).to_string()).collect();
        t.nodes.push(TreeNode { color: Color::V0, origin: Origin::Block(k), label: format!("{{{}}}", names.join(",")) });
    }
    let mut cut_node = vec![usize::MAX; c.vertices.len()];
    for &v in &d.cut_vertices {
        cut_node[v] = t.nodes.len();
        t.nodes.push(TreeNode { color: Color::V1, origin: Origin::Cut(v), label: format!("v{v}") });
    }
    for (k, b) in d.blocks.iter().enumerate() {
        for &v in &b.corners {
            t.add_edge(k, cut_node[v]);
        }
    }
    t.edges.sort_unstable();

    let mut pair_block = vec![None; p.n_pairs()];
    for (k, b) in d.blocks.iter().enumerate() {
        for &q in &b.pairs {
            pair_block[q] = Some(k);
        }
    }
    for g in p.action() {
        let mut map = vec![None; t.nodes.len()];
        for (k, b) in d.blocks.iter().enumerate() {
            let imgs: Option<Vec<usize>> = b.pairs.iter().map(|&q| g.apply(2 * q).map(pair_of)).collect();
            let Some(mut imgs) = imgs else { continue };
            imgs.sort_unstable();
            if let Some(&first) = imgs.first() {
                if let Some(kb) = pair_block[first] {
                    if d.blocks[kb].pairs == imgs {
                        map[k] = Some(kb);
                    }
                }
            }
        }
        for &v in &d.cut_vertices {
            let u = &c.vertices[v];
            let imgs: Option<Vec<usize>> = u.chosen().map(|a| g.apply(a)).collect();
            let Some(imgs) = imgs else { continue };
            let mut seen = vec![false; p.n_pairs()];
            if imgs.iter().any(|&b| std::mem::replace(&mut seen[pair_of(b)], true)) {
                continue;
            }
            let w = Ultrafilter::from_fn(p, OrderMode::Almost, |a| imgs.contains(&a));
            if let Some(x) = c.vertex_of(&w) {
                if cut_node[x] != usize::MAX {
                    map[cut_node[v]] = Some(cut_node[x]);
                }
            }
        }
        t.action.push(GraphMap { name: g.name.clone(), map });
    }
    if !t.is_bipartite() || !t.is_tree() {
        return Err(Error::Internal("block-cut graph is not a bipartite tree".into()));
    }
    Ok(Arn { decomposition: d, components: cross_connected_components(p), tree: t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubing::{build_cubing, CubingCaps};

    fn arn(p: &Pocset) -> Arn {
        let c = build_cubing(p, OrderMode::Almost, None, CubingCaps::default()).unwrap();
        build_arn(p, &c).unwrap()
    }

    #[test]
    fn crossing_pair_gives_one_v0() {
        let p = Pocset::builder().elements(["A", "B"]).build().unwrap();
        let a = arn(&p);
        assert_eq!((a.tree.count(Color::V0), a.tree.count(Color::V1), a.tree.edges.len()), (1, 0, 0));
        assert_eq!(a.tree.nodes[0].label, "{A,B}");
    }

    #[test]
    fn nested_pair_gives_path() {
        let p = Pocset::builder().elements(["A", "B"]).relation("A", "B").build().unwrap();
        let a = arn(&p);
        assert_eq!((a.tree.count(Color::V0), a.tree.count(Color::V1), a.tree.edges.len()), (2, 1, 2));
        assert!(a.tree.is_tree() && a.tree.is_bipartite());
    }

    #[test]
    fn single_pair_gives_one_v0() {
        let p = Pocset::builder().element("A").build().unwrap();
        let a = arn(&p);
        assert_eq!((a.tree.count(Color::V0), a.tree.edges.len()), (1, 0));
    }

    #[test]
    fn subset_cubing_is_rejected() {
        let p = Pocset::builder().element("A").build().unwrap();
        let c = build_cubing(&p, OrderMode::Subset, None, CubingCaps::default()).unwrap();
        assert!(build_arn(&p, &c).is_err());
    }

    #[test]
    fn action_moves_blocks() {
        let p = Pocset::builder()
            .elements(["A", "B"])
            .part("X", &["A", "B"])
            .relation("A", "B")
            .generator("g", &[("A", "B")])
            .build()
            .unwrap();
        let a = arn(&p);
        assert_eq!(a.tree.orbits(Color::V0).len(), 1);
        assert_eq!(a.tree.orbits(Color::V1).len(), 1);
    }

    #[test]
    fn pruning_and_quotients() {
        let mut t = BipartiteTree::new();
        let a = t.add_node(Color::V0, "a");
        let x = t.add_node(Color::V1, "x");
        let b = t.add_node(Color::V0, "b");
        let y = t.add_node(Color::V1, "y");
        t.add_edge(a, x);
        t.add_edge(x, b);
        t.add_edge(b, y);
        let pr = t.prune_v1_leaves();
        assert_eq!(pr.nodes.len(), 3);
        let q = t.quotient(&[0, 1, 1, 1], &[Color::V0, Color::V1]);
        assert_eq!(q.edges, vec![(0, 1)]);
    }
}
