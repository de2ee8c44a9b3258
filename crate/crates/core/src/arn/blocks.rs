use serde::Serialize;

use crate::cubing::CubeComplex;
use crate::pocset::Pocset;
use crate::report::ValidationReport;
use crate::uf::UnionFind;

/// One maximal 2-connected piece of the cubing's 1-skeleton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// Pairs whose hyperplanes lie in the block.
    pub pairs: Vec<usize>,
    /// Members of the block that are cut vertices.
    pub corners: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub cut_vertices: Vec<usize>,
    pub blocks: Vec<Block>,
}

impl Decomposition {
    /// Block holding the hyperplane of `pair`, if the pair has one.
    pub fn block_of_pair(&self, pair: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.pairs.binary_search(&pair).is_ok())
    }
}

/// Articulation points and blocks, by depth-first search with an edge stack.
pub fn decompose(c: &CubeComplex) -> Decomposition {
    let n = c.vertices.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in c.edges.iter().enumerate() {
        adj[e.from].push((e.to, i));
        adj[e.to].push((e.from, i));
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut cut = vec![false; n];
    let mut time = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut raw_blocks: Vec<(Vec<usize>, Option<usize>)> = Vec::new();
    for r in 0..n {
        if disc[r] != usize::MAX {
            continue;
        }
        disc[r] = time;
        low[r] = time;
        time += 1;
        let mut root_children = 0;
        let mut stack: Vec<(usize, Option<usize>, usize)> = vec![(r, None, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, pe) = (top.0, top.1);
            if top.2 < adj[v].len() {
                let (w, e) = adj[v][top.2];
                top.2 += 1;
                if Some(e) == pe {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, Some(e), 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if Some(e) == pe {
                                break;
                            }
                        }
                        raw_blocks.push((block, None));
                        if u == r {
                            root_children += 1;
                        } else {
                            cut[u] = true;
                        }
                    }
                }
            }
        }
        if root_children >= 2 {
            cut[r] = true;
        }
        if adj[r].is_empty() {
            raw_blocks.push((Vec::new(), Some(r)));
        }
    }
    let mut blocks: Vec<Block> = raw_blocks
        .into_iter()
        .map(|(mut edges, isolated)| {
            edges.sort_unstable();
            let mut vertices: Vec<usize> = edges.iter().flat_map(|&e| [c.edges[e].from, c.edges[e].to]).collect();
            vertices.extend(isolated);
            vertices.sort_unstable();
            vertices.dedup();
            let mut pairs: Vec<usize> = edges.iter().map(|&e| c.edges[e].pair).collect();
            pairs.sort_unstable();
            pairs.dedup();
            let corners = vertices.iter().copied().filter(|&v| cut[v]).collect();
            Block { vertices, edges, pairs, corners }
        })
        .collect();
    blocks.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Decomposition { cut_vertices: (0..n).filter(|&v| cut[v]).collect(), blocks }
}

/// Classes of star pairs under the transitive closure of crossing, each sorted, ordered by
/// their least pair.
pub fn cross_connected_components(p: &Pocset) -> Vec<Vec<usize>> {
    let n = p.n_pairs();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if p.crosses(2 * i, 2 * j) {
                uf.union(i, j);
            }
        }
    }
    let (cls, k) = uf.classes();
    let mut out = vec![Vec::new(); k];
    for (q, c) in cls.into_iter().enumerate() {
        out[c].push(q);
    }
    out
}

/// Each component's hyperplanes must lie in a single block.
pub fn check_components_against_blocks(p: &Pocset, ccc: &[Vec<usize>], d: &Decomposition) -> ValidationReport {
    let mut r = ValidationReport::new();
    for comp in ccc {
        let blocks: Vec<Option<usize>> = comp.iter().map(|&q| d.block_of_pair(q)).collect();
        if blocks.iter().any(|b| b.is_none() || *b != blocks[0]) {
            r.push("component-in-one-block", comp.iter().map(|&q| p.base(q).to_string()).collect());
        }
    }
    r
}
