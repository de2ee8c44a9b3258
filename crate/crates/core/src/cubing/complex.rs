use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::ultrafilter::{is_ultrafilter, Ultrafilter};
use crate::bits::{BitSet, Relation};
use crate::error::{Error, Result};
use crate::pocset::{plus_of, star, ElemId, OrderMode, Pocset};
use crate::report::ValidationReport;
use crate::uf::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CubingCaps {
    pub max_vertices: usize,
    pub max_dim: usize,
}

impl Default for CubingCaps {
    fn default() -> Self {
        CubingCaps { max_vertices: 20000, max_dim: 4 }
    }
}

/// Edge between two vertices differing on one pair. `from` selects the plus element of the
/// pair, which is the element the edge exits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CubeEdge {
    pub from: usize,
    pub to: usize,
    pub pair: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cube {
    /// Corner selecting the plus element of every pair in `pairs`.
    pub base: usize,
    pub pairs: Vec<usize>,
    /// All `2^d` corners, ascending.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hyperplane {
    pub pair: usize,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CubeComplex {
    pub mode: OrderMode,
    pub names: Vec<String>,
    pub vertices: Vec<Ultrafilter>,
    pub edges: Vec<CubeEdge>,
    /// `cubes[d - 2]` lists the `d`-cubes.
    pub cubes: Vec<Vec<Cube>>,
    pub hyperplanes: Vec<Hyperplane>,
    /// Enumeration stopped at the vertex cap.
    pub vertex_cap_hit: bool,
    /// Cubes above the dimension cap exist.
    pub dim_truncated: bool,
    /// Vertex set of the seed's component, recorded when a seed is given and the component
    /// is not the whole vertex set.
    pub seed_component: Option<Vec<usize>>,
    index: HashMap<BitSet, usize>,
}

impl CubeComplex {
    pub fn is_partial(&self) -> bool {
        self.vertex_cap_hit || self.dim_truncated
    }

    pub fn vertex_of(&self, u: &Ultrafilter) -> Option<usize> {
        self.index.get(u.signs()).copied()
    }

    pub fn squares(&self) -> &[Cube] {
        self.cubes.first().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dimension(&self) -> usize {
        if self.edges.is_empty() {
            0
        } else {
            1 + self.cubes.iter().take_while(|c| !c.is_empty()).count()
        }
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        adj
    }

    pub fn vertex_names(&self, v: usize) -> Vec<String> {
        self.vertices[v].chosen().map(|a| self.names[a].clone()).collect()
    }

    /// Breadth-first distances from `v`.
    pub fn distances_from(&self, v: usize) -> Vec<Option<usize>> {
        let adj = self.neighbors();
        let mut d = vec![None; self.vertices.len()];
        d[v] = Some(0);
        let mut q = VecDeque::from([v]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if d[y].is_none() {
                    d[y] = Some(d[x].unwrap() + 1);
                    q.push_back(y);
                }
            }
        }
        d
    }

    pub fn component_of(&self, v: usize) -> Vec<usize> {
        self.distances_from(v).iter().enumerate().filter(|(_, d)| d.is_some()).map(|(i, _)| i).collect()
    }
}

/// Vertices containing `a`.
pub fn halfspace_vertex_set(c: &CubeComplex, a: ElemId) -> Vec<usize> {
    (0..c.vertices.len()).filter(|&v| c.vertices[v].contains(a)).collect()
}

// Backtracking over pairs in canonical order, plus side first. A partial selection extends
// to an ultrafilter iff no two selected elements satisfy a ≤ b*, so no branch dead-ends.
fn enumerate(rel: &Relation, n_pairs: usize, cap: usize, mode: OrderMode) -> (Vec<Ultrafilter>, bool) {
    let mut out = Vec::new();
    let mut starred = BitSet::new(2 * n_pairs);
    let mut signs = BitSet::new(n_pairs);
    fn rec(
        q: usize,
        n_pairs: usize,
        rel: &Relation,
        starred: &mut BitSet,
        signs: &mut BitSet,
        out: &mut Vec<Ultrafilter>,
        cap: usize,
        mode: OrderMode,
    ) -> bool {
        if q == n_pairs {
            if out.len() == cap {
                return false;
            }
            out.push(Ultrafilter::from_signs(mode, signs.clone()));
            return true;
        }
        for side in [0, 1] {
            let x = 2 * q + side;
            if rel.row(x).intersects(starred) {
                continue;
            }
            starred.set(star(x), true);
            signs.set(q, side == 1);
            let go_on = rec(q + 1, n_pairs, rel, starred, signs, out, cap, mode);
            starred.set(star(x), false);
            signs.set(q, false);
            if !go_on {
                return false;
            }
        }
        true
    }
    let complete = rec(0, n_pairs, rel, &mut starred, &mut signs, &mut out, cap, mode);
    (out, !complete)
}

/// Enumerates every ultrafilter of `p` in `mode` and assembles the cube complex.
pub fn build_cubing(p: &Pocset, mode: OrderMode, seed: Option<&Ultrafilter>, caps: CubingCaps) -> Result<CubeComplex> {
    if caps.max_vertices == 0 {
        return Err(Error::Malformed("vertex cap must be positive".into()));
    }
    if let Some(s) = seed {
        if s.mode != mode || !is_ultrafilter(p, s) {
            return Err(Error::InvalidUltrafilter("seed is not an ultrafilter in the requested mode".into()));
        }
    }
    let rel = p.relation(mode);
    let below = rel.transpose();
    let np = p.n_pairs();
    let (vertices, vertex_cap_hit) = enumerate(rel, np, caps.max_vertices, mode);
    let index: HashMap<BitSet, usize> = vertices.iter().enumerate().map(|(i, u)| (u.signs().clone(), i)).collect();

    // Minimal selected plus elements whose flip is a vertex, per vertex.
    let mut flips: Vec<Vec<usize>> = Vec::with_capacity(vertices.len());
    let mut edges = Vec::new();
    let mut edge_at: HashMap<(usize, usize), usize> = HashMap::new();
    for (v, u) in vertices.iter().enumerate() {
        let chosen = u.chosen_set();
        let mut fl = Vec::new();
        for q in 0..np {
            let a = u.chosen_in(q);
            if below.row(a).and_count(&chosen) != 1 {
                continue;
            }
            let Some(&w) = index.get(u.flipped(q).signs()) else { continue };
            if a == plus_of(q) {
                fl.push(q);
                edge_at.insert((v, q), edges.len());
                edges.push(CubeEdge { from: v, to: w, pair: q });
            }
        }
        flips.push(fl);
    }

    let flip_vertex = |v: usize, q: usize| index[vertices[v].flipped(q).signs()];
    let mut cubes: Vec<Vec<Cube>> = Vec::new();
    let mut level: Vec<HashSet<Vec<usize>>> = flips.iter().map(|f| f.iter().map(|&q| vec![q]).collect()).collect();
    let mut dim_truncated = false;
    for d in 2.. {
        let mut next: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); vertices.len()];
        let mut found = Vec::new();
        for v in 0..vertices.len() {
            let mut lower: Vec<&Vec<usize>> = level[v].iter().collect();
            lower.sort();
            for k in lower {
                let top = *k.last().unwrap();
                for &c in flips[v].iter().filter(|&&c| c > top) {
                    let w = flip_vertex(v, c);
                    if level[w].contains(k) {
                        let mut s = k.clone();
                        s.push(c);
                        next[v].insert(s.clone());
                        found.push((v, s));
                    }
                }
            }
        }
        if found.is_empty() {
            break;
        }
        if d > caps.max_dim {
            dim_truncated = true;
            break;
        }
        let mut list: Vec<Cube> = found
            .into_iter()
            .map(|(v, pairs)| {
                let mut vs = vec![v];
                for &q in &pairs {
                    let more: Vec<usize> = vs.iter().map(|&x| flip_vertex(x, q)).collect();
                    vs.extend(more);
                }
                vs.sort_unstable();
                Cube { base: v, pairs, vertices: vs }
            })
            .collect();
        list.sort_by(|a, b| (a.base, &a.pairs).cmp(&(b.base, &b.pairs)));
        cubes.push(list);
        level = next;
    }

    let mut uf = UnionFind::new(edges.len());
    if let Some(squares) = cubes.first() {
        for s in squares {
            let (v, a, c) = (s.base, s.pairs[0], s.pairs[1]);
            uf.union(edge_at[&(v, a)], edge_at[&(flip_vertex(v, c), a)]);
            uf.union(edge_at[&(v, c)], edge_at[&(flip_vertex(v, a), c)]);
        }
    }
    let (cls, k) = uf.classes();
    let mut hyperplanes: Vec<Hyperplane> = vec![Hyperplane { pair: usize::MAX, edges: Vec::new() }; k];
    for (i, e) in edges.iter().enumerate() {
        let h = &mut hyperplanes[cls[i]];
        if h.pair != usize::MAX && h.pair != e.pair {
            return Err(Error::Internal("hyperplane mixes pairs".into()));
        }
        h.pair = e.pair;
        h.edges.push(i);
    }

    let mut c = CubeComplex {
        mode,
        names: p.names(0..p.n_elements()),
        vertices,
        edges,
        cubes,
        hyperplanes,
        vertex_cap_hit,
        dim_truncated,
        seed_component: None,
        index,
    };
    if let Some(s) = seed {
        if let Some(v) = c.vertex_of(s) {
            let comp = c.component_of(v);
            if comp.len() != c.vertices.len() {
                c.seed_component = Some(comp);
            }
        }
    }
    Ok(c)
}

/// Checks that the almost-inclusion complex sits inside the inclusion complex: vertices,
/// edges and squares of the former are present in the latter, squares of the latter spanned
/// by vertices of the former belong to it, and half-spaces restrict.
pub fn compare_modes(subset: &CubeComplex, almost: &CubeComplex) -> ValidationReport {
    let mut r = ValidationReport::new();
    let map: Vec<Option<usize>> = almost.vertices.iter().map(|u| subset.vertex_of(u)).collect();
    if let Some(v) = map.iter().position(Option::is_none) {
        r.push("vertex-embedding", almost.vertex_names(v));
        return r;
    }
    let m = |v: usize| map[v].unwrap();
    let sub_edges: HashSet<(usize, usize)> = subset.edges.iter().map(|e| (e.from, e.to)).collect();
    if let Some(e) = almost.edges.iter().find(|e| !sub_edges.contains(&(m(e.from), m(e.to)))) {
        r.push("edge-embedding", vec![almost.names[plus_of(e.pair)].clone()]);
    }
    let sq = |c: &CubeComplex, f: &dyn Fn(usize) -> usize| -> HashSet<Vec<usize>> {
        c.squares()
            .iter()
            .map(|s| {
                let mut v: Vec<usize> = s.vertices.iter().map(|&x| f(x)).collect();
                v.sort_unstable();
                v
            })
            .collect()
    };
    let l_sq = sq(almost, &m);
    let c_sq = sq(subset, &|x| x);
    let in_l: HashSet<usize> = (0..almost.vertices.len()).map(m).collect();
    if l_sq.iter().any(|s| !c_sq.contains(s)) {
        r.push("square-embedding", vec![]);
    }
    if c_sq.iter().any(|s| s.iter().all(|v| in_l.contains(v)) && !l_sq.contains(s)) {
        r.push("full-subcomplex", vec![]);
    }
    for a in 0..almost.names.len() {
        let h: HashSet<usize> = halfspace_vertex_set(subset, a).into_iter().filter(|v| in_l.contains(v)).collect();
        let k: HashSet<usize> = halfspace_vertex_set(almost, a).into_iter().map(m).collect();
        if h != k {
            r.push("halfspace-restriction", vec![almost.names[a].clone()]);
            break;
        }
    }
    r
}
