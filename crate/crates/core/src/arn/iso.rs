use std::collections::BTreeMap;

use super::tree::{BipartiteTree, Color};

// Stable color classes of the disjoint union, shared between both trees.
fn refine(t1: &BipartiteTree, t2: &BipartiteTree, color_strict: bool) -> (Vec<usize>, Vec<usize>) {
    let adj1 = t1.adjacency();
    let adj2 = t2.adjacency();
    let seed = |t: &BipartiteTree, adj: &[Vec<usize>], v: usize| -> (u8, usize) {
        let c = if color_strict { (t.nodes[v].color == Color::V1) as u8 } else { 0 };
        (c, adj[v].len())
    };
    let mut ids: BTreeMap<(u8, usize), usize> = BTreeMap::new();
    let init1: Vec<(u8, usize)> = (0..t1.nodes.len()).map(|v| seed(t1, &adj1, v)).collect();
    let init2: Vec<(u8, usize)> = (0..t2.nodes.len()).map(|v| seed(t2, &adj2, v)).collect();
    for k in init1.iter().chain(&init2) {
        let next = ids.len();
        ids.entry(*k).or_insert(next);
    }
    let mut c1: Vec<usize> = init1.iter().map(|k| ids[k]).collect();
    let mut c2: Vec<usize> = init2.iter().map(|k| ids[k]).collect();
    let mut classes = ids.len();
    loop {
        let mut ids: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let sig = |c: &[usize], adj: &[Vec<usize>], v: usize| {
            let mut n: Vec<usize> = adj[v].iter().map(|&w| c[w]).collect();
            n.sort_unstable();
            (c[v], n)
        };
        let s1: Vec<_> = (0..c1.len()).map(|v| sig(&c1, &adj1, v)).collect();
        let s2: Vec<_> = (0..c2.len()).map(|v| sig(&c2, &adj2, v)).collect();
        for k in s1.iter().chain(&s2) {
            let next = ids.len();
            ids.entry(k.clone()).or_insert(next);
        }
        c1 = s1.iter().map(|k| ids[k]).collect();
        c2 = s2.iter().map(|k| ids[k]).collect();
        if ids.len() == classes {
            return (c1, c2);
        }
        classes = ids.len();
    }
}

/// Searches for a graph isomorphism from `t1` to `t2` that commutes with every generator
/// map present in both trees wherever both sides are defined, and preserves colors when
/// `color_strict` is set. Returns the node map.
pub fn gtree_isomorphic(t1: &BipartiteTree, t2: &BipartiteTree, color_strict: bool) -> Option<Vec<usize>> {
    let n = t1.nodes.len();
    if n != t2.nodes.len() || t1.edges.len() != t2.edges.len() {
        return None;
    }
    let (c1, c2) = refine(t1, t2, color_strict);
    let mut h1 = c1.clone();
    let mut h2 = c2.clone();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return None;
    }
    let adj1 = t1.adjacency();
    let adj2 = t2.adjacency();
    let gens: Vec<(&[Option<usize>], &[Option<usize>])> = t1
        .action
        .iter()
        .filter_map(|g| t2.action.iter().find(|h| h.name == g.name).map(|h| (g.map.as_slice(), h.map.as_slice())))
        .collect();

    // Breadth-first order so that every node after a component root has a placed parent.
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    for r in 0..n {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let start = order.len();
        order.push(r);
        let mut i = start;
        while i < order.len() {
            let v = order[i];
            for &w in &adj1[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    order.push(w);
                }
            }
            i += 1;
        }
    }

    let mut f: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    let mut adjacent2 = vec![std::collections::HashSet::new(); n];
    for &(a, b) in &t2.edges {
        adjacent2[a].insert(b);
        adjacent2[b].insert(a);
    }

    let consistent = |f: &[Option<usize>], v: usize, x: usize| -> bool {
        let mapped: Vec<usize> = adj1[v].iter().filter_map(|&u| f[u]).collect();
        if mapped.iter().any(|&y| !adjacent2[x].contains(&y)) {
            return false;
        }
        if adj2[x].iter().filter(|&&y| used_by(f, y)).count() != mapped.len() {
            return false;
        }
        for (g1, g2) in &gens {
            if let (Some(w), Some(y)) = (g1[v], g2[x]) {
                if w == v {
                    if y != x {
                        return false;
                    }
                } else if let Some(fw) = f[w] {
                    if fw != y {
                        return false;
                    }
                }
            }
            for u in 0..n {
                if let (Some(fu), Some(w)) = (f[u], g1[u]) {
                    if w == v {
                        if let Some(y) = g2[fu] {
                            if y != x {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    };

    fn used_by(f: &[Option<usize>], y: usize) -> bool {
        f.iter().any(|&x| x == Some(y))
    }

    fn search(
        k: usize,
        order: &[usize],
        parent: &[Option<usize>],
        c1: &[usize],
        c2: &[usize],
        adj2: &[Vec<usize>],
        f: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        consistent: &dyn Fn(&[Option<usize>], usize, usize) -> bool,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        let candidates: Vec<usize> = match parent[v] {
            Some(p) => adj2[f[p].unwrap()].clone(),
            None => (0..c2.len()).collect(),
        };
        for x in candidates {
            if used[x] || c2[x] != c1[v] || !consistent(f, v, x) {
                continue;
            }
            f[v] = Some(x);
            used[x] = true;
            if search(k + 1, order, parent, c1, c2, adj2, f, used, consistent) {
                return true;
            }
            f[v] = None;
            used[x] = false;
        }
        false
    }

    if search(0, &order, &parent, &c1, &c2, &adj2, &mut f, &mut used, &consistent) {
        Some(f.into_iter().map(Option::unwrap).collect())
    } else {
        None
    }
}
