//! Generators shared by the property tests.
#![allow(dead_code)]

use arbor::pocset::{CornerStatus, Pocset};
use proptest::prelude::*;

/// A tree with `parents.len()` edges: edge `k` joins vertex `k + 1` to an earlier vertex.
/// Returns `(tail, head)` per edge after applying the flips.
pub fn tree_edges(parents: &[usize], flips: &[bool]) -> Vec<(usize, usize)> {
    parents
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let (u, v) = (p % (k + 1), k + 1);
            if flips[k] {
                (v, u)
            } else {
                (u, v)
            }
        })
        .collect()
}

pub fn tree_strategy(max_edges: usize) -> impl Strategy<Value = (Vec<usize>, Vec<bool>, Vec<usize>)> {
    (1..=max_edges).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<usize>(), n),
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(0..3usize, n),
        )
    })
}

/// Vertex path from `from` to `to` in a tree.
pub fn path(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    prev[from] = from;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if prev[w] == usize::MAX {
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    let mut out = vec![to];
    while *out.last().unwrap() != from {
        out.push(prev[*out.last().unwrap()]);
    }
    out.reverse();
    out
}

/// The nested pocset of directed tree edges: `e ≤ f` when a simple path starts with `e` and
/// ends with `f`. Edge `k` is named `E{k}` and placed in part `X{parts[k]}`.
pub fn tree_pocset(edges: &[(usize, usize)], parts: &[usize]) -> Pocset {
    let n = edges.len();
    let mut adj = vec![Vec::new(); n + 1];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let names: Vec<String> = (0..n).map(|k| format!("E{k}")).collect();
    let mut b = Pocset::builder().elements(names.iter().map(String::as_str));
    for j in 0..=parts.iter().copied().max().unwrap_or(0) {
        let members: Vec<String> = (0..n).filter(|&k| parts[k] == j).map(|k| names[k].clone()).collect();
        if !members.is_empty() {
            b = b.part_owned(format!("X{j}"), members);
        }
    }
    let directed = |k: usize, rev: bool| {
        let (u, v) = edges[k];
        if rev {
            (v, u, format!("{}*", names[k]))
        } else {
            (u, v, names[k].clone())
        }
    };
    for k in 0..n {
        for l in 0..n {
            if k == l {
                continue;
            }
            for rk in [false, true] {
                for rl in [false, true] {
                    let (u, v, a) = directed(k, rk);
                    let (x, y, c) = directed(l, rl);
                    let pth = path(&adj, u, y);
                    if pth.len() >= 3 && pth[1] == v && pth[pth.len() - 2] == x {
                        b = b.relation(&a, &c);
                    }
                }
            }
        }
    }
    b.build().unwrap()
}

/// Half-spaces as subsets of eight points; points 0..4 stand for infinite pieces, so a
/// corner is small when it misses them and empty when it misses everything.
pub const HEAVY: u8 = 0b0000_1111;

pub fn corner_status(set: u8) -> CornerStatus {
    if set == 0 {
        CornerStatus::Empty
    } else if set & HEAVY == 0 {
        CornerStatus::SmallNonempty
    } else {
        CornerStatus::Large
    }
}

/// Masks usable as distinct half-spaces: neither side small, and no two almost equal up to
/// complement.
pub fn admissible(masks: &[u8]) -> bool {
    let heavy_split = |m: u8| m & HEAVY != 0 && !m & HEAVY != 0;
    masks.iter().all(|&m| heavy_split(m))
        && masks.iter().enumerate().all(|(i, &a)| {
            masks[i + 1..].iter().all(|&b| (a ^ b) & HEAVY != 0 && (a ^ !b) & HEAVY != 0)
        })
}

pub fn subset_corners(masks: &[u8]) -> Vec<(String, String, [CornerStatus; 4])> {
    let mut out = Vec::new();
    for i in 0..masks.len() {
        for j in i + 1..masks.len() {
            let (a, b) = (masks[i], masks[j]);
            out.push((
                format!("P{i}"),
                format!("P{j}"),
                [corner_status(a & b), corner_status(a & !b), corner_status(!a & b), corner_status(!a & !b)],
            ));
        }
    }
    out
}

pub fn subset_pocset(masks: &[u8]) -> arbor::Result<Pocset> {
    let names: Vec<String> = (0..masks.len()).map(|i| format!("P{i}")).collect();
    let mut b = Pocset::builder().elements(names.iter().map(String::as_str));
    for (x, y, st) in subset_corners(masks) {
        b = b.corner(&x, &y, st);
    }
    b.build()
}

pub fn masks_strategy(max: usize) -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(any::<u8>(), 1..=max).prop_filter("admissible", |m| admissible(m))
}
