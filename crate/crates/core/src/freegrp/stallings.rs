use std::collections::VecDeque;

use serde::Serialize;

use super::automaton::{Dfa, Nfa, RegularSet};
use super::word::{inv, Letter, Word};
use crate::uf::UnionFind;

/// Folded core graph of a finitely generated subgroup. `out[v][x]` follows the signed
/// letter `x` from `v`; every edge is stored in both directions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StallingsGraph {
    pub letters: usize,
    pub base: usize,
    pub out: Vec<Vec<Option<usize>>>,
}

impl StallingsGraph {
    pub fn trivial(letters: usize) -> Self {
        StallingsGraph { letters, base: 0, out: vec![vec![None; letters]] }
    }

    /// Folds a bouquet of loops labeled by `gens` and trims it to its core.
    pub fn from_generators(letters: usize, gens: &[Word]) -> Self {
        let mut n = 1;
        let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
        for g in gens {
            let l = g.letters();
            if l.is_empty() {
                continue;
            }
            let mut at = 0;
            for (i, &x) in l.iter().enumerate() {
                let to = if i + 1 == l.len() {
                    0
                } else {
                    n += 1;
                    n - 1
                };
                edges.push((at, x, to));
                at = to;
            }
        }
        Self::fold(letters, n, 0, edges)
    }

    fn fold(letters: usize, n: usize, base: usize, edges: Vec<(usize, Letter, usize)>) -> Self {
        // normalize to positive letters
        let mut edges: Vec<(usize, Letter, usize)> =
            edges.into_iter().map(|(u, x, v)| if x & 1 == 1 { (v, inv(x), u) } else { (u, x, v) }).collect();
        let mut uf = UnionFind::new(n);
        loop {
            let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; letters]; n];
            let mut changed = false;
            for &(u, x, v) in &edges {
                let (u, v) = (uf.find(u), uf.find(v));
                for (a, y, b) in [(u, x, v), (v, inv(x), u)] {
                    match table[a][y] {
                        Some(t) if uf.find(t) != uf.find(b) => {
                            uf.union(t, b);
                            changed = true;
                        }
                        Some(_) => {}
                        None => table[a][y] = Some(b),
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for e in &mut edges {
            *e = (uf.find(e.0), e.1, uf.find(e.2));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut g = StallingsGraph { letters, base: uf.find(base), out: vec![vec![None; letters]; n] };
        for &(u, x, v) in &edges {
            g.out[u][x] = Some(v);
            g.out[v][inv(x)] = Some(u);
        }
        g.core().renumbered()
    }

    fn degree(&self, v: usize) -> usize {
        self.out[v].iter().filter(|t| t.is_some()).count()
    }

    /// Removes hanging trees away from the base.
    fn core(mut self) -> Self {
        loop {
            let leaves: Vec<usize> =
                (0..self.out.len()).filter(|&v| v != self.base && self.degree(v) == 1).collect();
            if leaves.is_empty() {
                break;
            }
            for v in leaves {
                for x in 0..self.letters {
                    if let Some(t) = self.out[v][x].take() {
                        self.out[t][inv(x)] = None;
                    }
                }
            }
        }
        self
    }

    /// Keeps the component of the base, numbered breadth-first with base 0.
    fn renumbered(self) -> Self {
        let mut num = vec![usize::MAX; self.out.len()];
        let mut order = vec![self.base];
        num[self.base] = 0;
        let mut i = 0;
        while i < order.len() {
            for t in self.out[order[i]].iter().flatten() {
                if num[*t] == usize::MAX {
                    num[*t] = order.len();
                    order.push(*t);
                }
            }
            i += 1;
        }
        let out = order.iter().map(|&v| self.out[v].iter().map(|t| t.map(|t| num[t])).collect()).collect();
        StallingsGraph { letters: self.letters, base: 0, out }
    }

    pub fn n_vertices(&self) -> usize {
        self.out.len()
    }

    pub fn n_edges(&self) -> usize {
        self.out.iter().map(|r| r.iter().step_by(2).filter(|t| t.is_some()).count()).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.n_edges() == 0
    }

    fn read_from(&self, v: usize, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(v, |q, &x| self.out[q][x])
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.read_from(self.base, w) == Some(self.base)
    }

    /// Free generators from a breadth-first spanning tree.
    pub fn generators(&self) -> Vec<Word> {
        let n = self.out.len();
        let mut path: Vec<Option<Word>> = vec![None; n];
        path[self.base] = Some(Word::empty());
        let mut queue = VecDeque::from([self.base]);
        let mut tree: Vec<(usize, Letter)> = Vec::new();
        while let Some(v) = queue.pop_front() {
            for x in 0..self.letters {
                if let Some(t) = self.out[v][x] {
                    if path[t].is_none() {
                        path[t] = Some(path[v].as_ref().unwrap().mul(&Word::letter(x)));
                        tree.push((v, x));
                        tree.push((t, inv(x)));
                        queue.push_back(t);
                    }
                }
            }
        }
        let mut gens = Vec::new();
        for v in 0..n {
            for x in (0..self.letters).step_by(2) {
                if let Some(t) = self.out[v][x] {
                    if !tree.contains(&(v, x)) {
                        let p = path[v].as_ref().unwrap();
                        gens.push(p.mul(&Word::letter(x)).mul(&path[t].as_ref().unwrap().inverse()));
                    }
                }
            }
        }
        gens
    }

    /// The subgroup as a language of reduced words.
    pub fn language(&self) -> RegularSet {
        let n = self.out.len();
        let sink = n;
        let mut trans: Vec<Vec<usize>> =
            self.out.iter().map(|r| r.iter().map(|t| t.unwrap_or(sink)).collect()).collect();
        trans.push(vec![sink; self.letters]);
        let mut accept = vec![false; n + 1];
        accept[self.base] = true;
        RegularSet::from_dfa(&Dfa { letters: self.letters, start: self.base, accept, trans })
    }

    /// The coset `H g`.
    pub fn coset_language(&self, g: &Word) -> RegularSet {
        self.language().right_translate(g)
    }

    /// Copies the graph into `nfa`, returning the state of each vertex.
    fn embed(&self, nfa: &mut Nfa) -> Vec<usize> {
        let ids: Vec<usize> = (0..self.out.len()).map(|_| nfa.add_state(false)).collect();
        for v in 0..self.out.len() {
            for x in 0..self.letters {
                if let Some(t) = self.out[v][x] {
                    nfa.add_edge(ids[v], x, ids[t]);
                }
            }
        }
        ids
    }

    pub fn intersection(&self, other: &StallingsGraph) -> StallingsGraph {
        let mut index = std::collections::HashMap::new();
        let mut states = vec![(self.base, other.base)];
        index.insert((self.base, other.base), 0);
        let mut edges = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (a, b) = states[i];
            for x in (0..self.letters).step_by(2) {
                if let (Some(s), Some(t)) = (self.out[a][x], other.out[b][x]) {
                    let id = *index.entry((s, t)).or_insert_with(|| {
                        states.push((s, t));
                        states.len() - 1
                    });
                    edges.push((i, x, id));
                }
            }
            for x in (1..self.letters).step_by(2) {
                if let (Some(s), Some(t)) = (self.out[a][x], other.out[b][x]) {
                    if !index.contains_key(&(s, t)) {
                        index.insert((s, t), states.len());
                        states.push((s, t));
                    }
                }
            }
            i += 1;
        }
        Self::fold(self.letters, states.len(), 0, edges)
    }

    /// `[self : sub]` when `sub` is a subgroup of finite index, `None` when the index is
    /// infinite or `sub` is not contained in `self`.
    pub fn index_of(&self, sub: &StallingsGraph) -> Option<usize> {
        if self.is_trivial() {
            return sub.is_trivial().then_some(1);
        }
        if sub.generators().iter().any(|g| !self.contains(g)) {
            return None;
        }
        // Move the base of self onto its cycles; conjugate sub by the same path.
        let mut p = Word::empty();
        let mut v = self.base;
        let mut came: Option<Letter> = None;
        while self.degree(v) == 1 || (v != self.base && self.degree(v) == 2) {
            let x = (0..self.letters).find(|&x| self.out[v][x].is_some() && Some(inv(x)) != came).unwrap();
            p = p.mul(&Word::letter(x));
            v = self.out[v][x].unwrap();
            came = Some(x);
        }
        let conj = |g: &Word| p.inverse().mul(g).mul(&p);
        let big = Self::from_generators(self.letters, &self.generators().iter().map(conj).collect::<Vec<_>>());
        let small = Self::from_generators(self.letters, &sub.generators().iter().map(conj).collect::<Vec<_>>());
        if small.is_trivial() {
            return None;
        }
        // The immersion of small into big must be a covering.
        let mut image = vec![usize::MAX; small.out.len()];
        image[small.base] = big.base;
        let mut queue = VecDeque::from([small.base]);
        while let Some(u) = queue.pop_front() {
            for x in 0..self.letters {
                match (small.out[u][x], big.out[image[u]][x]) {
                    (Some(t), Some(s)) => {
                        if image[t] == usize::MAX {
                            image[t] = s;
                            queue.push_back(t);
                        }
                    }
                    (None, None) => {}
                    _ => return None,
                }
            }
        }
        (small.n_vertices() % big.n_vertices() == 0).then(|| small.n_vertices() / big.n_vertices())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Commensurability {
    pub commensurable: bool,
    pub index_in_first: Option<usize>,
    pub index_in_second: Option<usize>,
}

pub fn subgroup_membership(h: &StallingsGraph, w: &Word) -> bool {
    h.contains(w)
}

/// Two subgroups are commensurable when their intersection has finite index in both.
pub fn commensurable(h: &StallingsGraph, k: &StallingsGraph) -> Commensurability {
    let i = h.intersection(k);
    let a = h.index_of(&i);
    let b = k.index_of(&i);
    Commensurability { commensurable: a.is_some() && b.is_some(), index_in_first: a, index_in_second: b }
}

/// The reduced words of `K g H`.
pub fn double_coset_language(k: &StallingsGraph, g: &Word, h: &StallingsGraph) -> RegularSet {
    let mut nfa = Nfa::new(k.letters);
    let ks = k.embed(&mut nfa);
    nfa.start = ks[k.base];
    let end = nfa.add_path(ks[k.base], g.letters());
    let hs = h.embed(&mut nfa);
    nfa.eps[end].insert(hs[h.base]);
    nfa.accept[hs[h.base]] = true;
    nfa.reduced_language()
}
