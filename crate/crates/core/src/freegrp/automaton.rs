use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::word::{inv, Letter, Word};

/// A complete deterministic automaton over `k` signed letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Dfa {
    pub letters: usize,
    pub start: usize,
    pub accept: Vec<bool>,
    /// `trans[state][letter]`.
    pub trans: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn n_states(&self) -> usize {
        self.accept.len()
    }

    pub fn run(&self, w: &[Letter]) -> usize {
        w.iter().fold(self.start, |q, &x| self.trans[q][x])
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.accept[self.run(w)]
    }

    /// Reduced words: states are "start", "last letter was x", and a sink.
    pub fn reduced_words(k: usize) -> Dfa {
        let sink = k + 1;
        let mut trans = vec![vec![0; k]; k + 2];
        for (q, row) in trans.iter_mut().enumerate() {
            for (x, t) in row.iter_mut().enumerate() {
                *t = if q == sink || (q > 0 && inv(q - 1) == x) { sink } else { x + 1 };
            }
        }
        let mut accept = vec![true; k + 2];
        accept[sink] = false;
        Dfa { letters: k, start: 0, accept, trans }
    }

    /// Reachable part of the product, accepting by `f`.
    pub fn product(&self, other: &Dfa, f: impl Fn(bool, bool) -> bool) -> Dfa {
        assert_eq!(self.letters, other.letters);
        let k = self.letters;
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut states = vec![(self.start, other.start)];
        index.insert((self.start, other.start), 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (a, b) = states[i];
            let mut row = Vec::with_capacity(k);
            for x in 0..k {
                let t = (self.trans[a][x], other.trans[b][x]);
                let id = *index.entry(t).or_insert_with(|| {
                    states.push(t);
                    states.len() - 1
                });
                row.push(id);
            }
            trans.push(row);
            i += 1;
        }
        let accept = states.iter().map(|&(a, b)| f(self.accept[a], other.accept[b])).collect();
        Dfa { letters: k, start: 0, accept, trans }
    }

    /// Minimal automaton with states numbered in breadth-first order from the start, letters
    /// in increasing order. Equal languages give equal automata.
    pub fn minimized(&self) -> Dfa {
        let n = self.n_states();
        let k = self.letters;
        // reachable states
        let mut seen = vec![false; n];
        let mut order = vec![self.start];
        seen[self.start] = true;
        let mut i = 0;
        while i < order.len() {
            for x in 0..k {
                let t = self.trans[order[i]][x];
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        // Moore refinement
        let mut class: Vec<usize> = (0..n).map(|q| self.accept[q] as usize).collect();
        let mut count = 0;
        loop {
            let mut sig: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![usize::MAX; n];
            for &q in &order {
                let mut key = Vec::with_capacity(k + 1);
                key.push(class[q]);
                key.extend(self.trans[q].iter().map(|&t| class[t]));
                let l = sig.len();
                next[q] = *sig.entry(key).or_insert(l);
            }
            let c = sig.len();
            class = next;
            if c == count {
                break;
            }
            count = c;
        }
        // canonical numbering
        let mut number = vec![usize::MAX; count];
        let mut reps = Vec::new();
        let mut queue = VecDeque::from([self.start]);
        number[class[self.start]] = 0;
        reps.push(self.start);
        while let Some(q) = queue.pop_front() {
            for x in 0..k {
                let t = self.trans[q][x];
                if number[class[t]] == usize::MAX {
                    number[class[t]] = reps.len();
                    reps.push(t);
                    queue.push_back(t);
                }
            }
        }
        let trans = reps.iter().map(|&q| self.trans[q].iter().map(|&t| number[class[t]]).collect()).collect();
        let accept = reps.iter().map(|&q| self.accept[q]).collect();
        Dfa { letters: k, start: 0, accept, trans }
    }

    /// States from which some accepting state is reachable.
    pub fn live(&self) -> Vec<bool> {
        let n = self.n_states();
        let mut rev = vec![Vec::new(); n];
        for q in 0..n {
            for &t in &self.trans[q] {
                rev[t].push(q);
            }
        }
        let mut live = self.accept.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&q| live[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }
}

/// Does the graph restricted to `alive` states, reachable from `start`, contain a cycle?
pub(crate) fn has_cycle(start: usize, succ: &dyn Fn(usize) -> Vec<usize>, alive: &dyn Fn(usize) -> bool) -> bool {
    // colors: 0 new, 1 on stack, 2 done
    let mut color: HashMap<usize, u8> = HashMap::new();
    if !alive(start) {
        return false;
    }
    let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(start, succ(start), 0)];
    color.insert(start, 1);
    while let Some((q, next, i)) = stack.last_mut() {
        if *i == next.len() {
            color.insert(*q, 2);
            stack.pop();
            continue;
        }
        let t = next[*i];
        *i += 1;
        if !alive(t) {
            continue;
        }
        match color.get(&t) {
            Some(1) => return true,
            Some(_) => {}
            None => {
                color.insert(t, 1);
                let s = succ(t);
                stack.push((t, s, 0));
            }
        }
    }
    false
}

/// A regular set of reduced words, held as its canonical minimal automaton.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct RegularSet {
    dfa: Dfa,
}

impl RegularSet {
    /// Restricts `dfa` to reduced words and canonicalizes.
    pub fn from_dfa(dfa: &Dfa) -> Self {
        let r = Dfa::reduced_words(dfa.letters);
        RegularSet { dfa: dfa.product(&r, |a, b| a && b).minimized() }
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn letters(&self) -> usize {
        self.dfa.letters
    }

    pub fn all(k: usize) -> Self {
        RegularSet { dfa: Dfa::reduced_words(k).minimized() }
    }

    pub fn none(k: usize) -> Self {
        RegularSet { dfa: Dfa { letters: k, start: 0, accept: vec![false], trans: vec![vec![0; k]] } }
    }

    /// A finite set of words.
    pub fn finite(k: usize, words: &[Word]) -> Self {
        let mut trans: Vec<Vec<usize>> = vec![vec![usize::MAX; k]];
        let mut accept = vec![false];
        for w in words {
            let mut q = 0;
            for &x in w.letters() {
                if trans[q][x] == usize::MAX {
                    trans.push(vec![usize::MAX; k]);
                    accept.push(false);
                    trans[q][x] = trans.len() - 1;
                }
                q = trans[q][x];
            }
            accept[q] = true;
        }
        let sink = trans.len();
        trans.push(vec![sink; k]);
        accept.push(false);
        for row in &mut trans {
            for t in row.iter_mut() {
                if *t == usize::MAX {
                    *t = sink;
                }
            }
        }
        Self::from_dfa(&Dfa { letters: k, start: 0, accept, trans })
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.dfa.accepts(w.letters())
    }

    pub fn intersect(&self, other: &RegularSet) -> RegularSet {
        RegularSet { dfa: self.dfa.product(&other.dfa, |a, b| a && b).minimized() }
    }

    pub fn union(&self, other: &RegularSet) -> RegularSet {
        RegularSet { dfa: self.dfa.product(&other.dfa, |a, b| a || b).minimized() }
    }

    pub fn minus(&self, other: &RegularSet) -> RegularSet {
        RegularSet { dfa: self.dfa.product(&other.dfa, |a, b| a && !b).minimized() }
    }

    /// Complement within the reduced words.
    pub fn complement(&self) -> RegularSet {
        RegularSet::all(self.letters()).minus(self)
    }

    pub fn symmetric_difference(&self, other: &RegularSet) -> RegularSet {
        RegularSet { dfa: self.dfa.product(&other.dfa, |a, b| a != b).minimized() }
    }

    pub fn is_subset(&self, other: &RegularSet) -> bool {
        self.minus(other).is_empty()
    }

    pub fn is_empty(&self) -> bool {
        !self.dfa.live()[self.dfa.start]
    }

    pub fn is_finite(&self) -> bool {
        let live = self.dfa.live();
        let d = &self.dfa;
        !has_cycle(d.start, &|q| d.trans[q].clone(), &|q| live[q])
    }

    /// Accepted words of length at most `max_len`, in shortlex order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let d = &self.dfa;
        let live = d.live();
        let mut out = Vec::new();
        let mut layer = vec![(Vec::new(), d.start)];
        for len in 0..=max_len {
            for (w, q) in &layer {
                if d.accept[*q] {
                    out.push(Word(w.clone()));
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, q) in &layer {
                for x in 0..d.letters {
                    let t = d.trans[*q][x];
                    if live[t] {
                        let mut v = w.clone();
                        v.push(x);
                        next.push((v, t));
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// `g · L`, reduced.
    pub fn left_translate(&self, g: &Word) -> RegularSet {
        // u is in gL iff reduce(h u) is in L, h = g^-1. Reading u, the first letters may
        // cancel a suffix of h; phase j means j letters of h have been cancelled.
        let h = g.inverse();
        let hl = h.letters();
        let m = hl.len();
        let d = &self.dfa;
        let k = d.letters;
        let n = d.n_states();
        // states 0..n are the automaton of L, n + j is phase j
        let prefix_state = |j: usize| d.run(&hl[..m - j]);
        let mut trans = d.trans.clone();
        let mut accept = d.accept.clone();
        for j in 0..=m {
            let mut row = Vec::with_capacity(k);
            let base = prefix_state(j);
            for x in 0..k {
                if j < m && x == inv(hl[m - 1 - j]) {
                    row.push(n + j + 1);
                } else {
                    row.push(d.trans[base][x]);
                }
            }
            trans.push(row);
            accept.push(d.accept[base]);
        }
        Self::from_dfa(&Dfa { letters: k, start: n, accept, trans })
    }

    /// `L · x` for a single letter, reduced.
    fn right_translate_letter(&self, x: Letter) -> RegularSet {
        // u is in Lx iff reduce(u x^-1) is in L: drop the last letter of u if it is x,
        // otherwise append x^-1. Track the state before the last letter when that was x.
        let d = &self.dfa;
        let k = d.letters;
        let mut index: HashMap<(usize, Option<usize>), usize> = HashMap::new();
        let mut states = vec![(d.start, None)];
        index.insert((d.start, None), 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (q, _) = states[i];
            let mut row = Vec::with_capacity(k);
            for y in 0..k {
                let t = (d.trans[q][y], if y == x { Some(q) } else { None });
                let id = *index.entry(t).or_insert_with(|| {
                    states.push(t);
                    states.len() - 1
                });
                row.push(id);
            }
            trans.push(row);
            i += 1;
        }
        let accept = states
            .iter()
            .map(|&(q, prev)| match prev {
                Some(p) => d.accept[p],
                None => d.accept[d.trans[q][inv(x)]],
            })
            .collect();
        Self::from_dfa(&Dfa { letters: k, start: 0, accept, trans })
    }

    /// `L · w`, reduced.
    pub fn right_translate(&self, w: &Word) -> RegularSet {
        w.letters().iter().fold(self.clone(), |l, &x| l.right_translate_letter(x))
    }

    pub fn n_states(&self) -> usize {
        self.dfa.n_states()
    }
}

/// Nondeterministic automaton with empty moves, used for images and products of subgroups
/// whose reduced forms are taken by saturation.
#[derive(Clone, Debug, Default)]
pub struct Nfa {
    pub letters: usize,
    pub edges: Vec<Vec<(Letter, usize)>>,
    pub eps: Vec<BTreeSet<usize>>,
    pub start: usize,
    pub accept: Vec<bool>,
}

impl Nfa {
    pub fn new(letters: usize) -> Self {
        Nfa { letters, ..Default::default() }
    }

    pub fn add_state(&mut self, accept: bool) -> usize {
        self.edges.push(Vec::new());
        self.eps.push(BTreeSet::new());
        self.accept.push(accept);
        self.accept.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, x: Letter, to: usize) {
        self.edges[from].push((x, to));
    }

    /// Adds a path spelling `w` from `from`, returning its end.
    pub fn add_path(&mut self, from: usize, w: &[Letter]) -> usize {
        let mut q = from;
        for &x in w {
            let t = self.add_state(false);
            self.add_edge(q, x, t);
            q = t;
        }
        q
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &t in &self.eps[q] {
                if set.insert(t) {
                    stack.push(t);
                }
            }
        }
    }

    fn step(&self, set: &BTreeSet<usize>, x: Letter) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &q in set {
            for &(y, t) in &self.edges[q] {
                if y == x {
                    out.insert(t);
                }
            }
        }
        self.closure(&mut out);
        out
    }

    /// Adds an empty move `p -> q` whenever a path `p -x-> . -x^-1-> q` exists, until stable.
    /// Afterwards the reduced words accepted are exactly the reductions of accepted words.
    pub fn saturate(&mut self) {
        loop {
            let mut added = false;
            for p in 0..self.accept.len() {
                let mut from = BTreeSet::from([p]);
                self.closure(&mut from);
                for x in 0..self.letters {
                    let mid = self.step(&from, x);
                    if mid.is_empty() {
                        continue;
                    }
                    let end = self.step(&mid, inv(x));
                    for q in end {
                        if q != p && self.eps[p].insert(q) {
                            added = true;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
    }

    /// Subset construction, restricted to reduced words.
    pub fn to_regular_set(&self) -> RegularSet {
        let k = self.letters;
        let mut start = BTreeSet::from([self.start]);
        self.closure(&mut start);
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut sets = vec![start.clone()];
        index.insert(start, 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let mut row = Vec::with_capacity(k);
            for x in 0..k {
                let t = self.step(&sets[i], x);
                let id = match index.get(&t) {
                    Some(&id) => id,
                    None => {
                        index.insert(t.clone(), sets.len());
                        sets.push(t);
                        sets.len() - 1
                    }
                };
                row.push(id);
            }
            trans.push(row);
            i += 1;
        }
        let accept = sets.iter().map(|s| s.iter().any(|&q| self.accept[q])).collect();
        RegularSet::from_dfa(&Dfa { letters: k, start: 0, accept, trans })
    }

    /// Reduced forms of the accepted words.
    pub fn reduced_language(mut self) -> RegularSet {
        self.saturate();
        self.to_regular_set()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegrp::word::Alphabet;

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    /// Words starting with `a` or `a-`, plus the empty word.
    fn left_first(s: &Alphabet) -> RegularSet {
        let all = RegularSet::all(4);
        let mut d = all.dfa().clone();
        // start state: after b or b- go to a dead state
        let dead = d.n_states();
        d.trans.push(vec![dead; 4]);
        d.accept.push(false);
        let st = d.start;
        d.trans[st][s.letter("b").unwrap()] = dead;
        d.trans[st][s.letter("b-").unwrap()] = dead;
        RegularSet::from_dfa(&d)
    }

    #[test]
    fn reduced_word_automaton() {
        let s = ab();
        let all = RegularSet::all(4);
        assert!(all.contains(&s.parse("a b a-").unwrap()));
        assert!(!all.dfa().accepts(&[0, 1]));
        assert_eq!(all.words_up_to(2).len(), 17);
        assert!(!all.is_finite());
        assert!(RegularSet::none(4).is_empty());
    }

    #[test]
    fn boolean_operations_are_canonical() {
        let s = ab();
        let x = left_first(&s);
        let y = x.complement();
        assert_eq!(x.union(&y), RegularSet::all(4));
        assert!(x.intersect(&y).is_empty());
        assert_eq!(y.complement(), x);
        let f = RegularSet::finite(4, &[s.parse("a").unwrap(), s.parse("b b").unwrap()]);
        assert!(f.is_finite() && !f.is_empty());
        assert_eq!(f.words_up_to(5).len(), 2);
    }

    #[test]
    fn translates_match_brute_force() {
        let s = ab();
        let x = left_first(&s);
        let ball = s.ball(5);
        for g in s.ball(2) {
            let gx = x.left_translate(&g);
            let xg = x.right_translate(&g);
            for w in s.ball(3) {
                assert_eq!(gx.contains(&w), x.contains(&g.inverse().mul(&w)), "left {g:?} {w:?}");
                assert_eq!(xg.contains(&w), x.contains(&w.mul(&g.inverse())), "right {g:?} {w:?}");
            }
            let _ = &ball;
        }
        let b = s.parse("b").unwrap();
        let bx = x.left_translate(&b);
        assert!(bx.contains(&b) && bx.contains(&s.parse("b a").unwrap()) && !bx.contains(&s.parse("a").unwrap()));
    }

    #[test]
    fn saturation_reduces_images() {
        let s = ab();
        // a^n b^-1 ... : the set {a b, b- a-... } as concatenation a (b b-)* a-
        let mut n = Nfa::new(4);
        let q0 = n.add_state(false);
        n.start = q0;
        let q1 = n.add_path(q0, &[0]);
        let q2 = n.add_path(q1, &[2, 3]);
        n.eps[q2].insert(q1);
        let q3 = n.add_path(q1, &[1]);
        n.accept[q3] = true;
        let l = n.reduced_language();
        assert_eq!(l.words_up_to(6), vec![Word::empty()]);
        let _ = s;
    }
}
