use std::collections::HashMap;

use serde::Serialize;

use super::automaton::{has_cycle, RegularSet};
use super::splitting::{SpecSet, SplittingSpec};
use super::stallings::StallingsGraph;
use super::word::{inv, Word};
use crate::cubing::Point;
use crate::error::{Error, Result};
use crate::pocset::{CornerStatus, Pocset, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smallness {
    Empty,
    SmallNonempty,
    Large,
    UnknownWithinBound,
}

impl Smallness {
    pub fn is_small(self) -> bool {
        matches!(self, Smallness::Empty | Smallness::SmallNonempty)
    }

    pub fn corner_status(self) -> Option<CornerStatus> {
        match self {
            Smallness::Empty => Some(CornerStatus::Empty),
            Smallness::SmallNonempty => Some(CornerStatus::SmallNonempty),
            Smallness::Large => Some(CornerStatus::Large),
            Smallness::UnknownWithinBound => None,
        }
    }
}

/// Search limits for smallness over a nontrivial stabilizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallnessBound {
    /// Corner words up to this length propose coset representatives.
    pub max_len: usize,
    pub max_cosets: usize,
}

impl Default for SmallnessBound {
    fn default() -> Self {
        SmallnessBound { max_len: 6, max_cosets: 8 }
    }
}

/// Statuses of `a∩b, a∩b*, a*∩b, a*∩b*` for a trivial stabilizer, where small means finite.
///
/// One search over reduced words tracks both automata and the last letter; each corner is
/// empty when no reachable state accepts it and finite when no cycle can reach such a state.
pub fn corner_statuses(a: &RegularSet, b: &RegularSet) -> [Smallness; 4] {
    let (da, db) = (a.dfa(), b.dfa());
    let k = da.letters;
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut states = vec![(da.start, db.start, k)];
    index.insert((da.start, db.start, k), 0);
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (p, q, last) = states[i];
        let mut row = Vec::new();
        for x in 0..k {
            if last < k && x == inv(last) {
                continue;
            }
            let t = (da.trans[p][x], db.trans[q][x], x);
            let id = *index.entry(t).or_insert_with(|| {
                states.push(t);
                states.len() - 1
            });
            row.push(id);
        }
        succ.push(row);
        i += 1;
    }
    let n = states.len();
    let mut pred = vec![Vec::new(); n];
    for (s, row) in succ.iter().enumerate() {
        for &t in row {
            pred[t].push(s);
        }
    }
    let mut out = [Smallness::Empty; 4];
    for (c, (wa, wb)) in [(true, true), (true, false), (false, true), (false, false)].into_iter().enumerate() {
        let hit = |s: usize| da.accept[states[s].0] == wa && db.accept[states[s].1] == wb;
        let mut useful = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&s| hit(s)).collect();
        for &s in &stack {
            useful[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &pred[s] {
                if !useful[p] {
                    useful[p] = true;
                    stack.push(p);
                }
            }
        }
        out[c] = if !useful[0] {
            Smallness::Empty
        } else if has_cycle(0, &|s| succ[s].clone(), &|s| useful[s]) {
            Smallness::Large
        } else {
            Smallness::SmallNonempty
        };
    }
    out
}

/// Smallness of the corner `a ∩ b` relative to a stabilizer subgroup.
///
/// With the trivial subgroup small means finite and the answer is exact. Otherwise the corner
/// is small when it lies in finitely many cosets `H g`; short corner words propose the cosets
/// and an exact inclusion test confirms them. A failed search answers unknown, never large.
pub fn corner_smallness(a: &RegularSet, b: &RegularSet, stabilizer: Option<&StallingsGraph>, bound: SmallnessBound) -> Smallness {
    let c = a.intersect(b);
    if c.is_empty() {
        return Smallness::Empty;
    }
    match stabilizer {
        None => {
            if c.is_finite() {
                Smallness::SmallNonempty
            } else {
                Smallness::Large
            }
        }
        Some(h) if h.is_trivial() => corner_smallness(a, b, None, bound),
        Some(h) => {
            let mut reps: Vec<Word> = Vec::new();
            for w in c.words_up_to(bound.max_len) {
                if !reps.iter().any(|r| h.contains(&w.mul(&r.inverse()))) {
                    reps.push(w);
                    if reps.len() > bound.max_cosets {
                        return Smallness::UnknownWithinBound;
                    }
                }
            }
            let cover = reps
                .iter()
                .map(|r| h.coset_language(r))
                .fold(RegularSet::none(a.letters()), |u, l| u.union(&l));
            if c.is_subset(&cover) {
                Smallness::SmallNonempty
            } else {
                Smallness::UnknownWithinBound
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BallElement {
    pub name: String,
    pub part: String,
    pub translate: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BallAlias {
    pub part: String,
    pub translate: String,
    pub element: String,
}

/// Translates `g X_j` of each splitting for `g` in a ball, deduplicated by language, with the
/// full corner table and the action of the basis letters.
#[derive(Clone, Debug, Serialize)]
pub struct SigmaBall {
    pub radius: usize,
    pub elements: Vec<BallElement>,
    /// Translates equal to an earlier element or its star.
    pub aliases: Vec<BallAlias>,
    /// Pairs left out in permissive mode because a corner could not be decided.
    pub excluded: Vec<[String; 2]>,
    #[serde(skip)]
    pub pocset: Pocset,
    #[serde(skip)]
    pub languages: Vec<RegularSet>,
    #[serde(skip)]
    words: Vec<Word>,
    #[serde(skip)]
    lookup: HashMap<(usize, Word), (usize, Sign)>,
}

pub fn element_name(spec: &SplittingSpec, set: &SpecSet, g: &Word) -> String {
    format!("{}[{}]", spec.name, set.alphabet.show(g))
}

/// Builds the Σ-ball of `set` at `radius`. In strict mode an undecided corner is an error;
/// in permissive mode the later pair of an undecided corner is excluded.
pub fn sigma_ball(set: &SpecSet, radius: usize, strict: bool) -> Result<SigmaBall> {
    let k = set.alphabet.size();
    let ball = set.alphabet.ball(radius);
    let mut pairs: Vec<(usize, Word)> = Vec::new();
    let mut languages: Vec<RegularSet> = Vec::new();
    let mut by_language: HashMap<RegularSet, (usize, Sign)> = HashMap::new();
    let mut lookup: HashMap<(usize, Word), (usize, Sign)> = HashMap::new();
    let mut aliases = Vec::new();
    for (s, spec) in set.specs.iter().enumerate() {
        for g in &ball {
            let l = spec.halfspace_language(&set.alphabet, g, Sign::Plus)?;
            if let Some(&(q, sign)) = by_language.get(&l) {
                lookup.insert((s, g.clone()), (q, sign));
                let (qs, qw) = &pairs[q];
                let mut element = element_name(&set.specs[*qs], set, qw);
                if sign == Sign::Minus {
                    element.push('*');
                }
                aliases.push(BallAlias { part: spec.name.clone(), translate: set.alphabet.show(g), element });
                continue;
            }
            let q = pairs.len();
            by_language.insert(l.complement(), (q, Sign::Minus));
            by_language.insert(l.clone(), (q, Sign::Plus));
            lookup.insert((s, g.clone()), (q, Sign::Plus));
            pairs.push((s, g.clone()));
            languages.push(l);
        }
    }
    let names: Vec<String> = pairs.iter().map(|(s, g)| element_name(&set.specs[*s], set, g)).collect();

    let n = pairs.len();
    let mut table: Vec<Vec<[Smallness; 4]>> = vec![Vec::new(); n];
    let mut excluded_pair = vec![false; n];
    let mut excluded = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let st = corner_statuses(&languages[i], &languages[j]);
            if pairs[i].0 != pairs[j].0 && st.iter().filter(|s| s.is_small()).count() >= 2 {
                return Err(Error::DuplicateSplitting(
                    set.specs[pairs[i].0].name.clone(),
                    set.specs[pairs[j].0].name.clone(),
                ));
            }
            if st.contains(&Smallness::UnknownWithinBound) {
                if strict {
                    return Err(Error::UnknownCorner(names[i].clone(), names[j].clone()));
                }
                excluded_pair[j] = true;
                excluded.push([names[i].clone(), names[j].clone()]);
            }
            table[i].push(st);
        }
    }

    let keep: Vec<usize> = (0..n).filter(|&q| !excluded_pair[q]).collect();
    let mut b = Pocset::builder().elements(keep.iter().map(|&q| names[q].as_str()));
    for (s, spec) in set.specs.iter().enumerate() {
        let members: Vec<String> = keep.iter().filter(|&&q| pairs[q].0 == s).map(|&q| names[q].clone()).collect();
        b = b.part_owned(spec.name.clone(), members);
    }
    for (x, &i) in keep.iter().enumerate() {
        for &j in &keep[x + 1..] {
            let st = table[i][j - i - 1].map(|s| s.corner_status().unwrap());
            b = b.corner(&names[i], &names[j], st);
        }
    }
    for x in (0..k).step_by(2) {
        let xw = Word::letter(x);
        let mut images = Vec::new();
        for &q in &keep {
            let (s, g) = &pairs[q];
            if let Some(&(r, sign)) = lookup.get(&(*s, xw.mul(g))) {
                if excluded_pair[r] {
                    continue;
                }
                let mut img = names[r].clone();
                if sign == Sign::Minus {
                    img.push('*');
                }
                images.push((names[q].clone(), img));
            }
        }
        b = b.generator_owned(set.alphabet.basis()[x / 2].clone(), images);
    }
    let pocset = b.build()?;
    let elements = keep
        .iter()
        .map(|&q| BallElement {
            name: names[q].clone(),
            part: set.specs[pairs[q].0].name.clone(),
            translate: set.alphabet.show(&pairs[q].1),
        })
        .collect();
    // pair indices of the pocset follow its canonical order
    let mut languages_out = Vec::with_capacity(keep.len());
    let mut words = Vec::with_capacity(keep.len());
    let mut pos_of = HashMap::new();
    for (x, &q) in keep.iter().enumerate() {
        pos_of.insert(q, x);
    }
    let mut canon = vec![0; keep.len()];
    for q in 0..pocset.n_pairs() {
        let orig = names.iter().position(|nm| nm == pocset.base(q)).unwrap();
        canon[pos_of[&orig]] = q;
    }
    let mut order: Vec<usize> = (0..keep.len()).collect();
    order.sort_by_key(|&x| canon[x]);
    for &x in &order {
        languages_out.push(languages[keep[x]].clone());
        words.push(pairs[keep[x]].1.clone());
    }
    let lookup = lookup
        .into_iter()
        .filter(|(_, (q, _))| !excluded_pair[*q])
        .map(|(key, (q, s))| (key, (canon[pos_of[&q]], s)))
        .collect();
    Ok(SigmaBall { radius, elements, aliases, excluded, pocset, languages: languages_out, words, lookup })
}

impl SigmaBall {
    /// The pocset element of `g X_s` (or its star), if it lies in the ball.
    pub fn element_of(&self, spec: usize, g: &Word, sign: Sign) -> Option<usize> {
        self.lookup.get(&(spec, g.clone())).map(|&(q, s)| 2 * q + (s != sign) as usize)
    }

    /// Translate word of a pair, in pocset order.
    pub fn translate(&self, pair: usize) -> &Word {
        &self.words[pair]
    }

    /// Ball words as points: `pullback[a]` is `h⁻¹ a` when it is an element of the ball.
    pub fn points(&self, set: &SpecSet, radius: usize) -> Vec<Point> {
        let p = &self.pocset;
        let mut spec_of = vec![0; p.n_pairs()];
        for q in 0..p.n_pairs() {
            spec_of[q] = set.specs.iter().position(|s| s.name == p.part_name_of(2 * q)).unwrap();
        }
        set.alphabet
            .ball(radius)
            .into_iter()
            .map(|h| {
                let hi = h.inverse();
                let pullback = (0..p.n_elements())
                    .map(|a| {
                        let sign = if a & 1 == 0 { Sign::Plus } else { Sign::Minus };
                        self.element_of(spec_of[a / 2], &hi.mul(&self.words[a / 2]), sign)
                    })
                    .collect();
                let membership = Some(
                    (0..p.n_elements()).map(|a| self.languages[a / 2].contains(&h) == (a & 1 == 0)).collect(),
                );
                Point { name: set.alphabet.show(&h), pullback, membership }
            })
            .collect()
    }

    /// Unordered crossing pairs of the ball.
    pub fn crossing_pairs(&self) -> Vec<[String; 2]> {
        let p = &self.pocset;
        let mut out = Vec::new();
        for i in 0..p.n_pairs() {
            for j in i + 1..p.n_pairs() {
                if p.crosses(2 * i, 2 * j) {
                    out.push([p.base(i).to_string(), p.base(j).to_string()]);
                }
            }
        }
        out
    }
}
