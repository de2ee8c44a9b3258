//! Finite pocsets: sets of half-spaces with a partial order and a free order-reversing
//! involution, optionally carrying corner data, a partition into parts and a partial
//! group action.
//!
//! Elements are addressed by [`ElemId`]: `2 * pair + sign`, so the star of `id` is `id ^ 1`.
//! Pairs are stored in canonical order, sorted by (part name, base name), which makes every
//! id-ordered listing canonical.

mod corners;
mod interval;
mod validate;

use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::bits::Relation;
use crate::error::{Error, Result};

pub use corners::{check_position, crossing, derive_order_from_corners, CornerStatus, CornerTable, PositionMode};
pub use interval::{interval, sandwich_report, IntervalResult, SandwichEntry, SandwichStatus};
pub use validate::validate_pocset;

pub type ElemId = usize;

#[inline]
pub fn star(id: ElemId) -> ElemId {
    id ^ 1
}

#[inline]
pub fn pair_of(id: ElemId) -> usize {
    id >> 1
}

#[inline]
pub fn plus_of(pair: usize) -> ElemId {
    pair << 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// An element name with an orientation; `A` and `A*` form a star pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedElement {
    pub base: String,
    pub sign: Sign,
}

impl SignedElement {
    pub fn plus(base: impl Into<String>) -> Self {
        SignedElement { base: base.into(), sign: Sign::Plus }
    }

    pub fn minus(base: impl Into<String>) -> Self {
        SignedElement { base: base.into(), sign: Sign::Minus }
    }

    pub fn star(&self) -> Self {
        SignedElement { base: self.base.clone(), sign: self.sign.flip() }
    }

    /// Parses `A` or `A*`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (base, sign) = match s.strip_suffix('*') {
            Some(b) => (b, Sign::Minus),
            None => (s, Sign::Plus),
        };
        if base.is_empty() || base.contains('*') || base.contains('|') {
            return Err(Error::Malformed(format!("bad element name {s:?}")));
        }
        Ok(SignedElement { base: base.to_string(), sign })
    }
}

impl fmt::Display for SignedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Plus => write!(f, "{}", self.base),
            Sign::Minus => write!(f, "{}*", self.base),
        }
    }
}

impl Serialize for SignedElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Which order an ultrafilter or cubing is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderMode {
    /// Inclusion: `A ⊂ B` iff the corner `A ∩ B*` is empty.
    Subset,
    /// Almost inclusion, the pocset's own order.
    Almost,
}

/// A named partial map on elements, commuting with star.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub map: Vec<Option<ElemId>>,
}

impl Generator {
    #[inline]
    pub fn apply(&self, id: ElemId) -> Option<ElemId> {
        self.map[id]
    }

    pub fn inverse(&self) -> Generator {
        let mut map = vec![None; self.map.len()];
        for (a, b) in self.map.iter().enumerate() {
            if let Some(b) = b {
                map[*b] = Some(a);
            }
        }
        Generator { name: format!("{}^-1", self.name), map }
    }
}

#[derive(Clone, Debug)]
pub struct Pocset {
    bases: Vec<String>,
    pair_part: Vec<usize>,
    parts: Vec<String>,
    index: HashMap<String, usize>,
    leq: Relation,
    incl: Relation,
    corners: Option<CornerTable>,
    action: Vec<Generator>,
}

/// Order source for [`PocsetBuilder`].
#[derive(Clone, Debug, Default)]
pub struct PocsetBuilder {
    bases: Vec<String>,
    parts: Vec<(String, Vec<String>)>,
    relations: Vec<(String, String)>,
    corners: Vec<(String, String, [CornerStatus; 4])>,
    action: Vec<(String, Vec<(String, String)>)>,
    raw: bool,
}

impl PocsetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn element(mut self, base: &str) -> Self {
        self.bases.push(base.to_string());
        self
    }

    pub fn elements<'a>(mut self, bases: impl IntoIterator<Item = &'a str>) -> Self {
        self.bases.extend(bases.into_iter().map(str::to_string));
        self
    }

    pub fn part(mut self, name: &str, members: &[&str]) -> Self {
        self.parts.push((name.to_string(), members.iter().map(|m| m.to_string()).collect()));
        self
    }

    pub fn part_owned(mut self, name: String, members: Vec<String>) -> Self {
        self.parts.push((name, members));
        self
    }

    /// Declares `a ≤ b`; the dual `b* ≤ a*` is added automatically unless the builder is raw.
    pub fn relation(mut self, a: &str, b: &str) -> Self {
        self.relations.push((a.to_string(), b.to_string()));
        self
    }

    /// Declares the corner statuses of `(a, b)` in the order `a∩b, a∩b*, a*∩b, a*∩b*`.
    pub fn corner(mut self, a: &str, b: &str, statuses: [CornerStatus; 4]) -> Self {
        self.corners.push((a.to_string(), b.to_string(), statuses));
        self
    }

    pub fn generator(mut self, name: &str, images: &[(&str, &str)]) -> Self {
        self.action.push((
            name.to_string(),
            images.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        ));
        self
    }

    pub fn generator_owned(mut self, name: String, images: Vec<(String, String)>) -> Self {
        self.action.push((name, images));
        self
    }

    /// Takes declared relations literally: no duals, no reflexive or transitive closure.
    /// Used to exercise the validator on relations that are not already partial orders.
    pub fn raw(mut self) -> Self {
        self.raw = true;
        self
    }

    pub fn build(self) -> Result<Pocset> {
        // Bases in declaration order, then canonical order.
        let mut seen = HashMap::new();
        let mut declared: Vec<String> = Vec::new();
        for b in &self.bases {
            let e = SignedElement::parse(b)?;
            if e.sign == Sign::Minus {
                return Err(Error::Malformed(format!("element list must name bases, got {b}")));
            }
            if seen.insert(e.base.clone(), declared.len()).is_some() {
                return Err(Error::Malformed(format!("duplicate element {b}")));
            }
            declared.push(e.base);
        }
        let mut part_names: Vec<String> = Vec::new();
        let mut part_of: Vec<Option<usize>> = vec![None; declared.len()];
        for (name, members) in &self.parts {
            if part_names.contains(name) {
                return Err(Error::Malformed(format!("duplicate part {name}")));
            }
            let pi = part_names.len();
            part_names.push(name.clone());
            for m in members {
                let e = SignedElement::parse(m)?;
                let &d = seen.get(&e.base).ok_or_else(|| Error::UnknownElement(m.clone()))?;
                if part_of[d].is_some() {
                    return Err(Error::Malformed(format!("element {m} listed in two parts")));
                }
                part_of[d] = Some(pi);
            }
        }
        let mut pair_part_decl = Vec::with_capacity(declared.len());
        for (d, base) in declared.iter().enumerate() {
            let pi = match part_of[d] {
                Some(p) => p,
                None => {
                    if part_names.contains(base) {
                        return Err(Error::Malformed(format!(
                            "element {base} has no part but a part of that name exists"
                        )));
                    }
                    part_names.push(base.clone());
                    part_names.len() - 1
                }
            };
            pair_part_decl.push(pi);
        }
        let mut order: Vec<usize> = (0..declared.len()).collect();
        order.sort_by(|&x, &y| {
            (&part_names[pair_part_decl[x]], &declared[x]).cmp(&(&part_names[pair_part_decl[y]], &declared[y]))
        });
        let bases: Vec<String> = order.iter().map(|&d| declared[d].clone()).collect();
        let pair_part: Vec<usize> = order.iter().map(|&d| pair_part_decl[d]).collect();
        let index: HashMap<String, usize> = bases.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        let n = 2 * bases.len();
        let lookup = |s: &str| -> Result<ElemId> {
            let e = SignedElement::parse(s)?;
            let p = *index.get(&e.base).ok_or_else(|| Error::UnknownElement(s.to_string()))?;
            Ok(2 * p + (e.sign == Sign::Minus) as usize)
        };

        if !self.corners.is_empty() && !self.relations.is_empty() {
            return Err(Error::Malformed("give either corners or relations, not both".into()));
        }
        let (leq, incl, corners) = if !self.corners.is_empty() {
            let mut t = CornerTable::new(bases.clone());
            for (a, b, st) in &self.corners {
                t.set(lookup(a)?, lookup(b)?, *st)?;
            }
            t.require_complete()?;
            let (leq, incl) = corners::derived_relations(&t)?;
            (leq, incl, Some(t))
        } else {
            let mut leq = if self.raw { Relation::new(n) } else { Relation::identity(n) };
            for (a, b) in &self.relations {
                let (a, b) = (lookup(a)?, lookup(b)?);
                leq.set(a, b);
                if !self.raw {
                    leq.set(star(b), star(a));
                }
            }
            if !self.raw {
                leq.close_transitively();
            }
            (leq.clone(), leq, None)
        };

        let mut action = Vec::new();
        for (name, images) in &self.action {
            if action.iter().any(|g: &Generator| &g.name == name) {
                return Err(Error::Malformed(format!("duplicate generator {name}")));
            }
            let mut map: Vec<Option<ElemId>> = vec![None; n];
            for (a, b) in images {
                let (a, b) = (lookup(a)?, lookup(b)?);
                for (x, y) in [(a, b), (star(a), star(b))] {
                    match map[x] {
                        Some(z) if z != y => {
                            return Err(Error::Malformed(format!("generator {name} maps an element twice")))
                        }
                        _ => map[x] = Some(y),
                    }
                }
            }
            action.push(Generator { name: name.clone(), map });
        }

        Ok(Pocset { bases, pair_part, parts: part_names, index, leq, incl, corners, action })
    }
}

impl Pocset {
    pub fn builder() -> PocsetBuilder {
        PocsetBuilder::new()
    }

    pub fn n_pairs(&self) -> usize {
        self.bases.len()
    }

    pub fn n_elements(&self) -> usize {
        2 * self.bases.len()
    }

    pub fn base(&self, pair: usize) -> &str {
        &self.bases[pair]
    }

    pub fn element(&self, id: ElemId) -> SignedElement {
        SignedElement {
            base: self.bases[pair_of(id)].clone(),
            sign: if id & 1 == 0 { Sign::Plus } else { Sign::Minus },
        }
    }

    pub fn name(&self, id: ElemId) -> String {
        self.element(id).to_string()
    }

    pub fn names(&self, ids: impl IntoIterator<Item = ElemId>) -> Vec<String> {
        ids.into_iter().map(|i| self.name(i)).collect()
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> Vec<SignedElement> {
        (0..self.n_elements()).map(|i| self.element(i)).collect()
    }

    pub fn id(&self, e: &SignedElement) -> Option<ElemId> {
        self.index.get(&e.base).map(|p| 2 * p + (e.sign == Sign::Minus) as usize)
    }

    pub fn id_of(&self, s: &str) -> Result<ElemId> {
        let e = SignedElement::parse(s)?;
        self.id(&e).ok_or_else(|| Error::UnknownElement(s.to_string()))
    }

    pub fn parts(&self) -> &[String] {
        &self.parts
    }

    pub fn part_index(&self, name: &str) -> Option<usize> {
        self.parts.iter().position(|p| p == name)
    }

    pub fn part_of(&self, id: ElemId) -> usize {
        self.pair_part[pair_of(id)]
    }

    pub fn part_name_of(&self, id: ElemId) -> &str {
        &self.parts[self.part_of(id)]
    }

    /// Pairs of a part, canonical order.
    pub fn pairs_in_part(&self, part: usize) -> Vec<usize> {
        (0..self.n_pairs()).filter(|&p| self.pair_part[p] == part).collect()
    }

    #[inline]
    pub fn leq(&self, a: ElemId, b: ElemId) -> bool {
        self.leq.get(a, b)
    }

    #[inline]
    pub fn lt(&self, a: ElemId, b: ElemId) -> bool {
        a != b && self.leq.get(a, b)
    }

    #[inline]
    pub fn incl(&self, a: ElemId, b: ElemId) -> bool {
        self.incl.get(a, b)
    }

    pub fn relation(&self, mode: OrderMode) -> &Relation {
        match mode {
            OrderMode::Subset => &self.incl,
            OrderMode::Almost => &self.leq,
        }
    }

    pub fn corners(&self) -> Option<&CornerTable> {
        self.corners.as_ref()
    }

    /// Crossing: all four corners large when corner data is present, otherwise none of the
    /// four order relations holds between the pairs.
    pub fn crosses(&self, a: ElemId, b: ElemId) -> bool {
        if pair_of(a) == pair_of(b) {
            return false;
        }
        match &self.corners {
            Some(t) => t.crosses(a, b),
            None => {
                !(self.leq(a, b) || self.leq(a, star(b)) || self.leq(star(a), b) || self.leq(star(a), star(b)))
            }
        }
    }

    pub fn action(&self) -> &[Generator] {
        &self.action
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.action.iter().find(|g| g.name == name)
    }

    /// The pocset induced on the pairs selected by `keep`; generators are restricted to
    /// elements whose images are kept.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Pocset {
        let kept: Vec<usize> = (0..self.n_pairs()).filter(|&p| keep(p)).collect();
        let mut new_of = vec![None; self.n_pairs()];
        for (i, &p) in kept.iter().enumerate() {
            new_of[p] = Some(i);
        }
        let map_id = |id: ElemId| new_of[pair_of(id)].map(|p| 2 * p + (id & 1));
        let n = 2 * kept.len();
        let mut leq = Relation::new(n);
        let mut incl = Relation::new(n);
        for a in 0..self.n_elements() {
            let Some(na) = map_id(a) else { continue };
            for b in self.leq.row(a).iter() {
                if let Some(nb) = map_id(b) {
                    leq.set(na, nb);
                }
            }
            for b in self.incl.row(a).iter() {
                if let Some(nb) = map_id(b) {
                    incl.set(na, nb);
                }
            }
        }
        let mut used_parts: Vec<usize> = kept.iter().map(|&p| self.pair_part[p]).collect();
        used_parts.sort_unstable();
        used_parts.dedup();
        let parts: Vec<String> = used_parts.iter().map(|&p| self.parts[p].clone()).collect();
        let pair_part = kept
            .iter()
            .map(|&p| used_parts.iter().position(|&u| u == self.pair_part[p]).unwrap())
            .collect();
        let bases: Vec<String> = kept.iter().map(|&p| self.bases[p].clone()).collect();
        let index = bases.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        let corners = self.corners.as_ref().map(|t| t.restrict(&kept));
        let action = self
            .action
            .iter()
            .map(|g| {
                let mut map = vec![None; n];
                for a in 0..self.n_elements() {
                    if let (Some(na), Some(b)) = (map_id(a), g.map[a]) {
                        map[na] = map_id(b);
                    }
                }
                Generator { name: g.name.clone(), map }
            })
            .collect();
        Pocset { bases, pair_part, parts, index, leq, incl, corners, action }
    }

    /// Same pocset with every base renamed and every part renamed.
    pub fn renamed(&self, base: impl Fn(&str) -> String, part: impl Fn(&str) -> String) -> Pocset {
        let mut p = self.clone();
        p.bases = self.bases.iter().map(|b| base(b)).collect();
        p.parts = self.parts.iter().map(|q| part(q)).collect();
        p.index = p.bases.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        if let Some(t) = &mut p.corners {
            t.rename(&p.bases);
        }
        p
    }

    /// Adds a new part holding one pair parallel to `pair`: the new element sits just above
    /// the plus element of `pair`, so the two are nested and cross nothing the original does
    /// not. Generators fixing `pair` fix the copy.
    pub fn with_parallel_copy(&self, pair: usize, part: &str) -> Result<Pocset> {
        let mut copy = format!("{}'", self.bases[pair]);
        while self.index.contains_key(&copy) {
            copy.push('\'');
        }
        let q = plus_of(pair);
        let mut b = Pocset::builder().elements(self.bases.iter().map(String::as_str)).element(&copy);
        for (pi, name) in self.parts.iter().enumerate() {
            let members = (0..self.n_pairs()).filter(|&x| self.pair_part[x] == pi).map(|x| self.bases[x].clone()).collect();
            b = b.part_owned(name.clone(), members);
        }
        b = b.part_owned(part.to_string(), vec![copy.clone()]);
        let copy_minus = format!("{copy}*");
        match &self.corners {
            Some(t) => {
                for (x, y, st) in t.entries() {
                    b = b.corner(&x, &y, st);
                }
                for x in 0..self.n_pairs() {
                    if x != pair {
                        b = b.corner(&self.bases[x], &copy, t.statuses(plus_of(x), q));
                    }
                }
                use CornerStatus::*;
                b = b.corner(&self.bases[pair], &copy, [Large, Empty, Large, Large]);
            }
            None => {
                for x in 0..self.n_elements() {
                    for y in self.leq.row(x).iter() {
                        if x != y {
                            b = b.relation(&self.name(x), &self.name(y));
                        }
                    }
                    if self.leq(x, q) {
                        b = b.relation(&self.name(x), &copy);
                    }
                    if self.lt(q, x) {
                        b = b.relation(&copy, &self.name(x));
                    }
                    if self.lt(x, star(q)) {
                        b = b.relation(&self.name(x), &copy_minus);
                    }
                    if self.leq(star(q), x) {
                        b = b.relation(&copy_minus, &self.name(x));
                    }
                }
            }
        }
        for g in &self.action {
            let mut images: Vec<(String, String)> = (0..self.n_pairs())
                .filter_map(|x| g.map[plus_of(x)].map(|y| (self.bases[x].clone(), self.name(y))))
                .collect();
            if g.map[q] == Some(q) {
                images.push((copy.clone(), copy.clone()));
            }
            b = b.generator_owned(g.name.clone(), images);
        }
        b.build()
    }

    /// Raw access to the almost-inclusion relation.
    pub fn leq_relation(&self) -> &Relation {
        &self.leq
    }

    /// All cover pairs `(a, c)`: `a < c` with nothing strictly between.
    pub fn cover_pairs(&self) -> Vec<(ElemId, ElemId)> {
        let below = self.leq.transpose();
        let mut out = Vec::new();
        for a in 0..self.n_elements() {
            let up = self.leq.row(a);
            for c in up.iter() {
                // the interval [a, c] always holds a and c themselves
                if c != a && up.and_count(below.row(c)) == 2 {
                    out.push((a, c));
                }
            }
        }
        out
    }
}
