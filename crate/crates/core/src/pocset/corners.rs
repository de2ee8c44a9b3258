use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{pair_of, star, ElemId, Pocset, SignedElement};
use crate::bits::Relation;
use crate::error::{Error, Result};
use crate::report::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CornerStatus {
    Empty,
    #[serde(alias = "small")]
    SmallNonempty,
    Large,
}

impl CornerStatus {
    pub fn is_small(self) -> bool {
        self != CornerStatus::Large
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CornerStatus::Empty => "empty",
            CornerStatus::SmallNonempty => "small-nonempty",
            CornerStatus::Large => "large",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositionMode {
    Good,
    VeryGood,
}

/// Corner statuses for every pair of distinct star pairs.
///
/// Stored once per unordered pair `i < j` of pair indices, as the statuses of
/// `Pi∩Pj, Pi∩Pj*, Pi*∩Pj, Pi*∩Pj*` where `Pi` is the plus element of pair `i`.
/// Starring arguments or swapping them reads the same four sets in a different order,
/// so star consistency and symmetry hold by construction; conflicting input is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerTable {
    bases: Vec<String>,
    index: HashMap<String, usize>,
    entries: Vec<Option<[CornerStatus; 4]>>,
}

fn tri(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl CornerTable {
    pub fn new(bases: Vec<String>) -> Self {
        let n = bases.len();
        let index = bases.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        CornerTable { bases, index, entries: vec![None; n * n.saturating_sub(1) / 2] }
    }

    pub fn n_pairs(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[String] {
        &self.bases
    }

    pub fn name(&self, id: ElemId) -> String {
        let b = &self.bases[pair_of(id)];
        if id & 1 == 0 {
            b.clone()
        } else {
            format!("{b}*")
        }
    }

    pub fn id_of(&self, e: &SignedElement) -> Result<ElemId> {
        let p = *self.index.get(&e.base).ok_or_else(|| Error::UnknownElement(e.to_string()))?;
        Ok(2 * p + (e.sign == super::Sign::Minus) as usize)
    }

    // Raw slot and position for the corner (a ∩ b).
    fn slot(&self, a: ElemId, b: ElemId) -> (usize, usize) {
        let (i, j) = (pair_of(a), pair_of(b));
        if i < j {
            (tri(self.n_pairs(), i, j), 2 * (a & 1) + (b & 1))
        } else {
            (tri(self.n_pairs(), j, i), 2 * (b & 1) + (a & 1))
        }
    }

    /// Records the statuses of `(a, b)` in the order `a∩b, a∩b*, a*∩b, a*∩b*`.
    pub fn set(&mut self, a: ElemId, b: ElemId, statuses: [CornerStatus; 4]) -> Result<()> {
        if pair_of(a) == pair_of(b) {
            return Err(Error::DegeneratePair(self.name(a), self.name(b)));
        }
        let sets = [(a, b), (a, star(b)), (star(a), b), (star(a), star(b))];
        let (slot, _) = self.slot(a, b);
        let mut raw = [CornerStatus::Large; 4];
        for (k, &(x, y)) in sets.iter().enumerate() {
            raw[self.slot(x, y).1] = statuses[k];
        }
        match self.entries[slot] {
            Some(old) if old != raw => Err(Error::Malformed(format!(
                "inconsistent corner data at ({}, {})",
                self.name(a),
                self.name(b)
            ))),
            _ => {
                self.entries[slot] = Some(raw);
                Ok(())
            }
        }
    }

    pub fn set_named(&mut self, a: &str, b: &str, statuses: [CornerStatus; 4]) -> Result<()> {
        let a = self.id_of(&SignedElement::parse(a)?)?;
        let b = self.id_of(&SignedElement::parse(b)?)?;
        self.set(a, b, statuses)
    }

    pub fn require_complete(&self) -> Result<()> {
        let n = self.n_pairs();
        for i in 0..n {
            for j in i + 1..n {
                if self.entries[tri(n, i, j)].is_none() {
                    return Err(Error::Malformed(format!(
                        "corner table incomplete at ({}, {})",
                        self.bases[i], self.bases[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Status of the single corner `a ∩ b`.
    pub fn corner(&self, a: ElemId, b: ElemId) -> CornerStatus {
        let (slot, k) = self.slot(a, b);
        self.entries[slot].expect("complete corner table")[k]
    }

    /// The four statuses of `(a, b)`: `a∩b, a∩b*, a*∩b, a*∩b*`.
    pub fn statuses(&self, a: ElemId, b: ElemId) -> [CornerStatus; 4] {
        [self.corner(a, b), self.corner(a, star(b)), self.corner(star(a), b), self.corner(star(a), star(b))]
    }

    pub fn crosses(&self, a: ElemId, b: ElemId) -> bool {
        pair_of(a) != pair_of(b) && self.statuses(a, b).iter().all(|s| *s == CornerStatus::Large)
    }

    pub(crate) fn restrict(&self, kept: &[usize]) -> CornerTable {
        let bases = kept.iter().map(|&p| self.bases[p].clone()).collect();
        let mut t = CornerTable::new(bases);
        let n = kept.len();
        for i in 0..n {
            for j in i + 1..n {
                t.entries[tri(n, i, j)] = self.entries[tri(self.n_pairs(), kept[i], kept[j])];
            }
        }
        t
    }

    pub(crate) fn rename(&mut self, bases: &[String]) {
        self.bases = bases.to_vec();
        self.index = bases.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
    }

    /// Stored entries as `(Pi, Pj, statuses)` for `i < j`.
    pub fn entries(&self) -> Vec<(String, String, [CornerStatus; 4])> {
        let n = self.n_pairs();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if let Some(st) = self.entries[tri(n, i, j)] {
                    out.push((self.bases[i].clone(), self.bases[j].clone(), st));
                }
            }
        }
        out
    }
}

/// Crossing of two elements of a corner table: all four corners large.
pub fn crossing(t: &CornerTable, a: &SignedElement, b: &SignedElement) -> Result<bool> {
    let (x, y) = (t.id_of(a)?, t.id_of(b)?);
    if pair_of(x) == pair_of(y) {
        return Err(Error::DegeneratePair(a.to_string(), b.to_string()));
    }
    Ok(t.crosses(x, y))
}

pub fn check_position(t: &CornerTable, mode: PositionMode) -> ValidationReport {
    let mut r = ValidationReport::new();
    let n = t.n_pairs();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (2 * i, 2 * j);
            let st = t.statuses(a, b);
            match mode {
                PositionMode::Good => {
                    let small = st.iter().filter(|s| s.is_small()).count();
                    let empty = st.iter().any(|s| *s == CornerStatus::Empty);
                    if small >= 2 && !empty {
                        r.push("good-position", vec![t.name(a), t.name(b)]);
                    }
                }
                PositionMode::VeryGood => {
                    let sets = [(a, b), (a, star(b)), (star(a), b), (star(a), star(b))];
                    for (k, (x, y)) in sets.into_iter().enumerate() {
                        if st[k] == CornerStatus::SmallNonempty {
                            r.push("very-good-position", vec![t.name(x), t.name(y)]);
                        }
                    }
                }
            }
        }
    }
    r
}

/// Almost inclusion and inclusion read off a complete corner table, both closed.
pub(crate) fn derived_relations(t: &CornerTable) -> Result<(Relation, Relation)> {
    let n = 2 * t.n_pairs();
    let mut leq = Relation::identity(n);
    let mut incl = Relation::identity(n);
    for i in 0..t.n_pairs() {
        for j in i + 1..t.n_pairs() {
            let st = t.statuses(2 * i, 2 * j);
            let small = st.iter().filter(|s| s.is_small()).count();
            if small >= 2 && !st.contains(&CornerStatus::Empty) {
                return Err(Error::GoodPosition(t.name(2 * i), t.name(2 * j)));
            }
            for a in [2 * i, 2 * i + 1, 2 * j, 2 * j + 1] {
                let other = if pair_of(a) == i { j } else { i };
                for b in [2 * other, 2 * other + 1] {
                    match t.corner(a, star(b)) {
                        CornerStatus::Empty => {
                            leq.set(a, b);
                            incl.set(a, b);
                        }
                        CornerStatus::SmallNonempty if small == 1 => leq.set(a, b),
                        _ => {}
                    }
                }
            }
        }
    }
    leq.close_transitively();
    incl.close_transitively();
    for a in 0..n {
        for b in leq.row(a).iter() {
            if b != a && leq.get(b, a) {
                return Err(Error::Axiom {
                    axiom: "antisymmetric".into(),
                    witness: vec![t.name(a.min(b)), t.name(a.max(b))],
                });
            }
            if leq.get(a, star(b)) {
                return Err(Error::Axiom { axiom: "star-exclusive".into(), witness: vec![t.name(a), t.name(b)] });
            }
        }
    }
    Ok((leq, incl))
}

/// Derives the almost-inclusion order from corner data. Every pair becomes its own part.
pub fn derive_order_from_corners(t: &CornerTable) -> Result<Pocset> {
    let mut b = Pocset::builder().elements(t.bases().iter().map(String::as_str));
    for (x, y, st) in t.entries() {
        b = b.corner(&x, &y, st);
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::CornerStatus::*;
    use super::*;

    fn table(st: [CornerStatus; 4]) -> CornerTable {
        let mut t = CornerTable::new(vec!["A".into(), "B".into()]);
        t.set_named("A", "B", st).unwrap();
        t
    }

    #[test]
    fn empty_corner_forces_inclusion() {
        let p = derive_order_from_corners(&table([Large, Empty, Large, Large])).unwrap();
        let (a, b) = (p.id_of("A").unwrap(), p.id_of("B").unwrap());
        assert!(p.leq(a, b));
        assert!(p.incl(a, b));
        assert!(p.leq(star(b), star(a)));
        assert!(!p.leq(b, a));
    }

    #[test]
    fn all_large_gives_no_relation() {
        let p = derive_order_from_corners(&table([Large; 4])).unwrap();
        for a in 0..2 {
            for b in 2..4 {
                assert!(!p.leq(a, b) && !p.leq(b, a));
            }
        }
    }

    #[test]
    fn two_small_nonempty_corners_are_rejected() {
        let t = table([Large, SmallNonempty, SmallNonempty, Large]);
        assert_eq!(derive_order_from_corners(&t).unwrap_err(), Error::GoodPosition("A".into(), "B".into()));
        let r = check_position(&t, PositionMode::Good);
        assert!(!r.ok);
        assert_eq!(r.violations[0].witness, vec!["A", "B"]);
    }

    #[test]
    fn single_small_corner_is_good_but_not_very_good() {
        let t = table([Large, SmallNonempty, Large, Large]);
        assert!(check_position(&t, PositionMode::Good).ok);
        let r = check_position(&t, PositionMode::VeryGood);
        assert!(!r.ok);
        assert_eq!(r.violations[0].witness, vec!["A", "B*"]);
        let p = derive_order_from_corners(&t).unwrap();
        assert!(p.leq(0, 2));
        assert!(!p.incl(0, 2));
    }

    #[test]
    fn crossing_examples() {
        let p4 = table([Large; 4]);
        let n4 = table([Large, Empty, Large, Large]);
        let (a, b) = (SignedElement::plus("A"), SignedElement::plus("B"));
        assert!(crossing(&p4, &a, &b).unwrap());
        assert!(crossing(&p4, &b, &a).unwrap());
        assert!(!crossing(&n4, &a, &b).unwrap());
        assert!(matches!(crossing(&p4, &a, &a.star()), Err(Error::DegeneratePair(..))));
        assert!(check_position(&p4, PositionMode::VeryGood).ok);
    }

    #[test]
    fn starred_and_swapped_entries_agree() {
        let mut t = table([Large, Empty, Large, Large]);
        // (B*, A*) lists B*∩A*, B*∩A, B∩A*, B∩A: the A∩B* corner comes second.
        t.set_named("B*", "A*", [Large, Empty, Large, Large]).unwrap();
        assert!(t.set_named("B", "A", [Empty, Large, Large, Large]).is_err());
        let (ab, ba) = (t.statuses(0, 2), t.statuses(2, 0));
        assert_eq!([ab[0], ab[2], ab[1], ab[3]], ba);
    }

    #[test]
    fn incomplete_table_is_structural() {
        let t = CornerTable::new(vec!["A".into(), "B".into()]);
        assert!(t.require_complete().unwrap_err().is_structural());
    }
}
