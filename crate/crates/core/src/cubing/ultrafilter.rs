use serde::Serialize;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::pocset::{pair_of, plus_of, star, ElemId, OrderMode, Pocset};
use crate::report::ValidationReport;

/// One element from every star pair. Bit `i` of `signs` is set when pair `i` contributes its
/// minus element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ultrafilter {
    pub mode: OrderMode,
    signs: BitSet,
}

impl Ultrafilter {
    pub fn from_signs(mode: OrderMode, signs: BitSet) -> Self {
        Ultrafilter { mode, signs }
    }

    /// Builds a side selection from an element predicate, reading the plus element of each pair.
    pub fn from_fn(p: &Pocset, mode: OrderMode, contains: impl Fn(ElemId) -> bool) -> Self {
        let mut signs = BitSet::new(p.n_pairs());
        for q in 0..p.n_pairs() {
            signs.set(q, !contains(plus_of(q)));
        }
        Ultrafilter { mode, signs }
    }

    /// Selection given by element names; every pair must be named exactly once.
    pub fn from_names(p: &Pocset, mode: OrderMode, names: &[&str]) -> Result<Self> {
        let mut seen = vec![false; p.n_pairs()];
        let mut signs = BitSet::new(p.n_pairs());
        for n in names {
            let id = p.id_of(n)?;
            if std::mem::replace(&mut seen[pair_of(id)], true) {
                return Err(Error::InvalidUltrafilter(format!("pair of {n} chosen twice")));
            }
            signs.set(pair_of(id), id & 1 == 1);
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidUltrafilter(format!("no side chosen for {}", p.base(q))));
        }
        Ok(Ultrafilter { mode, signs })
    }

    pub fn signs(&self) -> &BitSet {
        &self.signs
    }

    pub fn n_pairs(&self) -> usize {
        self.signs.len()
    }

    #[inline]
    pub fn contains(&self, id: ElemId) -> bool {
        self.signs.get(pair_of(id)) == (id & 1 == 1)
    }

    #[inline]
    pub fn chosen_in(&self, pair: usize) -> ElemId {
        2 * pair + self.signs.get(pair) as usize
    }

    pub fn chosen(&self) -> impl Iterator<Item = ElemId> + '_ {
        (0..self.n_pairs()).map(|q| self.chosen_in(q))
    }

    pub fn chosen_set(&self) -> BitSet {
        let mut s = BitSet::new(2 * self.n_pairs());
        for a in self.chosen() {
            s.set(a, true);
        }
        s
    }

    pub fn names(&self, p: &Pocset) -> Vec<String> {
        p.names(self.chosen())
    }

    pub fn flipped(&self, pair: usize) -> Ultrafilter {
        let mut u = self.clone();
        u.signs.set(pair, !self.signs.get(pair));
        u
    }

    /// Number of pairs on which the selections differ.
    pub fn distance(&self, other: &Ultrafilter) -> usize {
        (0..self.n_pairs()).filter(|&q| self.signs.get(q) != other.signs.get(q)).count()
    }
}

/// First `(a, b)` with `a` chosen, `a ≤ b` in the ultrafilter's mode, and `b` not chosen.
pub fn closure_failure(p: &Pocset, u: &Ultrafilter) -> Option<(ElemId, ElemId)> {
    let rel = p.relation(u.mode);
    for a in u.chosen().collect::<Vec<_>>() {
        if let Some(b) = rel.row(a).iter().find(|&b| !u.contains(b)) {
            return Some((a, b));
        }
    }
    None
}

pub fn is_ultrafilter(p: &Pocset, u: &Ultrafilter) -> bool {
    u.n_pairs() == p.n_pairs() && closure_failure(p, u).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasicOutcome {
    Ultrafilter(Ultrafilter),
    /// `a` is chosen and `a ≤ b`, yet `b` is not.
    NotUpwardClosed { selection: Ultrafilter, a: ElemId, b: ElemId },
}

fn check_oracle(p: &Pocset, m: &dyn Fn(ElemId) -> bool) -> Result<()> {
    for a in 0..p.n_elements() {
        if m(a) == m(star(a)) {
            return Err(Error::InconsistentOracle(p.name(a)));
        }
    }
    Ok(())
}

/// The side selection of a point: every element containing it.
///
/// The oracle must pick one side of each pair and respect inclusion, as membership of an
/// actual group element does. In subset mode the result is then always an ultrafilter; in
/// almost mode upward closure can fail, and the failure is returned with its witness.
pub fn basic_ultrafilter(p: &Pocset, mode: OrderMode, membership: &dyn Fn(ElemId) -> bool) -> Result<BasicOutcome> {
    check_oracle(p, membership)?;
    let u = Ultrafilter::from_fn(p, OrderMode::Subset, membership);
    if let Some((a, b)) = closure_failure(p, &u) {
        return Err(Error::UnrealizableOracle(format!("{} ⊂ {} but only the first is selected", p.name(a), p.name(b))));
    }
    let u = Ultrafilter { mode, ..u };
    Ok(match closure_failure(p, &u) {
        None => BasicOutcome::Ultrafilter(u),
        Some((a, b)) => BasicOutcome::NotUpwardClosed { selection: u, a, b },
    })
}

/// Selection on a star-closed subset: `Some(element)` for pairs in the support.
pub type PartialSelection = Vec<Option<ElemId>>;

/// Adds every element outside the support lying above a selected element.
pub fn closure(p: &Pocset, mode: OrderMode, v: &PartialSelection) -> Result<PartialSelection> {
    let rel = p.relation(mode);
    let chosen: Vec<ElemId> = v.iter().flatten().copied().collect();
    for &a in &chosen {
        if let Some(&b) = chosen.iter().find(|&&b| b != a && rel.get(a, star(b))) {
            return Err(Error::InvalidUltrafilter(format!(
                "{} and {} are selected but {} ≤ {}",
                p.name(a),
                p.name(b),
                p.name(a),
                p.name(star(b))
            )));
        }
    }
    let mut out = v.clone();
    for &a in &chosen {
        for b in rel.row(a).iter() {
            let q = pair_of(b);
            if v[q].is_some() {
                continue;
            }
            match out[q] {
                Some(c) if c != b => return Err(Error::ClosureContradiction(p.name(plus_of(q)))),
                _ => out[q] = Some(b),
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    /// The selected element of the pair.
    pub element: String,
    /// 1-based stage number, following the declared order of parts.
    pub stage: usize,
    /// `'a'` for a basic choice, `'b'` for a closure step.
    pub step: char,
    /// For closure steps, an earlier selected element below this one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forced_by: Option<String>,
}

impl AuditEntry {
    pub fn label(&self) -> String {
        format!("{}{}", self.stage, self.step)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DccResult {
    pub ultrafilter: Ultrafilter,
    /// One entry per pair, canonical order.
    pub audit: Vec<AuditEntry>,
}

impl DccResult {
    /// Confirms that parts are decided in stage order: a pair of the `k`-th part is decided
    /// either by the basic choice of stage `k`, or by the closure of an earlier stage from an
    /// element that was already selected and lies below it.
    pub fn check_stage_order(&self, p: &Pocset) -> ValidationReport {
        let mut r = ValidationReport::new();
        let stage_of = |name: &str| self.audit.iter().find(|e| e.element == name).map(|e| (e.stage, e.step));
        for e in &self.audit {
            let Ok(id) = p.id_of(&e.element) else {
                r.push("audit-element", vec![e.element.clone()]);
                continue;
            };
            let k = p.part_of(id) + 1;
            let ok = match e.step {
                'a' => e.stage == k && e.forced_by.is_none(),
                'b' => {
                    e.stage < k
                        && e.forced_by.as_deref().is_some_and(|f| {
                            p.id_of(f).is_ok_and(|fid| p.leq(fid, id) && self.ultrafilter.contains(fid))
                                && stage_of(f).is_some_and(|s| s <= (e.stage, 'b'))
                        })
                }
                _ => false,
            };
            if !ok {
                r.push("stage-order", vec![e.element.clone(), e.label()]);
            }
        }
        r
    }
}

/// Staged construction of an ultrafilter on `(Σ, ≤)`, one part at a time in declared order:
/// stage `j` adds the basic choices for the undecided pairs of part `j`, then takes the
/// closure, which decides pairs of later parts.
///
/// The oracle must be star consistent and upward closed inside each part.
pub fn construct_dcc_ultrafilter(p: &Pocset, membership: &dyn Fn(ElemId) -> bool) -> Result<DccResult> {
    check_oracle(p, membership)?;
    let nparts = p.parts().len();
    for j in 0..nparts {
        let pairs = p.pairs_in_part(j);
        for &qa in &pairs {
            for a in [2 * qa, 2 * qa + 1] {
                if !membership(a) {
                    continue;
                }
                for &qb in &pairs {
                    for b in [2 * qb, 2 * qb + 1] {
                        if p.leq(a, b) && !membership(b) {
                            return Err(Error::UnrealizableOracle(format!(
                                "inside part {}: {} ≤ {} but only the first is selected",
                                p.parts()[j],
                                p.name(a),
                                p.name(b)
                            )));
                        }
                    }
                }
            }
        }
    }

    let mut decided: Vec<Option<AuditEntry>> = vec![None; p.n_pairs()];
    let mut chosen: PartialSelection = vec![None; p.n_pairs()];
    let trace = |d: &[Option<AuditEntry>]| -> Vec<String> {
        d.iter().flatten().map(|e| format!("{}:{}", e.label(), e.element)).collect()
    };
    for j in 0..nparts {
        for q in p.pairs_in_part(j) {
            if chosen[q].is_none() {
                let a = if membership(plus_of(q)) { plus_of(q) } else { star(plus_of(q)) };
                chosen[q] = Some(a);
                decided[q] = Some(AuditEntry { element: p.name(a), stage: j + 1, step: 'a', forced_by: None });
            }
        }
        if j + 1 == nparts {
            break;
        }
        let mut added: Vec<Option<(ElemId, ElemId)>> = vec![None; p.n_pairs()];
        for a in chosen.iter().flatten().copied() {
            for b in p.leq_relation().row(a).iter() {
                let q = pair_of(b);
                if chosen[q].is_some() {
                    continue;
                }
                match added[q] {
                    Some((c, _)) if c != b => {
                        return Err(Error::StageContradiction {
                            stage: format!("{}b", j + 1),
                            element: p.name(plus_of(q)),
                            trace: trace(&decided),
                        })
                    }
                    Some(_) => {}
                    None => added[q] = Some((b, a)),
                }
            }
        }
        for (q, add) in added.into_iter().enumerate() {
            if let Some((b, a)) = add {
                chosen[q] = Some(b);
                decided[q] =
                    Some(AuditEntry { element: p.name(b), stage: j + 1, step: 'b', forced_by: Some(p.name(a)) });
            }
        }
    }
    let u = Ultrafilter::from_fn(p, OrderMode::Almost, |a| chosen[pair_of(a)] == Some(a));
    if let Some((a, b)) = closure_failure(p, &u) {
        return Err(Error::Internal(format!("staged selection not upward closed at ({}, {})", p.name(a), p.name(b))));
    }
    Ok(DccResult { ultrafilter: u, audit: decided.into_iter().map(|e| e.expect("every pair decided")).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pocset::CornerStatus::*;

    fn n4_small() -> Pocset {
        Pocset::builder().elements(["A", "B"]).corner("A", "B", [Large, SmallNonempty, Large, Large]).build().unwrap()
    }

    fn yes(p: &Pocset, names: &[&str]) -> impl Fn(ElemId) -> bool {
        let ids: Vec<ElemId> = names.iter().map(|n| p.id_of(n).unwrap()).collect();
        move |a| ids.contains(&a)
    }

    #[test]
    fn crossing_pair_basic() {
        let p = Pocset::builder().elements(["A", "B"]).build().unwrap();
        let BasicOutcome::Ultrafilter(u) = basic_ultrafilter(&p, OrderMode::Almost, &yes(&p, &["A", "B"])).unwrap()
        else {
            panic!()
        };
        assert_eq!(u.names(&p), vec!["A", "B"]);
    }

    #[test]
    fn small_corner_point_breaks_almost_closure() {
        let p = n4_small();
        let m = yes(&p, &["A", "B*"]);
        let BasicOutcome::Ultrafilter(_) = basic_ultrafilter(&p, OrderMode::Subset, &m).unwrap() else { panic!() };
        match basic_ultrafilter(&p, OrderMode::Almost, &m).unwrap() {
            BasicOutcome::NotUpwardClosed { a, b, .. } => assert_eq!(p.names([a, b]), vec!["A", "B"]),
            other => panic!("{other:?}"),
        }
        let both = yes(&p, &["A", "B"]);
        for mode in [OrderMode::Subset, OrderMode::Almost] {
            assert!(matches!(basic_ultrafilter(&p, mode, &both).unwrap(), BasicOutcome::Ultrafilter(_)));
        }
    }

    #[test]
    fn inconsistent_oracle_is_structural() {
        let p = n4_small();
        let e = basic_ultrafilter(&p, OrderMode::Subset, &|_| true).unwrap_err();
        assert!(e.is_structural());
    }

    #[test]
    fn closure_adds_forced_element() {
        let p = Pocset::builder().elements(["X1", "X2"]).relation("X1", "X2").build().unwrap();
        let x1 = p.id_of("X1").unwrap();
        let v = vec![Some(x1), None];
        let c = closure(&p, OrderMode::Almost, &v).unwrap();
        assert_eq!(c, vec![Some(x1), Some(p.id_of("X2").unwrap())]);
        let full = vec![Some(x1), Some(p.id_of("X2").unwrap())];
        assert_eq!(closure(&p, OrderMode::Almost, &full).unwrap(), full);
    }

    #[test]
    fn closure_contradiction_on_invalid_pocset() {
        let p = Pocset::builder().elements(["A", "B"]).relation("A", "B").relation("A", "B*").build().unwrap();
        let v = vec![Some(p.id_of("A").unwrap()), None];
        assert!(matches!(closure(&p, OrderMode::Almost, &v), Err(Error::ClosureContradiction(_))));
    }

    #[test]
    fn staged_closure_overrides_basic_choice() {
        let p = Pocset::builder()
            .elements(["X1", "X2"])
            .part("P1", &["X1"])
            .part("P2", &["X2"])
            .relation("X1", "X2")
            .build()
            .unwrap();
        let r = construct_dcc_ultrafilter(&p, &yes(&p, &["X1", "X2*"])).unwrap();
        assert_eq!(r.ultrafilter.names(&p), vec!["X1", "X2"]);
        assert_eq!(r.audit[0].label(), "1a");
        assert_eq!(r.audit[1].label(), "1b");
        assert_eq!(r.audit[1].forced_by.as_deref(), Some("X1"));
        assert!(r.check_stage_order(&p).ok);
    }

    #[test]
    fn staged_without_relations_uses_basic_choices() {
        let p = Pocset::builder().elements(["A", "B"]).build().unwrap();
        let r = construct_dcc_ultrafilter(&p, &yes(&p, &["A", "B*"])).unwrap();
        assert_eq!(r.ultrafilter.names(&p), vec!["A", "B*"]);
        assert!(r.audit.iter().all(|e| e.step == 'a'));
    }

    #[test]
    fn single_part_matches_basic() {
        let p = Pocset::builder()
            .elements(["A", "B", "C"])
            .part("X", &["A", "B", "C"])
            .relation("A", "B")
            .relation("C", "B")
            .build()
            .unwrap();
        let m = yes(&p, &["A*", "B", "C"]);
        let r = construct_dcc_ultrafilter(&p, &m).unwrap();
        let BasicOutcome::Ultrafilter(u) = basic_ultrafilter(&p, OrderMode::Almost, &m).unwrap() else { panic!() };
        assert_eq!(r.ultrafilter, u);
    }
}
