use serde::Serialize;

use super::{ElemId, Pocset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalResult {
    /// Every `c` with `a ≤ c ≤ b`, canonical order.
    Interval(Vec<ElemId>),
    /// `a ≤ b` does not hold.
    NotComparable,
}

pub fn interval(p: &Pocset, a: ElemId, b: ElemId) -> IntervalResult {
    if !p.leq(a, b) {
        return IntervalResult::NotComparable;
    }
    IntervalResult::Interval(p.leq_relation().row(a).iter().filter(|&c| p.leq(c, b)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SandwichStatus {
    Witnessed,
    CrossingEverywhereInFragment,
    UnknownWithinFragment,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SandwichEntry {
    pub part: String,
    pub by: String,
    /// Element of `part` the search ran on: its canonically first plus element.
    pub representative: String,
    pub status: SandwichStatus,
    /// `[lower, upper]` from `by` when witnessed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[String; 2]>,
}

/// For every ordered pair of distinct parts `(j, k)`, decides whether the representative
/// of part `j` sits between two elements of part `k`, crosses all of them, or neither
/// within the fragment.
pub fn sandwich_report(p: &Pocset) -> Vec<SandwichEntry> {
    let mut out = Vec::new();
    for j in 0..p.parts().len() {
        let Some(&rep_pair) = p.pairs_in_part(j).first() else { continue };
        let e = 2 * rep_pair;
        for k in 0..p.parts().len() {
            if k == j {
                continue;
            }
            let others: Vec<ElemId> = p.pairs_in_part(k).iter().flat_map(|&q| [2 * q, 2 * q + 1]).collect();
            if others.is_empty() {
                continue;
            }
            let lower = others.iter().copied().find(|&a| p.leq(a, e));
            let upper = others.iter().copied().find(|&b| p.leq(e, b));
            let (status, witness) = match (lower, upper) {
                (Some(a), Some(b)) => (SandwichStatus::Witnessed, Some([p.name(a), p.name(b)])),
                _ if others.iter().all(|&a| a & 1 == 1 || p.crosses(e, a)) => {
                    (SandwichStatus::CrossingEverywhereInFragment, None)
                }
                _ => (SandwichStatus::UnknownWithinFragment, None),
            };
            out.push(SandwichEntry {
                part: p.parts()[j].clone(),
                by: p.parts()[k].clone(),
                representative: p.name(e),
                status,
                witness,
            });
        }
    }
    out
}
