//! Moving a pocset fragment into very good position: each element `A` is replaced by the set
//! of points `g` whose translate of a fixed ultrafilter contains `A`.

use serde::Serialize;

use super::ultrafilter::{is_ultrafilter, Ultrafilter};
use crate::error::{Error, Result};
use crate::pocset::{check_position, star, CornerStatus, CornerTable, ElemId, OrderMode, Pocset, PositionMode};
use crate::report::ValidationReport;

/// A point of the ambient set, known through the pullback `A ↦ g⁻¹A` on the fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub name: String,
    /// `pullback[a]` is the element `g⁻¹a`, when it lies in the fragment.
    pub pullback: Vec<Option<ElemId>>,
    /// Membership of the point in each original element, when known.
    pub membership: Option<Vec<bool>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VgpMembership {
    In,
    Out,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct VgpElement {
    pub element: String,
    /// One mark per point, in point order.
    pub membership: Vec<VgpMembership>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VgpResult {
    pub points: Vec<String>,
    pub elements: Vec<VgpElement>,
    /// `(point, element)` pairs whose pullback leaves the fragment.
    pub undecided: Vec<[String; 2]>,
    /// New corner statuses as `(A, B, statuses)` over pairs of plus elements.
    pub corners: Vec<(String, String, [CornerStatus; 4])>,
    pub very_good: ValidationReport,
    pub order_isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_mismatch: Option<[String; 2]>,
    /// Whether each repositioned element agrees with the original on every point, when the
    /// original memberships were supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_original: Option<bool>,
    #[serde(skip)]
    pub repositioned: Option<Pocset>,
}

impl VgpResult {
    pub fn ok(&self) -> bool {
        self.very_good.ok && self.order_isomorphic
    }
}

/// Repositions `p` using the almost-inclusion ultrafilter `w` and the supplied points.
///
/// A small corner of the original stays small: it becomes empty unless some point is
/// observed in it, in which case it is reported small and nonempty and the very good
/// position check fails. Large corners stay large.
pub fn reposition_vgp(p: &Pocset, w: &Ultrafilter, points: &[Point]) -> Result<VgpResult> {
    let t = p.corners().ok_or_else(|| Error::Malformed("repositioning needs corner data".into()))?;
    if w.mode != OrderMode::Almost || !is_ultrafilter(p, w) {
        return Err(Error::InvalidUltrafilter("w must be an almost-inclusion ultrafilter".into()));
    }
    let n = p.n_elements();
    for pt in points {
        if pt.pullback.len() != n {
            return Err(Error::Malformed(format!("point {} has a pullback of the wrong size", pt.name)));
        }
    }
    // mark[a][g]
    let mark = |a: ElemId, pt: &Point| match pt.pullback[a] {
        Some(b) if w.contains(b) => VgpMembership::In,
        Some(_) => VgpMembership::Out,
        None => VgpMembership::Undecided,
    };
    let mut elements = Vec::new();
    let mut undecided = Vec::new();
    for q in 0..p.n_pairs() {
        let a = 2 * q;
        let membership: Vec<VgpMembership> = points.iter().map(|pt| mark(a, pt)).collect();
        for (pt, m) in points.iter().zip(&membership) {
            if *m == VgpMembership::Undecided {
                undecided.push([pt.name.clone(), p.name(a)]);
            }
        }
        elements.push(VgpElement { element: p.name(a), membership });
    }

    let mut table = CornerTable::new((0..p.n_pairs()).map(|q| p.base(q).to_string()).collect());
    for i in 0..p.n_pairs() {
        for j in i + 1..p.n_pairs() {
            let (a, b) = (2 * i, 2 * j);
            let orig = t.statuses(a, b);
            let sets = [(a, b), (a, star(b)), (star(a), b), (star(a), star(b))];
            let mut st = [CornerStatus::Large; 4];
            for k in 0..4 {
                if orig[k] == CornerStatus::Large {
                    continue;
                }
                let (x, y) = sets[k];
                let seen =
                    points.iter().any(|pt| mark(x, pt) == VgpMembership::In && mark(y, pt) == VgpMembership::In);
                st[k] = if seen { CornerStatus::SmallNonempty } else { CornerStatus::Empty };
            }
            table.set(a, b, st)?;
        }
    }
    let very_good = check_position(&table, PositionMode::VeryGood);

    let mut builder = Pocset::builder().elements((0..p.n_pairs()).map(|q| p.base(q)));
    for (j, part) in p.parts().iter().enumerate() {
        let members: Vec<String> = p.pairs_in_part(j).iter().map(|&q| p.base(q).to_string()).collect();
        builder = builder.part_owned(part.clone(), members);
    }
    for (x, y, st) in table.entries() {
        builder = builder.corner(&x, &y, st);
    }
    let (repositioned, order_isomorphic, order_mismatch) = match builder.build() {
        Ok(q) => {
            let mismatch = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .find(|&(a, b)| q.leq(a, b) != p.leq(a, b))
                .map(|(a, b)| [p.name(a), p.name(b)]);
            (Some(q), mismatch.is_none(), mismatch)
        }
        Err(_) => (None, false, None),
    };
    let matches_original = if points.iter().all(|pt| pt.membership.is_some()) && !points.is_empty() {
        Some(points.iter().all(|pt| {
            let m = pt.membership.as_ref().unwrap();
            (0..n).all(|a| match mark(a, pt) {
                VgpMembership::In => m[a],
                VgpMembership::Out => !m[a],
                VgpMembership::Undecided => true,
            })
        }))
    } else {
        None
    };
    Ok(VgpResult {
        points: points.iter().map(|pt| pt.name.clone()).collect(),
        elements,
        undecided,
        corners: table.entries(),
        very_good,
        order_isomorphic,
        order_mismatch,
        matches_original,
        repositioned,
    })
}
