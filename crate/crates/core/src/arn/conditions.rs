use serde::Serialize;

use super::enclosure::verify_enclosure;
use super::iso::gtree_isomorphic;
use super::tree::{build_arn, Arn, BipartiteTree, Color};
use crate::cubing::{build_cubing, CubeComplex, CubingCaps};
use crate::pocset::{OrderMode, Pocset};
use crate::report::ValidationReport;
use crate::uf::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionStatus {
    Pass,
    Fail,
    #[serde(rename = "not-checkable-at-this-radius")]
    NotCheckable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub condition: u8,
    pub status: ConditionStatus,
    pub detail: String,
}

/// A pocset extending the original by one extra part, to be tested for enclosure at a V1
/// orbit.
#[derive(Clone, Debug)]
pub struct ArnCandidate {
    pub pocset: Pocset,
    pub part: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitSummary {
    pub nodes: Vec<String>,
    pub isolated: bool,
    pub encloses: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArnConditionReport {
    pub conditions: Vec<ConditionResult>,
    pub orbits: Vec<OrbitSummary>,
    pub isolated_parts: Vec<String>,
    /// Isolated part to the label of the first node of its orbit.
    pub matching: Vec<(String, String)>,
}

impl ArnConditionReport {
    pub fn ok(&self) -> bool {
        self.conditions.iter().all(|c| c.status != ConditionStatus::Fail)
    }

    pub fn status(&self, condition: u8) -> ConditionStatus {
        self.conditions.iter().find(|c| c.condition == condition).map(|c| c.status).unwrap_or(ConditionStatus::NotCheckable)
    }

    pub fn to_validation_report(&self) -> ValidationReport {
        let mut r = ValidationReport::new();
        for c in &self.conditions {
            match c.status {
                ConditionStatus::Fail => r.push(format!("condition-{}", c.condition), vec![c.detail.clone()]),
                ConditionStatus::NotCheckable => r.note(format!("condition {}: {}", c.condition, c.detail)),
                ConditionStatus::Pass => {}
            }
        }
        r
    }
}

/// Parts whose pairs cross no pair of another part.
pub fn isolated_parts(p: &Pocset) -> Vec<usize> {
    (0..p.parts().len())
        .filter(|&j| {
            p.pairs_in_part(j).iter().all(|&q| {
                (0..p.n_pairs()).all(|r| p.part_of(2 * r) == j || !p.crosses(2 * q, 2 * r))
            })
        })
        .collect()
}

/// Checks the five defining conditions of a regular neighborhood on a finite fragment.
///
/// An orbit counts as isolated when each of its blocks is a single edge, i.e. holds exactly
/// one hyperplane. Minimality is judged relative to the fragment: a leaf of color V1 could be
/// cut off without losing any enclosure. Condition 2 is spot-checked on `candidates` only.
pub fn verify_arn_conditions(arn: &Arn, p: &Pocset, c: &CubeComplex, candidates: &[ArnCandidate]) -> ArnConditionReport {
    verify_tree_conditions(&arn.tree, Some(arn), p, c, candidates)
}

/// As [`verify_arn_conditions`] for an arbitrary tree. Only nodes shared with `arn` can
/// enclose anything.
pub fn verify_tree_conditions(
    t: &BipartiteTree,
    arn: Option<&Arn>,
    p: &Pocset,
    c: &CubeComplex,
    candidates: &[ArnCandidate],
) -> ArnConditionReport {
    let orbits = t.orbits(Color::V0);
    // Nodes of `t` that are nodes of the neighborhood itself.
    let known = |v: usize| arn.filter(|a| a.tree.nodes.get(v) == Some(&t.nodes[v]));
    let n_parts = p.parts().len();
    let encl: Vec<Vec<bool>> = orbits
        .iter()
        .map(|o| {
            (0..n_parts)
                .map(|j| known(o[0]).is_some_and(|a| verify_enclosure(a, p, c, o[0], j).encloses))
                .collect()
        })
        .collect();
    let isolated_orbit: Vec<bool> = orbits
        .iter()
        .map(|o| {
            o.iter().all(|&v| {
                known(v).is_some_and(|a| a.block_of_node(v).is_some_and(|b| a.decomposition.blocks[b].pairs.len() == 1))
            })
        })
        .collect();
    let iso_parts = isolated_parts(p);
    let part_name = |j: usize| p.parts()[j].clone();
    let orbit_name = |o: usize| t.nodes[orbits[o][0]].label.clone();
    let mut conditions = Vec::new();

    let lonely_parts: Vec<String> = (0..n_parts).filter(|&j| !encl.iter().any(|e| e[j])).map(part_name).collect();
    let idle_orbits: Vec<String> = (0..orbits.len()).filter(|&o| !encl[o].iter().any(|&x| x)).map(orbit_name).collect();
    conditions.push(if lonely_parts.is_empty() && idle_orbits.is_empty() {
        ConditionResult { condition: 1, status: ConditionStatus::Pass, detail: format!("{} parts, {} V0 orbits", n_parts, orbits.len()) }
    } else {
        let mut d = Vec::new();
        if !lonely_parts.is_empty() {
            d.push(format!("parts enclosed by no V0 orbit: {}", lonely_parts.join(", ")));
        }
        if !idle_orbits.is_empty() {
            d.push(format!("V0 orbits enclosing nothing: {}", idle_orbits.join(", ")));
        }
        ConditionResult { condition: 1, status: ConditionStatus::Fail, detail: d.join("; ") }
    });

    conditions.push(check_candidates(t, p, candidates));

    let v1_leaves: Vec<String> = {
        let adj = t.adjacency();
        (0..t.nodes.len())
            .filter(|&v| t.nodes[v].color == Color::V1 && adj[v].len() <= 1)
            .map(|v| t.nodes[v].label.clone())
            .collect()
    };
    conditions.push(if t.nodes.is_empty() {
        ConditionResult { condition: 3, status: ConditionStatus::Fail, detail: "empty tree".into() }
    } else if !v1_leaves.is_empty() {
        ConditionResult { condition: 3, status: ConditionStatus::Fail, detail: format!("V1 leaves can be removed: {}", v1_leaves.join(", ")) }
    } else {
        ConditionResult {
            condition: 3,
            status: ConditionStatus::Pass,
            detail: "no removable leaf relative to the action fragment; minimality beyond the fragment is not checkable".into(),
        }
    });

    let iso_orbits: Vec<usize> = (0..orbits.len()).filter(|&o| isolated_orbit[o]).collect();
    let m = bipartite_matching(&iso_parts, &iso_orbits, |j, o| encl[o][j]);
    let matching: Vec<(String, String)> = m.iter().map(|&(j, o)| (part_name(j), orbit_name(o))).collect();
    conditions.push(if iso_parts.len() == iso_orbits.len() && m.len() == iso_parts.len() {
        ConditionResult {
            condition: 4,
            status: ConditionStatus::Pass,
            detail: format!("{} isolated parts matched to isolated V0 orbits", m.len()),
        }
    } else {
        ConditionResult {
            condition: 4,
            status: ConditionStatus::Fail,
            detail: format!(
                "{} isolated parts, {} isolated V0 orbits, {} matched",
                iso_parts.len(),
                iso_orbits.len(),
                m.len()
            ),
        }
    });

    let bad: Vec<String> = (0..orbits.len())
        .filter(|&o| !isolated_orbit[o])
        .filter(|&o| !(0..n_parts).any(|j| encl[o][j] && !iso_parts.contains(&j)))
        .map(orbit_name)
        .collect();
    conditions.push(if bad.is_empty() {
        ConditionResult { condition: 5, status: ConditionStatus::Pass, detail: "every non-isolated V0 orbit encloses a non-isolated part".into() }
    } else {
        ConditionResult { condition: 5, status: ConditionStatus::Fail, detail: format!("non-isolated orbits without a non-isolated part: {}", bad.join(", ")) }
    });

    let summaries = orbits
        .iter()
        .enumerate()
        .map(|(o, nodes)| OrbitSummary {
            nodes: nodes.iter().map(|&v| t.nodes[v].label.clone()).collect(),
            isolated: isolated_orbit[o],
            encloses: (0..n_parts).filter(|&j| encl[o][j]).map(part_name).collect(),
        })
        .collect();
    ArnConditionReport { conditions, orbits: summaries, isolated_parts: iso_parts.into_iter().map(part_name).collect(), matching }
}

fn check_candidates(t: &BipartiteTree, p: &Pocset, candidates: &[ArnCandidate]) -> ConditionResult {
    if candidates.is_empty() {
        return ConditionResult {
            condition: 2,
            status: ConditionStatus::NotCheckable,
            detail: "only supplied candidates are checked and none was supplied".into(),
        };
    }
    for cand in candidates {
        if let Err(why) = check_candidate(t, p, cand) {
            return ConditionResult { condition: 2, status: ConditionStatus::Fail, detail: format!("candidate {}: {why}", cand.part) };
        }
    }
    ConditionResult {
        condition: 2,
        status: ConditionStatus::Pass,
        detail: format!("{} supplied candidates enclosed at V1 orbits; other splittings are not checked", candidates.len()),
    }
}

fn check_candidate(t: &BipartiteTree, p: &Pocset, cand: &ArnCandidate) -> std::result::Result<(), String> {
    let q = &cand.pocset;
    let j = q.part_index(&cand.part).ok_or("unknown part")?;
    if q.n_pairs() <= p.n_pairs() {
        return Err("candidate adds no pairs".into());
    }
    let new_pairs = q.pairs_in_part(j);
    if new_pairs.iter().any(|&x| (0..q.n_pairs()).any(|y| q.crosses(2 * x, 2 * y))) {
        return Err("candidate crosses the fragment".into());
    }
    let c = build_cubing(q, OrderMode::Almost, None, CubingCaps::default()).map_err(|e| e.to_string())?;
    if c.is_partial() {
        return Err("candidate cubing hit the caps".into());
    }
    let a = build_arn(q, &c).map_err(|e| e.to_string())?;
    let d = &a.decomposition;
    let mut hosts = Vec::new();
    for &x in &new_pairs {
        let b = d.block_of_pair(x).ok_or("candidate hyperplane outside every block")?;
        if d.blocks[b].pairs.len() != 1 {
            return Err(format!("block of {} is not a single edge", q.base(x)));
        }
        hosts.push(a.block_node(b));
    }
    // Merge each new V0 with its neighbors into one V1 node.
    let nt = &a.tree;
    let mut uf = UnionFind::new(nt.nodes.len());
    for &(u, v) in &nt.edges {
        if hosts.contains(&u) || hosts.contains(&v) {
            uf.union(u, v);
        }
    }
    let (cls, k) = uf.classes();
    let mut colors = vec![Color::V0; k];
    for v in 0..nt.nodes.len() {
        if hosts.contains(&v) {
            colors[cls[v]] = Color::V1;
        } else if colors[cls[v]] != Color::V1 {
            colors[cls[v]] = nt.nodes[v].color;
        }
    }
    let mut merged = nt.quotient(&cls, &colors).prune_v1_leaves();
    let mut old = t.prune_v1_leaves();
    merged.action.clear();
    old.action.clear();
    if gtree_isomorphic(&merged, &old, true).is_none() {
        return Err("contracting the new blocks does not give back the tree".into());
    }
    Ok(())
}

/// Maximum matching by augmenting paths; returns `(left, right)` pairs.
fn bipartite_matching(left: &[usize], right: &[usize], edge: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let mut owner: Vec<Option<usize>> = vec![None; right.len()];
    fn augment(
        l: usize,
        left: &[usize],
        right: &[usize],
        edge: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for r in 0..right.len() {
            if seen[r] || !edge(left[l], right[r]) {
                continue;
            }
            seen[r] = true;
            if owner[r].is_none_or(|o| augment(o, left, right, edge, seen, owner)) {
                owner[r] = Some(l);
                return true;
            }
        }
        false
    }
    for l in 0..left.len() {
        let mut seen = vec![false; right.len()];
        augment(l, left, right, &edge, &mut seen, &mut owner);
    }
    let mut out: Vec<(usize, usize)> =
        owner.iter().enumerate().filter_map(|(r, o)| o.map(|l| (left[l], right[r]))).collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arn::Origin;

    fn setup(p: &Pocset) -> (CubeComplex, Arn) {
        let c = build_cubing(p, OrderMode::Almost, None, CubingCaps::default()).unwrap();
        let a = build_arn(p, &c).unwrap();
        (c, a)
    }

    fn n4() -> Pocset {
        Pocset::builder().elements(["A", "B"]).relation("A", "B").build().unwrap()
    }

    fn p4() -> Pocset {
        Pocset::builder().elements(["A", "B"]).build().unwrap()
    }

    #[test]
    fn nested_pair_passes_with_isolated_orbits() {
        let p = n4();
        let (c, a) = setup(&p);
        let cand = ArnCandidate { pocset: p.with_parallel_copy(1, "extra").unwrap(), part: "extra".into() };
        let r = verify_arn_conditions(&a, &p, &c, &[cand]);
        assert!(r.ok(), "{r:#?}");
        for k in 1..=5 {
            assert_eq!(r.status(k), ConditionStatus::Pass, "condition {k}");
        }
        assert_eq!(r.isolated_parts, vec!["A", "B"]);
        assert_eq!(r.matching.len(), 2);
        assert!(r.orbits.iter().all(|o| o.isolated));
    }

    #[test]
    fn crossing_pair_has_vacuous_matching() {
        let p = p4();
        let (c, a) = setup(&p);
        let r = verify_arn_conditions(&a, &p, &c, &[]);
        assert_eq!(r.status(2), ConditionStatus::NotCheckable);
        for k in [1, 3, 4, 5] {
            assert_eq!(r.status(k), ConditionStatus::Pass, "condition {k}");
        }
        assert!(r.isolated_parts.is_empty() && r.matching.is_empty());
        assert_eq!(r.orbits[0].encloses, vec!["A", "B"]);
    }

    #[test]
    fn pendant_candidate_is_enclosed() {
        let p = p4();
        let (c, a) = setup(&p);
        let cand = Pocset::builder()
            .elements(["A", "B", "C"])
            .part("A", &["A"])
            .part("B", &["B"])
            .part("C", &["C"])
            .relation("C", "A")
            .relation("C", "B")
            .build()
            .unwrap();
        let r = verify_arn_conditions(&a, &p, &c, &[ArnCandidate { pocset: cand, part: "C".into() }]);
        assert_eq!(r.status(2), ConditionStatus::Pass, "{r:#?}");
    }

    #[test]
    fn crossing_candidate_fails() {
        let p = n4();
        let (c, a) = setup(&p);
        let cand = Pocset::builder().elements(["A", "B", "C"]).relation("A", "B").build().unwrap();
        let r = verify_arn_conditions(&a, &p, &c, &[ArnCandidate { pocset: cand, part: "C".into() }]);
        assert_eq!(r.status(2), ConditionStatus::Fail);
    }

    #[test]
    fn hand_built_idle_vertex_fails_condition_one() {
        let p = n4();
        let (c, a) = setup(&p);
        let mut t = a.tree.clone();
        let extra = t.add_node(Color::V0, "idle");
        t.nodes[extra].origin = Origin::Free;
        t.add_edge(extra, 2);
        let r = verify_tree_conditions(&t, Some(&a), &p, &c, &[]);
        assert_eq!(r.status(1), ConditionStatus::Fail);
        assert!(r.conditions[0].detail.contains("idle"));
    }

    #[test]
    fn parallel_copy_is_nested() {
        let p = p4();
        let q = p.with_parallel_copy(0, "A2").unwrap();
        assert_eq!(q.n_pairs(), 3);
        let a = q.id_of("A").unwrap();
        let a2 = q.id_of("A'").unwrap();
        assert!(q.lt(a, a2) && !q.leq(a2, a));
        assert!(q.crosses(a2, q.id_of("B").unwrap()));
        assert_eq!(q.part_name_of(a2), "A2");
    }
}
