use std::collections::BTreeMap;

use serde::Serialize;

use super::ball::sigma_ball;
use super::splitting::SpecSet;
use super::stallings::double_coset_language;
use super::word::Word;
use crate::arn::compatibility_tree;
use crate::error::Result;
use crate::pocset::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntersectionValue {
    Exact(usize),
    AtLeast(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionReport {
    pub value: IntersectionValue,
    /// Words `g` with `g X` crossing `Y`, one per double coset `K g H`.
    pub witnesses: Vec<String>,
    pub radius: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

/// Intersection number of two splittings of `set`, observed on the ball of `radius`.
///
/// The value is exact only when no translate crosses and the ball pocset admits a
/// compatibility tree; otherwise it is a lower bound. Naming the same splitting twice scans
/// it against itself.
pub fn intersection_number(set: &SpecSet, first: &str, second: &str, radius: usize) -> Result<IntersectionReport> {
    let s = set.spec(first)?.clone();
    let t = set.spec(second)?.clone();
    let same = first == second;
    let sub = SpecSet { alphabet: set.alphabet.clone(), specs: if same { vec![s.clone()] } else { vec![s.clone(), t.clone()] } };
    let ball = sigma_ball(&sub, radius, true)?;
    let p = &ball.pocset;
    let y = ball.element_of(if same { 0 } else { 1 }, &Word::empty(), Sign::Plus).expect("base element lies in the ball");
    let h = s.edge_group(&set.alphabet);
    let k = t.edge_group(&set.alphabet);
    let mut found: Vec<Word> = Vec::new();
    for g in set.alphabet.ball(radius) {
        let Some(x) = ball.element_of(0, &g, Sign::Plus) else { continue };
        if !p.crosses(x, y) {
            continue;
        }
        if found.iter().any(|f| double_coset_language(&k, f, &h).contains(&g)) {
            continue;
        }
        found.push(g);
    }
    let (value, certificate) = if found.is_empty() {
        match compatibility_tree(p, &BTreeMap::new()) {
            Ok(c) if c.ok() => (
                IntersectionValue::Exact(0),
                Some(format!("compatibility tree with {} edges in {} edge orbits", c.tree.edge_count(), c.edge_orbits)),
            ),
            _ => (IntersectionValue::AtLeast(0), None),
        }
    } else {
        (IntersectionValue::AtLeast(found.len()), None)
    };
    Ok(IntersectionReport {
        value,
        witnesses: found.iter().map(|g| set.alphabet.show(g)).collect(),
        radius,
        certificate,
    })
}
