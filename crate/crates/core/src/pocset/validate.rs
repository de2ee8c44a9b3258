use super::{pair_of, plus_of, star, Pocset};
use crate::report::ValidationReport;

/// Checks the order axioms and the action laws. With `require_nested`, also reports pairs
/// of star pairs related by none of the four relations.
pub fn validate_pocset(p: &Pocset, require_nested: bool) -> ValidationReport {
    let mut r = ValidationReport::new();
    let n = p.n_elements();
    let leq = p.leq_relation();

    if let Some(a) = (0..n).find(|&a| !leq.get(a, a)) {
        r.push("reflexive", vec![p.name(a)]);
    }
    'anti: for a in 0..n {
        for b in leq.row(a).iter() {
            if b > a && leq.get(b, a) {
                r.push("antisymmetric", p.names([a, b]));
                break 'anti;
            }
        }
    }
    'trans: for a in 0..n {
        for b in leq.row(a).iter() {
            for c in leq.row(b).iter() {
                if !leq.get(a, c) {
                    r.push("transitive", p.names([a, b, c]));
                    break 'trans;
                }
            }
        }
    }
    'rev: for a in 0..n {
        for b in leq.row(a).iter() {
            if !leq.get(star(b), star(a)) {
                r.push("order-reversing", p.names([a, b]));
                break 'rev;
            }
        }
    }
    let mut excl = None;
    'excl: for a in 0..n {
        for q in 0..p.n_pairs() {
            let b = plus_of(q);
            if q != pair_of(a) && leq.get(a, b) && leq.get(a, star(b)) {
                excl = Some((a, b));
                break 'excl;
            }
        }
    }
    if excl.is_none() {
        excl = (0..n).find(|&a| leq.get(a, star(a))).map(|a| (a, a));
    }
    if let Some((a, b)) = excl {
        r.push("star-exclusive", p.names([a, b]));
    }
    if require_nested {
        'nest: for i in 0..p.n_pairs() {
            for j in i + 1..p.n_pairs() {
                let (a, b) = (plus_of(i), plus_of(j));
                let related = [(a, b), (a, star(b)), (star(a), b), (star(a), star(b))]
                    .iter()
                    .any(|&(x, y)| leq.get(x, y));
                if !related {
                    r.push("comparable", p.names([a, b]));
                    break 'nest;
                }
            }
        }
    }

    for g in p.action() {
        let mut hit = vec![None; n];
        let mut flagged = [false; 4];
        for a in 0..n {
            let Some(ga) = g.apply(a) else { continue };
            if let Some(prev) = hit[ga] {
                if !flagged[0] {
                    r.push("action-injective", vec![g.name.clone(), p.name(prev), p.name(a)]);
                    flagged[0] = true;
                }
            }
            hit[ga] = Some(a);
            if g.apply(star(a)) != Some(star(ga)) && !flagged[1] {
                r.push("action-star", vec![g.name.clone(), p.name(a)]);
                flagged[1] = true;
            }
            if p.part_of(a) != p.part_of(ga) && !flagged[2] {
                r.push("action-parts", vec![g.name.clone(), p.name(a)]);
                flagged[2] = true;
            }
            if !flagged[3] {
                for b in 0..n {
                    let Some(gb) = g.apply(b) else { continue };
                    if leq.get(a, b) != leq.get(ga, gb) {
                        r.push("action-order", vec![g.name.clone(), p.name(a), p.name(b)]);
                        flagged[3] = true;
                        break;
                    }
                }
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pair_is_valid() {
        let p = Pocset::builder().element("A").build().unwrap();
        assert!(validate_pocset(&p, true).ok);
    }

    #[test]
    fn two_chain_is_valid() {
        let p = Pocset::builder().elements(["A", "B"]).relation("A", "B").build().unwrap();
        let r = validate_pocset(&p, true);
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn double_inclusion_is_reported_with_both_elements() {
        let p = Pocset::builder().elements(["A", "B"]).relation("A", "B").relation("A", "B*").build().unwrap();
        let r = validate_pocset(&p, false);
        let v = r.violations.iter().find(|v| v.axiom == "star-exclusive").unwrap();
        assert_eq!(v.witness, vec!["A", "B"]);
    }

    #[test]
    fn raw_relations_expose_every_axiom() {
        let p = Pocset::builder()
            .elements(["A", "B", "C"])
            .raw()
            .relation("A", "B")
            .relation("B", "C")
            .relation("B", "A")
            .build()
            .unwrap();
        let r = validate_pocset(&p, false);
        for axiom in ["reflexive", "antisymmetric", "transitive", "order-reversing"] {
            assert!(r.has(axiom), "missing {axiom}: {r:?}");
        }
    }

    #[test]
    fn crossing_pair_fails_only_in_nested_mode() {
        let p = Pocset::builder().elements(["A", "B"]).build().unwrap();
        assert!(validate_pocset(&p, false).ok);
        let r = validate_pocset(&p, true);
        assert_eq!(r.violations[0].axiom, "comparable");
    }

    #[test]
    fn action_laws() {
        let good = Pocset::builder()
            .elements(["A", "B"])
            .part("X", &["A", "B"])
            .relation("A", "B")
            .generator("g", &[("A", "B")])
            .build()
            .unwrap();
        assert!(validate_pocset(&good, false).ok);
        let bad = Pocset::builder()
            .elements(["A", "B"])
            .relation("A", "B")
            .generator("g", &[("A", "B"), ("B", "A")])
            .build()
            .unwrap();
        let r = validate_pocset(&bad, false);
        assert!(r.has("action-order"));
        assert!(r.has("action-parts"));
    }
}
