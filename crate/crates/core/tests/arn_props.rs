mod common;

use std::collections::BTreeMap;

use arbor::arn::{build_arn, compatibility_tree, gtree_isomorphic, verify_arn_conditions, Color, ConditionStatus, Origin};
use arbor::cubing::{build_cubing, reposition_vgp, CubingCaps, Point};
use arbor::dunwoody::verify_realization;
use arbor::pocset::{OrderMode, Pocset};
use common::*;
use proptest::prelude::*;

fn almost(p: &Pocset) -> arbor::cubing::CubeComplex {
    build_cubing(p, OrderMode::Almost, None, CubingCaps::default()).unwrap()
}

proptest! {
    #[test]
    fn crossing_free_neighborhoods((parents, flips, _) in tree_strategy(12)) {
        // each pair its own part, so every part is a single orbit
        let parts: Vec<usize> = (0..parents.len()).collect();
        let p = tree_pocset(&tree_edges(&parents, &flips), &parts);
        let c = almost(&p);
        let arn = build_arn(&p, &c).unwrap();
        prop_assert_eq!(arn.tree.count(Color::V0), p.parts().len());
        let r = verify_arn_conditions(&arn, &p, &c, &[]);
        prop_assert!(r.orbits.iter().all(|o| o.isolated));
        prop_assert_eq!(r.isolated_parts.len(), p.parts().len());
        for k in [1, 3, 4, 5] {
            prop_assert_eq!(r.status(k), ConditionStatus::Pass, "condition {}", k);
        }
    }

    #[test]
    fn neighborhoods_are_bipartite_trees(masks in masks_strategy(5)) {
        let Ok(p) = subset_pocset(&masks) else { return Ok(()) };
        let c = almost(&p);
        prop_assume!(c.component_of(0).len() == c.vertices.len());
        let arn = build_arn(&p, &c).unwrap();
        prop_assert!(arn.tree.is_bipartite());
        prop_assert!(arn.tree.is_tree());
        for (i, n) in arn.tree.nodes.iter().enumerate() {
            match n.origin {
                Origin::Block(b) => prop_assert!(n.color == Color::V0 && b < arn.decomposition.blocks.len()),
                Origin::Cut(v) => prop_assert!(n.color == Color::V1 && arn.decomposition.cut_vertices.contains(&v)),
                Origin::Free => prop_assert!(false, "node {} has no origin", i),
            }
        }
    }

    #[test]
    fn repositioning_keeps_the_neighborhood(masks in masks_strategy(4), pick in any::<usize>()) {
        let Ok(p) = subset_pocset(&masks) else { return Ok(()) };
        prop_assume!(p.n_pairs() >= 2);
        let c = almost(&p);
        prop_assume!(c.component_of(0).len() == c.vertices.len());
        let w = c.vertices[pick % c.vertices.len()].clone();
        let fixed = Point { name: "e".into(), pullback: (0..p.n_elements()).map(Some).collect(), membership: None };
        let r = reposition_vgp(&p, &w, &[fixed]).unwrap();
        prop_assert!(r.very_good.ok);
        prop_assert!(r.order_isomorphic);
        let q = r.repositioned.unwrap();
        let (a, b) = (build_arn(&p, &c).unwrap(), build_arn(&q, &almost(&q)).unwrap());
        prop_assert!(gtree_isomorphic(&a.tree, &b.tree, true).is_some());
    }

    #[test]
    fn collapses_reproduce_parts((parents, flips, parts) in tree_strategy(15), mult in 1usize..3) {
        let p = tree_pocset(&tree_edges(&parents, &flips), &parts);
        let m: BTreeMap<String, usize> = p.parts().iter().take(1).map(|x| (x.clone(), mult)).collect();
        let ct = compatibility_tree(&p, &m).unwrap();
        prop_assert!(ct.collapses.iter().all(|c| c.ok));
        for (j, part) in p.parts().iter().enumerate() {
            if m.contains_key(part) {
                continue;
            }
            let collapsed = ct.tree.collapse(|e| &e.part == part);
            let r = verify_realization(&collapsed, &p.restrict(|q| p.part_of(2 * q) == j));
            prop_assert!(r.ok, "{:?}", r.violations);
        }
    }
}

#[test]
fn rotated_legs_form_one_orbit() {
    let p = Pocset::builder()
        .elements(["A", "B", "C"])
        .part("legs", &["A", "B", "C"])
        .relation("A", "B*")
        .relation("A", "C*")
        .relation("B", "C*")
        .generator("r", &[("A", "B"), ("B", "C"), ("C", "A")])
        .build()
        .unwrap();
    let c = almost(&p);
    let arn = build_arn(&p, &c).unwrap();
    let r = verify_arn_conditions(&arn, &p, &c, &[]);
    assert_eq!(r.orbits.len(), 1);
    assert!(r.orbits[0].isolated);
    assert_eq!(r.matching.len(), 1);
}
