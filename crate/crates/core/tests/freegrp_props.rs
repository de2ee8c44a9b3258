use arbor::freegrp::{
    corner_statuses, double_coset_language, intersection_number, sigma_ball, Alphabet, RegularSet, Smallness,
    SpecSet, StallingsGraph, Word,
};
use arbor::pocset::{validate_pocset, Sign};
use proptest::prelude::*;

const F2: &str = r#"{"ambient":{"basis":["a","b"]},"splittings":[
    {"name":"s1","kind":"free_amalgam","left":["a"],"right":["b"]},
    {"name":"st","kind":"free_hnn","stable":"a","vertex":["b"]},
    {"name":"sb","kind":"free_hnn","stable":"b","vertex":["a"]}]}"#;

fn f2() -> SpecSet {
    SpecSet::from_json(F2).unwrap()
}

fn word(k: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0..4usize, 0..k).prop_map(Word::reduce)
}

proptest! {
    #[test]
    fn halfspaces_partition(g in word(4), which in 0usize..3, w in word(8)) {
        let set = f2();
        let s = &set.specs[which];
        let plus = s.halfspace_language(&set.alphabet, &g, Sign::Plus).unwrap();
        let minus = s.halfspace_language(&set.alphabet, &g, Sign::Minus).unwrap();
        prop_assert!(plus.intersect(&minus).is_empty());
        prop_assert!(plus.union(&minus) == RegularSet::all(set.alphabet.size()));
        prop_assert_ne!(plus.contains(&w), minus.contains(&w));
    }

    #[test]
    fn right_translates_are_almost_equal(which in 0usize..3, x in 0usize..4) {
        let set = f2();
        let l = set.specs[which].halfspace_language(&set.alphabet, &Word::empty(), Sign::Plus).unwrap();
        prop_assert!(l.right_translate(&Word::letter(x)).symmetric_difference(&l).is_finite());
    }

    #[test]
    fn translation_is_equivariant(g in word(3), h in word(3), which in 0usize..3, w in word(9)) {
        let set = f2();
        let s = &set.specs[which];
        let gh = s.halfspace_language(&set.alphabet, &g.mul(&h), Sign::Plus).unwrap();
        let moved = s.halfspace_language(&set.alphabet, &h, Sign::Plus).unwrap().left_translate(&g);
        prop_assert!(gh == moved);
        // and by membership of the inverse translate
        prop_assert_eq!(gh.contains(&w), s.side_membership(&g.mul(&h).inverse().mul(&w)).unwrap());
    }

    #[test]
    fn boolean_operations_match_sets(xs in proptest::collection::vec(word(5), 0..6), ys in proptest::collection::vec(word(5), 0..6)) {
        let a = RegularSet::finite(4, &xs);
        let b = RegularSet::finite(4, &ys);
        let alphabet = Alphabet::new(&["a", "b"]).unwrap();
        for w in alphabet.ball(5) {
            let (x, y) = (xs.contains(&w), ys.contains(&w));
            prop_assert_eq!(a.contains(&w), x);
            prop_assert_eq!(a.intersect(&b).contains(&w), x && y);
            prop_assert_eq!(a.union(&b).contains(&w), x || y);
            prop_assert_eq!(a.minus(&b).contains(&w), x && !y);
            prop_assert_eq!(a.complement().contains(&w), !x);
        }
        prop_assert!(a.is_finite());
        prop_assert!(!a.complement().is_finite());
    }
}

#[test]
fn sigma_balls_are_valid_and_symmetric() {
    let set = f2();
    for radius in 0..=2 {
        let b = sigma_ball(&set, radius, true).unwrap();
        let p = &b.pocset;
        assert!(validate_pocset(p, false).ok);
        for i in 0..p.n_pairs() {
            for j in 0..p.n_pairs() {
                assert_eq!(p.crosses(2 * i, 2 * j), p.crosses(2 * j, 2 * i));
                if i != j {
                    let large = |x, y| corner_statuses(&b.languages[x], &b.languages[y]).iter().all(|s| *s == Smallness::Large);
                    assert_eq!(large(i, j), p.crosses(2 * i, 2 * j));
                }
            }
        }
    }
}

#[test]
fn witnesses_lie_in_distinct_double_cosets() {
    let set = SpecSet::from_json(
        r#"{"ambient":{"basis":["a","b"]},"splittings":[
        {"name":"s1","kind":"free_amalgam","left":["a"],"right":["b"]},
        {"name":"s2","kind":"free_amalgam","left":["a"],"right":["b"],
         "twist":{"images":{"a":"a b","b":"b"},"inverse":{"a":"a b-","b":"b"}}}]}"#,
    )
    .unwrap();
    let r = intersection_number(&set, "s1", "s2", 2).unwrap();
    let k = set.spec("s1").unwrap().edge_group(&set.alphabet);
    let h = set.spec("s2").unwrap().edge_group(&set.alphabet);
    let ws: Vec<Word> = r.witnesses.iter().map(|w| set.alphabet.parse(w).unwrap()).collect();
    for (i, g) in ws.iter().enumerate() {
        let coset = double_coset_language(&k, g, &h);
        for g2 in &ws[i + 1..] {
            assert!(!coset.contains(g2));
        }
    }
    // trivial edge groups: the double coset of g is g alone
    let trivial = StallingsGraph::trivial(4);
    assert_eq!(double_coset_language(&trivial, &ws[0], &trivial).words_up_to(6), vec![ws[0].clone()]);
}
