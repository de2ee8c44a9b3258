use serde::Deserialize;

use super::automaton::{Dfa, Nfa, RegularSet};
use super::stallings::StallingsGraph;
use super::word::{Alphabet, Automorphism, Letter, Word};
use crate::error::{Error, Result};
use crate::pocset::Sign;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplittingKind {
    /// `F(left) * F(right)` over the trivial group.
    FreeAmalgam { left: Vec<usize>, right: Vec<usize> },
    /// `F(vertex) *` with stable letter, over the trivial group.
    FreeHnn { stable: usize, vertex: Vec<usize> },
    /// `A *_H B` given by generators; no exact half-space languages.
    ExperimentalAmalgam { edge: Vec<Word>, left: Vec<Word>, right: Vec<Word> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingSpec {
    pub name: String,
    pub kind: SplittingKind,
    pub twist: Option<Automorphism>,
}

impl SplittingSpec {
    pub fn free_amalgam(alphabet: &Alphabet, name: &str, left: &[&str], right: &[&str]) -> Result<Self> {
        let idx = |v: &[&str]| v.iter().map(|x| alphabet.letter(x).map(|l| l / 2)).collect::<Result<Vec<_>>>();
        let s = SplittingSpec {
            name: name.into(),
            kind: SplittingKind::FreeAmalgam { left: idx(left)?, right: idx(right)? },
            twist: None,
        };
        s.check(alphabet)?;
        Ok(s)
    }

    pub fn free_hnn(alphabet: &Alphabet, name: &str, stable: &str, vertex: &[&str]) -> Result<Self> {
        let vertex = vertex.iter().map(|x| alphabet.letter(x).map(|l| l / 2)).collect::<Result<Vec<_>>>()?;
        let s = SplittingSpec {
            name: name.into(),
            kind: SplittingKind::FreeHnn { stable: alphabet.letter(stable)? / 2, vertex },
            twist: None,
        };
        s.check(alphabet)?;
        Ok(s)
    }

    pub fn with_twist(mut self, twist: Automorphism) -> Self {
        self.twist = Some(twist);
        self
    }

    pub fn is_experimental(&self) -> bool {
        matches!(self.kind, SplittingKind::ExperimentalAmalgam { .. })
    }

    /// The edge group; trivial for the free kinds.
    pub fn edge_group(&self, alphabet: &Alphabet) -> StallingsGraph {
        match &self.kind {
            SplittingKind::ExperimentalAmalgam { edge, .. } => {
                let edge: Vec<Word> = match &self.twist {
                    Some(t) => edge.iter().map(|w| t.apply(w)).collect(),
                    None => edge.clone(),
                };
                StallingsGraph::from_generators(alphabet.size(), &edge)
            }
            _ => StallingsGraph::trivial(alphabet.size()),
        }
    }

    fn check(&self, alphabet: &Alphabet) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidSplitting(self.name.clone(), why.into()));
        let cover = |sets: &[&[usize]]| {
            let mut seen = vec![0; alphabet.rank()];
            for s in sets {
                for &i in *s {
                    seen[i] += 1;
                }
            }
            seen.iter().all(|&c| c == 1)
        };
        match &self.kind {
            SplittingKind::FreeAmalgam { left, right } => {
                if !cover(&[left, right]) {
                    return bad("left and right must partition the basis");
                }
                if left.is_empty() || right.is_empty() {
                    return bad("both factors must be nontrivial");
                }
            }
            SplittingKind::FreeHnn { stable, vertex } => {
                if vertex.contains(stable) {
                    return bad("stable letter lies in the vertex basis");
                }
                if !cover(&[vertex, &[*stable]]) {
                    return bad("stable letter and vertex basis must partition the basis");
                }
            }
            SplittingKind::ExperimentalAmalgam { edge, left, right } => {
                let a = StallingsGraph::from_generators(alphabet.size(), left);
                let b = StallingsGraph::from_generators(alphabet.size(), right);
                if !edge.iter().all(|w| a.contains(w) && b.contains(w)) {
                    return bad("edge group must lie in both vertex groups");
                }
            }
        }
        Ok(())
    }

    fn untwist(&self, g: &Word) -> Word {
        match &self.twist {
            Some(t) => t.apply_inverse(g),
            None => g.clone(),
        }
    }

    /// Is `g` in the standard half-space, i.e. does the base edge point away from `g v`?
    ///
    /// Walks the path from the base vertex `v` to `g v` in the Bass-Serre tree, one edge per
    /// syllable boundary, and reports whether the base edge is never crossed.
    pub fn side_membership(&self, g: &Word) -> Result<bool> {
        let w = self.untwist(g);
        let l = w.letters();
        match &self.kind {
            SplittingKind::FreeAmalgam { left, .. } => {
                let in_left = |x: Letter| left.contains(&(x / 2));
                // Edges on the path are labeled by the prefixes ending a syllable; the base
                // edge is the one labeled by the empty prefix.
                let mut crossed = false;
                let mut i = 0;
                let mut first_left = true;
                while i < l.len() {
                    let side = in_left(l[i]);
                    if first_left && !side {
                        // the left syllable before this one is empty: label = empty prefix
                        crossed = true;
                    }
                    while i < l.len() && in_left(l[i]) == side {
                        i += 1;
                    }
                    first_left = false;
                }
                Ok(!crossed)
            }
            SplittingKind::FreeHnn { stable, .. } => {
                // A positive stable letter after prefix p crosses edge p·e, a negative one
                // crosses p t^-1 · e; only the empty label is the base edge.
                let mut crossed = false;
                for (i, &x) in l.iter().enumerate() {
                    if x / 2 == *stable {
                        let label_len = if x & 1 == 0 { i } else { i + 1 };
                        if label_len == 0 {
                            crossed = true;
                        }
                    }
                }
                Ok(!crossed)
            }
            SplittingKind::ExperimentalAmalgam { .. } => Err(Error::Unsupported(format!(
                "splitting {} has a nontrivial edge group; no normal form is implemented",
                self.name
            ))),
        }
    }

    /// The standard half-space before twisting.
    fn base_language(&self, alphabet: &Alphabet) -> Result<RegularSet> {
        let k = alphabet.size();
        let blocked: Vec<Letter> = match &self.kind {
            SplittingKind::FreeAmalgam { right, .. } => right.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect(),
            SplittingKind::FreeHnn { stable, .. } => vec![2 * stable],
            SplittingKind::ExperimentalAmalgam { .. } => {
                return Err(Error::Unsupported(format!(
                    "exact half-space of {} needs a trivial edge group; use bounded enumeration",
                    self.name
                )))
            }
        };
        let mut d = Dfa::reduced_words(k);
        let sink = k + 1;
        for x in blocked {
            d.trans[d.start][x] = sink;
        }
        Ok(RegularSet::from_dfa(&d))
    }

    /// `g X` or `g X*` as a regular set.
    pub fn halfspace_language(&self, alphabet: &Alphabet, translate: &Word, sign: Sign) -> Result<RegularSet> {
        let mut x = self.base_language(alphabet)?;
        if let Some(t) = &self.twist {
            x = image_language(&x, t);
        }
        let gx = x.left_translate(translate);
        Ok(match sign {
            Sign::Plus => gx,
            Sign::Minus => gx.complement(),
        })
    }

    /// The half-space taken with base vertex `u v` instead of `v`.
    pub fn rebased_language(&self, alphabet: &Alphabet, u: &Word) -> Result<RegularSet> {
        Ok(self.halfspace_language(alphabet, &Word::empty(), Sign::Plus)?.right_translate(&u.inverse()))
    }

    /// True when the tree of the splitting is a line on which the group acts by translations.
    pub fn is_trivially_ascending(&self, alphabet: &Alphabet) -> bool {
        match &self.kind {
            SplittingKind::FreeAmalgam { .. } => false,
            SplittingKind::FreeHnn { vertex, .. } => vertex.is_empty() && alphabet.rank() == 1,
            SplittingKind::ExperimentalAmalgam { edge, left, right } => {
                let k = alphabet.size();
                let h = StallingsGraph::from_generators(k, edge);
                let a = StallingsGraph::from_generators(k, left);
                let b = StallingsGraph::from_generators(k, right);
                a.index_of(&h) == Some(1) && b.index_of(&h) == Some(1)
            }
        }
    }
}

/// `φ(L)` reduced, by substituting images along the automaton and saturating.
pub fn image_language(l: &RegularSet, phi: &Automorphism) -> RegularSet {
    let d = l.dfa();
    let mut nfa = Nfa::new(d.letters);
    let states: Vec<usize> = (0..d.n_states()).map(|q| nfa.add_state(d.accept[q])).collect();
    nfa.start = states[d.start];
    let live = d.live();
    for q in 0..d.n_states() {
        if !live[q] {
            continue;
        }
        for x in 0..d.letters {
            let t = d.trans[q][x];
            if !live[t] {
                continue;
            }
            let img = if x & 1 == 0 { phi.images[x / 2].clone() } else { phi.images[x / 2].inverse() };
            let l = img.letters();
            if l.is_empty() {
                nfa.eps[states[q]].insert(states[t]);
                continue;
            }
            let mut at = states[q];
            for (i, &y) in l.iter().enumerate() {
                let to = if i + 1 == l.len() { states[t] } else { nfa.add_state(false) };
                nfa.add_edge(at, y, to);
                at = to;
            }
        }
    }
    nfa.reduced_language()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpecFile {
    ambient: RawAmbient,
    splittings: Vec<RawSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAmbient {
    basis: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: String,
    kind: String,
    #[serde(default)]
    left: Vec<String>,
    #[serde(default)]
    right: Vec<String>,
    #[serde(default)]
    stable: Option<String>,
    #[serde(default)]
    vertex: Vec<String>,
    #[serde(default)]
    edge: Vec<String>,
    #[serde(default)]
    twist: Option<RawTwist>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTwist {
    images: std::collections::BTreeMap<String, String>,
    inverse: std::collections::BTreeMap<String, String>,
}

/// An ambient free group with a list of splittings.
#[derive(Clone, Debug)]
pub struct SpecSet {
    pub alphabet: Alphabet,
    pub specs: Vec<SplittingSpec>,
}

impl SpecSet {
    /// Parses the splitting JSON format:
    /// `{"ambient":{"basis":["a","b"]},"splittings":[{"name":"s1","kind":"free_amalgam",
    /// "left":["a"],"right":["b"]}]}`. Kinds are `free_amalgam`, `free_hnn` (`stable`,
    /// `vertex`) and `experimental_amalgam` (`edge`, `left`, `right` as generator words).
    /// A `twist` gives `images` and `inverse` images of each basis symbol.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpecFile = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let alphabet = Alphabet::new(&raw.ambient.basis)?;
        let mut specs = Vec::new();
        for r in raw.splittings {
            if specs.iter().any(|s: &SplittingSpec| s.name == r.name) {
                return Err(Error::Malformed(format!("duplicate splitting name {}", r.name)));
            }
            let sym = |names: &[String]| -> Result<Vec<usize>> {
                names
                    .iter()
                    .map(|n| {
                        let l = alphabet.letter(n)?;
                        if l & 1 == 1 {
                            return Err(Error::InvalidSplitting(r.name.clone(), format!("{n} is not a basis symbol")));
                        }
                        Ok(l / 2)
                    })
                    .collect()
            };
            let words = |ws: &[String]| ws.iter().map(|w| alphabet.parse(w)).collect::<Result<Vec<_>>>();
            let kind = match r.kind.as_str() {
                "free_amalgam" => SplittingKind::FreeAmalgam { left: sym(&r.left)?, right: sym(&r.right)? },
                "free_hnn" => {
                    let stable = r
                        .stable
                        .as_ref()
                        .ok_or_else(|| Error::InvalidSplitting(r.name.clone(), "missing stable letter".into()))?;
                    SplittingKind::FreeHnn { stable: sym(std::slice::from_ref(stable))?[0], vertex: sym(&r.vertex)? }
                }
                "experimental_amalgam" => SplittingKind::ExperimentalAmalgam {
                    edge: words(&r.edge)?,
                    left: words(&r.left)?,
                    right: words(&r.right)?,
                },
                other => return Err(Error::InvalidSplitting(r.name.clone(), format!("unknown kind {other}"))),
            };
            let twist = match r.twist {
                None => None,
                Some(t) => {
                    let table = |m: &std::collections::BTreeMap<String, String>| -> Result<Vec<Word>> {
                        alphabet
                            .basis()
                            .iter()
                            .map(|b| {
                                m.get(b)
                                    .map(|w| alphabet.parse(w))
                                    .unwrap_or_else(|| Err(Error::Malformed(format!("twist misses {b}"))))
                            })
                            .collect()
                    };
                    Some(Automorphism::new(table(&t.images)?, table(&t.inverse)?, &alphabet)?)
                }
            };
            let s = SplittingSpec { name: r.name, kind, twist };
            s.check(&alphabet)?;
            specs.push(s);
        }
        Ok(SpecSet { alphabet, specs })
    }

    pub fn spec(&self, name: &str) -> Result<&SplittingSpec> {
        self.specs
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::Malformed(format!("no splitting named {name}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    #[test]
    fn side_membership_examples() {
        let s = f2();
        let sp = SplittingSpec::free_amalgam(&s, "s1", &["a"], &["b"]).unwrap();
        assert!(sp.side_membership(&s.parse("a b a-").unwrap()).unwrap());
        assert!(!sp.side_membership(&s.parse("b").unwrap()).unwrap());
        assert!(sp.side_membership(&Word::empty()).unwrap());
    }

    #[test]
    fn languages_match_the_tree_walk() {
        let s = f2();
        let specs = [
            SplittingSpec::free_amalgam(&s, "s1", &["a"], &["b"]).unwrap(),
            SplittingSpec::free_hnn(&s, "st", "a", &["b"]).unwrap(),
            SplittingSpec::free_hnn(&s, "sb", "b", &["a"]).unwrap(),
        ];
        let ball = s.ball(4);
        for sp in &specs {
            let x = sp.halfspace_language(&s, &Word::empty(), Sign::Plus).unwrap();
            let xs = sp.halfspace_language(&s, &Word::empty(), Sign::Minus).unwrap();
            for w in &ball {
                assert_eq!(x.contains(w), sp.side_membership(w).unwrap(), "{} {:?}", sp.name, w);
                assert_ne!(x.contains(w), xs.contains(w));
            }
        }
    }

    #[test]
    fn left_factor_language_shape() {
        let s = f2();
        let sp = SplittingSpec::free_amalgam(&s, "s1", &["a"], &["b"]).unwrap();
        let x = sp.halfspace_language(&s, &Word::empty(), Sign::Plus).unwrap();
        let first: Vec<String> = x.words_up_to(1).iter().map(|w| s.show(w)).collect();
        assert_eq!(first, vec!["", "a", "a-"]);
        let b = s.parse("b").unwrap();
        let bx = sp.halfspace_language(&s, &b, Sign::Plus).unwrap();
        for w in s.ball(4) {
            let expect = w == b || (w.len() >= 2 && w.letters()[0] == 2 && w.letters()[1] / 2 == 0);
            assert_eq!(bx.contains(&w), expect, "{}", s.show(&w));
        }
    }

    #[test]
    fn twisted_language_is_the_image() {
        let s = f2();
        let phi = Automorphism::new(
            vec![s.parse("a b").unwrap(), s.parse("b").unwrap()],
            vec![s.parse("a b-").unwrap(), s.parse("b").unwrap()],
            &s,
        )
        .unwrap();
        let sp = SplittingSpec::free_amalgam(&s, "s1", &["a"], &["b"]).unwrap().with_twist(phi);
        let x = sp.halfspace_language(&s, &Word::empty(), Sign::Plus).unwrap();
        for w in s.ball(4) {
            assert_eq!(x.contains(&w), sp.side_membership(&w).unwrap(), "{}", s.show(&w));
        }
    }

    #[test]
    fn rebasing_changes_by_a_finite_set() {
        let s = f2();
        let sp = SplittingSpec::free_amalgam(&s, "s1", &["a"], &["b"]).unwrap();
        let x = sp.halfspace_language(&s, &Word::empty(), Sign::Plus).unwrap();
        let u = s.parse("b a").unwrap();
        let y = sp.rebased_language(&s, &u).unwrap();
        assert_ne!(x, y);
        assert!(x.symmetric_difference(&y).is_finite());
    }

    #[test]
    fn spec_json() {
        let text = r#"{"ambient":{"basis":["a","b"]},"splittings":[
            {"name":"s1","kind":"free_amalgam","left":["a"],"right":["b"],"twist":null},
            {"name":"st","kind":"free_hnn","stable":"a","vertex":["b"]}]}"#;
        let set = SpecSet::from_json(text).unwrap();
        assert_eq!(set.specs.len(), 2);
        assert_eq!(set.spec("st").unwrap().kind, SplittingKind::FreeHnn { stable: 0, vertex: vec![1] });
        let bad = r#"{"ambient":{"basis":["a","b"]},"splittings":[{"name":"s","kind":"free_amalgam","left":["a"],"right":["a"]}]}"#;
        assert!(matches!(SpecSet::from_json(bad), Err(Error::InvalidSplitting(..))));
        let exp = r#"{"ambient":{"basis":["a"]},"splittings":[{"name":"e","kind":"experimental_amalgam","edge":["a"],"left":["a"],"right":["a"]}]}"#;
        let set = SpecSet::from_json(exp).unwrap();
        assert!(set.specs[0].is_trivially_ascending(&set.alphabet));
        assert!(matches!(set.specs[0].side_membership(&Word::empty()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn translation_line() {
        let s = Alphabet::new(&["a"]).unwrap();
        let sp = SplittingSpec::free_hnn(&s, "line", "a", &[]).unwrap();
        assert!(sp.is_trivially_ascending(&s));
        let f = f2();
        assert!(!SplittingSpec::free_hnn(&f, "st", "a", &["b"]).unwrap().is_trivially_ascending(&f));
    }
}
