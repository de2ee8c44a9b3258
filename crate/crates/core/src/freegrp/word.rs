use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A signed basis letter: `2i` is the i-th basis symbol, `2i + 1` its inverse.
pub type Letter = usize;

#[inline]
pub fn inv(x: Letter) -> Letter {
    x ^ 1
}

/// The basis of a free group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Alphabet {
    basis: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(basis: &[S]) -> Result<Self> {
        let mut out: Vec<String> = Vec::new();
        for b in basis {
            let b = b.as_ref();
            if b.is_empty() || b.ends_with('-') || b.chars().any(char::is_whitespace) {
                return Err(Error::Malformed(format!("bad basis symbol {b:?}")));
            }
            if out.iter().any(|x| x == b) {
                return Err(Error::Malformed(format!("duplicate basis symbol {b}")));
            }
            out.push(b.to_string());
        }
        Ok(Alphabet { basis: out })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Number of signed letters.
    pub fn size(&self) -> usize {
        2 * self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn letter(&self, token: &str) -> Result<Letter> {
        let (name, minus) = match token.strip_suffix('-') {
            Some(n) => (n, true),
            None => (token, false),
        };
        let i = self.basis.iter().position(|b| b == name).ok_or_else(|| Error::UnknownLetter(token.to_string()))?;
        Ok(2 * i + minus as usize)
    }

    pub fn letter_name(&self, x: Letter) -> String {
        let b = &self.basis[x / 2];
        if x & 1 == 1 {
            format!("{b}-")
        } else {
            b.clone()
        }
    }

    /// Parses a space-separated word such as `"a b- a"` and reduces it.
    pub fn parse(&self, s: &str) -> Result<Word> {
        let letters = s.split_whitespace().map(|t| self.letter(t)).collect::<Result<Vec<_>>>()?;
        Ok(Word::reduce(letters))
    }

    pub fn show(&self, w: &Word) -> String {
        w.0.iter().map(|&x| self.letter_name(x)).collect::<Vec<_>>().join(" ")
    }

    /// All reduced words of length at most `radius`, in shortlex order.
    pub fn ball(&self, radius: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &layer {
                for x in 0..self.size() {
                    if w.last() != Some(inv(x)) {
                        let mut v = w.clone();
                        v.0.push(x);
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub(crate) Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Free reduction; the result does not depend on the cancellation order.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for x in letters {
            if out.last() == Some(&inv(x)) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&x| inv(x)).collect())
    }

    pub fn letter(x: Letter) -> Word {
        Word(vec![x])
    }

    /// Shortlex comparison.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        (self.len(), &self.0).cmp(&(other.len(), &other.0))
    }
}

impl fmt::Display for Word {
    /// Letters by index; use [`Alphabet::show`] for names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Reduces a raw letter sequence given by names.
pub fn normalize_word<S: AsRef<str>>(alphabet: &Alphabet, raw: &[S]) -> Result<Word> {
    let letters = raw.iter().map(|t| alphabet.letter(t.as_ref())).collect::<Result<Vec<_>>>()?;
    Ok(Word::reduce(letters))
}

/// An automorphism given by images of the basis together with the images of its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub images: Vec<Word>,
    pub inverse_images: Vec<Word>,
}

impl Automorphism {
    /// Checks that applying the images and then the inverse images fixes every basis letter,
    /// in both orders.
    pub fn new(images: Vec<Word>, inverse_images: Vec<Word>, alphabet: &Alphabet) -> Result<Self> {
        if images.len() != alphabet.rank() || inverse_images.len() != alphabet.rank() {
            return Err(Error::Malformed("automorphism needs one image per basis symbol".into()));
        }
        let a = Automorphism { images, inverse_images };
        for i in 0..alphabet.rank() {
            let x = Word::letter(2 * i);
            if a.apply_inverse(&a.apply(&x)) != x || a.apply(&a.apply_inverse(&x)) != x {
                return Err(Error::Malformed(format!(
                    "inverse images do not invert the automorphism at {}",
                    alphabet.letter_name(2 * i)
                )));
            }
        }
        Ok(a)
    }

    fn substitute(table: &[Word], w: &Word) -> Word {
        Word::reduce(w.0.iter().flat_map(|&x| {
            let img = &table[x / 2];
            if x & 1 == 0 {
                img.0.clone()
            } else {
                img.inverse().0
            }
        }))
    }

    pub fn apply(&self, w: &Word) -> Word {
        Self::substitute(&self.images, w)
    }

    pub fn apply_inverse(&self, w: &Word) -> Word {
        Self::substitute(&self.inverse_images, w)
    }
}
