//! Surface-group words and conjugacy canonical forms.
//!
//! A [`CyclicWord`] stands for an unoriented free homotopy class of closed
//! curves: the word is taken up to rotation and inversion. The punctured torus
//! group is free on `a, b`; the genus-2 group has the single relator
//! `[a1,b1][a2,b2]`, serialized `abABcdCD`.

mod automorphism;
mod christoffel;
mod dehn;
mod orbit;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{ModelKind, SurfaceModel};

pub use automorphism::{
    abelianized_action, apply_automorphism, determinant, is_transvection, mcg_generators, Automorphism, IntMatrix,
};
pub use christoffel::{christoffel_letters, christoffel_word};
pub use dehn::check_small_cancellation;
pub use orbit::{orbit_ball, OrbitBall, OrbitOptions};

/// A generator (positive) or its inverse (negative), generators numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(i8);

impl Letter {
    pub fn new(code: i8) -> Letter {
        assert!(code != 0, "letter code must be nonzero");
        Letter(code)
    }

    pub fn code(self) -> i8 {
        self.0
    }

    /// Zero-based generator index.
    pub fn generator(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Position in the total order a < A < b < B < ... used for lexicographic minima.
    fn rank(self) -> u8 {
        2 * self.generator() as u8 + self.is_inverse() as u8
    }

    pub fn to_char(self) -> char {
        let c = (b'a' + self.generator() as u8) as char;
        if self.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        if !c.is_ascii_alphabetic() {
            return None;
        }
        let g = (c.to_ascii_lowercase() as u8).checked_sub(b'a')? as i8 + 1;
        Some(Letter(if c.is_ascii_uppercase() { -g } else { g }))
    }
}

pub fn invert(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|l| l.inverse()).collect()
}

pub fn parse_letters(model: &SurfaceModel, s: &str) -> Result<Vec<Letter>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match Letter::from_char(c) {
            Some(l) if l.generator() < model.rank() => Ok(l),
            _ => Err(Error::InvalidWord(format!("letter `{c}` is not in the {} alphabet", model.kind))),
        })
        .collect()
}

pub fn format_letters(word: &[Letter]) -> String {
    word.iter().map(|l| l.to_char()).collect()
}

/// Free reduction of a linear word.
pub fn free_reduce(word: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free reduction followed by removal of wraparound cancellations.
pub fn cyclic_reduce(word: &[Letter]) -> Vec<Letter> {
    let w = free_reduce(word);
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == w[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

pub fn is_cyclically_reduced(word: &[Letter]) -> bool {
    let n = word.len();
    (0..n).all(|i| word[(i + 1) % n] != word[i].inverse())
}

fn lex_less(a: &[Letter], b: &[Letter]) -> bool {
    a.iter().map(|l| l.rank()).lt(b.iter().map(|l| l.rank()))
}

/// Lexicographically least rotation of the word or of its inverse.
pub(crate) fn min_rotation_up_to_inversion(word: &[Letter]) -> Vec<Letter> {
    let n = word.len();
    let inv = invert(word);
    let mut best: Option<Vec<Letter>> = None;
    for w in [word, inv.as_slice()] {
        for r in 0..n {
            let cand: Vec<Letter> = w[r..].iter().chain(&w[..r]).copied().collect();
            if best.as_ref().is_none_or(|b| lex_less(&cand, b)) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// An unoriented conjugacy class, stored as its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicWord {
    letters: Vec<Letter>,
}

impl CyclicWord {
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation of `d` copies, re-canonicalized.
    pub fn power(&self, model: &SurfaceModel, d: usize) -> Result<CyclicWord> {
        let w: Vec<Letter> = (0..d).flat_map(|_| self.letters.iter().copied()).collect();
        canonical_cyclic_form(model, &w)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.letters))
    }
}

/// Canonical representative of the unoriented conjugacy class of `word`.
///
/// Free groups: cyclic reduction then least rotation up to inversion. Genus 2:
/// additionally Dehn reduction and a search over half-relator swaps, keeping
/// the lexicographically least shortest cyclic word that is reached.
pub fn canonical_cyclic_form(model: &SurfaceModel, word: &[Letter]) -> Result<CyclicWord> {
    if let Some(bad) = word.iter().find(|l| l.generator() >= model.rank()) {
        return Err(Error::InvalidWord(format!("letter code {} out of alphabet", bad.code())));
    }
    let letters = match model.kind {
        ModelKind::PuncturedTorus => {
            let w = cyclic_reduce(word);
            if w.is_empty() {
                return Err(Error::TrivialClass);
            }
            min_rotation_up_to_inversion(&w)
        }
        ModelKind::GenusTwo => dehn::canonical_one_relator(&model.relator, word)?,
    };
    Ok(CyclicWord { letters })
}

pub fn parse_cyclic_word(model: &SurfaceModel, s: &str) -> Result<CyclicWord> {
    canonical_cyclic_form(model, &parse_letters(model, s)?)
}

/// Distinct canonical forms in a slice of classes.
pub fn distinct(words: &[CyclicWord]) -> usize {
    words.iter().collect::<HashSet<_>>().len()
}
