//! Letters, words, free and cyclic reduction.
//!
//! A generator is named by an ASCII lowercase letter; the matching uppercase
//! letter is its inverse. Letters are stored as `2 * (name - 'a') + inverse`,
//! so the natural ordering is `a < A < b < B < ...` and words compare
//! lexicographically in that order.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Number of letters a generator name can take (`a` through `z`).
pub const MAX_GENERATORS: usize = 26;

/// A signed generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub(crate) u8);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        assert!(generator < MAX_GENERATORS, "generator index {generator} out of range");
        Letter((generator as u8) << 1 | inverse as u8)
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'a'..='z' => Ok(Letter::new(c as usize - 'a' as usize, false)),
            'A'..='Z' => Ok(Letter::new(c as usize - 'A' as usize, true)),
            _ => Err(Error::UnknownLetter(c)),
        }
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Dense index in `0..2 * MAX_GENERATORS`.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn to_char(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + self.generator() as u8) as char
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// The generators of a presentation, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    generators: Vec<usize>,
}

impl Alphabet {
    /// Alphabet from generator indices; duplicates are an error.
    pub fn new(generators: Vec<usize>) -> Result<Self> {
        let mut seen = [false; MAX_GENERATORS];
        for &g in &generators {
            if g >= MAX_GENERATORS {
                return Err(Error::Precondition(alloc::format!("generator index {g} out of range")));
            }
            if seen[g] {
                return Err(Error::Precondition(alloc::format!(
                    "duplicate generator '{}'",
                    Letter::new(g, false)
                )));
            }
            seen[g] = true;
        }
        Ok(Alphabet { generators })
    }

    /// The first `rank` letters: `a`, `b`, ...
    pub fn standard(rank: usize) -> Self {
        assert!(rank <= MAX_GENERATORS);
        Alphabet { generators: (0..rank).collect() }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, letter: Letter) -> bool {
        self.generators.contains(&letter.generator())
    }

    /// All signed letters: `g, G` for each generator, in declaration order.
    pub fn letters(&self) -> Vec<Letter> {
        self.generators
            .iter()
            .flat_map(|&g| [Letter::new(g, false), Letter::new(g, true)])
            .collect()
    }

    /// Parses a word and checks that every letter belongs to the alphabet.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let word = Word::parse(text)?;
        self.check_word(&word)?;
        Ok(word)
    }

    pub fn check_word(&self, word: &Word) -> Result<()> {
        match word.letters().iter().find(|l| !self.contains(**l)) {
            Some(l) => Err(Error::UnknownLetter(l.to_char())),
            None => Ok(()),
        }
    }

    /// Every freely reduced word of length at most `max_len`, in shortlex order.
    pub fn reduced_words_up_to(&self, max_len: usize) -> Vec<Word> {
        let letters = self.letters();
        let mut out = alloc::vec![Word::new()];
        let mut layer = alloc::vec![Word::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &x in &letters {
                    if w.last() == Some(x.inverse()) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// A word over signed generators.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Parses letters `a-z` / `A-Z`. Whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .filter(|c| !c.is_whitespace())
            .map(Letter::from_char)
            .collect::<Result<Vec<_>>>()
            .map(Word)
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

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// Letters `range` as a new word.
    pub fn slice(&self, range: core::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    /// Reversed word with every letter inverted.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Plain concatenation, no reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.free_reduced();
        for &l in other.letters() {
            if out.last() == Some(l.inverse()) {
                out.0.pop();
            } else {
                out.0.push(l);
            }
        }
        out
    }

    pub fn pow(&self, exponent: usize) -> Word {
        let mut out = Word::new();
        for _ in 0..exponent {
            out = out.mul(self);
        }
        out
    }

    pub fn free_reduced(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if stack.last() == Some(&l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word(stack)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    /// Free reduction followed by stripping mutually inverse end letters.
    pub fn cyclically_reduced(&self) -> Word {
        let w = self.free_reduced();
        let n = w.len();
        let mut k = 0;
        while 2 * k + 1 < n && w.0[k] == w.0[n - 1 - k].inverse() {
            k += 1;
        }
        w.slice(k..n - k)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&a), Some(&b)) => self.len() == 1 || a != b.inverse(),
                _ => true,
            }
    }

    /// The rotation starting at letter `k`.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::new();
        }
        let k = k % self.len();
        let mut letters = self.0[k..].to_vec();
        letters.extend_from_slice(&self.0[..k]);
        Word(letters)
    }

    /// Distinct rotations; `{""}` for the empty word.
    pub fn cyclic_permutations(&self) -> BTreeSet<Word> {
        if self.is_empty() {
            return BTreeSet::from([Word::new()]);
        }
        (0..self.len()).map(|k| self.rotate(k)).collect()
    }

    pub fn starts_with(&self, prefix: &[Letter]) -> bool {
        self.0.starts_with(prefix)
    }

    /// Sum of exponents of each generator, indexed by generator.
    pub fn exponent_sums(&self) -> [i64; MAX_GENERATORS] {
        let mut sums = [0i64; MAX_GENERATORS];
        for l in &self.0 {
            sums[l.generator()] += if l.is_inverse() { -1 } else { 1 };
        }
        sums
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl core::str::FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        alloc::format!("{w}")
    }
}

/// Unique freely reduced word for the same free-group element.
pub fn free_reduce(w: &Word) -> Word {
    w.free_reduced()
}

pub fn invert(w: &Word) -> Word {
    w.inverse()
}

pub fn cyclic_permutations(w: &Word) -> BTreeSet<Word> {
    w.cyclic_permutations()
}

/// Length of the longest common prefix of two letter slices.
pub(crate) fn common_prefix(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}
