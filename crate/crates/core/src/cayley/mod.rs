//! Ball-limited Cayley graphs and the geometry checks built on them.
//!
//! Equality of group elements is delegated to an [`EqualityOracle`]. Three
//! are provided: [`FreeReduction`] for free groups, the Dehn oracle in
//! [`crate::dehn`], and [`ExponentVector`] for free abelian control groups.

mod ball;
mod geometry;

pub use ball::{build_ball, geodesic_length, Ball, Vertex};
pub use geometry::{
    check_quasiconvex, check_slim, check_triangle, enumerate_geodesics, quasiconvexity_constant, BallMetric,
    GeodesicSet, QcVerdict, QcWitness, SlimVerdict, SlimWitness,
};

use alloc::vec::Vec;

use crate::words::{Alphabet, Letter, Word};
use crate::{Error, Limits, Result};

/// A sound procedure deciding equality of words in a fixed group.
pub trait EqualityOracle {
    fn alphabet(&self) -> &Alphabet;

    fn is_trivial(&self, w: &Word) -> bool;

    fn equal(&self, u: &Word, v: &Word) -> bool {
        self.is_trivial(&u.mul(&v.inverse()))
    }

    /// Canonical representative of the element, if the oracle has one.
    fn normal_form(&self, _w: &Word) -> Option<Word> {
        None
    }

    /// A geodesic word for the element, if cheaply known.
    fn geodesic(&self, _w: &Word) -> Option<Word> {
        None
    }

    /// A value shared by all words for the same element; an empty vector
    /// carries no information.
    fn invariant(&self, _w: &Word) -> Vec<i64> {
        Vec::new()
    }

    /// Some word for the same element that is no longer than `w`.
    fn shorten(&self, w: &Word) -> Word {
        w.free_reduced()
    }

    /// Whether verdicts are backed by a trusted or certified presentation.
    fn is_reliable(&self) -> bool {
        true
    }
}

/// Equality in the free group: free reduction.
#[derive(Debug, Clone)]
pub struct FreeReduction {
    alphabet: Alphabet,
}

impl FreeReduction {
    pub fn new(alphabet: Alphabet) -> Self {
        FreeReduction { alphabet }
    }
}

impl EqualityOracle for FreeReduction {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_trivial(&self, w: &Word) -> bool {
        w.free_reduced().is_empty()
    }

    fn normal_form(&self, w: &Word) -> Option<Word> {
        Some(w.free_reduced())
    }

    fn geodesic(&self, w: &Word) -> Option<Word> {
        Some(w.free_reduced())
    }
}

/// Equality in the free abelian group on the alphabet: exponent sums.
///
/// Meant for non-hyperbolic controls such as `Z^2`; it ignores relators.
#[derive(Debug, Clone)]
pub struct ExponentVector {
    alphabet: Alphabet,
}

impl ExponentVector {
    pub fn new(alphabet: Alphabet) -> Self {
        ExponentVector { alphabet }
    }
}

impl EqualityOracle for ExponentVector {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_trivial(&self, w: &Word) -> bool {
        w.exponent_sums().iter().all(|&e| e == 0)
    }

    fn normal_form(&self, w: &Word) -> Option<Word> {
        let sums = w.exponent_sums();
        let mut gens = self.alphabet.generators().to_vec();
        gens.sort_unstable();
        let mut letters = Vec::new();
        for g in gens {
            let e = sums[g];
            let l = Letter::new(g, e < 0);
            letters.extend(core::iter::repeat_n(l, e.unsigned_abs() as usize));
        }
        Some(Word::from_letters(letters))
    }

    fn geodesic(&self, w: &Word) -> Option<Word> {
        self.normal_form(w)
    }
}

/// Canonical key of a group element, usable for deduplication.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKey {
    Normal(Word),
    Vertex(usize),
}

/// Word metric of a group, answering from the oracle when it knows geodesics
/// and from a lazily grown ball otherwise.
pub struct Metric<'o> {
    oracle: &'o dyn EqualityOracle,
    ball: Option<Ball>,
    limits: Limits,
}

impl<'o> Metric<'o> {
    pub fn new(oracle: &'o dyn EqualityOracle, limits: Limits) -> Self {
        Metric { oracle, ball: None, limits }
    }

    pub fn oracle(&self) -> &'o dyn EqualityOracle {
        self.oracle
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn alphabet(&self) -> &'o Alphabet {
        self.oracle.alphabet()
    }

    fn locate(&mut self, w: &Word) -> Result<usize> {
        let short = self.oracle.shorten(w);
        let ball = self.ball.get_or_insert_with(|| Ball::identity(self.oracle));
        while ball.radius() < short.len() {
            ball.extend(self.oracle, &self.limits)?;
        }
        // Every prefix of `short` has length at most the radius, so the trace
        // stays inside the ball.
        ball.locate(&short)
            .ok_or_else(|| Error::Inconsistent(alloc::format!("word {short} escaped a ball of radius {}", short.len())))
    }

    pub fn geodesic_length(&mut self, w: &Word) -> Result<usize> {
        if let Some(g) = self.oracle.geodesic(w) {
            return Ok(g.len());
        }
        let v = self.locate(w)?;
        Ok(self.ball.as_ref().map(|b| b.vertex(v).layer).unwrap_or(0))
    }

    pub fn geodesic_word(&mut self, w: &Word) -> Result<Word> {
        if let Some(g) = self.oracle.geodesic(w) {
            return Ok(g);
        }
        let v = self.locate(w)?;
        Ok(self.ball.as_ref().map(|b| b.vertex(v).word.clone()).unwrap_or_default())
    }

    pub fn distance(&mut self, u: &Word, v: &Word) -> Result<usize> {
        self.geodesic_length(&u.inverse().mul(v))
    }

    pub fn key(&mut self, w: &Word) -> Result<ElementKey> {
        if let Some(nf) = self.oracle.normal_form(w) {
            return Ok(ElementKey::Normal(nf));
        }
        self.locate(w).map(ElementKey::Vertex)
    }
}
