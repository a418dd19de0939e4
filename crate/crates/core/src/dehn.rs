//! Dehn presentations and Dehn's algorithm.
//!
//! Relators are closed under inversion and cyclic permutation. A Dehn step
//! finds a subword `v` of the current word that is a prefix of a symmetrized
//! relator `r ≡ vu` with `2|v| > |r|`, replaces it by `u⁻¹` and freely
//! reduces. Each step shortens the word, so a word of length `n` takes at
//! most `n` steps.
//!
//! Whether a presentation really is a Dehn presentation is not decidable
//! from the presentation in general. It is accepted when the file says
//! `dehn: trusted`, or certified when the presentation satisfies C'(1/6).

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::abelian::Abelianization;
use crate::cayley::EqualityOracle;
pub use crate::presentation::DehnStatus;
use crate::presentation::Presentation;
use crate::words::{common_prefix, Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrizedRelators {
    alphabet: Alphabet,
    words: Vec<Word>,
    /// Indices into `words`, bucketed by first letter.
    by_first: Vec<Vec<usize>>,
    min_relator_len: usize,
    status: DehnStatus,
}

/// Closure of the relators under inversion and cyclic permutation.
pub fn symmetrize(p: &Presentation) -> SymmetrizedRelators {
    let mut set = BTreeSet::new();
    for r in p.relators() {
        let r = r.cyclically_reduced();
        set.extend(r.cyclic_permutations());
        set.extend(r.inverse().cyclic_permutations());
    }
    set.remove(&Word::new());
    let words: Vec<Word> = set.into_iter().collect();
    let mut by_first = vec![Vec::new(); 52];
    for (i, w) in words.iter().enumerate() {
        by_first[w.letters()[0].index()].push(i);
    }
    SymmetrizedRelators {
        alphabet: p.alphabet().clone(),
        min_relator_len: words.iter().map(Word::len).min().unwrap_or(0),
        words,
        by_first,
        status: p.dehn_status(),
    }
}

impl SymmetrizedRelators {
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// A presentation without relators presents a free group.
    pub fn is_free(&self) -> bool {
        self.words.is_empty()
    }

    pub fn min_relator_len(&self) -> usize {
        self.min_relator_len
    }

    pub fn max_piece_len(&self) -> usize {
        let mut longest = 0;
        for bucket in &self.by_first {
            for (i, &a) in bucket.iter().enumerate() {
                for &b in &bucket[i + 1..] {
                    longest = longest.max(common_prefix(self.words[a].letters(), self.words[b].letters()));
                }
            }
        }
        longest
    }

    pub fn status(&self) -> DehnStatus {
        self.status
    }

    /// Free presentations and trusted or certified ones give sound verdicts.
    pub fn is_reliable(&self) -> bool {
        self.is_free() || self.status != DehnStatus::Unverified
    }

    /// Computes the cancellation ratio and upgrades an unverified status
    /// when the presentation satisfies C'(1/6).
    pub fn certify(&mut self) -> CancellationRatio {
        let ratio = cancellation_ratio(self);
        if self.status == DehnStatus::Unverified && !self.is_free() && ratio.is_c16() {
            self.status = DehnStatus::VerifiedC16;
        }
        ratio
    }
}

/// `λ = max piece length / min relator length`, kept as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CancellationRatio {
    pub piece: usize,
    pub relator: usize,
}

impl CancellationRatio {
    /// `λ < 1/6`.
    pub fn is_c16(&self) -> bool {
        6 * self.piece < self.relator
    }

    pub fn as_f64(&self) -> f64 {
        self.piece as f64 / self.relator as f64
    }
}

impl fmt::Display for CancellationRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.piece, self.relator)
    }
}

/// A piece is a maximal common prefix of two distinct symmetrized relators.
pub fn cancellation_ratio(s: &SymmetrizedRelators) -> CancellationRatio {
    CancellationRatio { piece: s.max_piece_len(), relator: s.min_relator_len() }
}

/// Symmetrizes `p`, runs the C'(1/6) check and records the outcome on `p`.
pub fn certify(p: &mut Presentation) -> (SymmetrizedRelators, CancellationRatio) {
    let mut s = symmetrize(p);
    let ratio = s.certify();
    p.set_dehn_status(s.status());
    (s, ratio)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DehnStep {
    /// Start of `v` in the word before the step.
    pub position: usize,
    pub relator: Word,
    /// The replaced subword, a prefix of `relator`.
    pub removed: Word,
    /// `u⁻¹` where `relator ≡ removed · u`.
    pub inserted: Word,
    /// Word after replacement and free reduction.
    pub result: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DehnTrace {
    pub input: Word,
    pub steps: Vec<DehnStep>,
    pub final_word: Word,
    /// False when the presentation is neither trusted nor certified.
    pub reliable: bool,
}

impl DehnTrace {
    pub fn is_trivial(&self) -> bool {
        self.final_word.is_empty()
    }
}

/// Finds the step the search order selects: leftmost start, then longest
/// `v`, then least relator.
fn find_step(w: &Word, s: &SymmetrizedRelators) -> Option<(usize, usize, usize)> {
    let letters = w.letters();
    for i in 0..letters.len() {
        let mut best: Option<(usize, usize)> = None;
        for &r in &s.by_first[letters[i].index()] {
            let rel = &s.words[r];
            let l = common_prefix(&letters[i..], rel.letters());
            if 2 * l > rel.len() && best.is_none_or(|(bl, _)| l > bl) {
                best = Some((l, r));
            }
        }
        if let Some((l, r)) = best {
            return Some((i, l, r));
        }
    }
    None
}

/// Runs Dehn's algorithm on `w`, recording every step.
pub fn dehn_reduce(w: &Word, s: &SymmetrizedRelators) -> DehnTrace {
    let mut current = w.free_reduced();
    let mut steps = Vec::new();
    while let Some((pos, len, r)) = find_step(&current, s) {
        let relator = s.words[r].clone();
        let removed = relator.slice(0..len);
        let inserted = relator.slice(len..relator.len()).inverse();
        let result = current
            .slice(0..pos)
            .concat(&inserted)
            .concat(&current.slice(pos + len..current.len()))
            .free_reduced();
        debug_assert!(result.len() < current.len());
        current = result.clone();
        steps.push(DehnStep { position: pos, relator, removed, inserted, result });
    }
    DehnTrace { input: w.clone(), steps, final_word: current, reliable: s.is_reliable() }
}

/// Whether `u` and `v` are equal according to Dehn's algorithm on `u·v⁻¹`.
pub fn is_equal(u: &Word, v: &Word, s: &SymmetrizedRelators) -> bool {
    DehnOracle::new(s.clone()).equal(u, v)
}

/// Equality oracle backed by Dehn's algorithm.
#[derive(Debug, Clone)]
pub struct DehnOracle {
    relators: SymmetrizedRelators,
    abelian: Abelianization,
}

impl DehnOracle {
    pub fn new(relators: SymmetrizedRelators) -> Self {
        let abelian = Abelianization::new(&relators.alphabet, &relators.words);
        DehnOracle { relators, abelian }
    }

    pub fn for_presentation(p: &Presentation) -> Self {
        let mut s = symmetrize(p);
        s.certify();
        Self::new(s)
    }

    pub fn relators(&self) -> &SymmetrizedRelators {
        &self.relators
    }
}

impl EqualityOracle for DehnOracle {
    fn alphabet(&self) -> &Alphabet {
        &self.relators.alphabet
    }

    fn is_trivial(&self, w: &Word) -> bool {
        let w = w.free_reduced();
        if w.is_empty() {
            return true;
        }
        // The last word before Dehn's algorithm reaches the empty word
        // contains a whole relator's worth of letters, and steps only shorten.
        if self.relators.is_free() || w.len() < self.relators.min_relator_len {
            return false;
        }
        if self.abelian.image(&w).iter().any(|&x| x != 0) {
            return false;
        }
        dehn_reduce(&w, &self.relators).is_trivial()
    }

    fn normal_form(&self, w: &Word) -> Option<Word> {
        self.relators.is_free().then(|| w.free_reduced())
    }

    fn geodesic(&self, w: &Word) -> Option<Word> {
        self.relators.is_free().then(|| w.free_reduced())
    }

    fn shorten(&self, w: &Word) -> Word {
        dehn_reduce(w, &self.relators).final_word
    }

    fn invariant(&self, w: &Word) -> Vec<i64> {
        self.abelian.image(w)
    }

    fn is_reliable(&self) -> bool {
        self.relators.is_reliable()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_ball, geodesic_length};
    use crate::Limits;
    use alloc::string::ToString;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn pres(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    fn genus2() -> Presentation {
        pres("generators: a b c d\nrelators: abABcdCD")
    }

    fn z3() -> Presentation {
        pres("generators: a\nrelators: aaa")
    }

    #[test]
    fn symmetrize_examples() {
        let s = symmetrize(&z3());
        assert_eq!(s.words(), &[w("aaa"), w("AAA")]);
        assert_eq!(symmetrize(&pres("generators: a b\nrelators: abAB")).len(), 8);
        let g = symmetrize(&genus2());
        assert_eq!(g.len(), 16);
        assert!(g.words().iter().all(|r| g.words().contains(&r.inverse())));
        assert!(g.words().iter().all(|r| g.words().contains(&r.rotate(1))));
    }

    #[test]
    fn relator_free_symmetrization_is_empty() {
        let s = symmetrize(&Presentation::free(2));
        assert!(s.is_free());
        assert!(s.is_reliable());
    }

    #[test]
    fn cancellation_ratio_examples() {
        let mut p = genus2();
        let (_, ratio) = certify(&mut p);
        assert_eq!(ratio, CancellationRatio { piece: 1, relator: 8 });
        assert_eq!(p.dehn_status(), DehnStatus::VerifiedC16);

        assert_eq!(cancellation_ratio(&symmetrize(&z3())), CancellationRatio { piece: 0, relator: 3 });
    }

    #[test]
    fn proper_power_relator_has_no_pieces_between_distinct_words() {
        // The symmetrized set of abab is {abab, baba, ABAB, BABA}; no two
        // distinct members share a first letter.
        let mut p = pres("generators: a b\nrelators: abab");
        let (_, ratio) = certify(&mut p);
        assert_eq!(ratio, CancellationRatio { piece: 0, relator: 4 });
    }

    #[test]
    fn long_pieces_block_certification() {
        let mut p = pres("generators: a b\nrelators: aabb abbb");
        let (_, ratio) = certify(&mut p);
        assert!(!ratio.is_c16());
        assert_eq!(p.dehn_status(), DehnStatus::Unverified);
    }

    #[test]
    fn dehn_reduce_examples() {
        let g = symmetrize(&genus2());
        let t = dehn_reduce(&w("abABcdCD"), &g);
        assert_eq!(t.final_word, w(""));
        assert_eq!(t.steps.len(), 1);

        let t = dehn_reduce(&w("abABcd"), &g);
        assert_eq!(t.final_word.to_string(), "dc");
        assert_eq!(t.steps[0].removed, w("abABcd"));
        assert_eq!(t.steps[0].inserted, w("dc"));

        let t = dehn_reduce(&w("aa"), &symmetrize(&z3()));
        assert_eq!(t.final_word, w("A"));
    }

    #[test]
    fn is_equal_examples() {
        let mut p = genus2();
        let (g, _) = certify(&mut p);
        assert!(is_equal(&w("abABcd"), &w("dc"), &g));
        assert!(!is_equal(&w("a"), &w(""), &g));
        assert!(is_equal(&w("aaaa"), &w("a"), &symmetrize(&z3())));
    }

    #[test]
    fn unverified_traces_are_flagged() {
        let s = symmetrize(&pres("generators: a b\nrelators: abAB"));
        assert!(!dehn_reduce(&w("abA"), &s).reliable);
        let t = dehn_reduce(&w("abA"), &symmetrize(&pres("generators: a b\nrelators: abAB\ndehn: trusted")));
        assert!(t.reliable);
    }

    #[test]
    fn genus_two_ball_and_geodesic() {
        let oracle = DehnOracle::for_presentation(&genus2());
        let ball = build_ball(&oracle, 1, &Limits::default()).unwrap();
        assert_eq!(ball.len(), 9);
        assert_eq!(geodesic_length(&w("abABcd"), &oracle, &Limits::default()).unwrap(), 2);
    }

    #[test]
    fn z3_ball_is_the_whole_group() {
        let oracle = DehnOracle::for_presentation(&z3());
        let ball = build_ball(&oracle, 2, &Limits::default()).unwrap();
        assert_eq!(ball.len(), 3);
        assert_eq!(ball.layer_counts(), vec![1, 2, 0]);
    }
}
