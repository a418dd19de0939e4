//! Membership in quasiconvex subgroups through weakly Nielsen generating sets.
//!
//! For a `K`-quasiconvex subgroup `H`, the set `S` of non-trivial elements of
//! `H` of length at most `2K+1` has the weakly Nielsen property: every
//! geodesic word `w` for an element of `H` factors as `w ≡ l₁n₁n₂⋯nₘrₘ`
//! where `sᵢ ≡ lᵢnᵢrᵢ` are words for elements of `S` and every `nᵢ` is
//! non-empty. [`decide_membership`] searches for such a factorization of a
//! geodesic word for `g`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::fmt;
use alloc::vec::Vec;

use crate::cayley::{ElementKey, EqualityOracle, Metric};
use crate::words::{Alphabet, Word};
use crate::{Error, Result};

/// Anything that can answer `g ∈ H`.
pub trait MembershipOracle {
    fn contains(&mut self, g: &Word) -> Result<bool>;
}

/// Generators of a subgroup together with an asserted quasiconvexity
/// constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupSpec {
    generators: Vec<Word>,
    k: Option<u32>,
}

impl SubgroupSpec {
    /// Generators are freely reduced; one that reduces to the empty word is
    /// rejected.
    pub fn new(generators: Vec<Word>, k: Option<u32>) -> Result<Self> {
        let mut reduced = Vec::with_capacity(generators.len());
        for g in generators {
            let r = g.free_reduced();
            if r.is_empty() {
                return Err(Error::Precondition(alloc::format!("subgroup generator {g} is trivial")));
            }
            reduced.push(r);
        }
        Ok(SubgroupSpec { generators: reduced, k })
    }

    /// Parses a comma-separated generator list; an empty list is the trivial
    /// subgroup.
    pub fn parse(alphabet: &Alphabet, text: &str, k: Option<u32>) -> Result<Self> {
        let words = text
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| alphabet.parse_word(t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(words, k)
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn k(&self) -> Option<u32> {
        self.k
    }

    pub fn with_k(mut self, k: u32) -> Self {
        self.k = Some(k);
        self
    }

    fn require_k(&self) -> Result<u32> {
        self.k.ok_or_else(|| Error::Precondition("a quasiconvexity constant K is required".into()))
    }
}

/// How the elements of a [`NielsenSet`] were found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionMode {
    /// Every reduced word of length at most `2K+1` filtered through an exact
    /// membership oracle.
    OracleFilter,
    /// Products of at most `depth` generators; complete only relative to
    /// `depth`.
    GeneratorProduct { depth: usize },
}

impl fmt::Display for ConstructionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionMode::OracleFilter => f.write_str("oracle-filter"),
            ConstructionMode::GeneratorProduct { depth } => write!(f, "generator-product(depth {depth})"),
        }
    }
}

/// The words of `(H ∩ B(2K+1)) \ {1}`: every freely reduced word of length
/// at most `2K+1` that represents such an element, in shortlex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NielsenSet {
    k: u32,
    mode: ConstructionMode,
    elements: Vec<Word>,
}

impl NielsenSet {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn mode(&self) -> ConstructionMode {
        self.mode
    }

    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.elements.binary_search_by(|e| shortlex(e, w)).is_ok()
    }

    fn length_bound(&self) -> usize {
        2 * self.k as usize + 1
    }
}

fn shortlex(a: &Word, b: &Word) -> core::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// One factor `s ≡ l|n|r` of a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub element: Word,
    pub left: Word,
    pub middle: Word,
    pub right: Word,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}|{}|{}", self.element, self.left, self.middle, self.right)
    }
}

/// A factorization `w ≡ l₁n₁n₂⋯nₘrₘ` of a geodesic word through elements
/// `sᵢ ≡ lᵢnᵢrᵢ` of a Nielsen set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorWitness {
    pub factors: Vec<Factor>,
    pub word: Word,
}

impl FactorWitness {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The product of the factors.
    pub fn product(&self) -> Word {
        self.factors.iter().fold(Word::new(), |acc, f| acc.mul(&f.element))
    }

    /// Rechecks every defining property: letter-for-letter decompositions,
    /// the pattern spelling `word`, `m ≤ |word|`, and the product equal to
    /// `g`.
    pub fn verify(&self, g: &Word, oracle: &dyn EqualityOracle) -> bool {
        let m = self.factors.len();
        if m > self.word.len() {
            return false;
        }
        let mut spelled = Word::new();
        for (i, f) in self.factors.iter().enumerate() {
            if f.middle.is_empty() || f.left.concat(&f.middle).concat(&f.right) != f.element {
                return false;
            }
            if i == 0 {
                spelled = spelled.concat(&f.left);
            }
            spelled = spelled.concat(&f.middle);
            if i + 1 == m {
                spelled = spelled.concat(&f.right);
            }
        }
        spelled == self.word && oracle.equal(&self.product(), g)
    }
}

impl fmt::Display for FactorWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for factor in &self.factors {
            writeln!(f, "{factor}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member(FactorWitness),
    NonMember,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Elements of `H` reachable as products of at most `depth` generators and
/// their inverses, keeping those of geodesic length at most `max_len`. The
/// identity is excluded. Results are geodesic words in shortlex order.
pub fn enumerate_subgroup_ball(
    h: &SubgroupSpec,
    max_len: usize,
    depth: usize,
    metric: &mut Metric<'_>,
) -> Result<Vec<Word>> {
    let oracle = metric.oracle();
    let limits = metric.limits();
    let steps: Vec<Word> = h.generators.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    let mut seen: BTreeSet<ElementKey> = BTreeSet::new();
    seen.insert(metric.key(&Word::new())?);
    let mut found = Vec::new();
    let mut frontier = alloc::vec![Word::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &frontier {
            for s in &steps {
                let q = oracle.shorten(&p.mul(s));
                if seen.insert(metric.key(&q)?) {
                    limits.check("subgroup elements", seen.len())?;
                    if metric.geodesic_length(&q)? <= max_len {
                        found.push(metric.geodesic_word(&q)?);
                    }
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    found.sort_by(shortlex);
    Ok(found)
}

fn reduced_word_count(alphabet: &Alphabet, max_len: usize) -> usize {
    let letters = 2 * alphabet.rank();
    let mut total: usize = 1;
    let mut layer: usize = 1;
    for k in 0..max_len {
        layer = layer.saturating_mul(if k == 0 { letters } else { letters.saturating_sub(1) });
        total = total.saturating_add(layer);
    }
    total
}

/// Builds `S`, either exactly through `oracle` or from generator products.
pub fn build_nielsen_set(
    h: &SubgroupSpec,
    metric: &mut Metric<'_>,
    mode: ConstructionMode,
    oracle: Option<&mut dyn MembershipOracle>,
) -> Result<NielsenSet> {
    let k = h.require_k()?;
    let bound = 2 * k as usize + 1;
    let alphabet = metric.alphabet();
    let limits = metric.limits();
    limits.check("candidate words", reduced_word_count(alphabet, bound))?;
    let candidates = alphabet.reduced_words_up_to(bound);
    let eq = metric.oracle();
    let mut elements = Vec::new();
    match mode {
        ConstructionMode::OracleFilter => {
            let oracle = oracle.ok_or(Error::OracleUnavailable)?;
            for w in candidates {
                if !eq.is_trivial(&w) && oracle.contains(&w)? && metric.geodesic_length(&w)? <= bound {
                    elements.push(w);
                }
            }
        }
        ConstructionMode::GeneratorProduct { depth } => {
            let found = enumerate_subgroup_ball(h, bound, depth, metric)?;
            let mut keys = BTreeSet::new();
            for f in &found {
                keys.insert(metric.key(f)?);
            }
            for w in candidates {
                if !w.is_empty() && keys.contains(&metric.key(&w)?) {
                    elements.push(w);
                }
            }
        }
    }
    elements.sort_by(shortlex);
    Ok(NielsenSet { k, mode, elements })
}

struct Node {
    pos: usize,
    element: Word,
    parent: usize,
    factor: Option<Factor>,
}

/// Breadth-first search for a factorization of the geodesic word `w` of
/// `target` through `s`.
///
/// States are pairs (letters of `w` consumed, partial product) and are
/// deduplicated under the oracle. A partial product must stay within `K` of
/// the matching prefix vertex of `w`, which the construction of `S` from a
/// `K`-quasiconvex subgroup guarantees for some factorization.
fn aligned_search(target: &Word, w: &Word, s: &NielsenSet, metric: &mut Metric<'_>) -> Result<Option<FactorWitness>> {
    let n = w.len();
    if n == 0 {
        return Ok(metric.oracle().is_trivial(target).then(|| FactorWitness { factors: Vec::new(), word: Word::new() }));
    }
    let k = s.k as usize;
    let slack = n + s.length_bound();
    let limits = metric.limits();
    let eq = metric.oracle();
    let letters = w.letters();
    let mut nodes = alloc::vec![Node { pos: 0, element: Word::new(), parent: usize::MAX, factor: None }];
    let mut seen: BTreeSet<(usize, ElementKey)> = BTreeSet::new();
    seen.insert((0, metric.key(&Word::new())?));
    let mut queue = VecDeque::from([0usize]);

    while let Some(at) = queue.pop_front() {
        let (pos, current) = (nodes[at].pos, nodes[at].element.clone());
        let rest = &letters[pos..];
        for sw in &s.elements {
            let sl = sw.letters();
            let starts = if pos == 0 { 0..1 } else { 0..sl.len() };
            for a in starts {
                let tail = &sl[a..];
                if tail == rest {
                    let product = current.mul(sw);
                    if eq.equal(&product, target) {
                        let last = Factor {
                            element: sw.clone(),
                            left: sw.slice(0..a),
                            middle: sw.slice(a..sl.len()),
                            right: Word::new(),
                        };
                        return Ok(Some(unwind(&nodes, at, last, w)));
                    }
                }
                let longest = tail.iter().zip(rest).take_while(|(x, y)| x == y).count().min(rest.len() - 1);
                for len in (1..=longest).rev() {
                    let next_pos = pos + len;
                    let product = eq.shorten(&current.mul(sw));
                    let prefix = w.slice(0..next_pos);
                    if metric.distance(&prefix, &product)? > k || metric.geodesic_length(&product)? > slack {
                        continue;
                    }
                    if !seen.insert((next_pos, metric.key(&product)?)) {
                        continue;
                    }
                    limits.check("membership search states", nodes.len() + 1)?;
                    nodes.push(Node {
                        pos: next_pos,
                        element: product,
                        parent: at,
                        factor: Some(Factor {
                            element: sw.clone(),
                            left: sw.slice(0..a),
                            middle: sw.slice(a..a + len),
                            right: sw.slice(a + len..sl.len()),
                        }),
                    });
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
    }
    Ok(None)
}

fn unwind(nodes: &[Node], mut at: usize, last: Factor, w: &Word) -> FactorWitness {
    let mut factors = alloc::vec![last];
    while let Some(f) = &nodes[at].factor {
        factors.push(f.clone());
        at = nodes[at].parent;
    }
    factors.reverse();
    FactorWitness { factors, word: w.clone() }
}

/// Decides `g ∈ H` for the subgroup whose Nielsen set is `s`.
///
/// A `Member` verdict always carries a witness that re-verifies. A
/// `NonMember` verdict is sound when `s` was built with a valid `K`.
pub fn decide_membership(g: &Word, s: &NielsenSet, metric: &mut Metric<'_>) -> Result<Membership> {
    let w = metric.geodesic_word(g)?;
    Ok(match aligned_search(g, &w, s, metric)? {
        Some(witness) => Membership::Member(witness),
        None => Membership::NonMember,
    })
}

/// Searches for a factorization of the geodesic word `w` of `h` through `s`.
pub fn verify_weak_nielsen(
    s: &NielsenSet,
    h: &Word,
    w: &Word,
    metric: &mut Metric<'_>,
) -> Result<Option<FactorWitness>> {
    aligned_search(h, w, s, metric)
}

/// Membership through [`decide_membership`] with a fixed Nielsen set.
pub struct NielsenDecider<'o> {
    set: NielsenSet,
    metric: Metric<'o>,
}

impl<'o> NielsenDecider<'o> {
    pub fn new(set: NielsenSet, metric: Metric<'o>) -> Self {
        NielsenDecider { set, metric }
    }

    pub fn set(&self) -> &NielsenSet {
        &self.set
    }

    pub fn metric(&mut self) -> &mut Metric<'o> {
        &mut self.metric
    }

    pub fn decide(&mut self, g: &Word) -> Result<Membership> {
        decide_membership(g, &self.set, &mut self.metric)
    }
}

impl MembershipOracle for NielsenDecider<'_> {
    fn contains(&mut self, g: &Word) -> Result<bool> {
        Ok(self.decide(g)?.is_member())
    }
}
