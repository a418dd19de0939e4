//! Finiteness of `H ∩ g⁻¹Hg` by enumeration in a ball.
//!
//! Elements of the intersection are collected from `B(R)`. An element with
//! no trivial power up to the Brady bound `C` certifies an infinite
//! intersection. Otherwise, if the collected elements are closed under
//! products, their multiplication table is matched against the list of
//! small groups. Anything else is reported as inconclusive at radius `R`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::cayley::{build_ball, ElementKey, EqualityOracle, Metric};
use crate::finite_enum::{BradyBound, MultTable, SmallGroups};
use crate::subgroup::MembershipOracle;
use crate::words::Word;
use crate::{Error, Limits, Result};

/// Whether `h ∈ g⁻¹Hg`, tested as `g·h·g⁻¹ ∈ H`.
pub fn conjugate_member(h: &Word, g: &Word, membership: &mut dyn MembershipOracle) -> Result<bool> {
    membership.contains(&g.mul(h).mul(&g.inverse()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(u128),
    /// No power `x^k` with `1 ≤ k ≤ C` is trivial.
    Infinite,
}

/// Order of `x`, checking powers up to `c`.
pub fn element_order(x: &Word, c: u128, oracle: &dyn EqualityOracle, limits: &Limits) -> Result<ElementOrder> {
    if c > limits.max_states as u128 {
        return Err(Error::ResourceCap { what: "powers checked for element order", limit: limits.max_states });
    }
    let mut power = Word::new();
    for k in 1..=c {
        power = oracle.shorten(&power.mul(x));
        if oracle.is_trivial(&power) {
            return Ok(ElementOrder::Finite(k));
        }
    }
    Ok(ElementOrder::Infinite)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntersectionVerdict {
    /// The collected elements form a group isomorphic to the `class`-th
    /// group of its order in the small-group list.
    Finite { table: MultTable, class: usize },
    Infinite { witness: Word },
    Inconclusive { radius: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionReport {
    pub verdict: IntersectionVerdict,
    /// Elements of `H ∩ g⁻¹Hg` found in the ball, in ball order; the identity
    /// comes first.
    pub elements: Vec<Word>,
    pub radius: usize,
    pub bound: BradyBound,
}

/// Decides whether `H ∩ g⁻¹Hg` is finite from the elements in `B(radius)`.
pub fn finiteness_verdict(
    g: &Word,
    radius: usize,
    bound: BradyBound,
    membership: &mut dyn MembershipOracle,
    metric: &mut Metric<'_>,
    groups: &mut SmallGroups,
) -> Result<IntersectionReport> {
    if membership.contains(g)? {
        return Err(Error::Precondition(alloc::format!("{g} lies in H")));
    }
    let oracle = metric.oracle();
    let limits = metric.limits();
    let ball = build_ball(oracle, radius, &limits)?;
    let mut elements = Vec::new();
    for v in ball.vertices() {
        if membership.contains(&v.word)? && conjugate_member(&v.word, g, membership)? {
            elements.push(v.word.clone());
        }
    }
    let report = |verdict, elements| IntersectionReport { verdict, elements, radius, bound };

    for x in &elements {
        if element_order(x, bound.c, oracle, &limits)? == ElementOrder::Infinite {
            let witness = x.clone();
            return Ok(report(IntersectionVerdict::Infinite { witness }, elements));
        }
    }

    let mut index: BTreeMap<ElementKey, usize> = BTreeMap::new();
    for (i, x) in elements.iter().enumerate() {
        index.insert(metric.key(x)?, i);
    }
    let n = elements.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &elements {
        for b in &elements {
            match index.get(&metric.key(&a.mul(b))?) {
                Some(&c) => table.push(c),
                None => return Ok(report(IntersectionVerdict::Inconclusive { radius }, elements)),
            }
        }
    }
    if n as u128 > bound.c {
        return Err(Error::Inconsistent(alloc::format!(
            "found a finite subgroup of order {n}, above the bound C = {}; the asserted δ is too small",
            bound.c
        )));
    }
    let table = MultTable::new(n, table)?;
    match groups.classify(&table)? {
        Some((class, _)) => Ok(report(IntersectionVerdict::Finite { table, class }, elements)),
        None => Err(Error::Inconsistent(alloc::format!("a group of order {n} is missing from the small-group list"))),
    }
}
