//! Distances, geodesics, thin triangles and quasiconvexity inside a ball.
//!
//! All distances are measured in the graph of the ball itself, so results
//! near the boundary can only overestimate the true word metric. A clean
//! report is evidence up to the radius, never a proof; a violation is a
//! concrete witness.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::Ball;
use crate::words::Word;
use crate::{Error, Limits, Result};

const UNREACHED: u16 = u16::MAX;

/// A ball together with its all-pairs distance table.
pub struct BallMetric<'b> {
    ball: &'b Ball,
    dist: Vec<u16>,
}

impl<'b> BallMetric<'b> {
    /// Largest number of table entries we are willing to allocate.
    pub const MAX_ENTRIES: usize = 1 << 26;

    pub fn new(ball: &'b Ball) -> Result<Self> {
        let n = ball.len();
        if n.saturating_mul(n) > Self::MAX_ENTRIES {
            return Err(Error::ResourceCap { what: "distance table entries", limit: Self::MAX_ENTRIES });
        }
        let mut dist = vec![UNREACHED; n * n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                let d = row[v];
                for (_, t) in ball.neighbors(v) {
                    if row[t] == UNREACHED {
                        row[t] = d + 1;
                        queue.push_back(t);
                    }
                }
            }
        }
        Ok(BallMetric { ball, dist })
    }

    pub fn ball(&self) -> &'b Ball {
        self.ball
    }

    pub fn distance(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.ball.len() + v] as u32
    }

    fn row(&self, u: usize) -> &[u16] {
        let n = self.ball.len();
        &self.dist[u * n..(u + 1) * n]
    }

    /// Lexicographically first geodesic path from `u` to `v`.
    fn first_path(&self, u: usize, v: usize) -> (Word, Vec<usize>) {
        let mut word = Word::new();
        let mut path = vec![u];
        let mut at = u;
        while at != v {
            let d = self.distance(at, v);
            let (l, next) = self
                .ball
                .neighbors(at)
                .filter(|&(_, t)| self.distance(t, v) + 1 == d)
                .min_by_key(|&(l, _)| l)
                .expect("a connected ball has a next geodesic step");
            word.push(l);
            path.push(next);
            at = next;
        }
        (word, path)
    }
}

/// All geodesic words between two vertices, realized inside the ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicSet {
    pub from: usize,
    pub to: usize,
    /// Sorted label words, each of length `d(from, to)`.
    pub words: Vec<Word>,
    /// Vertex sequence of each word, aligned with `words`.
    pub paths: Vec<Vec<usize>>,
}

pub fn enumerate_geodesics(metric: &BallMetric<'_>, u: usize, v: usize, limits: &Limits) -> Result<GeodesicSet> {
    let mut found: Vec<(Word, Vec<usize>)> = Vec::new();
    let mut stack: Vec<(usize, Word, Vec<usize>)> = vec![(u, Word::new(), vec![u])];
    if metric.distance(u, v) as u16 == UNREACHED {
        return Ok(GeodesicSet { from: u, to: v, words: Vec::new(), paths: Vec::new() });
    }
    while let Some((at, word, path)) = stack.pop() {
        if at == v {
            if found.len() >= limits.max_geodesics {
                return Err(Error::ResourceCap { what: "geodesics between a pair", limit: limits.max_geodesics });
            }
            found.push((word, path));
            continue;
        }
        let d = metric.distance(at, v);
        for (l, t) in metric.ball.neighbors(at) {
            if metric.distance(t, v) + 1 == d {
                let mut w = word.clone();
                w.push(l);
                let mut p = path.clone();
                p.push(t);
                stack.push((t, w, p));
            }
        }
    }
    found.sort();
    found.dedup();
    let (words, paths) = found.into_iter().unzip();
    Ok(GeodesicSet { from: u, to: v, words, paths })
}

/// A side of a geodesic triangle leaving the δ-neighbourhood of the others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlimWitness {
    pub corners: [usize; 3],
    /// Endpoints of the offending side.
    pub side: (usize, usize),
    pub side_word: Word,
    pub vertex: usize,
    /// Distance from `vertex` to the union of the other two sides.
    pub distance: u32,
    /// Geodesic labels chosen for the other two sides.
    pub other_sides: [((usize, usize), Word); 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlimVerdict {
    NoViolation { radius: usize, inner_radius: usize, triangles: usize },
    Violation(SlimWitness),
}

struct GeodesicCache<'m, 'b> {
    metric: &'m BallMetric<'b>,
    limits: Limits,
    sets: BTreeMap<(usize, usize), GeodesicSet>,
}

impl GeodesicCache<'_, '_> {
    fn get(&mut self, u: usize, v: usize) -> Result<&GeodesicSet> {
        if !self.sets.contains_key(&(u, v)) {
            let set = enumerate_geodesics(self.metric, u, v, &self.limits)?;
            self.sets.insert((u, v), set);
        }
        Ok(&self.sets[&(u, v)])
    }
}

fn triangle_witness(cache: &mut GeodesicCache<'_, '_>, corners: [usize; 3], delta: u32) -> Result<Option<SlimWitness>> {
    let [x, y, z] = corners;
    let sides = [(x, y), (y, z), (x, z)];
    for (i, &(a, b)) in sides.iter().enumerate() {
        let others = [sides[(i + 1) % 3], sides[(i + 2) % 3]];
        let side = cache.get(a, b)?.clone();
        let other_sets = [cache.get(others[0].0, others[0].1)?.clone(), cache.get(others[1].0, others[1].1)?.clone()];
        for (word, path) in side.words.iter().zip(&side.paths) {
            for &q in path {
                // Worst choice of geodesic for each of the other sides.
                let far = other_sets.clone().map(|set| {
                    set.paths
                        .iter()
                        .enumerate()
                        .map(|(j, p)| (p.iter().map(|&s| cache.metric.distance(q, s)).min().unwrap_or(0), j))
                        .max_by_key(|&(d, j)| (d, core::cmp::Reverse(j)))
                        .unwrap_or((0, 0))
                });
                if far[0].0 > delta && far[1].0 > delta {
                    return Ok(Some(SlimWitness {
                        corners,
                        side: (a, b),
                        side_word: word.clone(),
                        vertex: q,
                        distance: far[0].0.min(far[1].0),
                        other_sides: [
                            (others[0], other_sets[0].words[far[0].1].clone()),
                            (others[1], other_sets[1].words[far[1].1].clone()),
                        ],
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Checks one triangle against every choice of geodesic sides.
pub fn check_triangle(
    metric: &BallMetric<'_>,
    corners: [usize; 3],
    delta: u32,
    limits: &Limits,
) -> Result<Option<SlimWitness>> {
    let mut cache = GeodesicCache { metric, limits: *limits, sets: BTreeMap::new() };
    triangle_witness(&mut cache, corners, delta)
}

/// Checks δ-slimness for every triangle with corners in radius `⌊R/2⌋`.
pub fn check_slim(metric: &BallMetric<'_>, delta: u32, limits: &Limits) -> Result<SlimVerdict> {
    let ball = metric.ball;
    let inner = ball.radius() / 2;
    let n = ball.layer_range(inner).end;
    let mut cache = GeodesicCache { metric, limits: *limits, sets: BTreeMap::new() };
    let mut triangles = 0;
    for x in 0..n {
        for y in x..n {
            for z in y..n {
                triangles += 1;
                if let Some(w) = triangle_witness(&mut cache, [x, y, z], delta)? {
                    return Ok(SlimVerdict::Violation(w));
                }
            }
        }
    }
    Ok(SlimVerdict::NoViolation { radius: ball.radius(), inner_radius: inner, triangles })
}

/// A geodesic between subgroup elements passing far from the subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcWitness {
    pub from: usize,
    pub to: usize,
    pub geodesic: Word,
    pub vertex: usize,
    pub distance: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QcVerdict {
    NoViolation { radius: usize, pairs: usize },
    Violation(QcWitness),
}

/// Distance from every vertex to the nearest listed subgroup element.
fn distance_to_set(metric: &BallMetric<'_>, members: &[usize]) -> Vec<u32> {
    let n = metric.ball.len();
    let mut d = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for &h in members {
        if d[h] != 0 {
            d[h] = 0;
            queue.push_back(h);
        }
    }
    while let Some(v) = queue.pop_front() {
        for (_, t) in metric.ball.neighbors(v) {
            if d[t] == u32::MAX {
                d[t] = d[v] + 1;
                queue.push_back(t);
            }
        }
    }
    d
}

/// Marks the vertices lying on some geodesic from `source` to a member.
fn on_member_geodesics(metric: &BallMetric<'_>, source: usize, is_member: &[bool]) -> Vec<bool> {
    let n = metric.ball.len();
    let row = metric.row(source);
    let mut order: Vec<usize> = (0..n).filter(|&v| row[v] != UNREACHED).collect();
    order.sort_by_key(|&v| core::cmp::Reverse(row[v]));
    let mut on = vec![false; n];
    for v in order {
        on[v] = is_member[v]
            || metric.ball.neighbors(v).any(|(_, t)| row[t] != UNREACHED && row[t] == row[v] + 1 && on[t]);
    }
    on
}

fn sorted_members(metric: &BallMetric<'_>, members: &[usize]) -> (Vec<usize>, Vec<bool>) {
    let mut h = members.to_vec();
    h.sort_unstable();
    h.dedup();
    let mut is_member = vec![false; metric.ball.len()];
    for &v in &h {
        is_member[v] = true;
    }
    (h, is_member)
}

/// Checks that every geodesic between listed subgroup elements stays within
/// `k` of the listed elements.
pub fn check_quasiconvex(metric: &BallMetric<'_>, members: &[usize], k: u32) -> QcVerdict {
    let (h, is_member) = sorted_members(metric, members);
    let to_h = distance_to_set(metric, &h);
    for &from in &h {
        let on = on_member_geodesics(metric, from, &is_member);
        if let Some(q) = (0..on.len()).find(|&q| on[q] && to_h[q] > k) {
            let d_from = metric.distance(from, q);
            let to = *h
                .iter()
                .find(|&&t| d_from + metric.distance(q, t) == metric.distance(from, t))
                .expect("q lies on a geodesic to some member");
            let (first, _) = metric.first_path(from, q);
            let (second, _) = metric.first_path(q, to);
            return QcVerdict::Violation(QcWitness {
                from,
                to,
                geodesic: first.concat(&second),
                vertex: q,
                distance: to_h[q],
            });
        }
    }
    QcVerdict::NoViolation { radius: metric.ball.radius(), pairs: h.len() * (h.len() + 1) / 2 }
}

/// Smallest `k` for which [`check_quasiconvex`] reports no violation.
pub fn quasiconvexity_constant(metric: &BallMetric<'_>, members: &[usize]) -> u32 {
    let (h, is_member) = sorted_members(metric, members);
    let to_h = distance_to_set(metric, &h);
    let mut worst = 0;
    for &from in &h {
        let on = on_member_geodesics(metric, from, &is_member);
        for (q, _) in on.iter().enumerate().filter(|(_, &b)| b) {
            worst = worst.max(to_h[q]);
        }
    }
    worst
}
