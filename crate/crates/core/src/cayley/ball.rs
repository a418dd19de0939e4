use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{EqualityOracle, Metric};
use crate::words::{Letter, Word};
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    /// Lexicographically least geodesic word reaching the vertex in BFS order.
    pub word: Word,
    pub layer: usize,
}

/// The radius-`R` ball around the identity in a Cayley graph.
///
/// Vertex 0 is the identity. Vertices of one layer are numbered in
/// lexicographic order of their representative words. An edge is stored
/// whenever both of its endpoints lie in the ball.
#[derive(Debug, Clone)]
pub struct Ball {
    letters: Vec<Letter>,
    slot_of: [Option<u8>; 52],
    vertices: Vec<Vertex>,
    layer_starts: Vec<usize>,
    edges: Vec<Vec<Option<usize>>>,
    normal_forms: BTreeMap<Word, usize>,
    radius: usize,
}

impl Ball {
    /// The radius-0 ball.
    pub fn identity(oracle: &dyn EqualityOracle) -> Self {
        let letters = oracle.alphabet().letters();
        let mut slot_of = [None; 52];
        for (i, l) in letters.iter().enumerate() {
            slot_of[l.index()] = Some(i as u8);
        }
        let mut ball = Ball {
            edges: vec![vec![None; letters.len()]],
            letters,
            slot_of,
            vertices: vec![Vertex { word: Word::new(), layer: 0 }],
            layer_starts: vec![0],
            normal_forms: BTreeMap::new(),
            radius: 0,
        };
        if let Some(nf) = oracle.normal_form(&Word::new()) {
            ball.normal_forms.insert(nf, 0);
        }
        ball.close_layer(0, oracle);
        ball
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Index range of the vertices in `layer`.
    pub fn layer_range(&self, layer: usize) -> core::ops::Range<usize> {
        let start = self.layer_starts[layer];
        let end = self.layer_starts.get(layer + 1).copied().unwrap_or(self.vertices.len());
        start..end
    }

    pub fn layer_counts(&self) -> Vec<usize> {
        (0..=self.radius).map(|k| self.layer_range(k).len()).collect()
    }

    pub fn edge(&self, v: usize, letter: Letter) -> Option<usize> {
        let slot = self.slot_of[letter.index()]? as usize;
        self.edges[v][slot]
    }

    /// Edges leaving `v` that stay in the ball.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (Letter, usize)> + '_ {
        self.letters.iter().zip(&self.edges[v]).filter_map(|(&l, e)| e.map(|t| (l, t)))
    }

    /// Follows `w` from the identity; `None` if the path leaves the ball.
    pub fn locate(&self, w: &Word) -> Option<usize> {
        self.trace_from(0, w)
    }

    pub fn trace_from(&self, start: usize, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(start, |v, &l| self.edge(v, l))
    }

    /// Grows the ball by one layer.
    pub fn extend(&mut self, oracle: &dyn EqualityOracle, limits: &Limits) -> Result<()> {
        let r = self.radius;
        let mut candidates: Vec<(Word, usize, usize)> = Vec::new();
        for v in self.layer_range(r) {
            for slot in 0..self.letters.len() {
                if self.edges[v][slot].is_none() {
                    let word = self.vertices[v].word.mul(&Word::from_letters(vec![self.letters[slot]]));
                    if word.len() != r + 1 {
                        return Err(Error::Inconsistent(alloc::format!(
                            "missing back edge at vertex {}",
                            self.vertices[v].word
                        )));
                    }
                    candidates.push((word, v, slot));
                }
            }
        }
        candidates.sort();

        let new_start = self.vertices.len();
        self.layer_starts.push(new_start);
        self.radius = r + 1;
        let mut buckets: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (word, v, slot) in candidates {
            let nf = oracle.normal_form(&word);
            let invariant = if nf.is_none() { oracle.invariant(&word) } else { Vec::new() };
            let found = match &nf {
                Some(nf) => self.normal_forms.get(nf).copied(),
                None => buckets
                    .get(&invariant)
                    .and_then(|bucket| bucket.iter().copied().find(|&u| oracle.equal(&word, &self.vertices[u].word))),
            };
            let t = match found {
                Some(t) => t,
                None => {
                    limits.check("ball vertices", self.vertices.len() + 1)?;
                    let t = self.vertices.len();
                    match nf {
                        Some(nf) => {
                            self.normal_forms.insert(nf, t);
                        }
                        None => buckets.entry(invariant).or_default().push(t),
                    }
                    self.vertices.push(Vertex { word, layer: r + 1 });
                    self.edges.push(vec![None; self.letters.len()]);
                    t
                }
            };
            self.link(v, slot, t);
        }
        self.close_layer(r + 1, oracle);
        Ok(())
    }

    fn link(&mut self, v: usize, slot: usize, t: usize) {
        self.edges[v][slot] = Some(t);
        let back = self.slot_of[self.letters[slot].inverse().index()].expect("alphabet is closed under inverses") as usize;
        self.edges[t][back] = Some(v);
    }

    /// Adds the edges joining two vertices of the same layer.
    fn close_layer(&mut self, layer: usize, oracle: &dyn EqualityOracle) {
        let range = self.layer_range(layer);
        let mut buckets: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        if oracle.normal_form(&Word::new()).is_none() {
            for u in range.clone() {
                buckets.entry(oracle.invariant(&self.vertices[u].word)).or_default().push(u);
            }
        }
        for v in range.clone() {
            for slot in 0..self.letters.len() {
                if self.edges[v][slot].is_some() {
                    continue;
                }
                let word = self.vertices[v].word.mul(&Word::from_letters(vec![self.letters[slot]]));
                let found = match oracle.normal_form(&word) {
                    Some(nf) => self.normal_forms.get(&nf).copied().filter(|t| range.contains(t)),
                    None => buckets
                        .get(&oracle.invariant(&word))
                        .and_then(|bucket| bucket.iter().copied().find(|&u| oracle.equal(&word, &self.vertices[u].word))),
                };
                if let Some(t) = found {
                    self.link(v, slot, t);
                }
            }
        }
    }
}

/// Breadth-first ball of radius `radius` around the identity.
pub fn build_ball(oracle: &dyn EqualityOracle, radius: usize, limits: &Limits) -> Result<Ball> {
    let mut ball = Ball::identity(oracle);
    for _ in 0..radius {
        ball.extend(oracle, limits)?;
    }
    Ok(ball)
}

/// Length of a shortest word equal to `g`.
pub fn geodesic_length(g: &Word, oracle: &dyn EqualityOracle, limits: &Limits) -> Result<usize> {
    Metric::new(oracle, *limits).geodesic_length(g)
}
