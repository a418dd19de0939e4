//! Subgroup membership in free groups by Stallings folding.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::subgroup::MembershipOracle;
use crate::words::{Letter, Word};
use crate::{Error, Presentation, Result};

const SLOTS: usize = 52;

/// A folded core graph: labeled edges, deterministic in both directions,
/// with every vertex on a reduced loop through the base.
///
/// Vertices are numbered breadth-first from the base (vertex 0), following
/// letters in alphabet order, so equal subgroups give equal graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupGraph {
    out: Vec<[Option<usize>; SLOTS]>,
}

struct Folder {
    parent: Vec<usize>,
    out: Vec<[Option<usize>; SLOTS]>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn half_edge(&mut self, u: usize, l: Letter, v: usize) {
        match self.out[u][l.index()] {
            Some(w) => self.pending.push((w, v)),
            None => self.out[u][l.index()] = Some(v),
        }
    }

    fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        let (u, v) = (self.find(u), self.find(v));
        self.half_edge(u, l, v);
        self.half_edge(v, l.inverse(), u);
        self.settle();
    }

    fn settle(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, gone) = (a.min(b), a.max(b));
            self.parent[gone] = keep;
            let moved = core::mem::replace(&mut self.out[gone], [None; SLOTS]);
            for (slot, target) in moved.iter().enumerate() {
                if let Some(t) = *target {
                    let t = self.find(t);
                    self.half_edge(keep, Letter(slot as u8), t);
                }
            }
        }
    }
}

impl SubgroupGraph {
    /// The core graph of the subgroup generated by `generators`.
    pub fn fold(generators: &[Word]) -> Self {
        let edges = wedge(generators);
        let order: Vec<usize> = (0..edges.1.len()).collect();
        Self::fold_edges(edges.0, &edges.1, &order)
    }

    /// Like [`SubgroupGraph::fold`], inserting the edges of the wedge of
    /// generator loops in the given order (a permutation of their indices).
    pub fn fold_in_order(generators: &[Word], order: &[usize]) -> Self {
        let (n, edges) = wedge(generators);
        Self::fold_edges(n, &edges, order)
    }

    /// Number of edges in the wedge of generator loops.
    pub fn wedge_edge_count(generators: &[Word]) -> usize {
        wedge(generators).1.len()
    }

    /// The graph of the subgroup of a free presentation.
    pub fn for_presentation(p: &Presentation, generators: &[Word]) -> Result<Self> {
        if !p.relators().is_empty() {
            return Err(Error::NotFree);
        }
        for g in generators {
            p.alphabet().check_word(g)?;
        }
        Ok(Self::fold(generators))
    }

    fn fold_edges(n: usize, edges: &[(usize, Letter, usize)], order: &[usize]) -> Self {
        let mut f = Folder { parent: (0..n).collect(), out: vec![[None; SLOTS]; n], pending: Vec::new() };
        for &i in order {
            let (u, l, v) = edges[i];
            f.add_edge(u, l, v);
        }
        let mut out: Vec<[Option<usize>; SLOTS]> = vec![[None; SLOTS]; n];
        let mut alive = vec![false; n];
        for v in 0..n {
            if f.find(v) == v {
                alive[v] = true;
                let row = f.out[v];
                for (slot, edge) in out[v].iter_mut().zip(row) {
                    *slot = edge.map(|t| f.find(t));
                }
            }
        }
        trim(&mut out, &mut alive);
        Self::renumber(&out)
    }

    fn renumber(out: &[[Option<usize>; SLOTS]]) -> Self {
        let mut id = vec![usize::MAX; out.len()];
        let mut order = vec![0];
        id[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for t in out[v].iter().flatten() {
                if id[*t] == usize::MAX {
                    id[*t] = order.len();
                    order.push(*t);
                    queue.push_back(*t);
                }
            }
        }
        let out = order.iter().map(|&v| out[v].map(|t| t.map(|t| id[t]))).collect();
        SubgroupGraph { out }
    }

    pub fn base(&self) -> usize {
        0
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge(&self, v: usize, l: Letter) -> Option<usize> {
        self.out[v][l.index()]
    }

    /// Edges `(from, generator letter, to)`, each listed once.
    pub fn edges(&self) -> Vec<(usize, Letter, usize)> {
        let mut e = Vec::new();
        for (u, row) in self.out.iter().enumerate() {
            for (slot, t) in row.iter().enumerate() {
                if let Some(v) = t {
                    if slot % 2 == 0 {
                        e.push((u, Letter(slot as u8), *v));
                    }
                }
            }
        }
        e
    }

    /// No two edges with the same label leave or enter a vertex, and every
    /// non-base vertex has degree at least two.
    pub fn is_folded_core(&self) -> bool {
        self.out.iter().enumerate().all(|(u, row)| {
            let consistent = row.iter().enumerate().all(|(slot, t)| match t {
                Some(v) => self.out[*v][Letter(slot as u8).inverse().index()] == Some(u),
                None => true,
            });
            consistent && (u == 0 || row.iter().flatten().count() >= 2)
        })
    }

    /// Whether the reduced form of `g` reads a loop at the base.
    pub fn oracle_member(&self, g: &Word) -> bool {
        let g = g.free_reduced();
        g.letters().iter().try_fold(0, |v, &l| self.edge(v, l)) == Some(0)
    }
}

impl MembershipOracle for SubgroupGraph {
    fn contains(&mut self, g: &Word) -> Result<bool> {
        Ok(self.oracle_member(g))
    }
}

/// Vertex count and edges of the bouquet of generator loops at vertex 0.
fn wedge(generators: &[Word]) -> (usize, Vec<(usize, Letter, usize)>) {
    let mut n = 1;
    let mut edges = Vec::new();
    for g in generators {
        let g = g.free_reduced();
        let len = g.len();
        for (i, &l) in g.letters().iter().enumerate() {
            let from = if i == 0 { 0 } else { n + i - 1 };
            let to = if i + 1 == len { 0 } else { n + i };
            edges.push((from, l, to));
        }
        n += len.saturating_sub(1);
    }
    (n, edges)
}

/// Removes hanging trees: non-base vertices of degree one, repeatedly.
fn trim(out: &mut [[Option<usize>; SLOTS]], alive: &mut [bool]) {
    let degree = |row: &[Option<usize>; SLOTS]| row.iter().flatten().count();
    let mut stack: Vec<usize> = (1..out.len()).filter(|&v| alive[v] && degree(&out[v]) <= 1).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for slot in 0..SLOTS {
            if let Some(t) = out[v][slot].take() {
                let back = Letter(slot as u8).inverse().index();
                out[t][back] = None;
                if t != 0 && alive[t] && degree(&out[t]) <= 1 {
                    stack.push(t);
                }
            }
        }
    }
}
