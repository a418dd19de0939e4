//! Finite groups as multiplication tables.
//!
//! Provides Brady's torsion bound `C = (2|X|)^(2δ+1) + 1`, an exhaustive
//! enumeration of groups of small order up to isomorphism, canonical table
//! encodings and an isomorphism test with witness bijections.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Default largest order [`enumerate_groups`] accepts.
pub const DEFAULT_ORDER_CAP: usize = 10;
/// Hard ceiling for the enumeration cap; row masks are 16 bits wide.
pub const MAX_ORDER_CAP: usize = 16;

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultTable {
    order: usize,
    table: Vec<usize>,
    identity: usize,
}

impl MultTable {
    /// Validates a row-major `order × order` table: Latin square,
    /// two-sided identity, associativity.
    pub fn new(order: usize, table: Vec<usize>) -> Result<Self> {
        let bad = |m: alloc::string::String| Err(Error::InvalidTable(m));
        if order == 0 {
            return bad("empty table".into());
        }
        if table.len() != order * order {
            return bad(format!("expected {} entries, found {}", order * order, table.len()));
        }
        if let Some(v) = table.iter().find(|&&v| v >= order) {
            return bad(format!("entry {v} out of range"));
        }
        for i in 0..order {
            let mut row = vec![false; order];
            let mut col = vec![false; order];
            for j in 0..order {
                let (r, c) = (table[i * order + j], table[j * order + i]);
                if row[r] || col[c] {
                    return bad(format!("row or column {i} repeats an element"));
                }
                row[r] = true;
                col[c] = true;
            }
        }
        let Some(identity) = (0..order).find(|&e| (0..order).all(|x| table[e * order + x] == x && table[x * order + e] == x))
        else {
            return bad("no identity element".into());
        };
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b];
                for c in 0..order {
                    if table[ab * order + c] != table[a * order + table[b * order + c]] {
                        return bad(format!("({a}*{b})*{c} != {a}*({b}*{c})"));
                    }
                }
            }
        }
        Ok(MultTable { order, table, identity })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        MultTable { order: n, table, identity: 0 }
    }

    pub fn direct_product(a: &MultTable, b: &MultTable) -> Self {
        let n = a.order * b.order;
        let split = |x: usize| (x / b.order, x % b.order);
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let ((x1, x2), (y1, y2)) = (split(x), split(y));
                table[x * n + y] = a.product(x1, y1) * b.order + b.product(x2, y2);
            }
        }
        MultTable { order: n, table, identity: a.identity * b.order + b.identity }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[usize] {
        &self.table
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.product(a, b) == self.identity).expect("Latin square")
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.product(a, b) == self.product(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.product(x, a);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<usize> {
        (0..self.order).map(|a| self.element_order(a)).collect()
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v = self.element_orders();
        v.sort_unstable();
        v
    }

    /// The table after renaming element `x` to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> MultTable {
        let n = self.order;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.product(a, b)];
            }
        }
        MultTable { order: n, table, identity: perm[self.identity] }
    }

    /// The lexicographically least row-major encoding over all relabelings,
    /// together with the relabeling (`old -> new`) that achieves it.
    pub fn canonical_form(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.order;
        let mut search = CanonicalSearch { group: self, best: None };
        let mut state = LabelState { label_of: vec![None; n], element_of: Vec::with_capacity(n), prefix: Vec::new() };
        state.assign(self.identity);
        search.run(state, 0, true);
        let (_, label_of) = search.best.expect("at least one labeling");
        let relabeled = self.relabel(&label_of);
        (relabeled.table, label_of)
    }

    /// This table relabeled into canonical form.
    pub fn canonical(&self) -> MultTable {
        let (table, _) = self.canonical_form();
        MultTable { order: self.order, table, identity: 0 }
    }
}

#[derive(Clone)]
struct LabelState {
    label_of: Vec<Option<usize>>,
    element_of: Vec<usize>,
    /// Encoding entries decided so far, excluding row and column 0.
    prefix: Vec<usize>,
}

impl LabelState {
    fn assign(&mut self, element: usize) -> usize {
        let label = self.element_of.len();
        self.label_of[element] = Some(label);
        self.element_of.push(element);
        label
    }
}

struct CanonicalSearch<'a> {
    group: &'a MultTable,
    best: Option<(Vec<usize>, Vec<usize>)>,
}

impl CanonicalSearch<'_> {
    // Entries (i, j) with i, j >= 1 in row-major order; row and column 0 are
    // the same under every labeling that sends the identity to 0.
    fn run(&mut self, mut state: LabelState, pos: usize, mut tight: bool) {
        let n = self.group.order;
        let inner = n - 1;
        if pos == inner * inner {
            if tight && self.best.is_some() {
                return;
            }
            let label_of = state.label_of.iter().map(|l| l.expect("complete labeling")).collect();
            self.best = Some((state.prefix, label_of));
            return;
        }
        let (i, j) = (pos / inner + 1, pos % inner + 1);
        for needed in [i, j] {
            if needed == state.element_of.len() {
                for e in 0..n {
                    if state.label_of[e].is_none() {
                        // An earlier sibling may have replaced the best encoding.
                        let tight = match &self.best {
                            None => false,
                            Some((best, _)) => match state.prefix[..].cmp(&best[..pos]) {
                                core::cmp::Ordering::Greater => return,
                                core::cmp::Ordering::Equal => true,
                                core::cmp::Ordering::Less => false,
                            },
                        };
                        let mut next = state.clone();
                        next.assign(e);
                        self.run(next, pos, tight);
                    }
                }
                return;
            }
        }
        let p = self.group.product(state.element_of[i], state.element_of[j]);
        let value = match state.label_of[p] {
            Some(l) => l,
            None => state.assign(p),
        };
        if tight {
            if let Some((best, _)) = &self.best {
                match value.cmp(&best[pos]) {
                    core::cmp::Ordering::Greater => return,
                    core::cmp::Ordering::Less => tight = false,
                    core::cmp::Ordering::Equal => {}
                }
            } else {
                tight = false;
            }
        }
        state.prefix.push(value);
        self.run(state, pos + 1, tight);
    }
}

/// `C = (2|X|)^(2δ+1) + 1` in exact arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BradyBound {
    pub generators: u32,
    pub delta: u32,
    pub c: u128,
}

pub fn brady_bound(generators: u32, delta: u32) -> Result<BradyBound> {
    if generators == 0 {
        return Err(Error::Precondition("the generating set must be non-empty".into()));
    }
    let exponent = delta.checked_mul(2).and_then(|d| d.checked_add(1)).ok_or(Error::Overflow("2δ+1"))?;
    let c = (2 * generators as u128)
        .checked_pow(exponent)
        .and_then(|p| p.checked_add(1))
        .ok_or(Error::Overflow("(2|X|)^(2δ+1) + 1"))?;
    Ok(BradyBound { generators, delta, c })
}

const EMPTY: u8 = u8::MAX;

#[derive(Clone)]
struct Partial {
    n: usize,
    cells: Vec<u8>,
    row_used: Vec<u16>,
    col_used: Vec<u16>,
    /// `col_of[i * n + v]`: column where row `i` holds `v`.
    col_of: Vec<u8>,
    queue: Vec<(usize, usize)>,
}

impl Partial {
    fn new(n: usize) -> Self {
        Partial {
            n,
            cells: vec![EMPTY; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
            col_of: vec![EMPTY; n * n],
            queue: Vec::new(),
        }
    }

    fn get(&self, i: usize, j: usize) -> Option<usize> {
        let v = self.cells[i * self.n + j];
        (v != EMPTY).then_some(v as usize)
    }

    fn set(&mut self, i: usize, j: usize, v: usize) -> bool {
        match self.get(i, j) {
            Some(old) => old == v,
            None => {
                let bit = 1u16 << v;
                if self.row_used[i] & bit != 0 || self.col_used[j] & bit != 0 {
                    return false;
                }
                self.cells[i * self.n + j] = v as u8;
                self.row_used[i] |= bit;
                self.col_used[j] |= bit;
                self.col_of[i * self.n + v] = j as u8;
                self.queue.push((i, j));
                true
            }
        }
    }

    /// Enforces `cell(a) == cell(b)` where either side may still be empty.
    fn equate(&mut self, a: (usize, usize), b: (usize, usize)) -> bool {
        match (self.get(a.0, a.1), self.get(b.0, b.1)) {
            (Some(x), Some(y)) => x == y,
            (Some(x), None) => self.set(b.0, b.1, x),
            (None, Some(y)) => self.set(a.0, a.1, y),
            (None, None) => true,
        }
    }

    /// Propagates associativity consequences of newly set cells.
    fn propagate(&mut self) -> bool {
        let n = self.n;
        while let Some((i, j)) = self.queue.pop() {
            let v = self.get(i, j).expect("queued cells are set");
            for x in 0..n {
                // (x i) j = x (i j)
                if let Some(y) = self.get(x, i) {
                    if !self.equate((y, j), (x, v)) {
                        return false;
                    }
                }
                // (i j) x = i (j x)
                if let Some(y) = self.get(j, x) {
                    if !self.equate((v, x), (i, y)) {
                        return false;
                    }
                }
                // i = x b:  (x b) j = x (b j)
                let b = self.col_of[x * n + i];
                if b != EMPTY {
                    if let Some(c) = self.get(b as usize, j) {
                        if !self.set(x, c, v) {
                            return false;
                        }
                    }
                }
                // j = x c:  i (x c) = (i x) c
                let c = self.col_of[x * n + j];
                if c != EMPTY {
                    if let Some(d) = self.get(i, x) {
                        if !self.set(d, c as usize, v) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn first_empty(&self) -> Option<usize> {
        self.cells.iter().position(|&v| v == EMPTY)
    }

    fn into_table(self) -> Vec<usize> {
        self.cells.into_iter().map(usize::from).collect()
    }
}

fn complete(state: Partial, found: &mut Vec<Vec<usize>>) {
    let n = state.n;
    let Some(cell) = state.first_empty() else {
        found.push(state.into_table());
        return;
    };
    let (i, j) = (cell / n, cell % n);
    let used = state.row_used[i] | state.col_used[j];
    for v in 0..n {
        if used & (1 << v) != 0 {
            continue;
        }
        let mut next = state.clone();
        if next.set(i, j, v) && next.propagate() {
            complete(next, found);
        }
    }
}

/// Labeled tables of order `n` where element 1 has order `m` and its powers
/// are labeled `0, 1, ..., m-1`.
fn tables_with_cyclic_prefix(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut state = Partial::new(n);
    for x in 0..n {
        if !(state.set(0, x, x) && state.set(x, 0, x)) {
            return Vec::new();
        }
    }
    for k in 1..m {
        if !state.set(1, k, (k + 1) % m) {
            return Vec::new();
        }
    }
    if !state.propagate() {
        return Vec::new();
    }
    let mut found = Vec::new();
    complete(state, &mut found);
    found
}

/// One canonical table per isomorphism class of groups of order `n`, sorted
/// by canonical encoding.
pub fn groups_of_order(n: usize) -> Vec<MultTable> {
    if n == 1 {
        return vec![MultTable::cyclic(1)];
    }
    let mut classes: BTreeSet<Vec<usize>> = BTreeSet::new();
    // Every group is found with element 1 of maximal order; larger `m`
    // first so that each class is met as early as possible.
    for m in (2..=n).rev().filter(|&m| n.is_multiple_of(m)) {
        for table in tables_with_cyclic_prefix(n, m) {
            let Ok(t) = MultTable::new(n, table) else { continue };
            if t.element_orders().into_iter().max() != Some(m) {
                continue;
            }
            classes.insert(t.canonical_form().0);
        }
    }
    classes.into_iter().map(|table| MultTable { order: n, table, identity: 0 }).collect()
}

/// All groups of order `1..=max_order` up to isomorphism, ordered by order
/// and then canonical encoding.
pub fn enumerate_groups(max_order: usize, cap: usize) -> Result<Vec<MultTable>> {
    let cap = cap.min(MAX_ORDER_CAP);
    if max_order > cap {
        return Err(Error::OrderAboveCap { requested: max_order, cap });
    }
    Ok((1..=max_order).flat_map(groups_of_order).collect())
}

/// Smallest generating set found greedily, preferring high-order elements.
fn greedy_generators(t: &MultTable) -> Vec<usize> {
    let mut candidates: Vec<usize> = (0..t.order).collect();
    let orders = t.element_orders();
    candidates.sort_by_key(|&x| (core::cmp::Reverse(orders[x]), x));
    let mut inside = vec![false; t.order];
    inside[t.identity] = true;
    let mut gens = Vec::new();
    for x in candidates {
        if inside[x] {
            continue;
        }
        gens.push(x);
        // Close under right multiplication by the generators.
        let mut stack: Vec<usize> = (0..t.order).filter(|&y| inside[y]).collect();
        while let Some(y) = stack.pop() {
            for &g in &gens {
                let z = t.product(y, g);
                if !inside[z] {
                    inside[z] = true;
                    stack.push(z);
                }
            }
        }
    }
    gens
}

/// A product-preserving bijection `t1 -> t2`, if one exists.
pub fn is_isomorphic(t1: &MultTable, t2: &MultTable) -> Option<Vec<usize>> {
    if t1.order != t2.order || t1.is_abelian() != t2.is_abelian() || t1.order_profile() != t2.order_profile() {
        return None;
    }
    let gens = greedy_generators(t1);
    let orders1 = t1.element_orders();
    let orders2 = t2.element_orders();
    let mut images = Vec::with_capacity(gens.len());
    extend_images(t1, t2, &gens, &orders1, &orders2, &mut images)
}

fn extend_images(
    t1: &MultTable,
    t2: &MultTable,
    gens: &[usize],
    orders1: &[usize],
    orders2: &[usize],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if images.len() == gens.len() {
        return homomorphism_from(t1, t2, gens, images);
    }
    let g = gens[images.len()];
    for candidate in (0..t2.order).filter(|&y| orders2[y] == orders1[g]) {
        images.push(candidate);
        if let Some(map) = extend_images(t1, t2, gens, orders1, orders2, images) {
            return Some(map);
        }
        images.pop();
    }
    None
}

fn homomorphism_from(t1: &MultTable, t2: &MultTable, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = t1.order;
    let mut map = vec![usize::MAX; n];
    map[t1.identity] = t2.identity;
    let mut stack = vec![t1.identity];
    while let Some(x) = stack.pop() {
        for (&g, &img) in gens.iter().zip(images) {
            let y = t1.product(x, g);
            let fy = t2.product(map[x], img);
            if map[y] == usize::MAX {
                map[y] = fy;
                stack.push(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    let mut hit = vec![false; n];
    for &v in &map {
        if v == usize::MAX || hit[v] {
            return None;
        }
        hit[v] = true;
    }
    for a in 0..n {
        for b in 0..n {
            if map[t1.product(a, b)] != t2.product(map[a], map[b]) {
                return None;
            }
        }
    }
    Some(map)
}

/// Lazily enumerated list of small groups, one order at a time.
#[derive(Debug, Clone)]
pub struct SmallGroups {
    cap: usize,
    cache: BTreeMap<usize, Vec<MultTable>>,
}

impl SmallGroups {
    pub fn new(cap: usize) -> Self {
        SmallGroups { cap: cap.min(MAX_ORDER_CAP), cache: BTreeMap::new() }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn groups_of_order(&mut self, n: usize) -> Result<&[MultTable]> {
        if n > self.cap {
            return Err(Error::OrderAboveCap { requested: n, cap: self.cap });
        }
        Ok(self.cache.entry(n).or_insert_with(|| groups_of_order(n)))
    }

    /// Index of the class of `t` among the groups of its order, with a
    /// bijection from `t` onto the class representative.
    pub fn classify(&mut self, t: &MultTable) -> Result<Option<(usize, Vec<usize>)>> {
        let list = self.groups_of_order(t.order())?;
        Ok(list.iter().enumerate().find_map(|(i, g)| is_isomorphic(t, g).map(|m| (i, m))))
    }
}

impl Default for SmallGroups {
    fn default() -> Self {
        SmallGroups::new(DEFAULT_ORDER_CAP)
    }
}
