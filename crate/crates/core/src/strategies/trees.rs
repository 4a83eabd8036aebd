//! Waiter strategies forcing many copies of a tree on a complete board.
//!
//! Both strategies unroll the same recursion. The tree's vertices are taken
//! in breadth-first order `v_1..v_k`, so each `v_j` is a leaf of the tree
//! spanned by `v_1..v_j` and hangs off an earlier vertex `p(j)`. Level `j`
//! works on the first `s_j` board vertices with `s_k = n` and
//! `s_{j-1} = ceil(s_j / 2)`; the new leaf is placed in `R_j = [s_{j-1}, s_j)`.

use rand_chacha::ChaCha8Rng;

use super::{StrategyError, Waiter};
use crate::engine::GameState;
use crate::graph::{ElementId, Pattern, VertexId};

/// `t_k(n, b) = n^k (b+1)^{1-k} / 4^{C(k+1,2)}` as a float, for reporting.
pub fn tree_guarantee(n: u64, b: u64, k: u32) -> f64 {
    let c = (k * (k + 1) / 2) as i32;
    (n as f64).powi(k as i32) * ((b + 1) as f64).powi(1 - k as i32) / 4f64.powi(c)
}

/// Compares `count` with `t_k(n, b)` exactly: returns `count <=> t_k`.
pub fn compare_with_guarantee(count: u64, n: u64, b: u64, k: u32) -> std::cmp::Ordering {
    let c = k * (k + 1) / 2;
    let lhs = (count as u128)
        .checked_mul(4u128.checked_pow(c).unwrap_or(u128::MAX))
        .and_then(|x| x.checked_mul((b as u128 + 1).checked_pow(k.saturating_sub(1))?));
    let rhs = (n as u128).checked_pow(k);
    match (lhs, rhs) {
        (Some(l), Some(r)) => l.cmp(&r),
        _ => (count as f64).partial_cmp(&tree_guarantee(n, b, k)).unwrap_or(std::cmp::Ordering::Less),
    }
}

/// Breadth-first labeling of a tree with nested vertex ranges.
#[derive(Clone, Debug)]
pub struct TreeLayout {
    pub pattern: Pattern,
    /// Pattern vertex at each position.
    pub order: Vec<usize>,
    /// Position of the parent of each position (unused at position 0).
    pub parent: Vec<usize>,
    /// `sizes[j]` is `s_{j+1}`.
    pub sizes: Vec<u32>,
}

impl TreeLayout {
    pub fn new(t: &Pattern, n: usize) -> Result<Self, StrategyError> {
        if !t.is_tree() {
            return Err(StrategyError::new(format!("{t} is not a tree")));
        }
        let k = t.vertex_count();
        let mut order = vec![0usize];
        let mut parent = vec![0usize];
        let mut seen = 1u64;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            for w in 0..k {
                if t.has_edge(v, w) && seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    order.push(w);
                    parent.push(head);
                }
            }
            head += 1;
        }
        let mut sizes = vec![n as u32; k];
        for j in (0..k.saturating_sub(1)).rev() {
            sizes[j] = sizes[j + 1].div_ceil(2);
        }
        Ok(Self { pattern: t.clone(), order, parent, sizes })
    }

    pub fn k(&self) -> usize {
        self.order.len()
    }

    /// `R_j` for position `j >= 1`.
    pub fn new_range(&self, j: usize) -> std::ops::Range<VertexId> {
        self.sizes[j - 1]..self.sizes[j]
    }
}

fn check_complete(state: &GameState, n: usize) -> Result<(), StrategyError> {
    if !state.board().is_complete() || state.board().vertex_count() != n {
        return Err(StrategyError::new(format!("tree strategies need the complete board on {n} vertices")));
    }
    Ok(())
}

fn filler(state: &GameState) -> Vec<ElementId> {
    state.lowest_free(state.offer_size())
}

/// Dense-regime tree strategy: every anchor of the previous level is offered
/// edges towards `R_j` for `floor(|R_j|/(b+1))` rounds.
#[derive(Clone, Debug)]
pub struct TreeDenseWaiter {
    layout: TreeLayout,
    b: u64,
    n: usize,
    images: Vec<Vec<VertexId>>,
    level: usize,
    anchors: Vec<VertexId>,
    anchor_idx: usize,
    rounds_for_anchor: u64,
    cursor: VertexId,
    pending: bool,
}

impl TreeDenseWaiter {
    /// Refuses to start unless `b <= n / 2^{k+6}`.
    pub fn new(t: &Pattern, n: usize, b: u64) -> Result<Self, StrategyError> {
        let k = t.vertex_count() as u32;
        if (b as u128) << (k + 6) > n as u128 {
            return Err(StrategyError::new(format!("tree-dense needs b <= n/2^(k+6); got n={n}, b={b}, k={k}")));
        }
        Self::unchecked(t, n, b)
    }

    /// Same strategy without the bias precondition.
    pub fn unchecked(t: &Pattern, n: usize, b: u64) -> Result<Self, StrategyError> {
        let layout = TreeLayout::new(t, n)?;
        let mut images = vec![Vec::new(); layout.k()];
        images[0] = (0..layout.sizes[0]).collect();
        let mut w = Self {
            layout,
            b,
            n,
            images,
            level: 0,
            anchors: Vec::new(),
            anchor_idx: 0,
            rounds_for_anchor: 0,
            cursor: 0,
            pending: false,
        };
        w.advance_level();
        Ok(w)
    }

    fn per_anchor(&self) -> u64 {
        let r = self.layout.new_range(self.level);
        (r.end - r.start) as u64 / (self.b + 1)
    }

    fn advance_level(&mut self) {
        self.level += 1;
        while self.level < self.layout.k() {
            let mut anchors = self.images[self.layout.parent[self.level]].clone();
            anchors.sort_unstable();
            anchors.dedup();
            if self.per_anchor() > 0 && !anchors.is_empty() {
                self.anchors = anchors;
                self.anchor_idx = 0;
                self.rounds_for_anchor = 0;
                self.cursor = self.layout.new_range(self.level).start;
                return;
            }
            self.level += 1;
        }
    }

    pub fn in_stages(&self) -> bool {
        self.level < self.layout.k()
    }

    /// Number of labeled tree embeddings the recursion has forced so far
    /// once all stages are over: `|S_1| * prod floor(|R_j|/(b+1))`.
    pub fn forced_count(&self) -> u64 {
        let mut c = self.layout.sizes[0] as u64;
        for j in 1..self.layout.k() {
            let r = self.layout.new_range(j);
            c = c.saturating_mul((r.end - r.start) as u64 / (self.b + 1));
        }
        c
    }

    /// Images of each tree position built so far.
    pub fn images(&self) -> &[Vec<VertexId>] {
        &self.images
    }

    pub fn layout(&self) -> &TreeLayout {
        &self.layout
    }
}

impl Waiter for TreeDenseWaiter {
    fn name(&self) -> String {
        "tree-dense".into()
    }

    fn offer(&mut self, state: &GameState, _rng: &mut ChaCha8Rng) -> Result<Vec<ElementId>, StrategyError> {
        check_complete(state, self.n)?;
        if !self.in_stages() {
            self.pending = false;
            return Ok(filler(state));
        }
        let u = self.anchors[self.anchor_idx];
        let end = self.layout.new_range(self.level).end;
        let board = state.board();
        let mut out = Vec::with_capacity(state.offer_size());
        let mut w = self.cursor;
        while out.len() < state.offer_size() && w < end {
            let e = board.edge_id(u, w).expect("complete board");
            if state.is_free(e) {
                out.push(e);
            }
            w += 1;
        }
        if out.len() < state.offer_size() {
            return Err(StrategyError::new(format!("anchor {u} ran out of free edges towards the new range")));
        }
        self.cursor = w;
        self.pending = true;
        out.sort_unstable();
        Ok(out)
    }

    fn observe(&mut self, state: &GameState, _offer: &[ElementId], pick: ElementId) {
        if !self.pending {
            return;
        }
        self.pending = false;
        let u = self.anchors[self.anchor_idx];
        let (a, c) = state.board().endpoints(pick);
        let leaf = if a == u { c } else { a };
        self.images[self.level].push(leaf);
        self.rounds_for_anchor += 1;
        if self.rounds_for_anchor == self.per_anchor() {
            self.anchor_idx += 1;
            self.rounds_for_anchor = 0;
            self.cursor = self.layout.new_range(self.level).start;
            if self.anchor_idx == self.anchors.len() {
                self.advance_level();
            }
        }
    }

    fn box_clone(&self) -> Box<dyn Waiter> {
        Box::new(self.clone())
    }
}

/// Sparse-regime tree strategy building vertex-disjoint copies.
///
/// At level `j`, `A` holds anchors of current copies with no Client edge
/// into `R_j` and `B` the vertices of `R_j` Client has not touched. Waiter
/// offers the lowest free `E(A,B)` edges until fewer than `b+1` remain or
/// `|R_j \ B|` reaches `t_j(s_j, b)`.
#[derive(Clone, Debug)]
pub struct TreeSparseWaiter {
    layout: TreeLayout,
    b: u64,
    n: usize,
    level: usize,
    /// Current copies, as images of positions `0..level`.
    copies: Vec<Vec<VertexId>>,
    /// Leaf attached to each copy at the current level.
    extension: Vec<Option<VertexId>>,
    touched: usize,
    pending: bool,
    finished: bool,
    /// (level, rounds played) per finished level.
    level_rounds: Vec<(usize, u64)>,
    rounds_here: u64,
}

impl TreeSparseWaiter {
    /// Refuses to start unless `n <= b <= n^{k/(k-1)} / 2^{k+6}`.
    pub fn new(t: &Pattern, n: usize, b: u64) -> Result<Self, StrategyError> {
        let k = t.vertex_count() as u32;
        let lower_ok = n as u64 <= b;
        let upper_ok = k <= 1 || {
            // (b 2^{k+6})^{k-1} <= n^k
            let lhs = ((b as u128) << (k + 6)).checked_pow(k - 1);
            let rhs = (n as u128).checked_pow(k);
            match (lhs, rhs) {
                (Some(l), Some(r)) => l <= r,
                (None, _) => false,
                (Some(_), None) => true,
            }
        };
        if !(lower_ok && upper_ok) {
            return Err(StrategyError::new(format!(
                "tree-sparse needs n <= b <= n^(k/(k-1))/2^(k+6); got n={n}, b={b}, k={k}"
            )));
        }
        Self::unchecked(t, n, b)
    }

    pub fn unchecked(t: &Pattern, n: usize, b: u64) -> Result<Self, StrategyError> {
        let layout = TreeLayout::new(t, n)?;
        let copies: Vec<Vec<VertexId>> = (0..layout.sizes[0]).map(|v| vec![v]).collect();
        Ok(Self {
            finished: layout.k() == 1,
            layout,
            b,
            n,
            level: 1,
            extension: vec![None; copies.len()],
            copies,
            touched: 0,
            pending: false,
            level_rounds: Vec::new(),
            rounds_here: 0,
        })
    }

    fn anchor(&self, c: usize) -> VertexId {
        self.copies[c][self.layout.parent[self.level]]
    }

    fn below_threshold(&self) -> bool {
        let s = self.layout.sizes[self.level] as u64;
        compare_with_guarantee(self.touched as u64, s, self.b, self.level as u32 + 1) == std::cmp::Ordering::Less
    }

    /// Free `E(A,B)` edges in id order.
    fn free_cross_edges(&self, state: &GameState) -> Vec<ElementId> {
        let board = state.board();
        let range = self.layout.new_range(self.level);
        let b_set: Vec<VertexId> = range.filter(|&v| state.client_degree(v) == 0).collect();
        let mut out = Vec::new();
        for c in 0..self.copies.len() {
            if self.extension[c].is_some() {
                continue;
            }
            let a = self.anchor(c);
            for &v in &b_set {
                let e = board.edge_id(a, v).expect("complete board");
                if state.is_free(e) {
                    out.push(e);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn close_level(&mut self) {
        let mut next = Vec::new();
        for (c, ext) in self.copies.iter().zip(&self.extension) {
            if let Some(v) = ext {
                let mut grown = c.clone();
                grown.push(*v);
                next.push(grown);
            }
        }
        self.level_rounds.push((self.level, self.rounds_here));
        self.rounds_here = 0;
        self.copies = next;
        self.touched = 0;
        self.level += 1;
        self.extension = vec![None; self.copies.len()];
        if self.level == self.layout.k() {
            self.finished = true;
        }
    }

    /// Completed vertex-disjoint copies, as images of the breadth-first
    /// positions. Empty until every level has been played.
    pub fn copies(&self) -> &[Vec<VertexId>] {
        if self.finished {
            &self.copies
        } else {
            &[]
        }
    }

    pub fn layout(&self) -> &TreeLayout {
        &self.layout
    }

    pub fn level_rounds(&self) -> &[(usize, u64)] {
        &self.level_rounds
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }
}

impl Waiter for TreeSparseWaiter {
    fn name(&self) -> String {
        "tree-sparse".into()
    }

    fn offer(&mut self, state: &GameState, _rng: &mut ChaCha8Rng) -> Result<Vec<ElementId>, StrategyError> {
        check_complete(state, self.n)?;
        while !self.finished {
            if self.below_threshold() {
                let free = self.free_cross_edges(state);
                if free.len() >= state.offer_size() {
                    self.pending = true;
                    return Ok(free[..state.offer_size()].to_vec());
                }
            }
            self.close_level();
        }
        self.pending = false;
        Ok(filler(state))
    }

    fn observe(&mut self, state: &GameState, _offer: &[ElementId], pick: ElementId) {
        if !self.pending {
            return;
        }
        self.pending = false;
        self.rounds_here += 1;
        let (x, y) = state.board().endpoints(pick);
        let range = self.layout.new_range(self.level);
        let (a, v) = if range.contains(&y) { (x, y) } else { (y, x) };
        if let Some(c) = (0..self.copies.len()).find(|&c| self.extension[c].is_none() && self.anchor(c) == a) {
            self.extension[c] = Some(v);
            self.touched += 1;
        }
    }

    fn box_clone(&self) -> Box<dyn Waiter> {
        Box::new(self.clone())
    }
}

/// True when the copies are pairwise vertex-disjoint copies of the tree in
/// Client's graph.
pub fn verify_disjoint_copies(state: &GameState, layout: &TreeLayout, copies: &[Vec<VertexId>]) -> bool {
    let mut used = std::collections::HashSet::new();
    for c in copies {
        if c.len() != layout.k() {
            return false;
        }
        for &v in c {
            if !used.insert(v) {
                return false;
            }
        }
        for j in 1..layout.k() {
            if !state.client_has_edge(c[j], c[layout.parent[j]]) {
                return false;
            }
        }
    }
    true
}
