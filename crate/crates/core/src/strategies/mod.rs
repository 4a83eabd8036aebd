//! Waiter and Client policies.
//!
//! A policy is a stateful object owned by one game. The engine calls
//! `offer`/`pick` before a round and `observe` after it has been applied.

pub mod baseline;
pub mod clique;
pub mod min_degree;
pub mod potential;
pub mod registry;
pub mod trees;
pub mod triangle;

use std::fmt;

use rand_chacha::ChaCha8Rng;

use crate::engine::{GameState, Owner};
use crate::graph::{ElementId, EmbeddingSearch, Pattern, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyError(pub String);

impl fmt::Display for StrategyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for StrategyError {}

impl StrategyError {
    pub fn new(msg: impl Into<String>) -> Self {
        StrategyError(msg.into())
    }
}

pub trait Waiter: Send {
    fn name(&self) -> String;
    fn offer(&mut self, state: &GameState, rng: &mut ChaCha8Rng) -> Result<Vec<ElementId>, StrategyError>;
    fn observe(&mut self, _state: &GameState, _offer: &[ElementId], _pick: ElementId) {}
    fn box_clone(&self) -> Box<dyn Waiter>;
}

pub trait Client: Send {
    fn name(&self) -> String;
    fn pick(&mut self, state: &GameState, offer: &[ElementId], rng: &mut ChaCha8Rng) -> Result<ElementId, StrategyError>;
    fn observe(&mut self, _state: &GameState, _offer: &[ElementId], _pick: ElementId) {}
    fn box_clone(&self) -> Box<dyn Client>;
}

impl Clone for Box<dyn Waiter> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

impl Clone for Box<dyn Client> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

/// Offered element with the smallest score, ties to the lowest id.
pub(crate) fn argmin_by_score(offer: &[ElementId], mut score: impl FnMut(ElementId) -> f64) -> ElementId {
    let mut best = (f64::INFINITY, u32::MAX);
    for &x in offer {
        let s = score(x);
        if s < best.0 || (s == best.0 && x < best.1) {
            best = (s, x);
        }
    }
    best.1
}

pub(crate) fn binomial_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut out = 1.0;
    for i in 0..k {
        out = out * (n - i) as f64 / (i + 1) as f64;
    }
    out
}

/// Number of leaves if `h` is a star with at least one edge.
pub(crate) fn star_leaves(h: &Pattern) -> Option<usize> {
    let v = h.vertex_count();
    if v < 2 || h.edge_count() != v - 1 || !h.isolated_vertices().is_empty() {
        return None;
    }
    (0..v).any(|c| h.degree(c) == v - 1).then_some(v - 1)
}

/// Weighted enumeration of the copies of a pattern that use a given board
/// element, one search per pattern edge and orientation.
#[derive(Clone, Debug)]
pub(crate) struct LocalCopies {
    pattern: Pattern,
    canonical: bool,
    aut: f64,
    searches: Vec<(usize, EmbeddingSearch)>,
}

impl LocalCopies {
    pub fn new(pattern: &Pattern, canonical: bool) -> Self {
        let mut searches = Vec::new();
        for (idx, &(a, b)) in pattern.edges().iter().enumerate() {
            searches.push((idx, EmbeddingSearch::with_fixed(pattern, &[a, b])));
            searches.push((idx, EmbeddingSearch::with_fixed(pattern, &[b, a])));
        }
        let aut = if canonical { 1.0 } else { pattern.automorphism_count() as f64 };
        Self { pattern: pattern.clone(), canonical, aut, searches }
    }

    /// Sum over copies containing `x` of the product of `weight` over the
    /// copy's other elements. `weight` returns `None` for unusable elements.
    pub fn sum(&self, state: &GameState, x: ElementId, weight: &dyn Fn(ElementId) -> Option<f64>) -> f64 {
        let board = state.board();
        let (u, v) = board.endpoints(x);
        let mut total = 0.0;
        let n = self.pattern.vertex_count();
        let mut map = vec![u32::MAX; n];
        for (fixed_edge, search) in &self.searches {
            let order = search.order();
            let (a, b) = (order[0], order[1]);
            if self.canonical && (board.part_of(u) != Some(a) || board.part_of(v) != Some(b)) {
                continue;
            }
            map.iter_mut().for_each(|m| *m = u32::MAX);
            map[a] = u;
            map[b] = v;
            let mut used = vec![u, v];
            total += self.rec(state, search, *fixed_edge, 2, &mut map, &mut used, weight);
        }
        total / self.aut
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        &self,
        state: &GameState,
        search: &EmbeddingSearch,
        fixed_edge: usize,
        step: usize,
        map: &mut Vec<VertexId>,
        used: &mut Vec<VertexId>,
        weight: &dyn Fn(ElementId) -> Option<f64>,
    ) -> f64 {
        let board = state.board();
        if step == self.pattern.vertex_count() {
            let mut w = 1.0;
            for (i, &(a, b)) in self.pattern.edges().iter().enumerate() {
                if i == fixed_edge {
                    continue;
                }
                match board.edge_id(map[a], map[b]).and_then(weight) {
                    Some(x) => w *= x,
                    None => return 0.0,
                }
            }
            return w;
        }
        let pv = search.order()[step];
        let mut cands: Vec<VertexId> = Vec::new();
        match search.sources()[step] {
            Some(src) => board.for_each_neighbor(map[src], |w, e| {
                if weight(e).is_some() {
                    cands.push(w);
                }
            }),
            None => cands.extend(0..board.vertex_count() as u32),
        }
        let mut total = 0.0;
        for w in cands {
            if used.contains(&w) {
                continue;
            }
            if self.canonical && board.part_of(w) != Some(pv) {
                continue;
            }
            if !search.checks()[step].iter().all(|&c| board.edge_id(map[c], w).and_then(weight).is_some()) {
                continue;
            }
            map[pv] = w;
            used.push(w);
            total += self.rec(state, search, fixed_edge, step + 1, map, used, weight);
            used.pop();
        }
        map[pv] = u32::MAX;
        total
    }
}

/// Element weight for copies that are still alive given an offer: Client
/// elements weigh 1, free elements outside the offer weigh `q`, and Waiter
/// elements or other offered elements are unusable.
pub(crate) fn alive_weight<'a>(
    state: &'a GameState,
    offer: &'a [ElementId],
    x: ElementId,
    q: f64,
) -> impl Fn(ElementId) -> Option<f64> + 'a {
    move |e| match state.owner(e) {
        Owner::Client => Some(1.0),
        Owner::Waiter => None,
        Owner::Free => {
            if e != x && offer.contains(&e) {
                None
            } else {
                Some(q)
            }
        }
    }
}
