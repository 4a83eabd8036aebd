//! Degree-minimizing Waiter against an explicit family of bad sets.
//!
//! `E_i` holds `A \ C_i` for every bad set `A` that Waiter has not touched
//! and that contains all of Client's elements. Waiter offers the `b+1` free
//! elements lying in the fewest live sets. After Client keeps `y`, a set
//! survives exactly when it contains `y` and misses the rest of the offer.

use rand_chacha::ChaCha8Rng;

use super::{StrategyError, Waiter};
use crate::engine::GameState;
use crate::graph::{EdgeSet, ElementId};
use crate::engine::SetFamily;

#[derive(Clone, Debug)]
pub struct MinDegreeWaiter {
    family: SetFamily,
    allowed: Option<EdgeSet>,
    alive: Vec<bool>,
    live: usize,
    degree: Vec<u64>,
    // (|E_i|, free elements after round i)
    history: Vec<(u64, u64)>,
}

impl MinDegreeWaiter {
    pub fn new(family: SetFamily, total_elements: usize) -> Self {
        let degree = (0..family.universe() as u32).map(|e| family.degree(e) as u64).collect();
        let live = family.len();
        Self {
            alive: vec![true; family.len()],
            live,
            degree,
            allowed: None,
            history: vec![(live as u64, total_elements as u64)],
            family,
        }
    }

    /// Restricts offers to the given elements while enough of them are free.
    pub fn with_allowed(mut self, allowed: EdgeSet) -> Self {
        self.allowed = Some(allowed);
        self
    }

    pub fn live_count(&self) -> usize {
        self.live
    }

    pub fn degree(&self, e: ElementId) -> u64 {
        self.degree[e as usize]
    }

    pub fn history(&self) -> &[(u64, u64)] {
        &self.history
    }

    /// Checks `|E_i| (N_{i-1} - b) <= |E_{i-1}| (M - i + 1)` for rounds `1..=M`.
    pub fn contraction_holds(&self, m: u64, b: u64) -> bool {
        self.history.windows(2).take(m as usize).enumerate().all(|(i, w)| {
            let round = i as u64 + 1;
            let (prev, free_before) = w[0];
            let (cur, _) = w[1];
            let lhs = cur as u128 * (free_before - b) as u128;
            let rhs = prev as u128 * (m + 1 - round) as u128;
            lhs <= rhs
        })
    }

    fn kill(&mut self, i: usize) {
        if !self.alive[i] {
            return;
        }
        self.alive[i] = false;
        self.live -= 1;
        for &e in self.family.set(i) {
            self.degree[e as usize] -= 1;
        }
    }

    /// The `k` candidates of minimal degree, ties to the lowest id.
    fn lowest_degree(&self, candidates: impl Iterator<Item = ElementId>, k: usize) -> Vec<ElementId> {
        let mut keyed: Vec<(u64, ElementId)> = candidates.map(|e| (self.degree[e as usize], e)).collect();
        if keyed.len() > k {
            keyed.select_nth_unstable(k - 1);
            keyed.truncate(k);
        }
        keyed.sort_unstable();
        let mut out: Vec<ElementId> = keyed.into_iter().map(|(_, e)| e).collect();
        out.sort_unstable();
        out
    }
}

impl Waiter for MinDegreeWaiter {
    fn name(&self) -> String {
        "min-degree-waiter".into()
    }

    fn offer(&mut self, state: &GameState, _rng: &mut ChaCha8Rng) -> Result<Vec<ElementId>, StrategyError> {
        if self.family.universe() != state.board().element_count() {
            return Err(StrategyError::new("bad family does not match the board"));
        }
        let k = state.offer_size();
        let free = state.free_elements().iter().copied();
        if let Some(allowed) = &self.allowed {
            let inside: Vec<ElementId> = free.clone().filter(|&e| allowed.contains(e)).collect();
            if inside.len() >= k {
                return Ok(self.lowest_degree(inside.into_iter(), k));
            }
        }
        if state.free_count() < k {
            return Err(StrategyError::new("fewer than b+1 free elements"));
        }
        Ok(self.lowest_degree(free, k))
    }

    fn observe(&mut self, state: &GameState, offer: &[ElementId], pick: ElementId) {
        for &x in offer {
            if x == pick {
                continue;
            }
            for idx in 0..self.family.containing(x).len() {
                let i = self.family.containing(x)[idx] as usize;
                self.kill(i);
            }
        }
        // sets missing the pick no longer contain all of Client's elements
        let keep: Vec<bool> = {
            let mut keep = vec![false; self.family.len()];
            for &i in self.family.containing(pick) {
                keep[i as usize] = true;
            }
            keep
        };
        for i in 0..self.family.len() {
            if self.alive[i] && !keep[i] {
                self.kill(i);
            }
        }
        self.history.push((self.live as u64, state.free_count() as u64));
    }

    fn box_clone(&self) -> Box<dyn Waiter> {
        Box::new(self.clone())
    }
}
