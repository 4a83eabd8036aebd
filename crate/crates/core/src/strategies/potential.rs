//! Potential-function Client.
//!
//! A winning set `A` is alive while Waiter owns none of it; its weight is
//! `q^{|A \ C|}` with `q = 1/(b+1)`. Client keeps the offered element whose
//! loss hurts least: if `x` is picked, sets meeting the rest of the offer die
//! and sets whose only offered element is `x` gain a factor `b+1`, so the new
//! potential is `Phi - D + (b+1) S(x)` where `D` is the weight of all alive
//! sets meeting the offer and `S(x)` the weight of those meeting it only in
//! `x`. Summing over the offer gives at most `(b+1) Phi`, hence some pick
//! never increases `Phi`. Sets fully claimed by Client keep weight 1, so the
//! final value is at most the initial potential.

use rand_chacha::ChaCha8Rng;

use super::{alive_weight, argmin_by_score, binomial_f64, star_leaves, Client, LocalCopies, StrategyError};
use crate::engine::{GameState, SetFamily, WinningFamily};
use crate::graph::{count_copies, Board, ElementId, Pattern};

/// Exact potential bookkeeping for an explicit family. Weights are stored
/// multiplied by `(b+1)^L` where `L` is the largest set size.
#[derive(Clone, Debug)]
pub struct PotentialLedger {
    family: SetFamily,
    base: u128,
    alive: Vec<bool>,
    remaining: Vec<u32>,
    weight: Vec<u128>,
    phi: u128,
    scale: u128,
    history: Vec<u128>,
    rounds_seen: u64,
}

impl PotentialLedger {
    pub fn new(family: SetFamily, b: u64) -> Result<Self, StrategyError> {
        let base = b as u128 + 1;
        let top = family.max_set_size() as u32;
        let scale = base
            .checked_pow(top)
            .ok_or_else(|| StrategyError::new(format!("potential weights overflow: ({base})^{top}")))?;
        let mut weight = Vec::with_capacity(family.len());
        let mut phi: u128 = 0;
        for s in family.sets() {
            let w = base.pow(top - s.len() as u32);
            phi = phi.checked_add(w).ok_or_else(|| StrategyError::new("potential overflows 128 bits"))?;
            weight.push(w);
        }
        Ok(Self {
            alive: vec![true; family.len()],
            remaining: family.sets().iter().map(|s| s.len() as u32).collect(),
            base,
            weight,
            phi,
            scale,
            history: vec![phi],
            rounds_seen: 0,
            family,
        })
    }

    /// Current potential, scaled by [`Self::scale`].
    pub fn phi_scaled(&self) -> u128 {
        self.phi
    }

    pub fn scale(&self) -> u128 {
        self.scale
    }

    pub fn phi(&self) -> f64 {
        self.phi as f64 / self.scale as f64
    }

    /// Potential before each round and after the last observed one.
    pub fn history(&self) -> &[u128] {
        &self.history
    }

    /// Largest integer not above the initial potential.
    pub fn initial_floor(&self) -> u128 {
        self.history[0] / self.scale
    }

    /// Weight of alive sets meeting the offer only in `x`.
    pub fn single_hit_weight(&self, offer: &[ElementId], x: ElementId) -> u128 {
        let mut total = 0;
        for &i in self.family.containing(x) {
            let i = i as usize;
            if !self.alive[i] {
                continue;
            }
            let set = self.family.set(i);
            if offer.iter().all(|&y| y == x || set.binary_search(&y).is_err()) {
                total += self.weight[i];
            }
        }
        total
    }

    /// Potential that picking `x` would leave.
    pub fn phi_after(&self, offer: &[ElementId], x: ElementId) -> u128 {
        let mut meeting = std::collections::BTreeSet::new();
        for &y in offer {
            for &i in self.family.containing(y) {
                if self.alive[i as usize] {
                    meeting.insert(i as usize);
                }
            }
        }
        let lost: u128 = meeting.iter().map(|&i| self.weight[i]).sum();
        self.phi - lost + self.base * self.single_hit_weight(offer, x)
    }

    pub fn apply(&mut self, offer: &[ElementId], pick: ElementId) {
        for &y in offer {
            for &i in self.family.containing(y) {
                let i = i as usize;
                if !self.alive[i] {
                    continue;
                }
                let set = self.family.set(i);
                let hits_rest = offer.iter().any(|&z| z != pick && set.binary_search(&z).is_ok());
                if hits_rest {
                    self.alive[i] = false;
                    self.phi -= self.weight[i];
                } else if y == pick {
                    self.remaining[i] -= 1;
                    self.phi += self.weight[i] * (self.base - 1);
                    self.weight[i] *= self.base;
                }
            }
        }
        self.rounds_seen += 1;
        self.history.push(self.phi);
    }

    pub fn rounds_seen(&self) -> u64 {
        self.rounds_seen
    }
}

#[derive(Clone, Debug)]
enum Backend {
    Explicit(PotentialLedger),
    Star { leaves: usize },
    Local(LocalCopies),
}

#[derive(Clone, Debug)]
pub struct PotentialClient {
    backend: Backend,
    q: f64,
}

impl PotentialClient {
    /// Exact ledger over an explicit family.
    pub fn explicit(family: SetFamily, b: u64) -> Result<Self, StrategyError> {
        Ok(Self { backend: Backend::Explicit(PotentialLedger::new(family, b)?), q: 1.0 / (b + 1) as f64 })
    }

    /// Potential over copies of a pattern, scored by local search.
    pub fn for_pattern(h: &Pattern, canonical: bool, b: u64) -> Self {
        let backend = match star_leaves(h) {
            Some(leaves) if !canonical => Backend::Star { leaves },
            _ => Backend::Local(LocalCopies::new(h, canonical)),
        };
        Self { backend, q: 1.0 / (b + 1) as f64 }
    }

    pub fn for_family(family: &WinningFamily, b: u64) -> Result<Self, StrategyError> {
        match family {
            WinningFamily::Explicit(f) => Self::explicit(f.clone(), b),
            WinningFamily::Pattern { pattern, canonical } => Ok(Self::for_pattern(pattern, *canonical, b)),
        }
    }

    pub fn ledger(&self) -> Option<&PotentialLedger> {
        match &self.backend {
            Backend::Explicit(l) => Some(l),
            _ => None,
        }
    }

    /// Weight of alive copies whose only offered element is `x`, up to the
    /// common factor that does not depend on `x`.
    pub fn score(&self, state: &GameState, offer: &[ElementId], x: ElementId) -> f64 {
        let q = self.q;
        match &self.backend {
            Backend::Explicit(l) => l.single_hit_weight(offer, x) as f64,
            Backend::Star { leaves } => {
                let (u, v) = state.board().endpoints(x);
                if *leaves == 1 {
                    return q;
                }
                let r = *leaves as u64;
                let side = |c| {
                    let cc = state.client_degree(c) as u64;
                    let others = offer
                        .iter()
                        .filter(|&&y| y != x && {
                            let (a, b) = state.board().endpoints(y);
                            a == c || b == c
                        })
                        .count() as u64;
                    let ff = state.free_degree(c) as u64 - 1 - others;
                    (0..r).map(|j| binomial_f64(cc, j) * binomial_f64(ff, r - 1 - j) * q.powi((r - 1 - j) as i32)).sum::<f64>()
                };
                q * (side(u) + side(v))
            }
            Backend::Local(lc) => q * lc.sum(state, x, &alive_weight(state, offer, x, q)),
        }
    }
}

impl Client for PotentialClient {
    fn name(&self) -> String {
        "potential-client".into()
    }

    fn pick(&mut self, state: &GameState, offer: &[ElementId], _rng: &mut ChaCha8Rng) -> Result<ElementId, StrategyError> {
        if let Backend::Explicit(l) = &self.backend {
            if l.rounds_seen() != state.round() {
                return Err(StrategyError::new(format!(
                    "ledger has seen {} rounds but the game is at round {}",
                    l.rounds_seen(),
                    state.round()
                )));
            }
        }
        Ok(argmin_by_score(offer, |x| self.score(state, offer, x)))
    }

    fn observe(&mut self, _state: &GameState, offer: &[ElementId], pick: ElementId) {
        if let Backend::Explicit(l) = &mut self.backend {
            l.apply(offer, pick);
        }
    }

    fn box_clone(&self) -> Box<dyn Client> {
        Box::new(self.clone())
    }
}

/// Initial potential `sum_A (b+1)^{-|A|}` of a family on a board.
pub fn initial_potential(board: &Board, family: &WinningFamily, b: u64) -> Result<f64, crate::engine::GameError> {
    let q = 1.0 / (b + 1) as f64;
    match family {
        WinningFamily::Explicit(f) => Ok(f.potential_bound(b)),
        WinningFamily::Pattern { pattern, canonical } => {
            let copies = if *canonical {
                let s = board.part_size().ok_or_else(|| crate::engine::GameError::Family("canonical copies need a blow-up board".into()))?;
                (s as f64).powi(pattern.vertex_count() as i32)
            } else if board.is_complete() {
                let n = board.vertex_count() as f64;
                let v = pattern.vertex_count();
                let falling: f64 = (0..v).map(|i| n - i as f64).product();
                if (board.vertex_count()) < v {
                    0.0
                } else {
                    falling / pattern.automorphism_count() as f64
                }
            } else {
                count_copies(board, &board.full_set(), pattern) as f64
            };
            Ok(copies * q.powi(pattern.edge_count() as i32))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play, value};
    use crate::strategies::baseline::RandomWaiter;
    use std::sync::Arc;

    #[test]
    fn initial_potential_of_triangles_on_k4() {
        let board = Board::complete(4).unwrap();
        let fam = WinningFamily::copies(Pattern::complete(3));
        assert!((initial_potential(&board, &fam, 1).unwrap() - 0.5).abs() < 1e-12);
        let explicit = PotentialLedger::new(fam.to_explicit(&board).unwrap(), 1).unwrap();
        assert_eq!(explicit.phi_scaled(), 4);
        assert_eq!(explicit.scale(), 8);
    }

    #[test]
    fn disjoint_offer_picks_lowest() {
        let fam = SetFamily::new(6, vec![vec![0, 1]]).unwrap();
        let mut c = PotentialClient::explicit(fam, 1).unwrap();
        let state = GameState::new(Arc::new(Board::ground_set(6)), 1).unwrap();
        let mut rng = rand_chacha::rand_core::SeedableRng::seed_from_u64(0);
        assert_eq!(c.pick(&state, &[4, 3], &mut rng).unwrap(), 3);
    }

    #[test]
    fn phi_after_matches_recomputation() {
        let fam = SetFamily::new(6, vec![vec![0, 1], vec![1, 2, 3], vec![0, 4], vec![5]]).unwrap();
        let base = PotentialLedger::new(fam.clone(), 2).unwrap();
        let offer = [0, 1, 5];
        for &x in &offer {
            let mut l = base.clone();
            let predicted = l.phi_after(&offer, x);
            l.apply(&offer, x);
            assert_eq!(predicted, l.phi_scaled());
        }
    }

    #[test]
    fn star_scores_match_local_search() {
        let board = Arc::new(Board::complete(7).unwrap());
        let mut state = GameState::new(board, 2).unwrap();
        state.apply_round(&[0, 1, 2], 0).unwrap();
        state.apply_round(&[6, 7, 8], 7).unwrap();
        let star = PotentialClient::for_pattern(&Pattern::path(3), false, 2);
        let generic = PotentialClient { backend: Backend::Local(LocalCopies::new(&Pattern::path(3), false)), q: 1.0 / 3.0 };
        let offer = [3, 9, 12];
        for &x in &offer {
            let a = star.score(&state, &offer, x);
            let b = generic.score(&state, &offer, x);
            assert!((a - b).abs() < 1e-12, "{x}: {a} vs {b}");
        }
    }

    #[test]
    fn triangles_on_k4_are_avoided() {
        let board = Arc::new(Board::complete(4).unwrap());
        let fam = WinningFamily::copies(Pattern::complete(3));
        for seed in 0..50 {
            let mut w = RandomWaiter;
            let mut c = PotentialClient::for_family(&fam, 1).unwrap();
            let s = play(board.clone(), 1, &mut w, &mut c, seed).unwrap();
            assert_eq!(value(&s, &fam).unwrap(), 0);
        }
    }
}
