//! Reference policies: uniform random play and a one-step greedy Client.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{argmin_by_score, binomial_f64, star_leaves, Client, LocalCopies, StrategyError, Waiter};
use crate::engine::{GameState, Owner};
use crate::graph::{ElementId, Pattern};

/// Offers `b+1` free elements chosen uniformly.
#[derive(Clone, Copy, Debug, Default)]
pub struct RandomWaiter;

impl Waiter for RandomWaiter {
    fn name(&self) -> String {
        "random".into()
    }

    fn offer(&mut self, state: &GameState, rng: &mut ChaCha8Rng) -> Result<Vec<ElementId>, StrategyError> {
        Ok(state.random_free(state.offer_size(), rng))
    }

    fn box_clone(&self) -> Box<dyn Waiter> {
        Box::new(*self)
    }
}

/// Keeps a uniformly chosen offered element.
#[derive(Clone, Copy, Debug, Default)]
pub struct RandomClient;

impl Client for RandomClient {
    fn name(&self) -> String {
        "random".into()
    }

    fn pick(&mut self, _state: &GameState, offer: &[ElementId], rng: &mut ChaCha8Rng) -> Result<ElementId, StrategyError> {
        Ok(offer[rng.gen_range(0..offer.len())])
    }

    fn box_clone(&self) -> Box<dyn Client> {
        Box::new(*self)
    }
}

/// Keeps the offered element that completes the fewest new copies.
#[derive(Clone, Debug)]
pub struct GreedyClient {
    star: Option<usize>,
    local: LocalCopies,
}

impl GreedyClient {
    pub fn new(h: &Pattern, canonical: bool) -> Self {
        Self { star: if canonical { None } else { star_leaves(h) }, local: LocalCopies::new(h, canonical) }
    }

    /// Copies that claiming `x` would complete.
    pub fn completions(&self, state: &GameState, x: ElementId) -> f64 {
        match self.star {
            Some(1) => 1.0,
            Some(r) => {
                let (u, v) = state.board().endpoints(x);
                let r = r as u64 - 1;
                binomial_f64(state.client_degree(u) as u64, r) + binomial_f64(state.client_degree(v) as u64, r)
            }
            None => self.local.sum(state, x, &|e| (state.owner(e) == Owner::Client).then_some(1.0)),
        }
    }
}

impl Client for GreedyClient {
    fn name(&self) -> String {
        "greedy-client".into()
    }

    fn pick(&mut self, state: &GameState, offer: &[ElementId], _rng: &mut ChaCha8Rng) -> Result<ElementId, StrategyError> {
        Ok(argmin_by_score(offer, |x| self.completions(state, x)))
    }

    fn box_clone(&self) -> Box<dyn Client> {
        Box::new(self.clone())
    }
}
