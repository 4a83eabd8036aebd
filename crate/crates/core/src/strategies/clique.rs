//! Two-stage Waiter for cliques on the blow-up of K_k.
//!
//! `H_i` is `K_k` minus the first `i` matching edges `e_1..e_i`, where `e_j`
//! joins parts `U_j` and `U'_j`. Stage I plays only outside the bipartite
//! graphs `E(U_j, U'_j)` and leaves Client with many canonical `H_i` copies,
//! thinned to a sparse family. Stage II runs one phase per removed edge:
//! phase `j` offers the missing `e_j` edges of `b+1` surviving copies at a
//! time, so a `1/(b+1)` share of the copies gain that edge.

use rand::seq::index;
use rand_chacha::ChaCha8Rng;

use super::min_degree::MinDegreeWaiter;
use super::{LocalCopies, StrategyError, Waiter};
use crate::engine::{GameState, Owner, SetFamily};
use crate::graph::{canonical_copies_of, Board, EdgeSet, ElementId, LabeledPattern, Pattern, VertexId};
use crate::invariants::{clique_minus_matching_edges, round_budget};
use crate::randmodels::{greedy_sparse, EMBEDDING_CAP};

/// How Stage I chooses its offers inside the allowed sub-board.
#[derive(Clone, Debug)]
pub enum StageIPolicy {
    /// Degree minimization against an explicit family of bad Client sets.
    MinDegree(SetFamily),
    /// Uniform offers among free allowed elements.
    Random,
    /// Samples `8(b+1)` free allowed elements and offers those lying in the
    /// heaviest partially claimed copies.
    CopyCompletion,
}

#[derive(Clone, Debug)]
enum Policy {
    MinDegree(Box<MinDegreeWaiter>),
    Random,
    CopyCompletion(LocalCopies),
}

#[derive(Clone, Debug)]
enum Stage {
    Init,
    StageOne { done: u64 },
    Phase { j: usize, rounds_left: u64, cursor: usize },
    Filler,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliqueReport {
    pub stage_one_rounds: u64,
    /// Canonical `H_i` copies in Client's graph after Stage I.
    pub stage_one_copies: usize,
    /// Sizes of the families after Stage I and after each phase.
    pub family_sizes: Vec<usize>,
    /// Phases that ended before their round count because too few legal edges remained.
    pub short_phases: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CliqueWaiter {
    k: usize,
    s: usize,
    h: Pattern,
    removed: Vec<(usize, usize)>,
    budget: u64,
    policy: Policy,
    allowed: Option<EdgeSet>,
    stage: Stage,
    family: Vec<Vec<VertexId>>,
    report: CliqueReport,
}

/// Every `m`-subset of the allowed elements spanning fewer than `tau`
/// canonical `H_i` copies. Refuses to enumerate more than `cap` subsets.
pub fn few_copies_family(
    board: &Board,
    h: &Pattern,
    allowed: &EdgeSet,
    m: usize,
    tau: u64,
    cap: u64,
) -> Result<SetFamily, StrategyError> {
    let pool: Vec<ElementId> = allowed.iter().collect();
    let total = binom_u128(pool.len() as u64, m as u64);
    if total > cap as u128 {
        return Err(StrategyError::new(format!("{total} subsets exceed the cap of {cap}")));
    }
    let sub = LabeledPattern::identity(h);
    let mut sets = Vec::new();
    let mut idx: Vec<usize> = (0..m).collect();
    if m > pool.len() {
        return SetFamily::new(board.element_count(), sets).map_err(|e| StrategyError::new(e.to_string()));
    }
    loop {
        let chosen: Vec<ElementId> = idx.iter().map(|&i| pool[i]).collect();
        let set = EdgeSet::from_elements(board.element_count(), chosen.iter().copied());
        let copies = crate::graph::count_canonical_copies(board, &set, &sub).map_err(|e| StrategyError::new(e.to_string()))?;
        if copies < tau {
            sets.push(chosen);
        }
        // next combination in lexicographic order
        let mut i = m;
        while i > 0 && idx[i - 1] == pool.len() - m + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for t in i..m {
            idx[t] = idx[t - 1] + 1;
        }
    }
    SetFamily::new(board.element_count(), sets).map_err(|e| StrategyError::new(e.to_string()))
}

fn binom_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

impl CliqueWaiter {
    /// Stage I lasts `floor(alpha e(H_i) s^2 / (b+1))` rounds with `alpha = 1/2`.
    pub fn new(k: usize, i: usize, s: usize, b: u64, policy: StageIPolicy) -> Result<Self, StrategyError> {
        let (h, removed) = clique_minus_matching_edges(k, i).map_err(|e| StrategyError::new(e.to_string()))?;
        let budget = round_budget(&h, s, b, 0.5);
        let policy = match policy {
            StageIPolicy::MinDegree(family) => {
                let n = family.universe();
                Policy::MinDegree(Box::new(MinDegreeWaiter::new(family, n)))
            }
            StageIPolicy::Random => Policy::Random,
            StageIPolicy::CopyCompletion => Policy::CopyCompletion(LocalCopies::new(&h, true)),
        };
        Ok(Self {
            k,
            s,
            h,
            removed,
            budget,
            policy,
            allowed: None,
            stage: Stage::Init,
            family: Vec::new(),
            report: CliqueReport::default(),
        })
    }

    /// Overrides the Stage I round budget.
    pub fn with_budget(mut self, rounds: u64) -> Self {
        self.budget = rounds;
        self
    }

    pub fn pattern(&self) -> &Pattern {
        &self.h
    }

    pub fn removed_edges(&self) -> &[(usize, usize)] {
        &self.removed
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn report(&self) -> &CliqueReport {
        &self.report
    }

    /// The current family: `A` during phase 1, `A^j` after phase `j`.
    pub fn family(&self) -> &[Vec<VertexId>] {
        &self.family
    }

    /// Board elements outside every `E(U_j, U'_j)`.
    pub fn allowed_set(board: &Board, removed: &[(usize, usize)]) -> EdgeSet {
        let mut set = board.empty_set();
        for (e, &(u, v)) in board.elements().iter().enumerate() {
            let e = e as ElementId;
            let (pu, pv) = (board.part_of(u).unwrap(), board.part_of(v).unwrap());
            let pair = (pu.min(pv), pu.max(pv));
            if !removed.contains(&pair) {
                set.insert(e);
            }
        }
        set
    }

    fn check_board(&self, board: &Board) -> Result<(), StrategyError> {
        let ok = board.blowup_pattern().is_some_and(|p| *p == Pattern::complete(self.k)) && board.part_size() == Some(self.s);
        if !ok {
            return Err(StrategyError::new(format!("clique strategy needs the blow-up of K{} with parts of size {}", self.k, self.s)));
        }
        Ok(())
    }

    fn free_allowed(&self, state: &GameState) -> Vec<ElementId> {
        let allowed = self.allowed.as_ref().expect("initialized");
        state.free_elements().iter().copied().filter(|&e| allowed.contains(e)).collect()
    }

    fn phase_edge(&self, state: &GameState, j: usize, copy: &[VertexId]) -> ElementId {
        let (a, b) = self.removed[j];
        state.board().edge_id(copy[a], copy[b]).expect("blow-up edge")
    }

    fn start_phase(&mut self, j: usize, b: u64) {
        self.stage = Stage::Phase { j, rounds_left: self.family.len() as u64 / (b + 1), cursor: 0 };
    }

    /// Moves through stage boundaries until the current stage has an offer to make.
    fn advance(&mut self, state: &GameState) -> Result<(), StrategyError> {
        let k = state.offer_size();
        loop {
            match self.stage.clone() {
                Stage::Init => {
                    self.check_board(state.board())?;
                    let allowed = Self::allowed_set(state.board(), &self.removed);
                    if let Policy::MinDegree(w) = &mut self.policy {
                        **w = (**w).clone().with_allowed(allowed.clone());
                    }
                    self.allowed = Some(allowed);
                    self.stage = Stage::StageOne { done: 0 };
                }
                Stage::StageOne { done } => {
                    if done < self.budget && self.free_allowed(state).len() >= k {
                        return Ok(());
                    }
                    self.report.stage_one_rounds = done;
                    let client = state.client_set();
                    let copies = canonical_copies_of(state.board(), &client, &LabeledPattern::identity(&self.h), EMBEDDING_CAP)
                        .map_err(|e| StrategyError::new(e.to_string()))?;
                    self.report.stage_one_copies = copies.len();
                    self.family = greedy_sparse(&self.h, &copies);
                    self.report.family_sizes.push(self.family.len());
                    self.start_phase(0, state.bias());
                }
                Stage::Phase { j, rounds_left, cursor } => {
                    if rounds_left > 0 {
                        let legal = self.family[cursor..].iter().filter(|c| state.is_free(self.phase_edge(state, j, c))).count();
                        if legal >= k {
                            return Ok(());
                        }
                        self.report.short_phases.push(j + 1);
                    }
                    let kept: Vec<Vec<VertexId>> = self
                        .family
                        .iter()
                        .filter(|c| state.owner(self.phase_edge(state, j, c)) == Owner::Client)
                        .cloned()
                        .collect();
                    self.family = kept;
                    self.report.family_sizes.push(self.family.len());
                    if j + 1 < self.removed.len() {
                        self.start_phase(j + 1, state.bias());
                    } else {
                        self.stage = Stage::Filler;
                    }
                }
                Stage::Filler => return Ok(()),
            }
        }
    }

    fn stage_one_offer(&mut self, state: &GameState, rng: &mut ChaCha8Rng) -> Result<Vec<ElementId>, StrategyError> {
        let k = state.offer_size();
        let free = self.free_allowed(state);
        let mut out = match &mut self.policy {
            Policy::MinDegree(w) => w.offer(state, rng)?,
            Policy::Random => index::sample(rng, free.len(), k).into_iter().map(|i| free[i]).collect(),
            Policy::CopyCompletion(local) => {
                let pool: Vec<ElementId> = if free.len() <= 8 * k {
                    free.clone()
                } else {
                    index::sample(rng, free.len(), 8 * k).into_iter().map(|i| free[i]).collect()
                };
                let heavy = (k as f64).max(1.0);
                let mut scored: Vec<(f64, ElementId)> = pool
                    .into_iter()
                    .map(|x| {
                        let w = local.sum(state, x, &|e| match state.owner(e) {
                            Owner::Client => Some(heavy),
                            Owner::Free => Some(1.0),
                            Owner::Waiter => None,
                        });
                        (w, x)
                    })
                    .collect();
                scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
                scored.into_iter().take(k).map(|(_, x)| x).collect()
            }
        };
        out.sort_unstable();
        Ok(out)
    }
}

impl Waiter for CliqueWaiter {
    fn name(&self) -> String {
        format!("clique:{},{}", self.k, self.removed.len())
    }

    fn offer(&mut self, state: &GameState, rng: &mut ChaCha8Rng) -> Result<Vec<ElementId>, StrategyError> {
        self.advance(state)?;
        let k = state.offer_size();
        match self.stage.clone() {
            Stage::StageOne { .. } => self.stage_one_offer(state, rng),
            Stage::Phase { j, cursor, .. } => {
                let mut out = Vec::with_capacity(k);
                let mut c = cursor;
                while out.len() < k {
                    let e = self.phase_edge(state, j, &self.family[c]);
                    if state.is_free(e) {
                        out.push(e);
                    }
                    c += 1;
                }
                if let Stage::Phase { cursor, .. } = &mut self.stage {
                    *cursor = c;
                }
                out.sort_unstable();
                Ok(out)
            }
            Stage::Filler => Ok(state.lowest_free(k)),
            Stage::Init => unreachable!("advance leaves Init"),
        }
    }

    fn observe(&mut self, state: &GameState, offer: &[ElementId], pick: ElementId) {
        match &mut self.stage {
            Stage::StageOne { done } => {
                *done += 1;
                if let Policy::MinDegree(w) = &mut self.policy {
                    w.observe(state, offer, pick);
                }
            }
            Stage::Phase { rounds_left, .. } => *rounds_left -= 1,
            _ => {}
        }
        // close a finished stage now, so the family is final even if no offer follows
        if state.can_offer() {
            return;
        }
        let _ = self.advance(state);
    }

    fn box_clone(&self) -> Box<dyn Waiter> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play, value, WinningFamily};
    use crate::strategies::baseline::RandomClient;
    use crate::strategies::potential::PotentialClient;
    use std::sync::Arc;

    fn board(k: usize, s: usize) -> Arc<Board> {
        Arc::new(Board::blowup(&Pattern::complete(k), s).unwrap())
    }

    #[test]
    fn allowed_set_skips_removed_pairs() {
        let b = board(4, 3);
        let allowed = CliqueWaiter::allowed_set(&b, &[(0, 1)]);
        assert_eq!(allowed.count(), 5 * 9);
    }

    #[test]
    fn family_members_carry_the_added_edges() {
        let b = board(4, 6);
        for policy in [StageIPolicy::Random, StageIPolicy::CopyCompletion] {
            let mut w = CliqueWaiter::new(4, 2, 6, 1, policy).unwrap();
            let state = play(b.clone(), 1, &mut w, &mut RandomClient, 11).unwrap();
            let sizes = &w.report().family_sizes;
            assert_eq!(sizes.len(), 3);
            // each phase keeps at least floor(previous / (b+1)) copies
            for pair in sizes.windows(2) {
                assert!(pair[1] >= pair[0] / 2, "{sizes:?}");
            }
            for c in w.family() {
                for a in 0..4 {
                    for d in a + 1..4 {
                        assert!(state.client_has_edge(c[a], c[d]));
                    }
                }
            }
            let k4 = value(&state, &WinningFamily::canonical(Pattern::complete(4))).unwrap();
            assert!(k4 as usize >= w.family().len());
        }
    }

    #[test]
    fn phase_offers_are_distinct_edges() {
        let b = board(4, 5);
        let mut w = CliqueWaiter::new(4, 1, 5, 1, StageIPolicy::Random).unwrap();
        let state = play(b.clone(), 1, &mut w, &mut RandomClient, 2).unwrap();
        let m = w.report().stage_one_rounds as usize;
        let phase_rounds = w.report().family_sizes[0] / 2;
        let mut seen = std::collections::HashSet::new();
        for (offer, _) in state.transcript().iter().skip(m).take(phase_rounds) {
            for &e in offer {
                let (u, v) = b.endpoints(e);
                let parts = (b.part_of(u).unwrap().min(b.part_of(v).unwrap()), b.part_of(u).unwrap().max(b.part_of(v).unwrap()));
                assert_eq!(parts, (0, 1));
                assert!(seen.insert(e));
            }
        }
    }

    #[test]
    fn wrong_board_is_rejected() {
        let mut w = CliqueWaiter::new(4, 1, 5, 1, StageIPolicy::Random).unwrap();
        assert!(play(board(4, 4), 1, &mut w, &mut RandomClient, 0).is_err());
    }

    #[test]
    fn few_copies_family_on_a_tiny_board() {
        let b = Board::blowup(&Pattern::complete(3), 1).unwrap();
        let (h, removed) = clique_minus_matching_edges(3, 1).unwrap();
        let allowed = CliqueWaiter::allowed_set(&b, &removed);
        // H_1 on K3 is a path through part 2; both allowed edges form the one copy
        let fam = few_copies_family(&b, &h, &allowed, 1, 1, 100).unwrap();
        assert_eq!(fam.len(), 2);
        let fam = few_copies_family(&b, &h, &allowed, 2, 1, 100).unwrap();
        assert_eq!(fam.len(), 0);
    }

    #[test]
    fn min_degree_policy_runs() {
        let b = board(3, 2);
        let (h, removed) = clique_minus_matching_edges(3, 1).unwrap();
        let allowed = CliqueWaiter::allowed_set(&b, &removed);
        let fam = few_copies_family(&b, &h, &allowed, 2, 1, 10_000).unwrap();
        let mut w = CliqueWaiter::new(3, 1, 2, 1, StageIPolicy::MinDegree(fam)).unwrap();
        play(b, 1, &mut w, &mut RandomClient, 0).unwrap();
        assert!(w.report().stage_one_rounds >= 1);
    }

    #[test]
    fn k4_against_potential_client() {
        let s = 20;
        let b = 2;
        let mut w = CliqueWaiter::new(4, 1, s, b, StageIPolicy::CopyCompletion).unwrap();
        let mut c = PotentialClient::for_pattern(&Pattern::complete(4), true, b);
        let state = play(board(4, s), b, &mut w, &mut c, 0).unwrap();
        let v = value(&state, &WinningFamily::canonical(Pattern::complete(4))).unwrap();
        // frozen from a run of this exact matchup
        assert_eq!(v, 15);
        assert_eq!(w.report().family_sizes, vec![43, 14]);
    }
}
